//! The minimal sheaf of a fan, its sections and intersection cohomology.

pub mod ih;
pub mod minimal;
pub mod sections;

pub use ih::{ih, kunneth_check, quasiconvex_certificate, Certificate, IHSpace, KunnethReport};
pub use minimal::MinimalSheaf;
pub use sections::{boundary_facets, module_multiply, sections_over, sections_with_support, Layout, Section, SectionSpace};
