//! Cones, fans, polytopes, piecewise polynomial functions and subdivisions.

pub mod conewise;
pub mod geometry;
pub mod polytope;
pub mod structure;
pub mod subdivision;

pub use conewise::{is_strictly_convex, ConewiseFunction};
pub use geometry::Vector;
pub use polytope::Polytope;
pub use structure::{Cone, ConeId, Fan, Field, Provenance};
pub use subdivision::{
    constructively_quasi_convex, deficient_cones, desingularize, local_product_check, product_cone, product_fan,
    simplicial_refinement, singular_subfan, star_closure, star_link, star_subdivision, Desingularization, RayChoice,
    StarLink, Subdivision,
};
