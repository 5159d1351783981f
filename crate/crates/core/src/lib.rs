//! Intersection cohomology of complete and quasi-convex fans over ordered fields, computed
//! exactly: minimal sheaves, section modules, the canonical pairing, Hard Lefschetz and
//! Hodge-Riemann certificates, the polytope algebra of simple polytopes, and generalized
//! h-vectors as an independent check.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod fan;
pub mod hvec;
pub mod io;
pub mod lefschetz;
pub mod pairing;
pub mod sheaf;
pub mod timorin;

pub use error::{Error, Result};
