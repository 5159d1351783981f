//! The Brion functional, admissible morphisms and the canonical pairings.

pub mod admissible;
pub mod canonical;
pub mod compat;
pub mod zeta;

pub use admissible::AdmissibleMorphism;
pub use canonical::{ih_pairing_matrix, pairing_blocks, PairingContext, PairingMatrix};
pub use compat::{
    adjointness, complete_pairing, disjoint_support_values, kunneth_pairing, local_global_check, same_presentation,
    sign_flip_values, subdivision_invariance, KunnethPairing, LocalGlobalReport,
};
pub use zeta::{as_conewise, brion_zeta, facet_form_product, facet_forms, from_conewise, thom_function, zeta_constant, zeta_rational};
