//! Integer lattices and the polyhedral geometry of `R_{>=0} A`.

mod cone;
mod matrix;

pub use cone::{
    admissible_region, check_saturation_bounded, cone_facets, in_shifted_admissible,
    lemma_raute_membership, AdmissibleRegion, Facet, SaturationCheck, Violation,
};
pub use matrix::{
    check_full_lattice, hermite_normal_form, kernel_basis, smith_invariants, IntMatrix,
};

