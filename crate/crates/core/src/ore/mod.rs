//! Normal-ordering arithmetic over `Q[z]<x, theta, z^2 d_z>`, left-ideal
//! presentations and the transforms acting on them.

mod derham;
mod groebner;
mod ideal;
mod parse;
mod poly;
mod presentation;
mod product;
mod signature;
mod substitute;
mod transforms;

pub use derham::{derham_pushforward_eliminate, Elimination};
pub use ideal::{
    ideal_membership_bounded, presentation_equiv_bounded, presentation_equiv_search, Certificate,
    EquivOutcome, IdealSpan, Membership,
};
pub use parse::parse_poly;
pub use poly::{Exponents, OrePoly, Symbol};
pub use presentation::{Monomial, Presentation};
pub use signature::OreSignature;
pub use substitute::{substitute, SubstitutionMap};
pub use transforms::{
    attach_z2dz, exp_twist, extend_with_var, fourier_laplace, fourier_laplace_named,
    rees_homogenize, specialize_z_one, z_shift,
};
