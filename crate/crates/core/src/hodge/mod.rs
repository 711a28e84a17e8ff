//! Irregular Hodge data for hypergeometric modules of type `(n, 1)`, and the
//! Hodge numbers of the regular case `n = m`.

mod connection;
mod filtration;
pub mod lpoly;

pub use connection::{
    connection_matrices, q_basis, rescale, rescaled_signature, ConnectionMatrices, QBasis,
    RescaledPresentation,
};
pub use filtration::{
    graded_nilpotent, homogeneity_check, irr_hodge, nilpotency_index, normalized_jumps, nu,
    regular_hodge, surviving, u_filtration_step, unnormalized_jumps, FiltrationRow,
    IrrHodgeReport, RegularHodgeReport,
};
