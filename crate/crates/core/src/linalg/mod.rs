//! Exact linear algebra over Z, Q and GF(p).

pub mod echelon;
pub mod homology;
pub mod int;
pub mod matrix;
pub mod modp;
pub mod snf;
pub mod stream;

pub use echelon::{integer_kernel_basis, rank_rational, rational_to_string, solve_in_image, ImageSolver, IntEchelon, Solution};
pub use homology::{homology_of_pair, homology_of_pair_detailed, Coefficients, HomologyCoordinates, HomologyGroup, PairSummary};
pub use int::Int;
pub use matrix::{IntMatrix, SparseVec};
pub use modp::{is_prime, rank_mod_p, ModPReducer, DEFAULT_PRIME};
pub use snf::{snf, SnfResult};
pub use stream::{homology_streamed, ColumnStream, MatrixStream, StreamOutcome};

/// Rank of `m` over the chosen field (rationals or GF(p)).
pub fn rank(m: &IntMatrix, field: Coefficients) -> crate::error::Result<usize> {
    field.validate()?.rank(m)
}
