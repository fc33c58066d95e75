//! Compressed sparse row storage, zero-fill incomplete Cholesky and
//! preconditioned conjugate gradients.

mod csr;
mod ic0;
mod market;
mod pcg;

pub use csr::{csr_from_triplets, CsrMatrix};
pub use ic0::{ic0_factorize, IncompleteFactorization};
pub use market::write_matrix_market;
pub use pcg::{pcg, PcgOptions, PcgResult, ToleranceMode};
