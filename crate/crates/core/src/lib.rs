//! Cell-centered finite-volume solver for the nonlinear Poisson-Boltzmann
//! model problem
//!
//! ```text
//! -div(eps grad p) + k sinh(p) = f   in [xmin,xmax] x [ymin,ymax]
//!                             p = g   on the boundary
//! ```
//!
//! The discrete system `F(p) = A1 p + A2(p) - b = 0` is solved by Newton's
//! method with each Jacobian system handled by conjugate gradients
//! preconditioned with a zero-fill incomplete Cholesky factor. Two inner
//! tolerance schedules are provided through [`ForcingStrategy`]: a fixed
//! tight tolerance, and a power-of-ten schedule `10^-(k+1)` that solves the
//! early Jacobian systems loosely.
//!
//! Everything numeric is generic over [`Scalar`] (implemented for `f32` and
//! `f64`); the `*64` aliases below are what most callers want.
//!
//! ```
//! use pb_core::{assemble, solve, ForcingStrategy, Grid64, NewtonConfig, ProblemSpec64};
//!
//! let grid = Grid64::new(8, 8, [-1.0, 1.0, -1.0, 1.0]).unwrap();
//! let sys = assemble(&grid, &ProblemSpec64::default());
//! let report = solve(&sys, &NewtonConfig::default(), &ForcingStrategy::power_of_ten()).unwrap();
//! assert!(report.converged);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::needless_range_loop))]

mod error;
pub mod fv;
pub mod grid;
pub mod newton;
pub mod norms;
pub mod problem;
mod scalar;
pub mod sparse;

pub use error::{Error, Result};
pub use fv::{assemble, harmonic_mean, DiscreteSystem};
pub use grid::Grid;
pub use newton::{
    forcing_tolerance, initial_guess, quadratic_rate_estimate, rate_ratios, solve, solve_from, ForcingStrategy,
    InitialGuess, IterationRecord, NewtonConfig, SolveReport, Termination,
};
pub use problem::{BoundaryData, ProblemSpec, SourceTerm};
pub use scalar::Scalar;
pub use sparse::{
    csr_from_triplets, ic0_factorize, pcg, write_matrix_market, CsrMatrix, IncompleteFactorization, PcgOptions,
    PcgResult, ToleranceMode,
};

pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type ProblemSpec64 = ProblemSpec<f64>;
pub type ProblemSpec32 = ProblemSpec<f32>;
pub type CsrMatrix64 = CsrMatrix<f64>;
pub type CsrMatrix32 = CsrMatrix<f32>;
pub type DiscreteSystem64 = DiscreteSystem<f64>;
pub type DiscreteSystem32 = DiscreteSystem<f32>;
pub type NewtonConfig64 = NewtonConfig<f64>;
pub type ForcingStrategy64 = ForcingStrategy<f64>;
pub type SolveReport64 = SolveReport<f64>;
