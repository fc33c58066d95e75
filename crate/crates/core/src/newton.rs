//! Outer Newton iteration with a configurable inner CG tolerance.
//!
//! Every outer step solves `J(p_k) dp = -F(p_k)` with IC(0)-preconditioned CG
//! to the tolerance given by the [`ForcingStrategy`] and takes the full
//! step. The loop stops on the first of: small residual, small step, or the
//! iteration cap.

use std::fmt;

use crate::fv::DiscreteSystem;
use crate::norms::norm2;
use crate::{ic0_factorize, pcg, Error, PcgOptions, Result, Scalar, ToleranceMode};

/// Inner tolerance schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForcingStrategy<T> {
    /// The same tolerance for every Jacobian solve.
    Fixed(T),
    /// `max(10^-(stride*k + 1), floor)` at outer iteration `k`.
    PowerOfTen { floor: T, stride: u32 },
}

impl<T: Scalar> ForcingStrategy<T> {
    /// `Fixed(1e-15)`
    pub fn fixed() -> Self {
        ForcingStrategy::Fixed(T::lit(1e-15))
    }

    /// `10^-(k+1)` down to a floor of `1e-15`.
    pub fn power_of_ten() -> Self {
        ForcingStrategy::PowerOfTen {
            floor: T::lit(1e-15),
            stride: 1,
        }
    }

    pub fn tolerance(&self, k: usize) -> T {
        match *self {
            ForcingStrategy::Fixed(eta) => eta,
            ForcingStrategy::PowerOfTen { floor, stride } => {
                let exponent = (k as f64) * f64::from(stride) + 1.0;
                T::lit(10f64.powf(-exponent)).max(floor)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ForcingStrategy::Fixed(eta) if !(eta > T::zero() && eta < T::one()) => {
                Err(Error::invalid("fixed_eta", format!("must lie in (0, 1), got {eta}")))
            }
            ForcingStrategy::PowerOfTen { floor, .. } if !(floor > T::zero() && floor < T::one()) => Err(
                Error::invalid("forcing_floor", format!("must lie in (0, 1), got {floor}")),
            ),
            ForcingStrategy::PowerOfTen { stride: 0, .. } => {
                Err(Error::invalid("forcing_stride", "must be at least 1"))
            }
            _ => Ok(()),
        }
    }
}

/// Free function form of [`ForcingStrategy::tolerance`].
pub fn forcing_tolerance<T: Scalar>(s: &ForcingStrategy<T>, k: usize) -> T {
    s.tolerance(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialGuess {
    #[default]
    Zero,
    /// Transfinite (Coons) interpolation of the boundary data into the
    /// interior, sampled at cell centers.
    BoundaryBlend,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    pub max_iter: usize,
    pub tol_residual: T,
    pub tol_step: T,
    pub initial_guess: InitialGuess,
    pub inner_tol_mode: ToleranceMode,
    /// Cap on CG iterations per Jacobian solve; `10 n` when `None`.
    pub inner_max_iter: Option<usize>,
}

impl<T: Scalar> Default for NewtonConfig<T> {
    fn default() -> Self {
        NewtonConfig {
            max_iter: 15,
            tol_residual: T::lit(1e-10),
            tol_step: T::lit(1e-10),
            initial_guess: InitialGuess::Zero,
            inner_tol_mode: ToleranceMode::Relative,
            inner_max_iter: None,
        }
    }
}

impl<T: Scalar> NewtonConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be at least 1"));
        }
        if !(self.tol_residual > T::zero()) {
            return Err(Error::invalid(
                "tol_residual",
                format!("must be positive, got {}", self.tol_residual),
            ));
        }
        if !(self.tol_step > T::zero()) {
            return Err(Error::invalid(
                "tol_step",
                format!("must be positive, got {}", self.tol_step),
            ));
        }
        Ok(())
    }
}

/// Telemetry for one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T> {
    pub k: usize,
    /// `||F(p_k)||_2`
    pub residual_norm: T,
    /// `||dp_k||_2`
    pub step_norm: T,
    pub inner_tol: T,
    pub inner_iters: usize,
    pub inner_converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ResidualTol,
    StepTol,
    MaxIter,
    /// CG missed its tolerance and the resulting step increased `||F||`.
    InnerFailure,
    /// `sinh`/`cosh` left the representable range.
    Overflow,
}

impl Termination {
    pub fn is_converged(self) -> bool {
        matches!(self, Termination::ResidualTol | Termination::StepTol)
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub history: Vec<IterationRecord<T>>,
    pub final_p: Vec<T>,
    /// `||F(final_p)||_2`
    pub final_residual_norm: T,
    pub converged: bool,
    pub reason: Termination,
    pub total_inner_iters: usize,
}

impl<T: Scalar> SolveReport<T> {
    pub fn outer_iterations(&self) -> usize {
        self.history.len()
    }

    /// Residual norms of every iterate, the final one included.
    pub fn residual_sequence(&self) -> Vec<T> {
        self.history
            .iter()
            .map(|r| r.residual_norm)
            .chain(std::iter::once(self.final_residual_norm))
            .collect()
    }
}

pub fn initial_guess<T: Scalar>(sys: &DiscreteSystem<T>, kind: InitialGuess) -> Vec<T> {
    let n = sys.len();
    match kind {
        InitialGuess::Zero => vec![T::zero(); n],
        InitialGuess::BoundaryBlend => {
            let grid = sys.grid();
            let spec = sys.spec();
            let [x0, x1, y0, y1] = grid.bounds();
            let g = |x, y| spec.boundary_value(x, y);
            (0..n)
                .map(|idx| {
                    let (i, j) = grid.cell_of(idx).expect("index in range");
                    let (x, y) = grid.center_unchecked(i, j);
                    let u = (x - x0) / (x1 - x0);
                    let v = (y - y0) / (y1 - y0);
                    let (cu, cv) = (T::one() - u, T::one() - v);
                    cu * g(x0, y) + u * g(x1, y) + cv * g(x, y0) + v * g(x, y1)
                        - (cu * cv * g(x0, y0) + u * cv * g(x1, y0) + cu * v * g(x0, y1) + u * v * g(x1, y1))
                })
                .collect()
        }
    }
}

/// Runs Newton's method on `sys` from the configured initial guess.
///
/// Numerical trouble during the iteration (overflow, inner failure) is
/// reported through [`SolveReport::reason`]; `Err` is reserved for invalid
/// configuration and factorization breakdown.
pub fn solve<T: Scalar>(
    sys: &DiscreteSystem<T>,
    cfg: &NewtonConfig<T>,
    strategy: &ForcingStrategy<T>,
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    strategy.validate()?;
    let p0 = initial_guess(sys, cfg.initial_guess);
    solve_from(sys, cfg, strategy, p0)
}

/// [`solve`] from an explicit initial guess.
pub fn solve_from<T: Scalar>(
    sys: &DiscreteSystem<T>,
    cfg: &NewtonConfig<T>,
    strategy: &ForcingStrategy<T>,
    p0: Vec<T>,
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    strategy.validate()?;
    let n = sys.len();
    if p0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: p0.len(),
        });
    }

    let mut history: Vec<IterationRecord<T>> = Vec::new();
    let mut p = p0;
    let finish = |history: Vec<IterationRecord<T>>, p: Vec<T>, rnorm: T, reason: Termination| {
        let total_inner_iters = history.iter().map(|r| r.inner_iters).sum();
        Ok(SolveReport {
            history,
            final_p: p,
            final_residual_norm: rnorm,
            converged: reason.is_converged(),
            reason,
            total_inner_iters,
        })
    };

    let mut f = match eval_residual(sys, &p)? {
        Some(f) => f,
        None => return finish(history, p, T::infinity(), Termination::Overflow),
    };
    let mut rnorm = norm2(&f);

    for k in 0.. {
        if rnorm <= cfg.tol_residual {
            return finish(history, p, rnorm, Termination::ResidualTol);
        }
        if history.last().is_some_and(|last| last.step_norm <= cfg.tol_step) {
            return finish(history, p, rnorm, Termination::StepTol);
        }
        if k == cfg.max_iter {
            return finish(history, p, rnorm, Termination::MaxIter);
        }

        let jac = match sys.jacobian(&p) {
            Ok(j) => j,
            Err(Error::Overflow { .. }) => return finish(history, p, rnorm, Termination::Overflow),
            Err(e) => return Err(e),
        };
        let precond = ic0_factorize(&jac)?;
        let inner_tol = strategy.tolerance(k);
        let opts = PcgOptions {
            tol: inner_tol,
            mode: cfg.inner_tol_mode,
            max_iter: cfg.inner_max_iter,
        };
        let rhs: Vec<T> = f.iter().map(|&v| -v).collect();
        let zero = vec![T::zero(); n];
        let inner = pcg(&jac, &rhs, &zero, &opts, Some(&precond))?;
        let step_norm = norm2(&inner.x);
        history.push(IterationRecord {
            k,
            residual_norm: rnorm,
            step_norm,
            inner_tol,
            inner_iters: inner.iterations,
            inner_converged: inner.converged,
        });

        let trial: Vec<T> = p.iter().zip(&inner.x).map(|(&a, &d)| a + d).collect();
        let f_trial = match eval_residual(sys, &trial)? {
            Some(f) => f,
            None => return finish(history, p, rnorm, Termination::Overflow),
        };
        let r_trial = norm2(&f_trial);
        if !r_trial.is_finite() {
            return finish(history, p, rnorm, Termination::Overflow);
        }
        if !inner.converged && r_trial > rnorm {
            return finish(history, p, rnorm, Termination::InnerFailure);
        }
        p = trial;
        f = f_trial;
        rnorm = r_trial;
    }
    unreachable!("loop exits through max_iter")
}

fn eval_residual<T: Scalar>(sys: &DiscreteSystem<T>, p: &[T]) -> Result<Option<Vec<T>>> {
    match sys.residual(p) {
        Ok(f) => Ok(Some(f)),
        Err(Error::Overflow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Ratios `log(r_{k+1}) / log(r_k)` of successive residual norms.
///
/// Only the tail of the residual sequence below 1 is used (the logarithms
/// change sign above it), and trailing exact zeros are dropped. A value near
/// 2 indicates quadratic convergence.
pub fn quadratic_rate_estimate<T: Scalar>(report: &SolveReport<T>) -> Result<Vec<T>> {
    rate_ratios(&report.residual_sequence())
}

pub fn rate_ratios<T: Scalar>(residuals: &[T]) -> Result<Vec<T>> {
    let mut end = residuals.len();
    while end > 0 && residuals[end - 1] == T::zero() {
        end -= 1;
    }
    let seq = &residuals[..end];
    let start = seq
        .iter()
        .rposition(|&r| !(r < T::one() && r > T::zero()))
        .map_or(0, |i| i + 1);
    let tail = &seq[start..];
    if tail.len() < 3 {
        return Err(Error::InsufficientHistory {
            needed: 3,
            got: tail.len(),
        });
    }
    Ok(tail.windows(2).map(|w| w[1].ln() / w[0].ln()).collect())
}
