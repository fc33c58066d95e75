//! The Poisson-Boltzmann benchmark: quadrant-wise constant permittivity,
//! `k sinh(p)` nonlinearity, cubic Dirichlet data and a manufactured source.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result, Scalar};

pub type PointFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Dirichlet data on the boundary.
#[derive(Clone)]
pub enum BoundaryData<T> {
    /// `x^3 + y^3`
    Cubic,
    Constant(T),
    Custom(PointFn<T>),
}

/// Right-hand side `f` of the PDE.
#[derive(Clone)]
pub enum SourceTerm<T> {
    /// Chosen so that `x^3 + y^3` satisfies the PDE wherever eps is locally
    /// constant: `f = -eps * 6 (x + y) + k sinh(x^3 + y^3)`.
    Manufactured,
    Zero,
    Custom(PointFn<T>),
}

impl<T: fmt::Debug> fmt::Debug for BoundaryData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryData::Cubic => f.write_str("Cubic"),
            BoundaryData::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            BoundaryData::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl<T> fmt::Debug for SourceTerm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceTerm::Manufactured => f.write_str("Manufactured"),
            SourceTerm::Zero => f.write_str("Zero"),
            SourceTerm::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec<T> {
    eps_quadrants: [T; 4],
    k: T,
    boundary: BoundaryData<T>,
    source: SourceTerm<T>,
}

impl<T: Scalar> Default for ProblemSpec<T> {
    /// Checkerboard `eps = (1, 100, 1, 100)`, `k = 1`, cubic data and the
    /// manufactured source.
    fn default() -> Self {
        ProblemSpec {
            eps_quadrants: [T::one(), T::lit(100.0), T::one(), T::lit(100.0)],
            k: T::one(),
            boundary: BoundaryData::Cubic,
            source: SourceTerm::Manufactured,
        }
    }
}

impl<T: Scalar> ProblemSpec<T> {
    /// `eps_quadrants` are listed counterclockwise starting from the
    /// `x > 0, y > 0` quadrant.
    pub fn new(eps_quadrants: [T; 4], k: T) -> Result<Self> {
        for eps in eps_quadrants {
            if !(eps.is_finite() && eps > T::zero()) {
                return Err(Error::invalid(
                    "eps_quadrants",
                    format!("must be finite and positive, got {eps}"),
                ));
            }
        }
        if !(k.is_finite() && k >= T::zero()) {
            return Err(Error::invalid("k", format!("must be finite and nonnegative, got {k}")));
        }
        Ok(ProblemSpec {
            eps_quadrants,
            k,
            boundary: BoundaryData::Cubic,
            source: SourceTerm::Manufactured,
        })
    }

    /// Constant permittivity everywhere.
    pub fn uniform(eps: T, k: T) -> Result<Self> {
        Self::new([eps; 4], k)
    }

    pub fn with_boundary(mut self, boundary: BoundaryData<T>) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_source(mut self, source: SourceTerm<T>) -> Self {
        self.source = source;
        self
    }

    pub fn eps_quadrants(&self) -> [T; 4] {
        self.eps_quadrants
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn boundary(&self) -> &BoundaryData<T> {
        &self.boundary
    }

    pub fn source(&self) -> &SourceTerm<T> {
        &self.source
    }

    /// Permittivity of the quadrant containing `(x, y)`. Points on `x = 0`
    /// belong to the `x > 0` half and points on `y = 0` to the `y > 0` half.
    pub fn epsilon_at(&self, x: T, y: T) -> T {
        let right = x >= T::zero();
        let top = y >= T::zero();
        let q = match (right, top) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        };
        self.eps_quadrants[q]
    }

    pub fn boundary_value(&self, x: T, y: T) -> T {
        match &self.boundary {
            BoundaryData::Cubic => cubic(x, y),
            BoundaryData::Constant(c) => *c,
            BoundaryData::Custom(g) => g(x, y),
        }
    }

    /// `(k sinh(p), k cosh(p))`
    pub fn nonlinearity(&self, p: T) -> Result<(T, T)> {
        if !(p.abs() <= T::SINH_LIMIT) {
            return Err(Error::Overflow {
                value: p.to_f64_lossy(),
            });
        }
        Ok((self.k * p.sinh(), self.k * p.cosh()))
    }

    pub fn source_at(&self, x: T, y: T) -> T {
        match &self.source {
            SourceTerm::Manufactured => self.manufactured_source(x, y),
            SourceTerm::Zero => T::zero(),
            SourceTerm::Custom(f) => f(x, y),
        }
    }

    /// `-eps(x, y) * 6 (x + y) + k sinh(x^3 + y^3)`
    pub fn manufactured_source(&self, x: T, y: T) -> T {
        -self.epsilon_at(x, y) * T::lit(6.0) * (x + y) + self.k * cubic(x, y).sinh()
    }
}

/// `x^3 + y^3`, the default boundary data and manufactured solution.
pub fn cubic<T: Scalar>(x: T, y: T) -> T {
    x * x * x + y * y * y
}
