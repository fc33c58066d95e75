//! Cell-centered finite-volume discretization
//!
//! ```text
//! F(p) = A1 p + A2(p) - b,   A2(p)_i = V_i k sinh(p_i)
//! J(p) = A1 + diag(V_i k cosh(p_i))
//! ```
//!
//! Interior faces couple neighbouring cells with transmissibility
//! `T = harmonic_mean(eps_L, eps_R) * face_length / center_distance`.
//! Dirichlet faces are eliminated through the half cell between the center
//! and the boundary: `T_b = eps_C * face_length / (h / 2)` goes on the
//! diagonal and `T_b * g(face midpoint)` into `b`. `A1` is therefore exactly
//! symmetric and an M-matrix, and `J(p)` adds a nonnegative diagonal to it.

use crate::{csr_from_triplets, CsrMatrix, Error, Grid, ProblemSpec, Result, Scalar};

/// `2 a b / (a + b)`, returning `a` unchanged when both arguments agree.
pub fn harmonic_mean<T: Scalar>(a: T, b: T) -> T {
    if a == b {
        a
    } else {
        T::lit(2.0) * a * b / (a + b)
    }
}

/// The assembled discrete problem. Immutable once built.
#[derive(Debug, Clone)]
pub struct DiscreteSystem<T> {
    a1: CsrMatrix<T>,
    b: Vec<T>,
    volumes: Vec<T>,
    diag_pos: Vec<usize>,
    grid: Grid<T>,
    spec: ProblemSpec<T>,
}

pub fn assemble<T: Scalar>(grid: &Grid<T>, spec: &ProblemSpec<T>) -> DiscreteSystem<T> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let n = grid.len();
    let (hx, hy) = (grid.hx(), grid.hy());
    let [xmin, xmax, ymin, ymax] = grid.bounds();
    let half = T::lit(0.5);
    let volume = grid.cell_volume();
    // geometric factors: face length over center distance
    let gx = hy / hx;
    let gy = hx / hy;
    let gx_b = hy / (half * hx);
    let gy_b = hx / (half * hy);

    let eps: Vec<T> = (0..n)
        .map(|idx| {
            let (x, y) = grid.center_unchecked(idx % nx, idx / nx);
            spec.epsilon_at(x, y)
        })
        .collect();

    let mut trips = Vec::with_capacity(5 * n);
    let mut diag = vec![T::zero(); n];
    let mut b = vec![T::zero(); n];

    for j in 0..ny {
        for i in 0..nx {
            let c = j * nx + i;
            let (x, y) = grid.center_unchecked(i, j);
            b[c] += volume * spec.source_at(x, y);

            if i + 1 < nx {
                let e = c + 1;
                let t = harmonic_mean(eps[c], eps[e]) * gx;
                diag[c] += t;
                diag[e] += t;
                trips.push((c, e, -t));
                trips.push((e, c, -t));
            }
            if j + 1 < ny {
                let nb = c + nx;
                let t = harmonic_mean(eps[c], eps[nb]) * gy;
                diag[c] += t;
                diag[nb] += t;
                trips.push((c, nb, -t));
                trips.push((nb, c, -t));
            }

            let mut dirichlet = |t_b: T, bx: T, by: T| {
                diag[c] += t_b;
                b[c] += t_b * spec.boundary_value(bx, by);
            };
            if i == 0 {
                dirichlet(eps[c] * gx_b, xmin, y);
            }
            if i + 1 == nx {
                dirichlet(eps[c] * gx_b, xmax, y);
            }
            if j == 0 {
                dirichlet(eps[c] * gy_b, x, ymin);
            }
            if j + 1 == ny {
                dirichlet(eps[c] * gy_b, x, ymax);
            }
        }
    }
    for (c, d) in diag.into_iter().enumerate() {
        trips.push((c, c, d));
    }

    let a1 = csr_from_triplets(n, &trips).expect("stencil indices are in range");
    let diag_pos = a1
        .diagonal_positions()
        .into_iter()
        .map(|p| p.expect("every cell has a boundary or interior face"))
        .collect();
    DiscreteSystem {
        a1,
        b,
        volumes: vec![volume; n],
        diag_pos,
        grid: *grid,
        spec: spec.clone(),
    }
}

impl<T: Scalar> DiscreteSystem<T> {
    pub fn a1(&self) -> &CsrMatrix<T> {
        &self.a1
    }

    /// Source and boundary contributions.
    pub fn rhs(&self) -> &[T] {
        &self.b
    }

    pub fn volumes(&self) -> &[T] {
        &self.volumes
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn spec(&self) -> &ProblemSpec<T> {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `F(p) = A1 p + A2(p) - b`
    pub fn residual(&self, p: &[T]) -> Result<Vec<T>> {
        let mut f = self.a1.matvec(p)?;
        for (i, fi) in f.iter_mut().enumerate() {
            let (s, _) = self.spec.nonlinearity(p[i])?;
            *fi += self.volumes[i] * s - self.b[i];
        }
        Ok(f)
    }

    /// `J(p) = A1 + diag(V_i k cosh(p_i))`, same pattern as `A1`.
    pub fn jacobian(&self, p: &[T]) -> Result<CsrMatrix<T>> {
        if p.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: p.len(),
            });
        }
        let mut j = self.a1.clone();
        let values = j.values_mut();
        for (i, &pos) in self.diag_pos.iter().enumerate() {
            let (_, ds) = self.spec.nonlinearity(p[i])?;
            values[pos] += self.volumes[i] * ds;
        }
        Ok(j)
    }
}
