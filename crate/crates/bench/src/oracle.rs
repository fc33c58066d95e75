//! Dense Newton reference solver.
//!
//! Shares only the problem definition (grid geometry, permittivity,
//! boundary data, source, nonlinearity) with the sparse path. The stencil
//! is rebuilt here cell by cell into a dense matrix and every Newton step is
//! solved exactly by Gaussian elimination with partial pivoting.

use pb_core::{solve, Grid64, ProblemSpec64};

use crate::config::{BenchConfig, ORACLE_MAX_CELLS};
use crate::runner::build_system;
use crate::{BenchError, StrategyKind};

/// Required agreement between sparse and dense solutions in the max norm.
pub const ORACLE_AGREEMENT_TOL: f64 = 1e-8;

const OUTER_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 50;

struct DenseSystem {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    volume: f64,
}

fn dense_assemble(grid: &Grid64, spec: &ProblemSpec64) -> DenseSystem {
    let (nx, ny) = (grid.nx(), grid.ny());
    let n = nx * ny;
    let (hx, hy) = (grid.hx(), grid.hy());
    let [xmin, xmax, ymin, ymax] = grid.bounds();
    let volume = hx * hy;
    let center = |i: usize, j: usize| (xmin + (i as f64 + 0.5) * hx, ymin + (j as f64 + 0.5) * hy);
    let eps = |i: usize, j: usize| {
        let (x, y) = center(i, j);
        spec.epsilon_at(x, y)
    };

    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for j in 0..ny {
        for i in 0..nx {
            let row = j * nx + i;
            let (x, y) = center(i, j);
            let e = eps(i, j);
            b[row] += volume * spec.source_at(x, y);
            // (di, dj, face length, center distance)
            let dirs: [(i64, i64, f64, f64); 4] = [(-1, 0, hy, hx), (1, 0, hy, hx), (0, -1, hx, hy), (0, 1, hx, hy)];
            for (di, dj, face, dist) in dirs {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni >= 0 && nj >= 0 && (ni as usize) < nx && (nj as usize) < ny {
                    let (ni, nj) = (ni as usize, nj as usize);
                    let en = eps(ni, nj);
                    let t = if e == en { e } else { 2.0 * e * en / (e + en) } * face / dist;
                    a[row][row] += t;
                    a[row][nj * nx + ni] -= t;
                } else {
                    let t = e * face / (0.5 * dist);
                    let (bx, by) = match (di, dj) {
                        (-1, _) => (xmin, y),
                        (1, _) => (xmax, y),
                        (_, -1) => (x, ymin),
                        _ => (x, ymax),
                    };
                    a[row][row] += t;
                    b[row] += t * spec.boundary_value(bx, by);
                }
            }
        }
    }
    DenseSystem { a, b, volume }
}

/// Solves `a x = rhs` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Result<Vec<f64>, BenchError> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return Err(BenchError::Oracle(format!("singular dense Jacobian at column {col}")));
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        let (top, bottom) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (off, row) in bottom.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for c in col..n {
                    row[c] -= f * pivot_row[c];
                }
                rhs[col + 1 + off] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / a[r][r];
    }
    Ok(x)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves the configured nonlinear system by dense Newton from zero.
pub fn oracle_solve(cfg: &BenchConfig) -> Result<Vec<f64>, BenchError> {
    if cfg.cells() > ORACLE_MAX_CELLS {
        return Err(BenchError::invalid(
            "oracle",
            format!(
                "dense oracle limited to {ORACLE_MAX_CELLS} cells, grid has {}",
                cfg.cells()
            ),
        ));
    }
    let grid = cfg.grid()?;
    let spec = cfg.problem()?;
    let sys = dense_assemble(&grid, &spec);
    let n = sys.b.len();
    let overflow = |e: pb_core::Error| BenchError::Oracle(e.to_string());

    let mut p = vec![0.0; n];
    for _ in 0..=MAX_NEWTON {
        let mut f = vec![0.0; n];
        let mut jac = sys.a.clone();
        for r in 0..n {
            let (s, ds) = spec.nonlinearity(p[r]).map_err(overflow)?;
            f[r] = sys.a[r].iter().zip(&p).map(|(a, x)| a * x).sum::<f64>() + sys.volume * s - sys.b[r];
            jac[r][r] += sys.volume * ds;
        }
        if norm(&f) <= OUTER_TOL {
            return Ok(p);
        }
        let step = gauss_solve(jac, f.iter().map(|v| -v).collect())?;
        for (pi, di) in p.iter_mut().zip(&step) {
            *pi += di;
        }
        if norm(&step) <= OUTER_TOL {
            return Ok(p);
        }
    }
    Err(BenchError::Oracle(format!(
        "dense Newton did not converge in {MAX_NEWTON} iterations"
    )))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub max_diffs: Vec<(StrategyKind, f64)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.max_diffs.iter().all(|&(_, d)| d <= ORACLE_AGREEMENT_TOL)
    }
}

/// Cross-checks every configured strategy against [`oracle_solve`].
pub fn verify(cfg: &BenchConfig) -> Result<VerifyReport, BenchError> {
    let dense = oracle_solve(cfg)?;
    let sys = build_system(cfg)?;
    let newton = cfg.newton();
    let mut max_diffs = Vec::new();
    for &kind in &cfg.strategies {
        let report = solve(&sys, &newton, &cfg.strategy(kind)).map_err(|e| BenchError::Solver {
            strategy: kind.name().to_string(),
            message: e.to_string(),
        })?;
        if !report.converged {
            return Err(BenchError::Solver {
                strategy: kind.name().to_string(),
                message: format!("terminated with {}", report.reason),
            });
        }
        max_diffs.push((kind, max_abs_diff(&report.final_p, &dense)));
    }
    Ok(VerifyReport { max_diffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_config_str;

    #[test]
    fn one_cell_zero_data() {
        let cfg = parse_config_str("nx = 1\nny = 1").unwrap();
        assert_eq!(oracle_solve(&cfg).unwrap(), vec![0.0]);
    }

    #[test]
    fn gauss_solves_small_system() {
        let x = gauss_solve(vec![vec![0.0, 2.0], vec![3.0, 1.0]], vec![4.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
        assert!(gauss_solve(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn linear_limit_matches_direct_solve_of_sparse_operator() {
        let cfg = parse_config_str("nx = 4\nny = 4\nk = 0\neps_q2 = 1\neps_q4 = 1").unwrap();
        let sys = build_system(&cfg).unwrap();
        let direct = gauss_solve(sys.a1().to_dense(), sys.rhs().to_vec()).unwrap();
        let p = oracle_solve(&cfg).unwrap();
        assert!(max_abs_diff(&p, &direct) <= 1e-12);
    }

    #[test]
    fn dense_operator_matches_sparse_assembly() {
        let cfg = parse_config_str("nx = 5\nny = 3").unwrap();
        let dense = dense_assemble(&cfg.grid().unwrap(), &cfg.problem().unwrap());
        let sys = build_system(&cfg).unwrap();
        let a = sys.a1().to_dense();
        for r in 0..15 {
            assert!((dense.b[r] - sys.rhs()[r]).abs() <= 1e-12 * (1.0 + dense.b[r].abs()));
            for c in 0..15 {
                assert!((dense.a[r][c] - a[r][c]).abs() <= 1e-12 * (1.0 + a[r][c].abs()));
            }
        }
    }

    #[test]
    fn size_limit() {
        let cfg = parse_config_str("nx = 40\nny = 40").unwrap();
        assert!(matches!(oracle_solve(&cfg), Err(BenchError::Validation { .. })));
    }

    #[test]
    fn verify_8x8_default() {
        let cfg = parse_config_str("nx = 8\nny = 8").unwrap();
        let rep = verify(&cfg).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.max_diffs.len(), 2);
    }
}
