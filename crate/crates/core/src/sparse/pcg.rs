use super::{CsrMatrix, IncompleteFactorization};
use crate::norms::{axpy, dot, norm2};
use crate::{Error, Result, Scalar};

/// How the stopping tolerance is measured against the residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToleranceMode {
    /// `||r_j|| <= tol * ||r_0||`
    #[default]
    Relative,
    /// `||r_j|| <= tol`
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgOptions<T> {
    pub tol: T,
    pub mode: ToleranceMode,
    /// Defaults to `10 n` when `None`.
    pub max_iter: Option<usize>,
}

impl<T: Scalar> PcgOptions<T> {
    pub fn relative(tol: T) -> Self {
        PcgOptions {
            tol,
            mode: ToleranceMode::Relative,
            max_iter: None,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcgResult<T> {
    pub x: Vec<T>,
    /// Number of products with `A` inside the iteration (the initial
    /// residual is not counted).
    pub iterations: usize,
    /// `||r_final|| / ||r_0||` from the recursively updated residual; zero
    /// when `r_0 = 0`.
    pub relative_residual: T,
    pub residual_norm: T,
    pub converged: bool,
}

/// Preconditioned conjugate gradients for symmetric positive definite `A`.
///
/// Convergence is judged on the plain 2-norm of the recursively updated
/// residual, never the preconditioned one. Running out of iterations is not
/// an error: the result comes back with `converged == false`.
pub fn pcg<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &[T],
    x0: &[T],
    opts: &PcgOptions<T>,
    precond: Option<&IncompleteFactorization<T>>,
) -> Result<PcgResult<T>> {
    let n = a.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: x0.len(),
        });
    }
    if let Some(m) = precond {
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: m.n(),
            });
        }
    }
    if !(opts.tol > T::zero()) {
        return Err(Error::invalid("tol", format!("must be positive, got {}", opts.tol)));
    }
    let max_iter = opts.max_iter.unwrap_or(10 * n);

    let mut x = x0.to_vec();
    let mut r = a.matvec(&x)?;
    for (ri, &bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let r0_norm = norm2(&r);
    let done = |iterations, rnorm: T, x: Vec<T>, converged| {
        let rel = if r0_norm > T::zero() {
            rnorm / r0_norm
        } else {
            T::zero()
        };
        Ok(PcgResult {
            x,
            iterations,
            relative_residual: rel,
            residual_norm: rnorm,
            converged,
        })
    };
    if r0_norm == T::zero() {
        return done(0, r0_norm, x, true);
    }
    let threshold = match opts.mode {
        ToleranceMode::Relative => opts.tol * r0_norm,
        ToleranceMode::Absolute => opts.tol,
    };
    if r0_norm <= threshold {
        return done(0, r0_norm, x, true);
    }

    let mut z = vec![T::zero(); n];
    let precondition = |r: &[T], z: &mut [T]| match precond {
        Some(m) => m.apply(r, z),
        None => z.copy_from_slice(r),
    };
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut q = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    let mut rnorm = r0_norm;

    for it in 1..=max_iter {
        a.matvec_into(&p, &mut q)?;
        let pq = dot(&p, &q);
        if !(pq > T::zero()) {
            // A (or M) is not positive definite along p.
            return done(it, rnorm, x, false);
        }
        let alpha = rz / pq;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &q, &mut r);
        rnorm = norm2(&r);
        if rnorm <= threshold {
            return done(it, rnorm, x, true);
        }
        if !rnorm.is_finite() {
            return done(it, rnorm, x, false);
        }
        precondition(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, &zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    done(max_iter, rnorm, x, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{csr_from_triplets, ic0_factorize};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `B^T B + n I`, dense and as CSR.
    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, CsrMatrix<f64>) {
        let bm: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut a = vec![vec![0.0; n]; n];
        let mut trips = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { n as f64 } else { 0.0 };
                for k in 0..n {
                    s += bm[k][i] * bm[k][j];
                }
                a[i][j] = s;
                trips.push((i, j, s));
            }
        }
        (a, csr_from_triplets(n, &trips).unwrap())
    }

    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for c in 0..n {
            let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            a.swap(c, piv);
            b.swap(c, piv);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    #[test]
    fn identity_in_one_iteration() {
        let a = CsrMatrix::<f64>::identity(4);
        let b = [1.0, -2.0, 3.5, 0.25];
        let res = pcg(&a, &b, &[0.0; 4], &PcgOptions::relative(1e-12), None).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.x, b.to_vec());
    }

    #[test]
    fn zero_rhs_returns_initial_guess() {
        let a = CsrMatrix::<f64>::identity(3);
        let res = pcg(&a, &[0.0; 3], &[0.0; 3], &PcgOptions::relative(1e-12), None).unwrap();
        assert_eq!((res.iterations, res.converged), (0, true));
        assert_eq!(res.x, vec![0.0; 3]);
        assert_eq!(res.relative_residual, 0.0);
    }

    #[test]
    fn dimension_and_tolerance_errors() {
        let a = CsrMatrix::<f64>::identity(3);
        assert!(matches!(
            pcg(&a, &[1.0; 2], &[0.0; 3], &PcgOptions::relative(1e-8), None),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            pcg(&a, &[1.0; 3], &[0.0; 2], &PcgOptions::relative(1e-8), None),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(pcg(&a, &[1.0; 3], &[0.0; 3], &PcgOptions::relative(0.0), None).is_err());
    }

    #[test]
    fn non_convergence_is_reported_not_raised() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (_, a) = random_spd(20, &mut rng);
        let b = vec![1.0; 20];
        let res = pcg(&a, &b, &[0.0; 20], &PcgOptions::relative(1e-14).with_max_iter(2), None).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 2);
        assert!(res.relative_residual.is_finite() && res.relative_residual < 1.0);
    }

    #[test]
    fn absolute_mode() {
        let a = csr_from_triplets(2, &[(0, 0, 2.0), (1, 1, 4.0)]).unwrap();
        let opts = PcgOptions {
            tol: 10.0,
            mode: ToleranceMode::Absolute,
            max_iter: None,
        };
        let res = pcg(&a, &[1.0, 1.0], &[0.0, 0.0], &opts, None).unwrap();
        assert_eq!((res.iterations, res.converged), (0, true));
    }

    #[test]
    fn random_spd_matches_dense_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let n = 50;
            let (dense, a) = random_spd(n, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let oracle = dense_solve(dense, b.clone());
            let res = pcg(&a, &b, &vec![0.0; n], &PcgOptions::relative(1e-12), None).unwrap();
            assert!(res.converged && res.iterations <= n);
            for i in 0..n {
                assert!((res.x[i] - oracle[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn terminates_within_n_plus_slack() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 7, 16, 33, 64] {
            let (_, a) = random_spd(n, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let res = pcg(
                &a,
                &b,
                &vec![0.0; n],
                &PcgOptions::relative(1e-10).with_max_iter(n + 5),
                None,
            )
            .unwrap();
            assert!(res.converged, "n = {n}");
            assert!(res.iterations <= n + 5);
        }
    }

    #[test]
    fn recursive_residual_does_not_drift() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 40;
        let (_, a) = random_spd(n, &mut rng);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = ic0_factorize(&a).unwrap();
        for pre in [None, Some(&m)] {
            let res = pcg(&a, &b, &vec![0.0; n], &PcgOptions::relative(1e-12), pre).unwrap();
            let ax = a.matvec(&res.x).unwrap();
            let true_r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
            assert!((norm2(&true_r) - res.residual_norm).abs() <= 1e-8 * norm2(&b));
        }
    }

    #[test]
    fn preconditioned_and_plain_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 30;
        let (_, a) = random_spd(n, &mut rng);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = ic0_factorize(&a).unwrap();
        let tol = 1e-10;
        let plain = pcg(&a, &b, &vec![0.0; n], &PcgOptions::relative(tol), None).unwrap();
        let pre = pcg(&a, &b, &vec![0.0; n], &PcgOptions::relative(tol), Some(&m)).unwrap();
        let scale = crate::norms::norm_inf(&plain.x);
        for i in 0..n {
            assert!((plain.x[i] - pre.x[i]).abs() <= 10.0 * tol * scale.max(1.0));
        }
    }

    #[test]
    fn works_in_f32() {
        let a = csr_from_triplets(
            3,
            &[(0, 0, 4.0f32), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 4.0), (2, 2, 2.0)],
        )
        .unwrap();
        let m = ic0_factorize(&a).unwrap();
        let res = pcg(&a, &[3.0, 3.0, 2.0], &[0.0; 3], &PcgOptions::relative(1e-5), Some(&m)).unwrap();
        assert!(res.converged);
        for xi in res.x {
            assert!((xi - 1.0).abs() < 1e-5);
        }
    }
}
