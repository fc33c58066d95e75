use super::CsrMatrix;
use crate::{Error, Result, Scalar};

/// Zero-fill incomplete Cholesky factor `M = L L^T` of a symmetric matrix.
///
/// `L` keeps exactly the lower-triangular pattern of the input, diagonal
/// last in every row.
#[derive(Debug, Clone)]
pub struct IncompleteFactorization<T> {
    lower: CsrMatrix<T>,
    diag: Vec<T>,
}

/// IC(0) of a symmetric matrix with positive diagonal.
///
/// Fails with [`Error::Breakdown`] at the first row whose pivot is not
/// strictly positive; there is no shift-and-retry.
pub fn ic0_factorize<T: Scalar>(a: &CsrMatrix<T>) -> Result<IncompleteFactorization<T>> {
    let n = a.n();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    let mut values: Vec<T> = Vec::new();
    let mut diag = vec![T::zero(); n];
    row_ptr.push(0);

    for i in 0..n {
        let start = col_idx.len();
        let (cols, vals) = a.row(i);
        let mut a_ii = T::zero();
        for (&j, &v) in cols.iter().zip(vals) {
            if j < i {
                col_idx.push(j);
                values.push(v);
            } else if j == i {
                a_ii = v;
            }
        }
        // Off-diagonals in increasing column order; entries left of the
        // current one are already final.
        for p in start..col_idx.len() {
            let k = col_idx[p];
            let (k_cols, k_vals) = (
                &col_idx[row_ptr[k]..row_ptr[k + 1]],
                &values[row_ptr[k]..row_ptr[k + 1]],
            );
            let s = sparse_dot_below(&col_idx[start..p], &values[start..p], k_cols, k_vals, k);
            values[p] = (values[p] - s) / diag[k];
        }
        let sq: T = values[start..].iter().map(|&l| l * l).sum();
        let pivot = a_ii - sq;
        if !(pivot > T::zero() && pivot.is_finite()) {
            return Err(Error::Breakdown {
                row: i,
                pivot: pivot.to_f64_lossy(),
            });
        }
        let d = pivot.sqrt();
        diag[i] = d;
        col_idx.push(i);
        values.push(d);
        row_ptr.push(col_idx.len());
    }

    let lower = super::csr::from_raw_parts(n, row_ptr, col_idx, values);
    Ok(IncompleteFactorization { lower, diag })
}

/// `sum_j a_j b_j` over shared columns `j < limit`.
fn sparse_dot_below<T: Scalar>(a_cols: &[usize], a_vals: &[T], b_cols: &[usize], b_vals: &[T], limit: usize) -> T {
    let (mut p, mut q) = (0, 0);
    let mut s = T::zero();
    while p < a_cols.len() && q < b_cols.len() {
        let (ca, cb) = (a_cols[p], b_cols[q]);
        if ca >= limit || cb >= limit {
            break;
        }
        match ca.cmp(&cb) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                s += a_vals[p] * b_vals[q];
                p += 1;
                q += 1;
            }
        }
    }
    s
}

impl<T: Scalar> IncompleteFactorization<T> {
    /// The lower factor `L`, diagonal included.
    pub fn lower(&self) -> &CsrMatrix<T> {
        &self.lower
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diag
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// `z = (L L^T)^{-1} r`
    pub fn apply(&self, r: &[T], z: &mut [T]) {
        let n = self.n();
        debug_assert_eq!(r.len(), n);
        for i in 0..n {
            let (cols, vals) = self.lower.row(i);
            let mut s = r[i];
            for (&j, &l) in cols[..cols.len() - 1].iter().zip(vals) {
                s -= l * z[j];
            }
            z[i] = s / self.diag[i];
        }
        for i in (0..n).rev() {
            let (cols, vals) = self.lower.row(i);
            z[i] /= self.diag[i];
            let zi = z[i];
            for (&j, &l) in cols[..cols.len() - 1].iter().zip(vals) {
                z[j] -= l * zi;
            }
        }
    }
}
