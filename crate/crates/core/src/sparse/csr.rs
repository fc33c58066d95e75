use std::cmp::Ordering;

use crate::{Error, Result, Scalar};

/// Square matrix in compressed sparse row form with strictly increasing
/// column indices inside each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

/// Builds a canonical CSR matrix from `(row, col, value)` triplets.
///
/// Duplicates are summed. The summation order of duplicates is fixed by
/// value, so the result is bitwise independent of the triplet order.
pub fn csr_from_triplets<T: Scalar>(n: usize, triplets: &[(usize, usize, T)]) -> Result<CsrMatrix<T>> {
    for &(row, col, _) in triplets {
        if row >= n || col >= n {
            return Err(Error::TripletOutOfRange { row, col, n });
        }
    }
    let mut sorted = triplets.to_vec();
    sorted.sort_by(|a, b| {
        (a.0, a.1)
            .cmp(&(b.0, b.1))
            .then_with(|| a.2.partial_cmp(&b.2).unwrap_or(Ordering::Equal))
    });

    let mut row_ptr = vec![0usize; n + 1];
    let mut col_idx = Vec::with_capacity(sorted.len());
    let mut values: Vec<T> = Vec::with_capacity(sorted.len());
    let mut last: Option<(usize, usize)> = None;
    for (row, col, v) in sorted {
        if last == Some((row, col)) {
            *values.last_mut().unwrap() += v;
        } else {
            col_idx.push(col);
            values.push(v);
            row_ptr[row + 1] += 1;
            last = Some((row, col));
        }
    }
    for i in 0..n {
        row_ptr[i + 1] += row_ptr[i];
    }
    Ok(CsrMatrix {
        n,
        row_ptr,
        col_idx,
        values,
    })
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Stored entry `(i, j)`, zero when not in the pattern.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(pos) => vals[pos],
            Err(_) => T::zero(),
        }
    }

    /// Position of the diagonal of each row in `values`, if stored.
    pub fn diagonal_positions(&self) -> Vec<Option<usize>> {
        (0..self.n)
            .map(|i| {
                let (cols, _) = self.row(i);
                cols.binary_search(&i).ok().map(|p| self.row_ptr[i] + p)
            })
            .collect()
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = vec![T::zero(); self.n];
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    pub fn matvec_into(&self, x: &[T], y: &mut [T]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: y.len(),
            });
        }
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
        Ok(())
    }

    /// `max |A_ij - A_ji|` over the stored pattern and its transpose.
    pub fn symmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                row[j] = v;
            }
        }
        d
    }
}

pub(super) fn from_raw_parts<T>(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<T>) -> CsrMatrix<T> {
    debug_assert_eq!(row_ptr.len(), n + 1);
    debug_assert_eq!(col_idx.len(), values.len());
    CsrMatrix {
        n,
        row_ptr,
        col_idx,
        values,
    }
}
