use std::io::{self, Write};

use super::CsrMatrix;
use crate::Scalar;

/// Writes the lower triangle of a symmetric matrix in MatrixMarket
/// coordinate format with 1-based indices.
pub fn write_matrix_market<T: Scalar, W: Write>(a: &CsrMatrix<T>, mut w: W) -> io::Result<()> {
    let n = a.n();
    let mut entries = Vec::new();
    for i in 0..n {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if j <= i {
                entries.push((i, j, v));
            }
        }
    }
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{n} {n} {}", entries.len())?;
    for (i, j, v) in entries {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csr_from_triplets;

    #[test]
    fn writes_lower_triangle() {
        let a = csr_from_triplets(2, &[(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)]).unwrap();
        let mut out = Vec::new();
        write_matrix_market(&a, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "%%MatrixMarket matrix coordinate real symmetric");
        assert_eq!(lines[1], "2 2 3");
        assert_eq!(lines[2], "1 1 2.0000000000000000e0");
        assert_eq!(lines[3], "2 1 -1.0000000000000000e0");
        assert_eq!(lines.len(), 5);
    }
}
