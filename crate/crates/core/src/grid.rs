//! Uniform cell-centered rectangular mesh.
//!
//! Cells are numbered row-major with `x` fastest: cell `(i, j)` has linear
//! index `j * nx + i`, so the five-point stencil has bandwidth `nx`.

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    nx: usize,
    ny: usize,
    xmin: T,
    xmax: T,
    ymin: T,
    ymax: T,
    hx: T,
    hy: T,
}

impl<T: Scalar> Grid<T> {
    /// Builds an `nx` by `ny` grid over `[xmin, xmax, ymin, ymax]`.
    pub fn new(nx: usize, ny: usize, bounds: [T; 4]) -> Result<Self> {
        let [xmin, xmax, ymin, ymax] = bounds;
        if nx == 0 {
            return Err(Error::invalid("nx", "must be at least 1"));
        }
        if ny == 0 {
            return Err(Error::invalid("ny", "must be at least 1"));
        }
        if !(xmin.is_finite() && xmax.is_finite() && xmax > xmin) {
            return Err(Error::invalid(
                "xmax",
                format!("need finite xmin < xmax, got [{xmin}, {xmax}]"),
            ));
        }
        if !(ymin.is_finite() && ymax.is_finite() && ymax > ymin) {
            return Err(Error::invalid(
                "ymax",
                format!("need finite ymin < ymax, got [{ymin}, {ymax}]"),
            ));
        }
        let hx = (xmax - xmin) / T::from_usize(nx).unwrap();
        let hy = (ymax - ymin) / T::from_usize(ny).unwrap();
        if !(hx > T::zero() && hy > T::zero()) {
            return Err(Error::invalid("bounds", "cell width underflows to zero"));
        }
        Ok(Grid {
            nx,
            ny,
            xmin,
            xmax,
            ymin,
            ymax,
            hx,
            hy,
        })
    }

    /// The reference square `[-1, 1]^2`.
    pub fn unit_square(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, [-T::one(), T::one(), -T::one(), T::one()])
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn hx(&self) -> T {
        self.hx
    }

    pub fn hy(&self) -> T {
        self.hy
    }

    /// `[xmin, xmax, ymin, ymax]`
    pub fn bounds(&self) -> [T; 4] {
        [self.xmin, self.xmax, self.ymin, self.ymax]
    }

    /// Number of cells (and unknowns).
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> T {
        self.hx * self.hy
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Result<(T, T)> {
        self.check(i, j)?;
        Ok(self.center_unchecked(i, j))
    }

    pub fn linear_index(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i, j)?;
        Ok(j * self.nx + i)
    }

    /// Inverse of [`Grid::linear_index`].
    pub fn cell_of(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.len() {
            return Err(Error::LinearIndexOutOfRange { index, len: self.len() });
        }
        Ok((index % self.nx, index / self.nx))
    }

    #[inline]
    pub(crate) fn center_unchecked(&self, i: usize, j: usize) -> (T, T) {
        let half = T::lit(0.5);
        let x = self.xmin + (T::from_usize(i).unwrap() + half) * self.hx;
        let y = self.ymin + (T::from_usize(j).unwrap() + half) * self.hy;
        (x, y)
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.nx || j >= self.ny {
            return Err(Error::CellOutOfRange {
                i,
                j,
                nx: self.nx,
                ny: self.ny,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn square(n: usize, m: usize) -> Grid<f64> {
        Grid::unit_square(n, m).unwrap()
    }

    #[test]
    fn build_examples() {
        let g = square(1, 1);
        assert_eq!((g.hx(), g.hy()), (2.0, 2.0));
        assert_eq!(g.cell_center(0, 0).unwrap(), (0.0, 0.0));

        let g = square(2, 2);
        assert_eq!((g.hx(), g.hy()), (1.0, 1.0));
        assert_eq!(g.cell_center(0, 0).unwrap(), (-0.5, -0.5));
        assert_eq!(g.cell_center(1, 1).unwrap(), (0.5, 0.5));
        assert_eq!(g.cell_center(1, 0).unwrap(), (0.5, -0.5));

        let g = Grid::new(4, 2, [0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!((g.hx(), g.hy()), (0.25, 0.5));
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(matches!(
            Grid::<f64>::unit_square(0, 3),
            Err(Error::InvalidArgument { name: "nx", .. })
        ));
        assert!(matches!(
            Grid::<f64>::unit_square(3, 0),
            Err(Error::InvalidArgument { name: "ny", .. })
        ));
        assert!(Grid::new(2, 2, [1.0, 1.0, 0.0, 1.0]).is_err());
        assert!(Grid::new(2, 2, [0.0, 1.0, 0.5, -0.5]).is_err());
        assert!(Grid::new(2, 2, [0.0, f64::NAN, 0.0, 1.0]).is_err());
    }

    #[test]
    fn linear_index_examples() {
        let g = square(2, 2);
        assert_eq!(g.linear_index(0, 0).unwrap(), 0);
        assert_eq!(g.linear_index(1, 0).unwrap(), 1);
        assert_eq!(g.linear_index(1, 1).unwrap(), 3);
        assert!(g.linear_index(2, 0).is_err());
        assert!(g.cell_center(0, 2).is_err());
        assert!(g.cell_of(4).is_err());
    }

    #[test]
    fn round_trip_exhaustive_up_to_8x8() {
        for nx in 1..=8 {
            for ny in 1..=8 {
                let g = square(nx, ny);
                let mut seen = vec![false; g.len()];
                for j in 0..ny {
                    for i in 0..nx {
                        let idx = g.linear_index(i, j).unwrap();
                        assert!(!seen[idx]);
                        seen[idx] = true;
                        assert_eq!(g.cell_of(idx).unwrap(), (i, j));
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn center_spacing_is_exact_on_dyadic_grids() {
        for n in [1, 2, 4, 8, 16, 64] {
            let g = square(n, n);
            for i in 0..n - 1 {
                let (x0, y0) = g.cell_center(i, i).unwrap();
                let (x1, y1) = g.cell_center(i + 1, i + 1).unwrap();
                assert_eq!(x1 - x0, g.hx());
                assert_eq!(y1 - y0, g.hy());
            }
        }
    }

    #[test]
    fn f32_grid() {
        let g = Grid::<f32>::unit_square(4, 4).unwrap();
        assert_eq!(g.cell_center(0, 3).unwrap(), (-0.75, 0.75));
    }

    proptest! {
        #[test]
        fn centers_strictly_inside(nx in 1usize..40, ny in 1usize..40,
                                   x0 in -10.0f64..10.0, w in 1e-3f64..20.0,
                                   y0 in -10.0f64..10.0, h in 1e-3f64..20.0) {
            let g = Grid::new(nx, ny, [x0, x0 + w, y0, y0 + h]).unwrap();
            for j in 0..ny {
                for i in 0..nx {
                    let (x, y) = g.cell_center(i, j).unwrap();
                    prop_assert!(x > x0 && x < x0 + w);
                    prop_assert!(y > y0 && y < y0 + h);
                    // spacing along x, to rounding
                    if i + 1 < nx {
                        let (xn, _) = g.cell_center(i + 1, j).unwrap();
                        prop_assert!(((xn - x) - g.hx()).abs() <= 1e-12 * (1.0 + x0.abs() + w));
                    }
                }
            }
        }
    }
}
