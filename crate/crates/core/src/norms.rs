//! Vector norms used for stopping tests and reporting.

use crate::Scalar;

/// Plain Euclidean norm. This is what the stopping tests use.
pub fn norm2<T: Scalar>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

/// Mesh-weighted discrete L2 norm `sqrt(sum V_i v_i^2)`.
pub fn weighted_norm2<T: Scalar>(v: &[T], volumes: &[T]) -> T {
    debug_assert_eq!(v.len(), volumes.len());
    v.iter().zip(volumes).map(|(&x, &w)| w * x * x).sum::<T>().sqrt()
}

pub fn norm_inf<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// `y += alpha * x`
pub(crate) fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_norms() {
        let v = [3.0_f64, -4.0];
        assert_eq!(norm2(&v), 5.0);
        assert_eq!(norm_inf(&v), 4.0);
        assert_eq!(weighted_norm2(&v, &[0.25, 0.25]), 2.5);
    }
}
