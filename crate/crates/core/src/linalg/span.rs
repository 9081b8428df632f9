use crate::matrix::{vector, C64};

/// Incrementally grown orthonormal basis with a relative acceptance threshold.
///
/// A candidate is accepted when its component orthogonal to the current span
/// (after two Gram-Schmidt passes) keeps more than `rtol` of its norm, which
/// is the same rank decision a column-pivoted factorization makes.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    dim: usize,
    rtol: f64,
    vectors: Vec<Vec<C64>>,
}

impl OrthoBasis {
    pub fn new(dim: usize, rtol: f64) -> Self {
        OrthoBasis { dim, rtol, vectors: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_full(&self) -> bool {
        self.vectors.len() == self.dim
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// Component of `v` orthogonal to the span.
    pub fn residual(&self, v: &[C64]) -> Vec<C64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &self.vectors {
                let h = vector::dot(q, &r);
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= h * y;
                }
            }
        }
        r
    }

    /// Adds `v` if it extends the span; returns whether it did.
    pub fn try_add(&mut self, v: &[C64]) -> bool {
        self.try_add_scaled(v, vector::norm(v))
    }

    /// As [`OrthoBasis::try_add`], with the threshold `rtol * scale` instead of
    /// `rtol * |v|`. Products that cancel to round-off must be judged against the
    /// size of their factors, not against their own norm.
    pub fn try_add_scaled(&mut self, v: &[C64], scale: f64) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.is_full() || vector::norm(v) == 0.0 {
            return false;
        }
        let r = self.residual(v);
        let n = vector::norm(&r);
        if n <= self.rtol * scale.max(vector::norm(v)) {
            return false;
        }
        self.vectors.push(r.into_iter().map(|z| z / n).collect());
        true
    }

    /// Orthonormal basis of the orthogonal complement of the span.
    pub fn complement(&self) -> Vec<Vec<C64>> {
        let mut full = self.clone();
        let mut out = Vec::new();
        for k in 0..self.dim {
            if full.try_add(&vector::basis(self.dim, k)) {
                out.push(full.vectors.last().unwrap().clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c64;

    #[test]
    fn rejects_dependent_vectors() {
        let mut b = OrthoBasis::new(3, 1e-10);
        assert!(b.try_add(&[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]));
        assert!(b.try_add(&[c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0)]));
        assert!(!b.try_add(&[c64(3.0, 0.0), c64(0.0, 2.0), c64(0.0, 0.0)]));
        assert_eq!(b.rank(), 2);
        let c = b.complement();
        assert_eq!(c.len(), 1);
        assert!((c[0][2].norm() - 1.0).abs() < 1e-14);
    }
}
