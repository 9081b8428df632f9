use super::eigh::jacobi_rotation;
use crate::error::{Error, Result};
use crate::matrix::{vector, ComplexMatrix, C64, ZERO};

const SWEEP_BUDGET: usize = 60;

/// Thin SVD `A = U diag(s) V*` of a square matrix.
///
/// Columns of `u` belonging to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.singular_values[0]
    }

    /// Singular values below `rtol * max(1, s_max)` count as zero.
    pub fn rank(&self, rtol: f64) -> usize {
        let thr = rtol * self.max().max(1.0);
        self.singular_values.iter().filter(|&&s| s >= thr).count()
    }

    /// Orthonormal basis of the numerical null space, as right singular vectors.
    pub fn null_space(&self, rtol: f64) -> Vec<Vec<C64>> {
        let r = self.rank(rtol);
        (r..self.singular_values.len()).map(|k| self.v.column(k)).collect()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Orthogonalizes the columns of `A` pairwise; singular values come out with
/// high relative accuracy, which matters for rank and null-space decisions.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let n = a.dim();
    // Work column-wise: cols[j] is column j of A V.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = ComplexMatrix::identity(n);
    let mut converged = false;
    // columns below this squared norm are zero at working precision; rotating
    // them against large columns only recycles round-off
    let negligible = (f64::EPSILON * a.norm_fro()).powi(2);

    for _ in 0..SWEEP_BUDGET {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vector::dot(&cols[p], &cols[q]);
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || alpha.min(beta) <= negligible {
                    continue;
                }
                rotated = true;
                let (c, s, ph) = jacobi_rotation(alpha, gamma, beta);
                let sph = ph * s;
                let cph = ph * c;
                let (lo, hi) = cols.split_at_mut(q);
                for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (a0, b0) = (*xp, *xq);
                    *xp = a0 * c - sph * b0;
                    *xq = a0 * s + cph * b0;
                }
                for i in 0..n {
                    let xp = v[(i, p)];
                    let xq = v[(i, q)];
                    v[(i, p)] = xp * c - sph * xq;
                    v[(i, q)] = xp * s + cph * xq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "Jacobi SVD", budget: SWEEP_BUDGET });
    }

    let norms: Vec<f64> = cols.iter().map(|c| vector::norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let mut u = ComplexMatrix::zeros(n);
    let mut vs = ComplexMatrix::zeros(n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > 0.0 {
            let col: Vec<C64> = cols[j].iter().map(|z| z / s).collect();
            u.set_column(k, &col);
        } else {
            u.set_column(k, &vec![ZERO; n]);
        }
        vs.set_column(k, &v.column(j));
    }
    Ok(Svd { singular_values, u, v: vs })
}

pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.singular_values)
}
