use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix, C64};

const SWEEP_BUDGET: usize = 60;
const OFF_DIAGONAL_RTOL: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-8;

/// Eigendecomposition `A = V diag(eigenvalues) V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V f(Λ) V*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let w: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * w[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|x| x)
    }
}

/// Parameters of the 2x2 unitary `G = [[c, s], [-s*ph, c*ph]]` that
/// diagonalizes the Hermitian block `[[a, b], [conj(b), d]]` via `G* H G`.
///
/// Shared by the two-sided eigensolver and the one-sided SVD.
pub(crate) fn jacobi_rotation(a: f64, b: C64, d: f64) -> (f64, f64, C64) {
    let g = b.norm();
    let ph = (b / g).conj();
    let theta = (d - a) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, ph)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `1e-13 * ||A||_F`; at most 60 sweeps.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let scale = a.max_abs().max(1.0);
    let mut deviation: f64 = 0.0;
    let n = a.dim();
    for i in 0..n {
        for j in i..n {
            deviation = deviation.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }

    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let total = m.norm_fro();
    let mut converged = false;

    for _ in 0..=SWEEP_BUDGET {
        if off_diagonal(&m) <= OFF_DIAGONAL_RTOL * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[(p, q)].norm() == 0.0 {
                    continue;
                }
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "Jacobi eigensolver", budget: SWEEP_BUDGET });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { eigenvalues, eigenvectors })
}

fn off_diagonal(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.dim();
    let (c, s, ph) = jacobi_rotation(m[(p, p)].re, m[(p, q)], m[(q, q)].re);
    let sph = ph * s;
    let cph = ph * c;
    // M <- M G
    for i in 0..n {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = xp * c - sph * xq;
        m[(i, q)] = xp * s + cph * xq;
    }
    // M <- G* M
    for j in 0..n {
        let xp = m[(p, j)];
        let xq = m[(q, j)];
        m[(p, j)] = xp * c - sph.conj() * xq;
        m[(q, j)] = xp * s + cph.conj() * xq;
    }
    m[(p, q)] = c64(0.0, 0.0);
    m[(q, p)] = c64(0.0, 0.0);
    m[(p, p)] = c64(m[(p, p)].re, 0.0);
    m[(q, q)] = c64(m[(q, q)].re, 0.0);
    for i in 0..n {
        let xp = v[(i, p)];
        let xq = v[(i, q)];
        v[(i, p)] = xp * c - sph * xq;
        v[(i, q)] = xp * s + cph * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, rng_from_seed};

    fn check_decomposition(a: &ComplexMatrix, e: &HermitianEigen) {
        let n = a.dim();
        let recon = (&e.reconstruct() - a).norm_fro();
        assert!(recon <= 1e-10 * a.norm_fro().max(1.0), "reconstruction {recon:e}");
        let gram = &e.eigenvectors.adjoint() * &e.eigenvectors;
        assert!((&gram - &ComplexMatrix::identity(n)).max_abs() <= 1e-10);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = herm_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let e = herm_eig(&ComplexMatrix::real_diag(&[2.0, -1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0]);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = rng_from_seed(11);
        for n in [2, 5, 9, 16] {
            let a = random_hermitian(&mut rng, n);
            let e = herm_eig(&a).unwrap();
            check_decomposition(&a, &e);
        }
    }

    #[test]
    fn complex_two_by_two_closed_form() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let a = ComplexMatrix::from_rows(&[&[c64(1.0, 0.0), c64(0.0, 1.0)], &[c64(0.0, -1.0), c64(1.0, 0.0)]]);
        let e = herm_eig(&a).unwrap();
        assert!((e.eigenvalues[0]).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-14);
        check_decomposition(&a, &e);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::unit(2, 0, 1);
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
    }
}
