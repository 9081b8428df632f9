use serde::{Deserialize, Serialize};

use super::eigh::herm_eig;
use super::svd::svd;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Singular values below `RANK_RTOL * max(1, s_max)` are treated as zero.
pub const RANK_RTOL: f64 = 1e-10;

/// Negative eigenvalues down to `-SQRT_CLAMP * max(1, ||A||)` are round-off.
const SQRT_CLAMP: f64 = 1e-11;

/// Order of a Schatten norm. `Infinity` is the operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormOrder {
    Finite(f64),
    Infinity,
}

impl NormOrder {
    /// Validating constructor; `f64::INFINITY` maps to [`NormOrder::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(NormOrder::Infinity)
        } else if p.is_nan() || p < 1.0 {
            Err(Error::InvalidOrder(p))
        } else {
            Ok(NormOrder::Finite(p))
        }
    }

    /// Hölder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            NormOrder::Infinity => NormOrder::Finite(1.0),
            NormOrder::Finite(p) if p == 1.0 => NormOrder::Infinity,
            NormOrder::Finite(p) => NormOrder::Finite(p / (p - 1.0)),
        }
    }

    /// The orders exercised throughout the property suites.
    pub fn standard() -> [NormOrder; 5] {
        [
            NormOrder::Finite(1.0),
            NormOrder::Finite(1.5),
            NormOrder::Finite(2.0),
            NormOrder::Finite(3.0),
            NormOrder::Infinity,
        ]
    }
}

impl std::fmt::Display for NormOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormOrder::Finite(p) => write!(f, "{p}"),
            NormOrder::Infinity => write!(f, "inf"),
        }
    }
}

/// `||s||_p` for a list of nonnegative values, scaled to avoid overflow.
pub fn lp_norm(values: &[f64], p: NormOrder) -> Result<f64> {
    let smax = values.iter().copied().fold(0.0, f64::max);
    match p {
        NormOrder::Infinity => Ok(smax),
        NormOrder::Finite(p) => {
            if p.is_nan() || p < 1.0 {
                return Err(Error::InvalidOrder(p));
            }
            if smax == 0.0 {
                return Ok(0.0);
            }
            let s: f64 = values.iter().map(|&x| (x / smax).powf(p)).sum();
            Ok(smax * s.powf(1.0 / p))
        }
    }
}

/// Schatten norm `(tr |A|^p)^(1/p)`, or the largest singular value for `p = inf`.
pub fn schatten_norm(a: &ComplexMatrix, p: NormOrder) -> Result<f64> {
    if let NormOrder::Finite(x) = p {
        if x.is_nan() || x < 1.0 {
            return Err(Error::InvalidOrder(x));
        }
    }
    lp_norm(&svd(a)?.singular_values, p)
}

/// Operator (spectral) norm.
pub fn op_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.max())
}

pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    schatten_norm(a, NormOrder::Finite(1.0))
}

/// `|A| = (A*A)^(1/2)`, assembled as `V diag(s) V*` from the SVD of `A`.
pub fn abs_op(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = svd(a)?;
    Ok(weighted_gram(&d.v, &d.singular_values))
}

fn weighted_gram(v: &ComplexMatrix, w: &[f64]) -> ComplexMatrix {
    let n = v.dim();
    ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * w[k] * v[(j, k)].conj()).sum())
}

/// Square root of a positive semidefinite matrix through its eigendecomposition.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    hermitian_psd_function(a, f64::sqrt)
}

/// `f(A)` for PSD `A` with `f` applied to clamped eigenvalues.
pub fn hermitian_psd_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let e = herm_eig(a)?;
    let floor = -SQRT_CLAMP * e.max().abs().max(1.0);
    if e.min() < floor {
        return Err(Error::NotPsd { min_eig: e.min() });
    }
    Ok(e.apply_fn(|x| f(x.max(0.0))))
}

/// `|A|^p` for Hermitian `A`.
pub fn abs_power(a: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    Ok(herm_eig(a)?.apply_fn(|x| x.abs().powf(p)))
}

/// Polar decomposition `A = U_A |A|` with `U_A` vanishing on `ker |A|`.
#[derive(Debug, Clone)]
pub struct PolarParts {
    pub u: ComplexMatrix,
    pub abs: ComplexMatrix,
    /// Numerical rank used to split range and kernel.
    pub rank: usize,
    /// Orthonormal basis of `ker |A|`.
    pub kernel: Vec<Vec<C64>>,
}

/// Polar decomposition from the SVD; `U_A = sum_{s_k > thr} u_k v_k*`.
pub fn polar(a: &ComplexMatrix) -> Result<PolarParts> {
    let d = svd(a)?;
    let n = a.dim();
    let rank = d.rank(RANK_RTOL);
    let u = ComplexMatrix::from_fn(n, |i, j| {
        (0..rank).map(|k| d.u[(i, k)] * d.v[(j, k)].conj()).sum()
    });
    let abs = weighted_gram(&d.v, &d.singular_values);
    let kernel = (rank..n).map(|k| d.v.column(k)).collect();
    Ok(PolarParts { u, abs, rank, kernel })
}

/// Positive and negative parts `A = A+ - A-` of a Hermitian matrix.
pub fn pos_neg_parts(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let e = herm_eig(a)?;
    Ok((e.apply_fn(|x| x.max(0.0)), e.apply_fn(|x| (-x).max(0.0))))
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(&a.hermitian_part())?.min())
}
