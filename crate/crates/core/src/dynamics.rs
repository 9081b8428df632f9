//! Discrete iteration `A_k = phi^k(A_0)` and the semigroup `exp(t(phi - ||phi||_2))`.

use serde::{Deserialize, Serialize};

use crate::channel::{kraus_from_choi, KrausChannel, LinearMap};
use crate::error::{Error, Result};
use crate::linalg::{expm, herm_eig, op_norm, schatten_norm, NormOrder, EXPM_GUARD};
use crate::matrix::ComplexMatrix;
use crate::positivity::{check_ergodic, CheckConfig};
use crate::spectral::{fixed_point, hermitize, SpectralTolerances};

/// Norm bound used when splitting `exp(tG)` into powers of `exp(tG/m)`.
const EXPM_STEP_NORM: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Step indices (discrete) or times (semigroup).
    pub times: Vec<f64>,
    pub states: Vec<ComplexMatrix>,
    /// Distance of each state from `limit`.
    pub distances: Vec<f64>,
    /// The a-priori decay bound at each time, when one applies.
    pub bounds: Option<Vec<f64>>,
    pub limit: ComplexMatrix,
    pub norm: NormOrder,
}

/// `A_k = phi^k(A_0)` for `k = 0..=n_steps`, measured against `tr(A_0)` times the invariant state.
pub fn iterate(
    map: &dyn LinearMap,
    a0: &ComplexMatrix,
    n_steps: usize,
    norm: NormOrder,
    tol: &SpectralTolerances,
) -> Result<Trajectory> {
    if a0.dim() != map.dim() {
        return Err(Error::DimMismatch { expected: map.dim(), found: a0.dim() });
    }
    let fp = fixed_point(map, tol)?;
    let limit = fp.state.matrix().scale(a0.trace());
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut distances = Vec::with_capacity(n_steps + 1);
    let mut a = a0.clone();
    for k in 0..=n_steps {
        if k > 0 {
            a = map.apply(&a)?;
        }
        distances.push(schatten_norm(&(&a - &limit), norm)?);
        states.push(a.clone());
    }
    Ok(Trajectory {
        times: (0..=n_steps).map(|k| k as f64).collect(),
        states,
        distances,
        bounds: None,
        limit,
        norm,
    })
}

/// Spectral data of a self-adjoint map needed by the semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfAdjointSpectrum {
    /// Largest eigenvalue of the Hermitian transfer matrix.
    pub sigma1: f64,
    /// Next eigenvalue below `sigma1` (counted with multiplicity).
    pub sigma2: f64,
    /// `||phi||_2`, the largest singular value; equals `sigma1` for these maps.
    pub norm_two: f64,
    /// Perron-Frobenius vector normalized to `||A||_2 = 1`.
    pub pf_vector: ComplexMatrix,
}

impl SelfAdjointSpectrum {
    pub fn gap(&self) -> f64 {
        self.sigma1 - self.sigma2
    }
}

/// Checks the semigroup preconditions and returns the spectral data.
///
/// The map must be self-adjoint (`||T - T*||_inf <= 1e-8`), completely positive
/// (hence 2-positive) and ergodic, and `||phi||_2` must agree with `sigma1`.
pub fn self_adjoint_spectrum(map: &dyn LinearMap, tol: f64) -> Result<SelfAdjointSpectrum> {
    let t = map.transfer_matrix().into_transfer();
    let residual = op_norm(&(&t - &t.adjoint()))?;
    if residual > tol {
        return Err(Error::NotSelfAdjointMap { residual });
    }
    let kraus: KrausChannel = match map.as_kraus() {
        Some(k) => k.clone(),
        None => kraus_from_choi(&map.choi()).map_err(|_| {
            Error::InvalidArgument("the semigroup needs a completely positive map".into())
        })?,
    };
    if check_ergodic(&kraus, &CheckConfig::new(64, 0))?.is_refuted() {
        return Err(Error::NotErgodic("the Perron-Frobenius vector is not unique".into()));
    }
    let e = herm_eig(&t.hermitian_part())?;
    let n = e.eigenvalues.len();
    let sigma1 = e.eigenvalues[n - 1];
    let sigma2 = if n > 1 { e.eigenvalues[n - 2] } else { f64::NEG_INFINITY };
    let norm_two = op_norm(&t)?;
    if (norm_two - sigma1).abs() > tol * norm_two.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "||phi||_2 = {norm_two} differs from the top eigenvalue {sigma1}"
        )));
    }
    let a = hermitize(&ComplexMatrix::unvec(&e.eigenvector(n - 1))?);
    let pf_vector = a.scale_real(1.0 / a.norm_fro());
    Ok(SelfAdjointSpectrum { sigma1, sigma2, norm_two, pf_vector })
}

/// `exp(t (T - sigma1 I))` on vectorized matrices.
pub fn semigroup_propagator(t_matrix: &ComplexMatrix, sigma1: f64, t: f64) -> Result<ComplexMatrix> {
    let n = t_matrix.dim();
    let g = (t_matrix - &ComplexMatrix::identity(n).scale_real(sigma1)).scale_real(t);
    let norm = g.norm_row_sum();
    if !norm.is_finite() {
        return Err(Error::Overflow { norm, bound: EXPM_GUARD });
    }
    let m = (norm / EXPM_STEP_NORM).ceil().max(1.0);
    if m > u32::MAX as f64 {
        return Err(Error::Overflow { norm, bound: EXPM_STEP_NORM * u32::MAX as f64 });
    }
    Ok(expm(&g.scale_real(1.0 / m))?.powi(m as u32))
}

/// Semigroup trajectory with the distance to `<A, B>_2 A` and the bound
/// `exp(-t (sigma1 - sigma2)) ||B||_2` in Frobenius norm.
pub fn semigroup_evolve(map: &dyn LinearMap, b: &ComplexMatrix, t_grid: &[f64], tol: f64) -> Result<Trajectory> {
    if b.dim() != map.dim() {
        return Err(Error::DimMismatch { expected: map.dim(), found: b.dim() });
    }
    let spec = self_adjoint_spectrum(map, tol)?;
    let t_matrix = map.transfer_matrix().into_transfer();
    let a = &spec.pf_vector;
    let limit = a.scale(a.hs_inner(b));
    let b_norm = b.norm_fro();
    let vb = b.vec();
    let mut states = Vec::with_capacity(t_grid.len());
    let mut distances = Vec::with_capacity(t_grid.len());
    let mut bounds = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("time {t} is not a finite nonnegative number")));
        }
        let x = ComplexMatrix::unvec(&semigroup_propagator(&t_matrix, spec.sigma1, t)?.matvec(&vb))?;
        distances.push((&x - &limit).norm_fro());
        bounds.push((-t * spec.gap()).exp() * b_norm);
        states.push(x);
    }
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
        distances,
        bounds: Some(bounds),
        limit,
        norm: NormOrder::Finite(2.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCheck {
    /// Least-squares slope of `ln distance` over the tail; `None` with fewer than two usable points.
    pub measured_slope: Option<f64>,
    pub sigma1_minus_sigma2: f64,
    pub bound_satisfied: bool,
    /// `min_t (bound - distance)`.
    pub worst_slack: f64,
    /// Tail points used for the slope.
    pub tail_points: usize,
}

impl RateCheck {
    /// `|slope + gap| / gap`.
    pub fn relative_slope_error(&self) -> Option<f64> {
        let g = self.sigma1_minus_sigma2;
        self.measured_slope.map(|s| (s + g).abs() / g)
    }
}

/// Checks the decay bound at every grid point (slack `>= -slack_tol`) and fits the tail rate.
///
/// The tail is the last half of the grid, restricted to distances above `1e-12`.
pub fn rate_check(traj: &Trajectory, gap: f64, slack_tol: f64) -> RateCheck {
    let bounds = traj.bounds.clone().unwrap_or_else(|| vec![f64::INFINITY; traj.times.len()]);
    let worst_slack = bounds
        .iter()
        .zip(&traj.distances)
        .map(|(b, d)| b - d)
        .fold(f64::INFINITY, f64::min);
    let n = traj.times.len();
    let tail: Vec<(f64, f64)> = traj.times[n / 2..]
        .iter()
        .zip(&traj.distances[n / 2..])
        .filter(|(_, d)| **d > 1e-12)
        .map(|(t, d)| (*t, d.ln()))
        .collect();
    let measured_slope = (tail.len() >= 2).then(|| {
        let k = tail.len() as f64;
        let mt = tail.iter().map(|p| p.0).sum::<f64>() / k;
        let my = tail.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = tail.iter().map(|(t, y)| (t - mt) * (y - my)).sum();
        let sxx: f64 = tail.iter().map(|(t, _)| (t - mt).powi(2)).sum();
        sxy / sxx
    });
    RateCheck {
        measured_slope,
        sigma1_minus_sigma2: gap,
        bound_satisfied: worst_slack >= -slack_tol,
        worst_slack,
        tail_points: tail.len(),
    }
}

/// Evenly spaced grid of `points` times on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|k| t_max * k as f64 / (points - 1) as f64).collect(),
    }
}
