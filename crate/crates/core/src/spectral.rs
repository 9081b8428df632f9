//! Spectrum of the transfer matrix, peripheral eigenvectors and the
//! Perron-Frobenius fixed point.

use serde::{Deserialize, Serialize};

use crate::channel::{kraus_from_choi, LinearMap};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    abs_op, general_spectrum, herm_eig, op_norm, solve, svd, trace_norm, NormOrder, Svd,
};
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::positivity::adjoint_map;

const POWER_ITERATION_LIMIT: usize = 100_000;
const STAGNATION_WINDOW: usize = 1000;
const CLUSTER_TOL: f64 = 1e-6;

/// Thresholds of the spectral computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralTolerances {
    /// Moduli within this of the radius are peripheral.
    pub peripheral: f64,
    /// Relative singular-value threshold for nullities.
    pub nullity: f64,
    /// `||phi*(I) - I||_inf` allowed for a trace-preserving map.
    pub trace_preserving: f64,
    /// Power iteration stops when successive iterates differ by this in trace norm.
    pub convergence: f64,
    /// Least eigenvalue (at unit trace) above which the Perron-Frobenius vector is definite.
    pub definite: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        SpectralTolerances {
            peripheral: 1e-8,
            nullity: 1e-8,
            trace_preserving: 1e-8,
            convergence: 1e-12,
            definite: 1e-10,
        }
    }
}

impl SpectralTolerances {
    /// Every decision threshold set to `tol`; the convergence target is kept.
    pub fn uniform(tol: f64) -> Self {
        SpectralTolerances { peripheral: tol, nullity: tol, trace_preserving: tol, definite: tol, ..Self::default() }
    }
}

/// Serde helpers writing complex numbers as `[re, im]`.
pub mod complex_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
        v.iter().map(|z| [z.re, z.im]).collect()
    }

    pub mod vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
            to_pairs(v).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
            let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
            Ok(pairs.into_iter().map(|[r, i]| c64(r, i)).collect())
        }
    }

    pub mod scalar {
        use super::*;
        pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
            [z.re, z.im].serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
            let [r, i] = <[f64; 2]>::deserialize(d)?;
            Ok(c64(r, i))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// All `d^2` eigenvalues, moduli descending.
    #[serde(with = "complex_serde::vec")]
    pub eigenvalues: Vec<C64>,
    pub radius: f64,
    #[serde(with = "complex_serde::vec")]
    pub peripheral: Vec<C64>,
    /// `radius` minus the largest non-peripheral modulus; 0 when everything is peripheral.
    pub gap: f64,
    /// Geometric multiplicity of the radius as an eigenvalue.
    pub radius_multiplicity: usize,
    pub fixed_point: Option<DensityMatrix>,
    /// `||phi(rho) - r rho||_1` for the reported fixed point.
    pub fixed_point_residual: Option<f64>,
    pub pf_simple: bool,
    pub pf_positive_definite: bool,
    /// Least eigenvalue of the Perron-Frobenius vector at unit trace.
    pub pf_min_eig: Option<f64>,
}

fn sort_by_modulus(eigs: &mut [C64]) {
    eigs.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
}

fn shifted(t: &ComplexMatrix, lambda: C64) -> ComplexMatrix {
    t - &ComplexMatrix::identity(t.dim()).scale(lambda)
}

fn dual_identity_residual(map: &dyn LinearMap) -> Result<f64> {
    let d = map.dim();
    let id = ComplexMatrix::identity(d);
    op_norm(&(&adjoint_map(map).apply(&id)? - &id))
}

/// Phase-fixes and Hermitizes a transfer eigenvector that should be Hermitian.
///
/// Eigenvectors come with an arbitrary phase; when the matrix is not already
/// Hermitian to `1e-6` relative, the largest-modulus entry is rotated to the
/// positive real axis first. The sign is chosen to make the trace nonnegative.
pub fn hermitize(a: &ComplexMatrix) -> ComplexMatrix {
    let mut a = a.clone();
    if (&a - &a.adjoint()).norm_fro() > 1e-6 * a.norm_fro() {
        let big = a
            .as_slice()
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or(c64(1.0, 0.0));
        if big.norm() > 0.0 {
            a = a.scale(big.conj() / big.norm());
        }
    }
    let h = a.hermitian_part();
    if h.trace().re < 0.0 {
        -&h
    } else {
        h
    }
}

fn pf_normalized(a: &ComplexMatrix) -> ComplexMatrix {
    let h = hermitize(a);
    let tr = h.trace().re;
    if tr.abs() > 1e-12 * h.norm_fro() {
        h.scale_real(1.0 / tr)
    } else {
        h.scale_real(1.0 / h.norm_fro().max(f64::MIN_POSITIVE))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointMethod {
    PowerIteration,
    SpectralProjection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub state: DensityMatrix,
    /// Nullity of `T - I`; more than one means the invariant state is not unique.
    pub multiplicity: usize,
    /// `||phi(rho) - rho||_1`.
    pub residual: f64,
    pub iterations: usize,
    pub method: FixedPointMethod,
}

/// Invariant density matrix of a trace-preserving map.
///
/// Power iteration from `I/d`; when it stalls (periodic or very slowly mixing
/// maps) the state is the spectral projection of `I/d` onto the eigenvalue-1
/// eigenspace, built from right and left null vectors of `T - I`.
pub fn fixed_point(map: &dyn LinearMap, tol: &SpectralTolerances) -> Result<FixedPoint> {
    let residual = dual_identity_residual(map)?;
    if residual > tol.trace_preserving {
        return Err(Error::NotTracePreserving { residual });
    }
    let d = map.dim();
    let t = map.transfer_matrix().into_transfer();
    let minus_one = shifted(&t, c64(1.0, 0.0));
    let right = svd(&minus_one)?;
    let multiplicity = right.null_space(tol.nullity).len();

    let sqrt_d = (d as f64).sqrt();
    let mut x = ComplexMatrix::identity(d).scale_real(1.0 / d as f64).vec();
    let mut checkpoint = f64::INFINITY;
    let mut converged = None;
    for k in 1..=POWER_ITERATION_LIMIT {
        let y = t.matvec(&x);
        let diff: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        x = y;
        // ||.||_1 <= sqrt(d) ||.||_F
        if sqrt_d * diff <= tol.convergence {
            converged = Some(k);
            break;
        }
        if k % STAGNATION_WINDOW == 0 {
            if diff > 0.5 * checkpoint {
                break;
            }
            checkpoint = diff;
        }
    }

    let (rho, iterations, method) = match converged {
        Some(k) => (ComplexMatrix::unvec(&x)?, k, FixedPointMethod::PowerIteration),
        None => {
            let left = svd(&minus_one.adjoint())?;
            let start = ComplexMatrix::identity(d).scale_real(1.0 / d as f64).vec();
            let p = spectral_projection(&right, &left, tol.nullity, &start)?;
            (ComplexMatrix::unvec(&p)?, POWER_ITERATION_LIMIT, FixedPointMethod::SpectralProjection)
        }
    };
    let state = DensityMatrix::normalized(&rho)?;
    let residual = trace_norm(&(&map.apply(state.matrix())? - state.matrix()))?;
    Ok(FixedPoint { state, multiplicity, residual, iterations, method })
}

/// `R (L* R)^-1 L* x` for right and left null spaces `R`, `L`.
fn spectral_projection(right: &Svd, left: &Svd, rtol: f64, x: &[C64]) -> Result<Vec<C64>> {
    let r = right.null_space(rtol);
    let l = left.null_space(rtol);
    let m = r.len().min(l.len());
    if m == 0 {
        return Err(Error::NoConvergence { routine: "fixed point", budget: POWER_ITERATION_LIMIT });
    }
    let (r, l) = (&r[..m], &l[..m]);
    let dot = |u: &[C64], v: &[C64]| -> C64 { u.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };
    let gram = ComplexMatrix::from_fn(m, |i, j| dot(&l[i], &r[j]));
    let mut rhs = ComplexMatrix::zeros(m);
    for i in 0..m {
        rhs[(i, 0)] = dot(&l[i], x);
    }
    let coef = solve(&gram, &rhs)?;
    let mut out = vec![c64(0.0, 0.0); x.len()];
    for (j, rj) in r.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(rj) {
            *o += coef[(j, 0)] * v;
        }
    }
    Ok(out)
}

/// Eigenvalues, radius, gap and Perron-Frobenius data of a map.
pub fn spectrum(map: &dyn LinearMap, tol: &SpectralTolerances) -> Result<SpectralReport> {
    let d = map.dim();
    let t = map.transfer_matrix().into_transfer();
    let mut eigenvalues = general_spectrum(&t)?;
    sort_by_modulus(&mut eigenvalues);
    let radius = eigenvalues[0].norm();
    let peripheral: Vec<C64> =
        eigenvalues.iter().copied().filter(|z| z.norm() >= radius - tol.peripheral).collect();
    let gap = eigenvalues
        .iter()
        .find(|z| z.norm() < radius - tol.peripheral)
        .map_or(0.0, |z| radius - z.norm());

    let s = svd(&shifted(&t, c64(radius, 0.0)))?;
    let null = s.null_space(tol.nullity);
    let radius_multiplicity = null.len();
    let at_radius = eigenvalues.iter().filter(|z| (**z - radius).norm() <= tol.peripheral.max(CLUSTER_TOL)).count();

    let tp = dual_identity_residual(map)? <= tol.trace_preserving;
    let (fixed_point, fixed_point_residual, pf) = if tp {
        let fp = fixed_point(map, tol)?;
        let m = fp.state.matrix().clone();
        (Some(fp.state), Some(fp.residual), Some(m))
    } else if let Some(v) = null.first() {
        let a = pf_normalized(&ComplexMatrix::unvec(v)?);
        let res = trace_norm(&(&map.apply(&a)? - &a.scale_real(radius)))?;
        let state = DensityMatrix::new(a.clone()).ok();
        let res = state.as_ref().map(|_| res);
        (state, res, Some(a))
    } else {
        (None, None, None)
    };
    let pf_min_eig = match &pf {
        Some(a) => Some(herm_eig(a)?.min()),
        None => None,
    };
    Ok(SpectralReport {
        eigenvalues,
        radius,
        peripheral,
        gap,
        radius_multiplicity,
        fixed_point,
        fixed_point_residual,
        pf_simple: radius_multiplicity == 1 && at_radius == 1,
        pf_positive_definite: pf_min_eig.is_some_and(|m| m > tol.definite),
        pf_min_eig,
    })
    .map(|r| {
        debug_assert_eq!(r.eigenvalues.len(), d * d);
        r
    })
}

/// `||phi^n||_2^(1/n)` for `n = 1..=n_max`.
pub fn spectral_radius_estimate(map: &dyn LinearMap, n_max: usize) -> Result<Vec<f64>> {
    let t = map.transfer_matrix().into_transfer();
    let mut power = t.clone();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            power = &power * &t;
        }
        out.push(op_norm(&power)?.powf(1.0 / n as f64));
    }
    Ok(out)
}

/// One eigenvector of a peripheral eigenvalue, with normality of A and the
/// fixed-point residual of |A|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeripheralMode {
    #[serde(with = "complex_serde::scalar")]
    pub eigenvalue: C64,
    /// Unit Frobenius norm.
    pub eigenvector: ComplexMatrix,
    /// `||phi(|A|) - r |A|||_1`.
    pub abs_residual: f64,
    /// `||A A* - A* A||_inf`.
    pub normality_residual: f64,
}

fn cluster(eigs: &[C64]) -> Vec<C64> {
    let mut reps: Vec<(C64, usize)> = Vec::new();
    for &z in eigs {
        match reps.iter_mut().find(|(c, _)| (*c - z).norm() <= CLUSTER_TOL) {
            Some((c, n)) => {
                *c = (*c * *n as f64 + z) / (*n as f64 + 1.0);
                *n += 1;
            }
            None => reps.push((z, 1)),
        }
    }
    reps.into_iter().map(|(c, _)| c).collect()
}

/// Eigenvectors of all peripheral eigenvalues.
pub fn peripheral_analysis(map: &dyn LinearMap, tol: &SpectralTolerances) -> Result<Vec<PeripheralMode>> {
    let t = map.transfer_matrix().into_transfer();
    let mut eigs = general_spectrum(&t)?;
    sort_by_modulus(&mut eigs);
    let r = eigs[0].norm();
    let peripheral: Vec<C64> = eigs.iter().copied().filter(|z| z.norm() >= r - tol.peripheral).collect();
    let mut out = Vec::new();
    for lambda in cluster(&peripheral) {
        let s = svd(&shifted(&t, lambda))?;
        let mut vecs = s.null_space(tol.nullity);
        if vecs.is_empty() {
            vecs.push(s.v.column(t.dim() - 1));
        }
        for v in vecs {
            let a = ComplexMatrix::unvec(&v)?;
            let abs = abs_op(&a)?;
            let abs_residual = trace_norm(&(&map.apply(&abs)? - &abs.scale_real(r)))?;
            let normality_residual = op_norm(&(&(&a * &a.adjoint()) - &(&a.adjoint() * &a)))?;
            out.push(PeripheralMode { eigenvalue: lambda, eigenvector: a, abs_residual, normality_residual });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusNormCheck {
    pub p: NormOrder,
    pub radius: f64,
    pub norm: f64,
    pub equal: bool,
}

/// Compares the spectral radius with `||phi||_p` for `p` in `{1, 2, inf}`.
///
/// `||phi||_1 = ||phi*(I)||_inf` and `||phi||_inf = ||phi(I)||_inf` hold for
/// completely positive maps, so those orders need a Kraus form or a PSD Choi matrix.
pub fn check_radius_equals_norm(map: &dyn LinearMap, p: NormOrder, rtol: f64) -> Result<RadiusNormCheck> {
    let mut eigs = general_spectrum(&map.transfer_matrix().into_transfer())?;
    sort_by_modulus(&mut eigs);
    let radius = eigs[0].norm();
    let norm = match p {
        NormOrder::Finite(x) if x == 2.0 => map.transfer_matrix().norm_two()?,
        NormOrder::Finite(x) if x == 1.0 => kraus_of(map)?.norm_one()?,
        NormOrder::Infinity => kraus_of(map)?.norm_inf()?,
        NormOrder::Finite(x) => {
            return Err(Error::InvalidArgument(format!("the radius is compared with ||phi||_p for p in {{1, 2, inf}} only, got {x}")))
        }
    };
    Ok(RadiusNormCheck { p, radius, norm, equal: (radius - norm).abs() <= rtol * norm.max(1.0) })
}

fn kraus_of(map: &dyn LinearMap) -> Result<crate::channel::KrausChannel> {
    match map.as_kraus() {
        Some(k) => Ok(k.clone()),
        None => kraus_from_choi(&map.choi()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{KrausChannel, SuperOperator};
    use crate::constructors::{
        cyclic_shift_channel, pauli_channel, pinned_channel, weighted_basis_channel, WeightMatrix,
    };
    use crate::random::{random_density, rng_from_seed};


    fn tol() -> SpectralTolerances {
        SpectralTolerances::default()
    }

    fn phase_unitary(theta: f64) -> KrausChannel {
        KrausChannel::unitary(ComplexMatrix::diag(&[c64(1.0, 0.0), c64(0.0, theta).exp()]))
    }

    #[test]
    fn pinned_spectrum() {
        let rho = DensityMatrix::new(random_density(&mut rng_from_seed(2), 3)).unwrap();
        let r = spectrum(&pinned_channel(&rho).unwrap(), &tol()).unwrap();
        assert!((r.eigenvalues[0] - 1.0).norm() < 1e-10);
        assert!(r.eigenvalues[1..].iter().all(|z| z.norm() < 1e-8));
        assert!((r.gap - 1.0).abs() < 1e-8);
        assert!(r.pf_simple && r.pf_positive_definite);
        let fp = r.fixed_point.unwrap();
        assert!(trace_norm(&(fp.matrix() - rho.matrix())).unwrap() < 1e-10);
    }

    #[test]
    fn unitary_phase_spectrum() {
        let r = spectrum(&phase_unitary(0.7), &tol()).unwrap();
        let mut got = r.eigenvalues.clone();
        got.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let want = [c64(0.0, -0.7).exp(), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.7).exp()];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() < 1e-10, "{got:?}");
        }
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.radius_multiplicity, 2);
        assert!(!r.pf_simple);
    }

    #[test]
    fn identity_channel_all_ones() {
        let r = spectrum(&KrausChannel::identity(2), &tol()).unwrap();
        assert!(r.eigenvalues.iter().all(|z| (z - 1.0).norm() < 1e-12));
        assert_eq!(r.radius_multiplicity, 4);
    }

    #[test]
    fn weighted_fixed_points() {
        let c = [0.3f64, 0.5, 0.2f64];
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        let profile: Vec<f64> = c.iter().map(|x| x / norm).collect();
        let phi = weighted_basis_channel(&WeightMatrix::from_profile(&profile).unwrap()).unwrap();
        let fp = fixed_point(&phi, &tol()).unwrap();
        let want = ComplexMatrix::real_diag(&profile.iter().map(|x| x * x).collect::<Vec<_>>());
        assert!((fp.state.matrix() - &want).max_abs() < 1e-10);
        assert_eq!(fp.multiplicity, 1);

        let w = WeightMatrix::from_squares(vec![vec![0.5, 0.25], vec![0.5, 0.75]]).unwrap();
        let fp = fixed_point(&weighted_basis_channel(&w).unwrap(), &tol()).unwrap();
        assert!((fp.state.matrix() - &ComplexMatrix::real_diag(&[1.0 / 3.0, 2.0 / 3.0])).max_abs() < 1e-10);
    }

    #[test]
    fn periodic_channel_uses_spectral_projection() {
        // e0 <-> e1 swap with e2 feeding e0: period two from I/3, invariant state diag(1/2, 1/2, 0)
        let k = KrausChannel::new(vec![
            ComplexMatrix::unit(3, 1, 0),
            ComplexMatrix::unit(3, 0, 1),
            ComplexMatrix::unit(3, 0, 2),
        ])
        .unwrap();
        let fp = fixed_point(&k, &tol()).unwrap();
        assert_eq!(fp.method, FixedPointMethod::SpectralProjection);
        assert_eq!(fp.multiplicity, 1);
        assert!((fp.state.matrix() - &ComplexMatrix::real_diag(&[0.5, 0.5, 0.0])).max_abs() < 1e-10);
        assert!(fp.residual < 1e-9);
        let shift = fixed_point(&cyclic_shift_channel(3), &tol()).unwrap();
        assert_eq!(shift.multiplicity, 3);
        assert_eq!(shift.method, FixedPointMethod::PowerIteration);
    }

    #[test]
    fn fixed_point_requires_trace_preservation() {
        let k = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.5)]).unwrap();
        assert!(matches!(fixed_point(&k, &tol()), Err(Error::NotTracePreserving { .. })));
    }

    #[test]
    fn pauli_fixed_point_and_norms() {
        let phi = pauli_channel([0.4, 0.3, 0.2, 0.1]).unwrap();
        let fp = fixed_point(&phi, &tol()).unwrap();
        assert!((fp.state.matrix() - &ComplexMatrix::identity(2).scale_real(0.5)).max_abs() < 1e-12);
        for p in [NormOrder::Finite(1.0), NormOrder::Finite(2.0), NormOrder::Infinity] {
            let c = check_radius_equals_norm(&phi, p, 1e-8).unwrap();
            assert!(c.equal, "{c:?}");
        }
    }

    #[test]
    fn nilpotent_map_radius_below_norm() {
        let k = KrausChannel::new(vec![ComplexMatrix::unit(2, 0, 1)]).unwrap();
        let c = check_radius_equals_norm(&k, NormOrder::Finite(1.0), 1e-8).unwrap();
        assert!(c.radius < 1e-12 && (c.norm - 1.0).abs() < 1e-12 && !c.equal);
        let s = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.6f64.sqrt())]).unwrap();
        let c = check_radius_equals_norm(&s, NormOrder::Finite(2.0), 1e-8).unwrap();
        assert!((c.radius - 0.6).abs() < 1e-12 && c.equal);
    }

    #[test]
    fn radius_estimate_tracks_radius() {
        let s = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.6f64.sqrt())]).unwrap();
        assert!(spectral_radius_estimate(&s, 5).unwrap().iter().all(|x| (x - 0.6).abs() < 1e-12));
        let rho = DensityMatrix::from_diag(&[0.3, 0.7]).unwrap();
        let est = spectral_radius_estimate(&pinned_channel(&rho).unwrap(), 40).unwrap();
        assert!((est[39] - 1.0).abs() < 0.05);
    }

    #[test]
    fn peripheral_modes_of_phase_unitary() {
        let modes = peripheral_analysis(&phase_unitary(0.9), &tol()).unwrap();
        assert_eq!(modes.len(), 4);
        for m in &modes {
            assert!(m.abs_residual < 1e-8, "{m:?}");
        }
        // the off-diagonal eigenvector E_12 is not normal
        assert!(modes.iter().any(|m| m.normality_residual > 0.5));
    }

    #[test]
    fn shift_peripheral_roots_of_unity() {
        let modes = peripheral_analysis(&cyclic_shift_channel(3), &tol()).unwrap();
        for m in &modes {
            assert!((m.eigenvalue.powi(3) - 1.0).norm() < 1e-8);
            assert!(m.abs_residual < 1e-8);
        }
        assert_eq!(modes.len(), 9);
    }

    #[test]
    fn transpose_map_report() {
        let r = spectrum(&SuperOperator::transpose_map(2), &tol()).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-12);
        assert_eq!(r.radius_multiplicity, 3);
    }

    #[test]
    fn report_json_round_trip() {
        let r = spectrum(&pauli_channel([0.4, 0.3, 0.2, 0.1]).unwrap(), &tol()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"eigenvalues\":[["));
        assert_eq!(serde_json::from_str::<SpectralReport>(&s).unwrap(), r);
    }
}
