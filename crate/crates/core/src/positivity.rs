//! Positivity classification: positive, n-positive, completely positive,
//! positivity improving and ergodic.
//!
//! Positivity-type properties are decided by refutation search over rank-one
//! inputs `|v><v|`. Every search evaluates structured candidates first (basis
//! vectors, entangled vectors, vectors spanning invariant subspaces), then
//! `trials` random unit vectors, then a few runs of alternating minimization
//! of `<u, m(|v><v|) u>` over unit `u` and `v`, which reaches the singular
//! inputs that random sampling almost never hits. A pass is evidence, a
//! refutation carries its witness.
//!
//! Ergodicity of a Kraus map is additionally decided exactly: it holds iff the
//! unital algebra generated by the adjoint Kraus operators is all of `M_d`
//! (every nonzero vector is cyclic iff the algebra has no invariant subspace).

use serde::{Deserialize, Serialize};

use crate::channel::{kraus_from_choi, AnyMap, KrausChannel, LinearMap, SuperOperator};
use crate::error::Result;
use crate::linalg::{exceeds_shift, general_spectrum, herm_eig, svd, OrthoBasis};
use crate::matrix::{c64, vector, ComplexMatrix, C64};
use crate::random::{complex_gaussian, derive_seed, random_unit_vector, rng_from_seed};

pub const DEFAULT_TRIALS: usize = 1000;

const DESCENT_STARTS: usize = 8;
const DESCENT_STEPS: usize = 40;

const STREAM_POSITIVE: u64 = 1;
const STREAM_IMPROVING: u64 = 3;
const STREAM_ERGODIC: u64 = 4;
const STREAM_EH: u64 = 5;
const STREAM_KERNEL: u64 = 6;

/// Decision thresholds shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// A rank-one image refutes positivity when its least eigenvalue is below `-psd * max(1, ||out||_F)`.
    pub psd: f64,
    /// A rank-one image refutes definiteness when its least eigenvalue is at most `definite * tr(out)`.
    pub definite: f64,
    /// Relative threshold for span-growth rank decisions.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { psd: 1e-9, definite: 1e-10, rank: 1e-10 }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances { psd: tol, definite: tol, rank: tol }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl CheckConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        CheckConfig { trials, seed, tol: Tolerances::default() }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }
}

/// A vector in split real/imaginary form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Witness {
    pub fn from_vector(v: &[C64]) -> Self {
        Witness { re: v.iter().map(|z| z.re).collect(), im: v.iter().map(|z| z.im).collect() }
    }

    pub fn to_vector(&self) -> Vec<C64> {
        self.re.iter().zip(&self.im).map(|(&r, &i)| c64(r, i)).collect()
    }
}

/// Outcome of a refutation search.
///
/// `value` is the statistic that failed: the least eigenvalue of the image for
/// positivity-type checks, the dimension of the generated subspace for cyclicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass { trials: usize, exact: bool },
    Refuted { witness: Witness, value: f64 },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_refuted(&self) -> bool {
        !self.is_pass()
    }

    pub fn witness(&self) -> Option<Vec<C64>> {
        match self {
            Verdict::Refuted { witness, .. } => Some(witness.to_vector()),
            Verdict::Pass { .. } => None,
        }
    }

    fn refuted(v: &[C64], value: f64) -> Self {
        Verdict::Refuted { witness: Witness::from_vector(v), value }
    }
}

/// HS adjoint of a map, keeping the Kraus form when there is one.
pub fn adjoint_map(map: &dyn LinearMap) -> AnyMap {
    match map.as_kraus() {
        Some(k) => AnyMap::Kraus(k.adjoint()),
        None => AnyMap::Super(map.transfer_matrix().adjoint()),
    }
}

/// `m(|v><v|)`, using the Kraus form when available.
fn image_of_rank_one(map: &dyn LinearMap, v: &[C64]) -> Result<ComplexMatrix> {
    match map.as_kraus() {
        Some(k) => {
            let mut out = ComplexMatrix::zeros(k.dim());
            for a in k.kraus() {
                let w = a.matvec(v);
                out += &ComplexMatrix::outer(&w, &w);
            }
            Ok(out)
        }
        None => map.apply(&ComplexMatrix::projector(v)),
    }
}

/// `phi ⊗ id_n` for a map without a Kraus form, stored through the images `phi(E_ij)`.
struct TensorWithIdentity {
    d: usize,
    n: usize,
    images: Vec<ComplexMatrix>,
}

impl TensorWithIdentity {
    fn new(map: &dyn LinearMap, n: usize) -> Result<Self> {
        let d = map.dim();
        let mut images = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                images.push(map.apply(&ComplexMatrix::unit(d, i, j))?);
            }
        }
        Ok(TensorWithIdentity { d, n, images })
    }
}

impl LinearMap for TensorWithIdentity {
    fn dim(&self) -> usize {
        self.d * self.n
    }

    // (phi ⊗ id)(X) = sum_ij phi(E_ij) ⊗ X_ij with X_ij the n x n blocks of X
    fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (d, n) = (self.d, self.n);
        let mut out = ComplexMatrix::zeros(d * n);
        for i in 0..d {
            for j in 0..d {
                let img = &self.images[i * d + j];
                for b in 0..n {
                    for c in 0..n {
                        let x_ij = x[(i * n + b, j * n + c)];
                        if x_ij == crate::matrix::ZERO {
                            continue;
                        }
                        for a in 0..d {
                            for a2 in 0..d {
                                out[(a * n + b, a2 * n + c)] += img[(a, a2)] * x_ij;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn transfer_matrix(&self) -> SuperOperator {
        SuperOperator::from_map(self.dim(), |x| self.apply(x).expect("dimension fixed"))
    }
}

/// Failure test for an image; returns the offending statistic.
type FailTest<'a> = &'a dyn Fn(&ComplexMatrix) -> Result<Option<f64>>;

fn not_positive(tol: f64) -> impl Fn(&ComplexMatrix) -> Result<Option<f64>> {
    move |out: &ComplexMatrix| {
        let scale = out.norm_fro().max(1.0);
        let skew = out.hermiticity_residual();
        if skew > tol * scale {
            return Ok(Some(-skew));
        }
        if exceeds_shift(out, -tol * scale) {
            return Ok(None);
        }
        let m = herm_eig(&out.hermitian_part())?.min();
        Ok((m < -tol * scale).then_some(m))
    }
}

fn not_definite(tol: f64) -> impl Fn(&ComplexMatrix) -> Result<Option<f64>> {
    move |out: &ComplexMatrix| {
        let thr = tol * out.trace().re.abs();
        if out.hermiticity_residual() <= thr.max(1e-14) && exceeds_shift(out, thr) {
            return Ok(None);
        }
        let m = herm_eig(&out.hermitian_part())?.min();
        Ok((m <= thr).then_some(m))
    }
}

fn min_eigvec(m: &ComplexMatrix) -> Result<Vec<C64>> {
    Ok(herm_eig(&m.hermitian_part())?.eigenvector(0))
}

/// Refutation search over rank-one inputs of `forward`; `backward` is its adjoint.
fn rank_one_search(
    forward: &dyn LinearMap,
    backward: &dyn LinearMap,
    fixed: &[Vec<C64>],
    cfg: &CheckConfig,
    stream: u64,
    fails: FailTest,
) -> Result<Verdict> {
    let dim = forward.dim();
    let mut evaluated = 0;
    for v in fixed {
        evaluated += 1;
        if let Some(x) = fails(&image_of_rank_one(forward, v)?)? {
            return Ok(Verdict::refuted(v, x));
        }
    }
    for t in 0..cfg.trials {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, stream, t as u64));
        let v = random_unit_vector(&mut rng, dim);
        evaluated += 1;
        if let Some(x) = fails(&image_of_rank_one(forward, &v)?)? {
            return Ok(Verdict::refuted(&v, x));
        }
    }
    // alternating minimization of <u, m(vv*) u> = <v, m*(uu*) v>
    for s in 0..DESCENT_STARTS.min(cfg.trials.max(1)) {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, stream | 1 << 32, s as u64));
        let mut v = random_unit_vector(&mut rng, dim);
        for _ in 0..DESCENT_STEPS {
            let out = image_of_rank_one(forward, &v)?;
            evaluated += 1;
            if let Some(x) = fails(&out)? {
                return Ok(Verdict::refuted(&v, x));
            }
            let u = min_eigvec(&out)?;
            v = min_eigvec(&image_of_rank_one(backward, &u)?)?;
        }
    }
    Ok(Verdict::Pass { trials: evaluated, exact: false })
}

fn basis_vectors(dim: usize) -> Vec<Vec<C64>> {
    (0..dim).map(|k| vector::basis(dim, k)).collect()
}

/// Positivity: `m(|v><v|) >= 0` for unit `v`. Exact pass for Kraus maps.
pub fn check_positive(map: &dyn LinearMap, cfg: &CheckConfig) -> Result<Verdict> {
    let backward = adjoint_map(map);
    let fixed = basis_vectors(map.dim());
    let verdict =
        rank_one_search(map, &backward, &fixed, cfg, STREAM_POSITIVE, &not_positive(cfg.tol.psd))?;
    Ok(mark_exact(verdict, map.as_kraus().is_some()))
}

fn mark_exact(v: Verdict, exact: bool) -> Verdict {
    match v {
        Verdict::Pass { trials, .. } => Verdict::Pass { trials, exact },
        r => r,
    }
}

/// Positivity of `m ⊗ id_n`, with the maximally entangled vector as first candidate.
pub fn check_n_positive(map: &dyn LinearMap, n: usize, cfg: &CheckConfig) -> Result<Verdict> {
    if n <= 1 {
        return check_positive(map, cfg);
    }
    let d = map.dim();
    let (forward, backward): (Box<dyn LinearMap>, Box<dyn LinearMap>) = match map.as_kraus() {
        Some(k) => (
            Box::new(k.tensor_with_identity(n)?),
            Box::new(k.adjoint().tensor_with_identity(n)?),
        ),
        None => {
            let adj = adjoint_map(map);
            (Box::new(TensorWithIdentity::new(map, n)?), Box::new(TensorWithIdentity::new(&adj, n)?))
        }
    };
    let m = d.min(n);
    let mut omega = vec![c64(0.0, 0.0); d * n];
    for a in 0..m {
        omega[a * n + a] = c64((m as f64).sqrt().recip(), 0.0);
    }
    let mut fixed = vec![omega];
    fixed.extend(basis_vectors(d * n));
    let stream = STREAM_POSITIVE + 16 * n as u64;
    let verdict = rank_one_search(
        forward.as_ref(),
        backward.as_ref(),
        &fixed,
        cfg,
        stream,
        &not_positive(cfg.tol.psd),
    )?;
    Ok(mark_exact(verdict, map.as_kraus().is_some()))
}

/// Orthonormal basis of the unital algebra generated by `gens`, as vectorized matrices.
pub fn generated_algebra(gens: &[ComplexMatrix], rtol: f64) -> Vec<ComplexMatrix> {
    let d = match gens.first() {
        Some(g) => g.dim(),
        None => return Vec::new(),
    };
    let mut basis = OrthoBasis::new(d * d, rtol);
    basis.try_add(&ComplexMatrix::identity(d).vec());
    let mut independent = Vec::new();
    for g in gens {
        if basis.try_add(&g.vec()) {
            independent.push(g.clone());
        }
    }
    let mut next = 0;
    while next < basis.rank() && !basis.is_full() {
        let b = ComplexMatrix::unvec(&basis.vectors()[next]).expect("square");
        next += 1;
        for g in &independent {
            basis.try_add_scaled(&(g * &b).vec(), g.norm_fro());
            if basis.is_full() {
                break;
            }
        }
    }
    basis.vectors().iter().map(|v| ComplexMatrix::unvec(v).expect("square")).collect()
}

/// Dimension of the smallest subspace containing `v` and invariant under `gens`.
pub fn orbit_dimension(v: &[C64], gens: &[ComplexMatrix], rtol: f64) -> usize {
    let mut basis = OrthoBasis::new(v.len(), rtol);
    if !basis.try_add(v) {
        return 0;
    }
    let mut next = 0;
    while next < basis.rank() && !basis.is_full() {
        let w = basis.vectors()[next].clone();
        next += 1;
        for g in gens {
            basis.try_add_scaled(&g.matvec(&w), g.norm_fro());
            if basis.is_full() {
                break;
            }
        }
    }
    basis.rank()
}

/// Eigenvectors of a random element of a proper algebra: one of them lies in
/// every minimal invariant subspace when the spectrum is simple.
fn invariant_subspace_candidates(algebra: &[ComplexMatrix], seed: u64) -> Result<Vec<Vec<C64>>> {
    let d = algebra[0].dim();
    let mut rng = rng_from_seed(seed);
    let mut b = ComplexMatrix::zeros(d);
    for a in algebra {
        b += &a.scale(complex_gaussian(&mut rng));
    }
    let mut out = Vec::new();
    for lambda in general_spectrum(&b)? {
        let shifted = &b - &ComplexMatrix::identity(d).scale(lambda);
        let s = svd(&shifted)?;
        out.push(s.v.column(d - 1));
    }
    Ok(out)
}

fn structured_candidates(gens: &[ComplexMatrix], cfg: &CheckConfig, stream: u64) -> Result<Vec<Vec<C64>>> {
    let d = gens[0].dim();
    let mut fixed = basis_vectors(d);
    let algebra = generated_algebra(gens, cfg.tol.rank);
    if algebra.len() < d * d {
        fixed.extend(invariant_subspace_candidates(&algebra, derive_seed(cfg.seed, stream, u64::MAX))?);
    }
    Ok(fixed)
}

/// Positivity improving: `m(|v><v|) > 0` for every unit `v`.
///
/// For a Kraus map the image is `sum_i |a_i v><a_i v|`, so fewer than `d` Kraus
/// operators can never be improving and vectors in invariant subspaces of the
/// algebra generated by the `a_i` are tried first.
pub fn check_positivity_improving(map: &dyn LinearMap, cfg: &CheckConfig) -> Result<Verdict> {
    let d = map.dim();
    let backward = adjoint_map(map);
    let fails = not_definite(cfg.tol.definite);
    if let Some(k) = map.as_kraus() {
        let v = vector::basis(d, 0);
        if k.len() < d {
            let out = image_of_rank_one(map, &v)?;
            let m = herm_eig(&out)?.min();
            return Ok(Verdict::refuted(&v, m));
        }
    }
    let mut fixed = match map.as_kraus() {
        Some(k) => structured_candidates(k.kraus(), cfg, STREAM_IMPROVING)?,
        None => basis_vectors(d),
    };
    fixed.push(min_eigvec(&backward.apply(&ComplexMatrix::identity(d))?)?);
    rank_one_search(map, &backward, &fixed, cfg, STREAM_IMPROVING, &fails)
}

/// Results of the two necessary conditions for ergodicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessaryChecks {
    /// No nonzero PSD input is annihilated.
    pub kernel_on_cone_trivial: Verdict,
    /// `lambda_min(phi(I))`, positive for ergodic maps.
    pub phi_of_identity_min_eig: f64,
    /// The `phi(I)` condition, with the least eigenvector as witness when it fails.
    pub phi_of_identity: Verdict,
}

impl NecessaryChecks {
    pub fn hold(&self) -> bool {
        self.kernel_on_cone_trivial.is_pass() && self.phi_of_identity.is_pass()
    }

    fn first_failure(&self) -> Option<Verdict> {
        [&self.phi_of_identity, &self.kernel_on_cone_trivial]
            .into_iter()
            .find(|v| v.is_refuted())
            .cloned()
    }
}

pub fn necessary_checks(map: &dyn LinearMap, cfg: &CheckConfig) -> Result<NecessaryChecks> {
    let d = map.dim();
    let id = ComplexMatrix::identity(d);
    let phi_id = map.apply(&id)?;
    let e = herm_eig(&phi_id.hermitian_part())?;
    let thr = cfg.tol.definite * phi_id.trace().re.abs();
    let phi_of_identity = if e.min() <= thr {
        Verdict::refuted(&e.eigenvector(0), e.min())
    } else {
        Verdict::Pass { trials: 1, exact: true }
    };

    // tr m(|v><v|) = <v, m*(I) v>: the least eigenvector of m*(I) is the sharpest candidate
    let backward = adjoint_map(map);
    let dual = backward.apply(&id)?;
    let mut fixed = basis_vectors(d);
    fixed.insert(0, min_eigvec(&dual)?);
    let tol = cfg.tol.definite;
    let annihilated = move |out: &ComplexMatrix| -> Result<Option<f64>> {
        let n = out.norm_fro();
        Ok((n <= tol).then_some(n))
    };
    let kernel = rank_one_search(map, &backward, &fixed, cfg, STREAM_KERNEL, &annihilated)?;
    Ok(NecessaryChecks {
        kernel_on_cone_trivial: kernel,
        phi_of_identity_min_eig: e.min(),
        phi_of_identity,
    })
}

/// Ergodicity of a Kraus map: every nonzero vector is cyclic for the algebra
/// generated by the adjoint Kraus operators.
///
/// Candidates are basis vectors, `trials` random vectors and eigenvectors of a
/// random algebra element; a candidate whose orbit spans less than `C^d` is the
/// witness. A pass is exact when the algebra dimension is `d^2`. The verdict is
/// forced to refuted when a necessary condition fails.
pub fn check_ergodic(k: &KrausChannel, cfg: &CheckConfig) -> Result<Verdict> {
    let d = k.dim();
    let necessary = necessary_checks(k, cfg)?;
    if let Some(v) = necessary.first_failure() {
        return Ok(v);
    }
    let gens: Vec<ComplexMatrix> = k.kraus().iter().map(|a| a.adjoint()).collect();
    let algebra = generated_algebra(&gens, cfg.tol.rank);
    let full = algebra.len() == d * d;

    let mut candidates = basis_vectors(d);
    for t in 0..cfg.trials {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, STREAM_ERGODIC, t as u64));
        candidates.push(random_unit_vector(&mut rng, d));
    }
    if !full {
        candidates.extend(invariant_subspace_candidates(
            &algebra,
            derive_seed(cfg.seed, STREAM_ERGODIC, u64::MAX),
        )?);
    }
    let mut smallest: Option<(usize, &Vec<C64>)> = None;
    for v in &candidates {
        let r = orbit_dimension(v, &gens, cfg.tol.rank);
        if r < d {
            return Ok(Verdict::refuted(v, r as f64));
        }
        if smallest.is_none_or(|(s, _)| r < s) {
            smallest = Some((r, v));
        }
    }
    if full {
        return Ok(Verdict::Pass { trials: candidates.len(), exact: true });
    }
    // the algebra is proper but no sampled vector exposed an invariant subspace
    let (_, v) = smallest.expect("at least the basis vectors were tried");
    Ok(Verdict::refuted(v, algebra.len() as f64))
}

/// `((I + T) / 2)^(d - 1)`: positivity improving iff the positive map with transfer `T` is ergodic.
pub fn eh_operator(map: &dyn LinearMap) -> SuperOperator {
    let d = map.dim();
    let t = map.transfer_matrix().into_transfer();
    let half = (&t + &ComplexMatrix::identity(d * d)).scale_real(0.5);
    let k = half.powi(d.saturating_sub(1) as u32);
    SuperOperator::new(d, k).expect("square transfer matrix")
}

/// Ergodicity through positivity improvement of `(1 + phi)^(d - 1)`.
pub fn eh_criterion(map: &dyn LinearMap, cfg: &CheckConfig) -> Result<Verdict> {
    let d = map.dim();
    let k = eh_operator(map);
    let backward = k.adjoint();
    let mut fixed = match map.as_kraus() {
        Some(kc) => structured_candidates(kc.kraus(), cfg, STREAM_EH)?,
        None => basis_vectors(d),
    };
    fixed.push(min_eigvec(&backward.apply(&ComplexMatrix::identity(d))?)?);
    rank_one_search(&k, &backward, &fixed, cfg, STREAM_EH, &not_definite(cfg.tol.definite))
}

/// Full classification of a map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub kraus_count: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    /// Choi criterion, exact up to the eigensolver.
    pub cp: bool,
    pub choi_min_eig: f64,
    /// `||m*(I) - I||_inf`.
    pub tp_residual: f64,
    pub positive: Verdict,
    pub two_positive: Verdict,
    pub positivity_improving: Verdict,
    pub ergodic: Verdict,
    pub eh_criterion: Verdict,
    pub phi_of_identity_min_eig: f64,
    pub kernel_on_cone_trivial: Verdict,
}

impl ClassificationReport {
    /// Broken implications among the verdicts; empty for a consistent report.
    pub fn lattice_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.cp && self.two_positive.is_refuted() {
            out.push("completely positive but 2-positivity refuted".to_string());
        }
        if self.cp && self.positive.is_refuted() {
            out.push("completely positive but positivity refuted".to_string());
        }
        if self.two_positive.is_pass() && self.positive.is_refuted() {
            out.push("2-positive but positivity refuted".to_string());
        }
        if self.positivity_improving.is_pass() && self.ergodic.is_refuted() {
            out.push("positivity improving but ergodicity refuted".to_string());
        }
        if self.ergodic.is_pass() && self.kernel_on_cone_trivial.is_refuted() {
            out.push("ergodic but a PSD input is annihilated".to_string());
        }
        if self.ergodic.is_pass() && self.phi_of_identity_min_eig <= 0.0 {
            out.push("ergodic but phi(I) is singular".to_string());
        }
        out
    }

    pub fn eh_agrees(&self) -> bool {
        self.ergodic.is_pass() == self.eh_criterion.is_pass()
    }
}

/// Runs every check. Maps without a Kraus form that pass the Choi test get one;
/// for maps that are not completely positive, ergodicity falls back to the
/// polynomial criterion.
pub fn classify(map: &dyn LinearMap, cfg: &CheckConfig) -> Result<ClassificationReport> {
    let d = map.dim();
    let choi = map.choi();
    let choi_min_eig = choi.min_eigenvalue()?;
    let choi_scale = choi.matrix.norm_fro().max(1.0);
    let cp = choi.matrix.hermiticity_residual() <= cfg.tol.psd * choi_scale
        && choi_min_eig >= -cfg.tol.psd * choi_scale;

    let derived;
    let kraus: Option<&KrausChannel> = match map.as_kraus() {
        Some(k) => Some(k),
        None if cp => {
            derived = kraus_from_choi(&choi)?;
            Some(&derived)
        }
        None => None,
    };
    let dual_identity = adjoint_map(map).apply(&ComplexMatrix::identity(d))?;
    let tp_residual = crate::linalg::op_norm(&(&dual_identity - &ComplexMatrix::identity(d)))?;

    let as_dyn: &dyn LinearMap = match kraus {
        Some(k) => k,
        None => map,
    };
    let positive = mark_exact(check_positive(as_dyn, cfg)?, cp);
    let two_positive = mark_exact(check_n_positive(as_dyn, 2, cfg)?, cp);
    let positivity_improving = check_positivity_improving(as_dyn, cfg)?;
    let eh = eh_criterion(as_dyn, cfg)?;
    let necessary = necessary_checks(as_dyn, cfg)?;
    let ergodic = match kraus {
        Some(k) => check_ergodic(k, cfg)?,
        None => necessary.first_failure().unwrap_or_else(|| eh.clone()),
    };
    Ok(ClassificationReport {
        dim: d,
        kraus_count: map.as_kraus().map(|k| k.len()),
        seed: cfg.seed,
        trials: cfg.trials,
        cp,
        choi_min_eig,
        tp_residual,
        positive,
        two_positive,
        positivity_improving,
        ergodic,
        eh_criterion: eh,
        phi_of_identity_min_eig: necessary.phi_of_identity_min_eig,
        kernel_on_cone_trivial: necessary.kernel_on_cone_trivial,
    })
}
