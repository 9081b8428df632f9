//! Randomized checks of the operator inequalities used by the spectral theory.
//!
//! Every property draws a random CP channel and random inputs per trial, evaluates
//! `margin = (rhs - lhs) / max(1, |rhs|)` and records a violation when the margin
//! falls below `-tolerance` (or below the strict threshold for `strict_cone`).

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::channel::{KrausChannel, LinearMap};
use crate::constructors::random_channel;
use crate::error::{Error, Result};
use crate::linalg::{abs_op, abs_power, herm_eig, min_eigenvalue, polar, pos_neg_parts, schatten_norm, NormOrder};
use crate::matrix::{vector, ComplexMatrix, C64};
use crate::random::{
    derive_seed, random_hermitian, random_matrix, random_psd, random_unit_vector, rng_from_seed, TrialRng,
};

pub const PROPERTIES: [&str; 12] = [
    "star_commutation",
    "abs_domination",
    "abs_domination_norm",
    "part_bounds",
    "part_bounds_norm",
    "norm_monotonicity",
    "holder",
    "strict_cone",
    "pos40",
    "scalar_2pos",
    "norm_2pos",
    "kernel_lemma",
];

pub const PROBES: [&str; 2] = ["abs_domination_general", "abs_domination_hermitian"];

pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
pub const DEFAULT_DIMS: [usize; 4] = [2, 3, 4, 5];
pub const DEFAULT_TRIALS: usize = 1000;
pub const MAX_DIM: usize = 8;

/// Fraction of draws forced to be rank deficient.
const RANK_DEFICIENT_RATE: f64 = 0.1;
/// `strict_cone` needs `||B + B'||_p - ||B - B'||_p` at least this large.
const STRICT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// SHA-256 of the serialized witness.
    pub digest: String,
    pub residual: f64,
    pub witness: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRun {
    pub name: String,
    /// False for falsification probes, whose outcome is data only.
    pub asserted: bool,
    pub trials: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
    pub worst_margin: f64,
    pub worst_digest: Option<String>,
}

impl PropertyRun {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of one trial: the normalized margin and the inputs that produced it.
struct Sample {
    margin: f64,
    witness: serde_json::Value,
}

struct Spec {
    stream: u64,
    tolerance: f64,
    /// Violation threshold; `-tolerance` except for strict inequalities.
    threshold: f64,
    asserted: bool,
    trial: fn(&mut TrialRng, usize) -> Result<Sample>,
}

fn spec(name: &str) -> Option<Spec> {
    let s = |stream, tolerance, trial| Spec { stream, tolerance, threshold: -tolerance, asserted: true, trial };
    Some(match name {
        "star_commutation" => s(101, 1e-10, star_commutation),
        "abs_domination" => s(102, 1e-9, abs_domination),
        "abs_domination_norm" => s(111, 1e-9, abs_domination_norm),
        "part_bounds" => s(103, 1e-9, part_bounds),
        "part_bounds_norm" => s(112, 1e-9, part_bounds_norm),
        "norm_monotonicity" => s(104, 1e-9, norm_monotonicity),
        "holder" => s(105, 1e-9, holder),
        "strict_cone" => Spec { threshold: STRICT_MARGIN, ..s(106, STRICT_MARGIN, strict_cone) },
        "pos40" => s(107, 1e-9, pos40),
        "scalar_2pos" => s(108, 1e-9, scalar_2pos),
        "norm_2pos" => s(109, 1e-9, norm_2pos),
        "kernel_lemma" => s(110, 1e-9, kernel_lemma),
        "abs_domination_general" => Spec { asserted: false, ..s(201, 1e-9, probe_general) },
        "abs_domination_hermitian" => Spec { asserted: false, ..s(202, 1e-9, probe_hermitian) },
        _ => return None,
    })
}

/// Runs a registered property over `trials` draws with dimensions sampled from `dims`.
pub fn run_property(name: &str, trials: usize, seed: u64, dims: &[usize]) -> Result<PropertyRun> {
    let sp = spec(name).filter(|s| s.asserted).ok_or_else(|| Error::UnknownProperty(name.to_string()))?;
    run(name, &sp, trials, seed, dims)
}

/// As [`run_property`] with the property's tolerance replaced by `tol`; for the strict
/// inequality `tol` is the required margin.
pub fn run_property_with_tolerance(name: &str, trials: usize, seed: u64, dims: &[usize], tol: f64) -> Result<PropertyRun> {
    let mut sp = spec(name).filter(|s| s.asserted).ok_or_else(|| Error::UnknownProperty(name.to_string()))?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be finite and nonnegative")));
    }
    sp.threshold = if sp.threshold > 0.0 { tol } else { -tol };
    sp.tolerance = tol;
    run(name, &sp, trials, seed, dims)
}

/// Searches for `lambda_min(phi(|A|) - |phi(A)|) < 0`; never asserted.
pub fn falsification_probe(name: &str, trials: usize, seed: u64, dims: &[usize]) -> Result<PropertyRun> {
    let sp = spec(name).filter(|s| !s.asserted).ok_or_else(|| Error::UnknownProperty(name.to_string()))?;
    run(name, &sp, trials, seed, dims)
}

/// Every asserted property over every seed.
pub fn run_suite(trials: usize, seeds: &[u64], dims: &[usize]) -> Result<Vec<PropertyRun>> {
    let mut out = Vec::new();
    for name in PROPERTIES {
        for &seed in seeds {
            out.push(run_property(name, trials, seed, dims)?);
        }
    }
    Ok(out)
}

fn run(name: &str, sp: &Spec, trials: usize, seed: u64, dims: &[usize]) -> Result<PropertyRun> {
    if dims.is_empty() || dims.iter().any(|&d| !(2..=MAX_DIM).contains(&d)) {
        return Err(Error::InvalidArgument(format!("dims must be a nonempty subset of 2..={MAX_DIM}")));
    }
    let mut violations = Vec::new();
    let mut worst_margin = f64::INFINITY;
    let mut worst_digest = None;
    for t in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, sp.stream, t as u64));
        let d = dims[rng.random_range(0..dims.len())];
        let sample = (sp.trial)(&mut rng, d)?;
        let lower = sample.margin < worst_margin;
        let violated = !(sample.margin >= sp.threshold);
        if lower || violated {
            let digest = digest(&sample.witness);
            if lower {
                worst_margin = sample.margin;
                worst_digest = Some(digest.clone());
            }
            if violated {
                violations.push(Violation { digest, residual: sample.margin, witness: sample.witness });
            }
        }
    }
    Ok(PropertyRun {
        name: name.to_string(),
        asserted: sp.asserted,
        trials,
        seed,
        dims: dims.to_vec(),
        tolerance: sp.tolerance,
        violations,
        worst_margin,
        worst_digest,
    })
}

fn digest(v: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

fn normalized(rhs: f64, lhs: f64) -> f64 {
    (rhs - lhs) / rhs.abs().max(1.0)
}

fn rank_deficient(rng: &mut TrialRng) -> bool {
    rng.random_bool(RANK_DEFICIENT_RATE)
}

fn channel(rng: &mut TrialRng, d: usize) -> Result<KrausChannel> {
    let k = rng.random_range(1..=d * d);
    random_channel(d, k, rng.random())
}

/// Projector onto the complement of a random vector.
fn corank_one_projector(rng: &mut TrialRng, d: usize) -> ComplexMatrix {
    let v = random_unit_vector(rng, d);
    &ComplexMatrix::identity(d) - &ComplexMatrix::projector(&v)
}

/// Gaussian Hermitian matrix; occasionally with its smallest eigenvalues set to zero.
fn hermitian(rng: &mut TrialRng, d: usize) -> Result<ComplexMatrix> {
    let h = random_hermitian(rng, d);
    if !rank_deficient(rng) {
        return Ok(h);
    }
    let e = herm_eig(&h)?;
    let zeros = rng.random_range(1..d);
    let mut by_modulus: Vec<usize> = (0..d).collect();
    by_modulus.sort_by(|&a, &b| e.eigenvalues[a].abs().total_cmp(&e.eigenvalues[b].abs()));
    let mut vals = e.eigenvalues.clone();
    for &k in &by_modulus[..zeros] {
        vals[k] = 0.0;
    }
    Ok(ComplexMatrix::from_fn(d, |i, j| {
        (0..d).map(|k| e.eigenvectors[(i, k)] * e.eigenvectors[(j, k)].conj() * vals[k]).sum()
    }))
}

fn psd(rng: &mut TrialRng, d: usize) -> ComplexMatrix {
    let p = random_psd(rng, d);
    if rank_deficient(rng) {
        let q = corank_one_projector(rng, d);
        (&(&q * &p) * &q).hermitian_part()
    } else {
        p
    }
}

fn general(rng: &mut TrialRng, d: usize) -> ComplexMatrix {
    let a = random_matrix(rng, d);
    if rank_deficient(rng) {
        &a * &corank_one_projector(rng, d)
    } else {
        a
    }
}

/// `phi(U_A |A| U_A*)`, the second factor of the 2-positivity bounds.
fn twisted(phi: &KrausChannel, a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let pp = polar(a)?;
    let inner = (&(&pp.u * &pp.abs) * &pp.u.adjoint()).hermitian_part();
    Ok((phi.apply(&pp.abs)?, phi.apply(&inner)?))
}

fn real_form(m: &ComplexMatrix, v: &[C64]) -> f64 {
    m.quadratic_form(v).re
}

fn star_commutation(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = general(rng, d);
    let lhs = phi.apply(&a.adjoint())?;
    let rhs = phi.apply(&a)?.adjoint();
    let residual = schatten_norm(&(&lhs - &rhs), NormOrder::Infinity)?;
    let scale = schatten_norm(&rhs, NormOrder::Infinity)?.max(1.0);
    Ok(Sample { margin: -residual / scale, witness: json!({ "channel": phi, "a": a }) })
}

fn abs_domination_margin(phi: &KrausChannel, a: &ComplexMatrix) -> Result<f64> {
    let big = phi.apply(&abs_op(a)?)?;
    let small = abs_op(&phi.apply(a)?)?;
    let scale = schatten_norm(&big, NormOrder::Infinity)?.max(1.0);
    Ok(min_eigenvalue(&(&big - &small))? / scale)
}

fn abs_domination(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = hermitian(rng, d)?;
    Ok(Sample { margin: abs_domination_margin(&phi, &a)?, witness: json!({ "channel": phi, "a": a }) })
}

fn part_bounds(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = hermitian(rng, d)?;
    let (ap, an) = pos_neg_parts(&a)?;
    let (out_p, out_n) = pos_neg_parts(&phi.apply(&a)?.hermitian_part())?;
    let mut margin = f64::INFINITY;
    for (big, small) in [(phi.apply(&ap)?, out_p), (phi.apply(&an)?, out_n)] {
        let scale = schatten_norm(&big, NormOrder::Infinity)?.max(1.0);
        margin = margin.min(min_eigenvalue(&(&big - &small))? / scale);
    }
    Ok(Sample { margin, witness: json!({ "channel": phi, "a": a }) })
}

/// `||phi(A)||_p <= ||phi(|A|)||_p`, the norm consequence of `-phi(|A|) <= phi(A) <= phi(|A|)`.
fn abs_domination_norm(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = hermitian(rng, d)?;
    let big = phi.apply(&abs_op(&a)?)?;
    let image = phi.apply(&a)?;
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        margin = margin.min(normalized(schatten_norm(&big, p)?, schatten_norm(&image, p)?));
    }
    Ok(Sample { margin, witness: json!({ "channel": phi, "a": a }) })
}

/// `||phi(A)_+-||_p <= ||phi(A_+-)||_p`; follows from Weyl monotonicity of eigenvalues.
fn part_bounds_norm(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = hermitian(rng, d)?;
    let (ap, an) = pos_neg_parts(&a)?;
    let (out_p, out_n) = pos_neg_parts(&phi.apply(&a)?.hermitian_part())?;
    let (in_p, in_n) = (phi.apply(&ap)?, phi.apply(&an)?);
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        margin = margin.min(normalized(schatten_norm(&in_p, p)?, schatten_norm(&out_p, p)?));
        margin = margin.min(normalized(schatten_norm(&in_n, p)?, schatten_norm(&out_n, p)?));
    }
    Ok(Sample { margin, witness: json!({ "channel": phi, "a": a }) })
}

fn norm_monotonicity(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let b = psd(rng, d);
    let b2 = (&b + &psd(rng, d)).hermitian_part();
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        margin = margin.min(normalized(schatten_norm(&b2, p)?, schatten_norm(&b, p)?));
    }
    Ok(Sample { margin, witness: json!({ "b": b, "b_prime": b2 }) })
}

fn holder(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let a = general(rng, d);
    let b = general(rng, d);
    let lhs = a.hs_inner(&b).norm();
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        let rhs = schatten_norm(&a, p.conjugate())? * schatten_norm(&b, p)?;
        margin = margin.min(normalized(rhs, lhs));
    }
    Ok(Sample { margin, witness: json!({ "a": a, "b": b }) })
}

/// Raw margin `||B + B'||_p - ||B - B'||_p` with `lambda_min(B) >= 0.1`, `||B'|| >= 0.1`.
fn strict_cone(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let b = (&psd(rng, d) + &ComplexMatrix::identity(d).scale_real(0.1)).hermitian_part();
    let mut b2 = psd(rng, d);
    let n = schatten_norm(&b2, NormOrder::Infinity)?;
    if n < 0.1 {
        b2 = if n > 0.0 { b2.scale_real(0.1 / n) } else { ComplexMatrix::identity(d).scale_real(0.1) };
    }
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        margin = margin.min(schatten_norm(&(&b + &b2), p)? - schatten_norm(&(&b - &b2), p)?);
    }
    Ok(Sample { margin, witness: json!({ "b": b, "b_prime": b2 }) })
}

fn pos40(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let a = hermitian(rng, d)?;
    let v = random_unit_vector(rng, d);
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        let NormOrder::Finite(p) = p else { continue };
        let lhs = real_form(&a, &v).abs().powf(p);
        let rhs = real_form(&abs_power(&a, p)?, &v);
        margin = margin.min(normalized(rhs, lhs));
    }
    Ok(Sample { margin, witness: json!({ "a": a, "vector": pairs(&v) }) })
}

fn scalar_2pos(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = general(rng, d);
    let v = random_unit_vector(rng, d);
    let w = random_unit_vector(rng, d);
    let (first, second) = twisted(&phi, &a)?;
    let lhs = vector::dot(&w, &phi.apply(&a)?.matvec(&v)).norm_sqr();
    let rhs = real_form(&first, &v) * real_form(&second, &w);
    Ok(Sample {
        margin: normalized(rhs, lhs),
        witness: json!({ "channel": phi, "a": a, "phi": pairs(&v), "phi_prime": pairs(&w) }),
    })
}

fn norm_2pos(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = general(rng, d);
    let image = phi.apply(&a)?;
    let (first, second) = twisted(&phi, &a)?;
    let mut margin = f64::INFINITY;
    for p in NormOrder::standard() {
        let rhs = (schatten_norm(&first, p)? * schatten_norm(&second, p)?).sqrt();
        margin = margin.min(normalized(rhs, schatten_norm(&image, p)?));
    }
    Ok(Sample { margin, witness: json!({ "channel": phi, "a": a }) })
}

/// Kraus operators vanishing on a random subspace `S`; `A` is built so that `|A|`
/// (or `|A*|`) lives in `S`, hence lies in the kernel of `phi` (or `phi o phi_U`).
/// The margin is `-||phi(A)||_inf / ||A||_inf`.
fn kernel_lemma(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let base = channel(rng, d)?;
    let r = rng.random_range(1..d);
    let basis: Vec<Vec<C64>> = (0..r).map(|_| random_unit_vector(rng, d)).collect();
    let mut p = ComplexMatrix::zeros(d);
    let mut span = crate::linalg::OrthoBasis::new(d, 1e-10);
    for v in &basis {
        span.try_add(v);
    }
    for v in span.vectors() {
        p = &p + &ComplexMatrix::projector(v);
    }
    let q = &ComplexMatrix::identity(d) - &p;
    let phi = KrausChannel::new(base.kraus().iter().map(|k| k * &q).collect())?;
    let x = random_matrix(rng, d);
    let through_abs = rng.random_bool(0.5);
    let a = if through_abs { &x * &p } else { &p * &x };
    let (first, second) = twisted(&phi, &a)?;
    let hypothesis = if through_abs { &first } else { &second };
    let scale = schatten_norm(&a, NormOrder::Infinity)?.max(1.0);
    let premise = schatten_norm(hypothesis, NormOrder::Infinity)? / scale;
    let image = schatten_norm(&phi.apply(&a)?, NormOrder::Infinity)? / scale;
    // A failed premise would be a construction error, not a counterexample.
    let margin = -(image.max(premise));
    Ok(Sample { margin, witness: json!({ "channel": phi, "a": a }) })
}

fn probe_general(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    let phi = channel(rng, d)?;
    let a = general(rng, d);
    Ok(Sample { margin: abs_domination_margin(&phi, &a)?, witness: json!({ "channel": phi, "a": a }) })
}

fn probe_hermitian(rng: &mut TrialRng, d: usize) -> Result<Sample> {
    abs_domination(rng, d)
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}
