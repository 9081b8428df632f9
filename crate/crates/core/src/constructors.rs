//! Explicit channels with known stationary states, plus random instances.

use serde::{Deserialize, Serialize};

use crate::channel::KrausChannel;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::herm_eig;
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::random::{random_hermitian, random_isometry_columns, rng_from_seed};

const WEIGHT_TOL: f64 = 1e-12;
const PROJECTION_TOL: f64 = 1e-9;
const GROUP_TOL: f64 = 1e-8;
const SINGULAR_TOL: f64 = 1e-10;

/// Strictly positive weights `c_ik` whose columns have unit Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct WeightMatrix {
    dim: usize,
    c: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for WeightMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<f64>>) -> std::result::Result<Self, String> {
        WeightMatrix::new(rows).map_err(|e| e.to_string())
    }
}

impl From<WeightMatrix> for Vec<Vec<f64>> {
    fn from(w: WeightMatrix) -> Self {
        (0..w.dim).map(|i| (0..w.dim).map(|k| w.get(i, k)).collect()).collect()
    }
}

impl WeightMatrix {
    /// `rows[i][k] = c_ik`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::BadWeights("empty weight matrix".into()));
        }
        let mut c = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::BadWeights(format!("row {i} has {} entries, expected {dim}", row.len())));
            }
            for (k, &x) in row.iter().enumerate() {
                if !(x.is_finite() && x > 0.0) {
                    return Err(Error::BadWeights(format!("c[{i}][{k}] = {x} is not strictly positive")));
                }
            }
            c.extend_from_slice(row);
        }
        for k in 0..dim {
            let s: f64 = (0..dim).map(|i| c[i * dim + k].powi(2)).sum();
            if (s - 1.0).abs() > WEIGHT_TOL {
                return Err(Error::BadWeights(format!("column {k} has sum of squares {s}, expected 1")));
            }
        }
        Ok(WeightMatrix { dim, c })
    }

    /// Weights given through their squares `c_ik^2` (a column-stochastic matrix).
    pub fn from_squares(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows.into_iter().map(|r| r.into_iter().map(f64::sqrt).collect()).collect())
    }

    /// `c_ik = c_i` for every column; `profile` must have unit norm.
    pub fn from_profile(profile: &[f64]) -> Result<Self> {
        let d = profile.len();
        Self::new((0..d).map(|i| vec![profile[i]; d]).collect())
    }

    pub fn uniform(dim: usize) -> Self {
        let x = (dim as f64).sqrt().recip();
        WeightMatrix { dim, c: vec![x; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.c[i * self.dim + k]
    }
}

/// Transition weights `p_{nu,i}` for `nu in {-1, 0, +1}` of the nearest-neighbour channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalWeights {
    dim: usize,
    /// `p[nu + 1][i]`, zero where `i + nu` leaves `0..dim`.
    p: [Vec<f64>; 3],
}

impl LocalWeights {
    /// `p_{nu,i} = r_{i+nu} / (r_{i-1} + r_i + r_{i+1})`, with out-of-range entries zero.
    pub fn from_populations(rho: &[f64]) -> Result<Self> {
        let d = rho.len();
        if d < 2 {
            return Err(Error::BadDensity("the local-update channel needs d >= 2".into()));
        }
        if let Some((i, x)) = rho.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::BadDensity(format!("population {i} is {x}, expected > 0")));
        }
        let at = |j: isize| if j < 0 || j >= d as isize { 0.0 } else { rho[j as usize] };
        let mut p = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
        for i in 0..d {
            let i = i as isize;
            let denom = at(i - 1) + at(i) + at(i + 1);
            for nu in -1isize..=1 {
                p[(nu + 1) as usize][i as usize] = at(i + nu) / denom;
            }
        }
        Ok(LocalWeights { dim: d, p })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, nu: isize, i: usize) -> f64 {
        assert!((-1..=1).contains(&nu));
        self.p[(nu + 1) as usize][i]
    }
}

/// Operators `sqrt(w_ik) |b_i><b_k|` for the columns `b` of `basis`, ordered `(i, k)` row-major.
fn rank_one_family(basis: &ComplexMatrix, w: impl Fn(usize, usize) -> f64) -> Vec<ComplexMatrix> {
    let d = basis.dim();
    let cols: Vec<Vec<C64>> = (0..d).map(|j| basis.column(j)).collect();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for k in 0..d {
            let s = w(i, k).sqrt();
            out.push(ComplexMatrix::outer(&cols[i], &cols[k]).scale_real(s));
        }
    }
    out
}

/// Channel `A -> tr(A) rho` built from the eigenbasis of a faithful state.
pub fn pinned_channel(rho: &DensityMatrix) -> Result<KrausChannel> {
    let eig = herm_eig(rho.matrix())?;
    let min_eig = eig.min();
    if min_eig < SINGULAR_TOL {
        return Err(Error::SingularDensity { min_eig });
    }
    let lambda = eig.eigenvalues.clone();
    KrausChannel::new(rank_one_family(&eig.eigenvectors, |i, _| lambda[i]))
}

/// Solution of `(lambda - phi)(A) = A'` for `phi(A) = tr(A) rho` and `lambda` outside `{0, 1}`:
/// `A = tr(A') rho / (lambda (lambda - 1)) + A' / lambda`.
pub fn pinned_resolvent(rho: &DensityMatrix, lambda: C64, a_prime: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a_prime.dim() != rho.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), found: a_prime.dim() });
    }
    let denom = lambda * (lambda - 1.0);
    if lambda.norm() < 1e-12 || denom.norm() < 1e-12 {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} lies in the spectrum {{0, 1}}")));
    }
    Ok(&rho.matrix().scale(a_prime.trace() / denom) + &a_prime.scale(lambda.inv()))
}

/// Kraus operators `c_ik |e_i><e_k|` in the standard basis.
pub fn weighted_basis_channel(w: &WeightMatrix) -> Result<KrausChannel> {
    let basis = ComplexMatrix::identity(w.dim());
    KrausChannel::new(rank_one_family(&basis, |i, k| w.get(i, k).powi(2)))
}

/// Nearest-neighbour hopping channel with weights derived from a diagonal state.
pub fn local_update_channel(rho: &DensityMatrix) -> Result<KrausChannel> {
    let pops = rho
        .diagonal_entries(1e-12)
        .ok_or_else(|| Error::BadDensity("the local-update channel needs a diagonal state".into()))?;
    local_update_channel_from_weights(&LocalWeights::from_populations(&pops)?)
}

pub fn local_update_channel_from_weights(w: &LocalWeights) -> Result<KrausChannel> {
    let d = w.dim();
    let mut kraus = Vec::new();
    for i in 0..d {
        for nu in -1isize..=1 {
            let target = i as isize + nu;
            if target < 0 || target >= d as isize {
                continue;
            }
            let s = w.get(nu, i).sqrt();
            let mut t = ComplexMatrix::zeros(d);
            t[(target as usize, i)] = c64(s, 0.0);
            kraus.push(t);
        }
    }
    KrausChannel::new(kraus)
}

/// Pinching `A -> sum_i P_i A P_i` by a resolution of the identity into orthogonal projections.
pub fn projective_channel(projections: &[ComplexMatrix]) -> Result<KrausChannel> {
    let first = projections
        .first()
        .ok_or_else(|| Error::NotADecomposition("no projections given".into()))?;
    let d = first.dim();
    let mut sum = ComplexMatrix::zeros(d);
    for (i, p) in projections.iter().enumerate() {
        if p.dim() != d {
            return Err(Error::DimMismatch { expected: d, found: p.dim() });
        }
        if p.hermiticity_residual() > PROJECTION_TOL || (&(p * p) - p).max_abs() > PROJECTION_TOL {
            return Err(Error::NotADecomposition(format!("element {i} is not an orthogonal projection")));
        }
        for (j, q) in projections.iter().enumerate().skip(i + 1) {
            if (p * q).max_abs() > PROJECTION_TOL {
                return Err(Error::NotADecomposition(format!("elements {i} and {j} are not orthogonal")));
            }
        }
        sum += p;
    }
    if (&sum - &ComplexMatrix::identity(d)).max_abs() > PROJECTION_TOL {
        return Err(Error::NotADecomposition("projections do not sum to the identity".into()));
    }
    KrausChannel::new(projections.to_vec())
}

/// Index of the element equal to `m` up to a global phase.
fn find_up_to_phase(elements: &[ComplexMatrix], m: &ComplexMatrix) -> Option<usize> {
    let d = m.dim() as f64;
    elements.iter().position(|u| {
        let overlap = u.hs_inner(m);
        if overlap.norm() < 0.5 * d {
            return false;
        }
        let phase = overlap / overlap.norm();
        (&u.scale(phase) - m).max_abs() <= GROUP_TOL
    })
}

/// Uniform average `A -> |G|^-1 sum_g U_g A U_g*` over a finite group given by its elements.
///
/// Closure is tested modulo phases, so projective representations such as `{I, X, Y, Z}`
/// are accepted.
pub fn group_average_channel(unitaries: &[ComplexMatrix]) -> Result<KrausChannel> {
    let first = unitaries
        .first()
        .ok_or_else(|| Error::NotAGroup("no elements given".into()))?;
    let d = first.dim();
    for (i, u) in unitaries.iter().enumerate() {
        if u.dim() != d {
            return Err(Error::DimMismatch { expected: d, found: u.dim() });
        }
        if !u.is_unitary(GROUP_TOL) {
            return Err(Error::NotAGroup(format!("element {i} is not unitary")));
        }
    }
    for (i, u) in unitaries.iter().enumerate() {
        if find_up_to_phase(unitaries, &u.adjoint()).is_none() {
            return Err(Error::NotAGroup(format!("inverse of element {i} is missing")));
        }
        for (j, v) in unitaries.iter().enumerate() {
            if find_up_to_phase(unitaries, &(u * v)).is_none() {
                return Err(Error::NotAGroup(format!("product of elements {i} and {j} is missing")));
            }
        }
    }
    let s = (unitaries.len() as f64).sqrt().recip();
    KrausChannel::new(unitaries.iter().map(|u| u.scale_real(s)).collect())
}

/// Trace-preserving channel whose `k` Kraus operators are the `d x d` blocks of a random
/// `dk x d` isometry.
pub fn random_channel(dim: usize, k: usize, seed: u64) -> Result<KrausChannel> {
    if dim == 0 || k == 0 || k > dim * dim {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1 and 1 <= k <= d^2, got d = {dim}, k = {k}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let cols = random_isometry_columns(&mut rng, dim * k, dim);
    let kraus = (0..k)
        .map(|b| ComplexMatrix::from_fn(dim, |r, c| cols[c][b * dim + r]))
        .collect();
    KrausChannel::new(kraus)
}

/// Random Hermitian Kraus operators, so the map is self-adjoint, scaled to `||phi||_1 = 1`.
pub fn random_self_adjoint_channel(dim: usize, k: usize, seed: u64) -> Result<KrausChannel> {
    if dim == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("need d >= 1 and k >= 1, got d = {dim}, k = {k}")));
    }
    let mut rng = rng_from_seed(seed);
    let hs: Vec<ComplexMatrix> = (0..k).map(|_| random_hermitian(&mut rng, dim)).collect();
    let phi = KrausChannel::new(hs)?;
    let s = phi.norm_one()?.sqrt().recip();
    KrausChannel::new(phi.kraus().iter().map(|h| h.scale_real(s)).collect())
}

/// The four Pauli matrices `I, X, Y, Z`.
pub fn pauli_matrices() -> [ComplexMatrix; 4] {
    let (o, l, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[&[o, l], &[l, o]]),
        ComplexMatrix::from_rows(&[&[o, -i], &[i, o]]),
        ComplexMatrix::from_rows(&[&[l, o], &[o, -l]]),
    ]
}

/// Qubit channel `A -> sum_j p_j s_j A s_j` over the Pauli matrices.
pub fn pauli_channel(p: [f64; 4]) -> Result<KrausChannel> {
    if p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("Pauli weights {p:?} are not a probability vector")));
    }
    KrausChannel::new(pauli_matrices().iter().zip(p).map(|(s, w)| s.scale_real(w.sqrt())).collect())
}

/// Cyclic shift `e_k -> e_{k+1 mod d}`, a unitary channel with peripheral spectrum of order `d`.
pub fn cyclic_shift_channel(dim: usize) -> KrausChannel {
    let mut u = ComplexMatrix::zeros(dim);
    for k in 0..dim {
        u[((k + 1) % dim, k)] = c64(1.0, 0.0);
    }
    KrausChannel::unitary(u)
}
