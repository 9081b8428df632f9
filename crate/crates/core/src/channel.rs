//! Linear maps on `d x d` matrices.
//!
//! A [`KrausChannel`] stores `phi(A) = sum_i a_i A a_i*` as its finite list of
//! Kraus operators; `d^2` operators always suffice for a completely positive
//! map, but lists of any length are accepted. A [`SuperOperator`] stores a
//! general linear map through its `d^2 x d^2` transfer matrix `T` acting on
//! column-major vectorizations: `vec(phi(A)) = T vec(A)`.
//!
//! The Choi matrix is `C = sum_ij E_ij ⊗ phi(E_ij)` with the `E_ij` index as
//! the outer factor. Trace preservation is equivalent to the partial trace of
//! `C` over the inner factor being the identity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, herm_eig, op_norm, RANK_RTOL};
use crate::matrix::{c64, ComplexMatrix, C64};

/// Anything that acts linearly on `dim x dim` matrices.
pub trait LinearMap {
    fn dim(&self) -> usize;

    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix>;

    fn transfer_matrix(&self) -> SuperOperator;

    /// Kraus form, when the map carries one.
    fn as_kraus(&self) -> Option<&KrausChannel> {
        None
    }

    fn choi(&self) -> ChoiMatrix {
        let d = self.dim();
        let mut c = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                let out = self
                    .apply(&ComplexMatrix::unit(d, i, j))
                    .expect("matrix units have the map's dimension");
                for a in 0..d {
                    for b in 0..d {
                        c[(i * d + a, j * d + b)] = out[(a, b)];
                    }
                }
            }
        }
        ChoiMatrix { dim: d, matrix: c }
    }
}

fn check_dim(expected: usize, a: &ComplexMatrix) -> Result<()> {
    if a.dim() != expected {
        return Err(Error::DimMismatch { expected, found: a.dim() });
    }
    Ok(())
}

/// `phi(A) = sum_i a_i A a_i*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KrausRepr", into = "KrausRepr")]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausRepr {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl TryFrom<KrausRepr> for KrausChannel {
    type Error = String;
    fn try_from(r: KrausRepr) -> std::result::Result<Self, String> {
        if r.kraus.is_empty() {
            return Err("field `kraus` must contain at least one operator".into());
        }
        if let Some((k, m)) = r.kraus.iter().enumerate().find(|(_, m)| m.dim() != r.dim) {
            return Err(format!(
                "field `kraus[{k}]` has dimension {}, expected `dim` = {}",
                m.dim(),
                r.dim
            ));
        }
        Ok(KrausChannel { dim: r.dim, kraus: r.kraus })
    }
}

impl From<KrausChannel> for KrausRepr {
    fn from(c: KrausChannel) -> Self {
        KrausRepr { dim: c.dim, kraus: c.kraus }
    }
}

/// Result of a trace-preservation test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    pub trace_preserving: bool,
    /// `||sum_i a_i* a_i - I||_inf`.
    pub residual: f64,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("a channel needs at least one Kraus operator".into()))?;
        let dim = first.dim();
        for k in &kraus {
            check_dim(dim, k)?;
        }
        Ok(KrausChannel { dim, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel { dim, kraus: vec![ComplexMatrix::identity(dim)] }
    }

    /// `A -> U A U*`.
    pub fn unitary(u: ComplexMatrix) -> Self {
        KrausChannel { dim: u.dim(), kraus: vec![u] }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// `phi*(I) = sum_i a_i* a_i`.
    pub fn dual_identity(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            s += &(&k.adjoint() * k);
        }
        s.hermitian_part()
    }

    /// The adjoint map with respect to `tr(A* B)`: Kraus operators `a_i*`.
    pub fn adjoint(&self) -> KrausChannel {
        KrausChannel { dim: self.dim, kraus: self.kraus.iter().map(|k| k.adjoint()).collect() }
    }

    /// `self ∘ other`, i.e. `A -> self(other(A))`, with Kraus list `{a_i b_j}`.
    pub fn compose(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if other.dim != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: other.dim });
        }
        let mut kraus = Vec::with_capacity(self.len() * other.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a * b);
            }
        }
        Ok(KrausChannel { dim: self.dim, kraus })
    }

    /// `phi ⊗ id_n` on dimension `d*n`, Kraus operators `a_i ⊗ I_n`.
    pub fn tensor_with_identity(&self, n: usize) -> Result<KrausChannel> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor factor n must be at least 1".into()));
        }
        let id = ComplexMatrix::identity(n);
        Ok(KrausChannel { dim: self.dim * n, kraus: self.kraus.iter().map(|k| k.kron(&id)).collect() })
    }

    pub fn is_trace_preserving(&self, tol: f64) -> Result<TraceCheck> {
        let diff = &self.dual_identity() - &ComplexMatrix::identity(self.dim);
        let residual = op_norm(&diff)?;
        Ok(TraceCheck { trace_preserving: residual <= tol, residual })
    }

    /// `||phi||_1 = sup over density matrices of tr phi(A) = ||phi*(I)||_inf`.
    pub fn norm_one(&self) -> Result<f64> {
        Ok(herm_eig(&self.dual_identity())?.max().max(0.0))
    }

    /// `||phi||_2`, the largest singular value of the transfer matrix.
    pub fn norm_two(&self) -> Result<f64> {
        self.transfer_matrix().norm_two()
    }

    /// `||phi||_inf = ||phi(I)||_inf`, equal to the trace norm of the adjoint.
    pub fn norm_inf(&self) -> Result<f64> {
        self.adjoint().norm_one()
    }

    /// Trace-preserving completion `A -> phi(A) + r A r` with `r = (I - phi*(I))^(1/2)`.
    pub fn completion(&self) -> Result<KrausChannel> {
        let gap = &ComplexMatrix::identity(self.dim) - &self.dual_identity();
        let e = herm_eig(&gap)?;
        if e.min() < -1e-9 {
            return Err(Error::NormExceedsOne { min_eig: e.min() });
        }
        // eigenvalues at round-off level are an exactly trace-preserving direction
        let remainder = e.apply_fn(|x| if x <= 1e-12 { 0.0 } else { x.sqrt() });
        let mut kraus = self.kraus.clone();
        if remainder.max_abs() > 0.0 {
            kraus.push(remainder);
        }
        Ok(KrausChannel { dim: self.dim, kraus })
    }

    /// Drops Kraus operators that are exactly zero, keeping at least one.
    pub fn pruned(&self) -> KrausChannel {
        let kept: Vec<_> = self.kraus.iter().filter(|k| k.max_abs() > 0.0).cloned().collect();
        if kept.is_empty() {
            KrausChannel { dim: self.dim, kraus: vec![ComplexMatrix::zeros(self.dim)] }
        } else {
            KrausChannel { dim: self.dim, kraus: kept }
        }
    }
}

impl LinearMap for KrausChannel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim, a)?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            out += &(&(k * a) * &k.adjoint());
        }
        Ok(out)
    }

    /// `T = sum_i conj(a_i) ⊗ a_i`.
    fn transfer_matrix(&self) -> SuperOperator {
        let d = self.dim;
        let mut t = ComplexMatrix::zeros(d * d);
        for k in &self.kraus {
            t += &k.conj().kron(k);
        }
        SuperOperator { dim: d, transfer: t }
    }

    fn as_kraus(&self) -> Option<&KrausChannel> {
        Some(self)
    }
}

/// A general linear map given by its transfer matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SuperRepr", into = "SuperRepr")]
pub struct SuperOperator {
    dim: usize,
    transfer: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuperRepr {
    dim: usize,
    transfer: ComplexMatrix,
}

impl TryFrom<SuperRepr> for SuperOperator {
    type Error = String;
    fn try_from(r: SuperRepr) -> std::result::Result<Self, String> {
        SuperOperator::new(r.dim, r.transfer).map_err(|_| {
            "field `transfer` must be a (dim^2 x dim^2) matrix".to_string()
        })
    }
}

impl From<SuperOperator> for SuperRepr {
    fn from(s: SuperOperator) -> Self {
        SuperRepr { dim: s.dim, transfer: s.transfer }
    }
}

impl SuperOperator {
    pub fn new(dim: usize, transfer: ComplexMatrix) -> Result<Self> {
        if dim == 0 || transfer.dim() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, found: transfer.dim() });
        }
        Ok(SuperOperator { dim, transfer })
    }

    /// Tabulates a linear map by evaluating it on the matrix units.
    pub fn from_map(dim: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let mut t = ComplexMatrix::zeros(dim * dim);
        for j in 0..dim {
            for i in 0..dim {
                let col = f(&ComplexMatrix::unit(dim, i, j)).vec();
                t.set_column(i + j * dim, &col);
            }
        }
        SuperOperator { dim, transfer: t }
    }

    /// `A -> A^T`: positive but not 2-positive.
    pub fn transpose_map(dim: usize) -> Self {
        Self::from_map(dim, |a| a.transpose())
    }

    pub fn transfer(&self) -> &ComplexMatrix {
        &self.transfer
    }

    pub fn into_transfer(self) -> ComplexMatrix {
        self.transfer
    }

    /// Adjoint with respect to `tr(A* B)`: the conjugate-transposed transfer matrix.
    pub fn adjoint(&self) -> SuperOperator {
        SuperOperator { dim: self.dim, transfer: self.transfer.adjoint() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOperator) -> Result<SuperOperator> {
        if other.dim != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: other.dim });
        }
        Ok(SuperOperator { dim: self.dim, transfer: &self.transfer * &other.transfer })
    }

    pub fn norm_two(&self) -> Result<f64> {
        op_norm(&self.transfer)
    }

    /// `||T - T*||` (Frobenius); zero iff the map is self-adjoint in `<A, B> = tr(A* B)`.
    pub fn self_adjoint_residual(&self) -> f64 {
        self.transfer.hermiticity_residual()
    }
}

impl LinearMap for SuperOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.dim, a)?;
        ComplexMatrix::unvec(&self.transfer.matvec(&a.vec()))
    }

    fn transfer_matrix(&self) -> SuperOperator {
        self.clone()
    }
}

/// `C = sum_ij E_ij ⊗ phi(E_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub dim: usize,
    pub matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, found: matrix.dim() });
        }
        Ok(ChoiMatrix { dim, matrix })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        linalg::min_eigenvalue(&self.matrix)
    }

    /// Choi criterion: completely positive iff `C` is PSD.
    pub fn is_completely_positive(&self, tol: f64) -> Result<bool> {
        Ok(self.matrix.is_hermitian(tol) && self.min_eigenvalue()? >= -tol)
    }

    /// Partial trace over the inner (output) factor: `[tr phi(E_ij)]_ij`.
    pub fn trace_out_output(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d, |i, j| (0..d).map(|a| self.matrix[(i * d + a, j * d + a)]).sum())
    }

    /// Recovers the map as a superoperator.
    pub fn to_superoperator(&self) -> SuperOperator {
        let d = self.dim;
        SuperOperator::from_map(d, |x| {
            // phi(X) = sum_ij X_ij phi(E_ij)
            ComplexMatrix::from_fn(d, |a, b| {
                let mut s = c64(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        s += x[(i, j)] * self.matrix[(i * d + a, j * d + b)];
                    }
                }
                s
            })
        })
    }
}

/// Kraus operators from the eigendecomposition of a PSD Choi matrix.
///
/// Each eigenpair `(l, v)` above the rank threshold gives `K[a][i] = sqrt(l) v[i*d + a]`.
pub fn kraus_from_choi(choi: &ChoiMatrix) -> Result<KrausChannel> {
    let d = choi.dim;
    let e = herm_eig(&choi.matrix.hermitian_part())?;
    let scale = e.max().abs().max(1.0);
    if e.min() < -1e-8 * scale {
        return Err(Error::NotPsd { min_eig: e.min() });
    }
    let thr = RANK_RTOL * scale;
    let mut kraus = Vec::new();
    for k in (0..d * d).rev() {
        let lam = e.eigenvalues[k];
        if lam <= thr {
            break;
        }
        let v = e.eigenvector(k);
        let s = lam.sqrt();
        kraus.push(ComplexMatrix::from_fn(d, |a, i| v[i * d + a] * s));
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(d));
    }
    Ok(KrausChannel { dim: d, kraus })
}

/// Maps that implement [`LinearMap`] by reference.
impl<T: LinearMap + ?Sized> LinearMap for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        (**self).apply(a)
    }
    fn transfer_matrix(&self) -> SuperOperator {
        (**self).transfer_matrix()
    }
    fn as_kraus(&self) -> Option<&KrausChannel> {
        (**self).as_kraus()
    }
}

/// Either representation, as read from a channel file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyMap {
    Kraus(KrausChannel),
    Super(SuperOperator),
}

impl LinearMap for AnyMap {
    fn dim(&self) -> usize {
        match self {
            AnyMap::Kraus(k) => k.dim(),
            AnyMap::Super(s) => s.dim(),
        }
    }
    fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            AnyMap::Kraus(k) => k.apply(a),
            AnyMap::Super(s) => s.apply(a),
        }
    }
    fn transfer_matrix(&self) -> SuperOperator {
        match self {
            AnyMap::Kraus(k) => k.transfer_matrix(),
            AnyMap::Super(s) => s.clone(),
        }
    }
    fn as_kraus(&self) -> Option<&KrausChannel> {
        match self {
            AnyMap::Kraus(k) => Some(k),
            AnyMap::Super(_) => None,
        }
    }
}

/// Residual of `phi(A*) = phi(A)*` (Frobenius norm).
pub fn star_commutation_residual(map: &impl LinearMap, a: &ComplexMatrix) -> Result<f64> {
    let lhs = map.apply(&a.adjoint())?;
    let rhs = map.apply(a)?.adjoint();
    Ok((&lhs - &rhs).norm_fro())
}

/// `tr(X* Y)`, re-exported for readability at call sites.
pub fn pairing(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.hs_inner(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;
    use crate::random::{random_matrix, random_unitary, rng_from_seed};

    fn random_channel(seed: u64, d: usize, k: usize) -> KrausChannel {
        crate::constructors::random_channel(d, k, seed).unwrap()
    }

    fn same_action(a: &impl LinearMap, b: &impl LinearMap, tol: f64) {
        let mut rng = rng_from_seed(99);
        for _ in 0..10 {
            let x = random_matrix(&mut rng, a.dim());
            let diff = (&a.apply(&x).unwrap() - &b.apply(&x).unwrap()).norm_fro();
            assert!(diff <= tol, "action differs by {diff:e}");
        }
    }

    #[test]
    fn identity_channel_acts_trivially() {
        let id = KrausChannel::identity(3);
        let a = random_matrix(&mut rng_from_seed(1), 3);
        assert_eq!(id.apply(&a).unwrap(), a);
    }

    #[test]
    fn dim_mismatch_reported() {
        let id = KrausChannel::identity(3);
        assert!(matches!(
            id.apply(&ComplexMatrix::identity(2)),
            Err(Error::DimMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn transfer_matrix_agrees_with_kraus_action() {
        let phi = random_channel(4, 3, 4);
        let t = phi.transfer_matrix();
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3);
            let diff = (&phi.apply(&a).unwrap() - &t.apply(&a).unwrap()).norm_fro();
            assert!(diff < 1e-10);
        }
    }

    #[test]
    fn transfer_of_identity_and_unitary() {
        let t = KrausChannel::identity(2).transfer_matrix();
        assert_eq!(t.transfer(), &ComplexMatrix::identity(4));
        let u = random_unitary(&mut rng_from_seed(2), 2);
        let t = KrausChannel::unitary(u.clone()).transfer_matrix();
        assert!((t.transfer() - &u.conj().kron(&u)).max_abs() < 1e-15);
    }

    #[test]
    fn from_map_round_trips_through_vec() {
        let phi = random_channel(8, 2, 3);
        let s = SuperOperator::from_map(2, |a| phi.apply(a).unwrap());
        assert!((s.transfer() - phi.transfer_matrix().transfer()).max_abs() < 1e-14);
    }

    #[test]
    fn adjoint_duality() {
        let phi = random_channel(3, 3, 5);
        let adj = phi.adjoint();
        let mut rng = rng_from_seed(12);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 3);
            let b = random_matrix(&mut rng, 3);
            let lhs = adj.apply(&a).unwrap().hs_inner(&b);
            let rhs = a.hs_inner(&phi.apply(&b).unwrap());
            assert!((lhs - rhs).norm() < 1e-10);
        }
        same_action(&adj.adjoint(), &phi, 1e-12);
    }

    #[test]
    fn adjoint_of_hermitian_kraus_is_same_map() {
        let pauli = crate::constructors::pauli_channel([0.4, 0.3, 0.2, 0.1]).unwrap();
        same_action(&pauli.adjoint(), &pauli, 1e-14);
    }

    #[test]
    fn adjoint_of_unitary_is_inverse() {
        let u = random_unitary(&mut rng_from_seed(3), 3);
        let phi = KrausChannel::unitary(u);
        let back = phi.compose(&phi.adjoint()).unwrap();
        same_action(&back, &KrausChannel::identity(3), 1e-12);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let phi = random_channel(1, 3, 2);
        let psi = random_channel(2, 3, 3);
        let c = phi.compose(&psi).unwrap();
        assert_eq!(c.len(), 6);
        let a = random_matrix(&mut rng_from_seed(4), 3);
        let seq = phi.apply(&psi.apply(&a).unwrap()).unwrap();
        assert!((&c.apply(&a).unwrap() - &seq).norm_fro() < 1e-10);
        same_action(&phi.compose(&KrausChannel::identity(3)).unwrap(), &phi, 1e-12);
        assert!(matches!(phi.compose(&KrausChannel::identity(2)), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn tensor_with_identity_cases() {
        let phi = random_channel(6, 2, 2);
        same_action(&phi.tensor_with_identity(1).unwrap(), &phi, 1e-14);
        let id = KrausChannel::identity(2).tensor_with_identity(3).unwrap();
        same_action(&id, &KrausChannel::identity(6), 0.0);
        assert!(phi.tensor_with_identity(2).unwrap().is_trace_preserving(1e-10).unwrap().trace_preserving);
    }

    #[test]
    fn trace_preservation_examples() {
        let tp = KrausChannel::identity(2).is_trace_preserving(1e-12).unwrap();
        assert!(tp.trace_preserving);
        assert_eq!(tp.residual, 0.0);
        let half = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.5)]).unwrap();
        let r = half.is_trace_preserving(1e-12).unwrap();
        assert!(!r.trace_preserving);
        assert!((r.residual - 0.75).abs() < 1e-15);
    }

    #[test]
    fn norms_of_scaled_identity() {
        let lam: f64 = 0.36;
        let phi = KrausChannel::new(vec![ComplexMatrix::identity(3).scale_real(lam.sqrt())]).unwrap();
        assert!((phi.norm_one().unwrap() - lam).abs() < 1e-15);
        assert!((phi.norm_two().unwrap() - lam).abs() < 1e-14);
        assert!((KrausChannel::identity(3).norm_two().unwrap() - 1.0).abs() < 1e-14);
        assert!((random_channel(9, 3, 4).norm_one().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_of_identity_is_entangled_projector() {
        let c = KrausChannel::identity(2).choi();
        // 2 |Ω><Ω| has ones at the (00,00), (00,11), (11,00), (11,11) corners
        let mut want = ComplexMatrix::zeros(4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            want[(i, j)] = ONE;
        }
        assert_eq!(c.matrix, want);
        let e = herm_eig(&c.matrix).unwrap();
        assert!((e.max() - 2.0).abs() < 1e-14);
        assert!(e.eigenvalues[..3].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn choi_of_transpose_is_swap() {
        let c = SuperOperator::transpose_map(2).choi();
        let swap = ComplexMatrix::from_fn(4, |r, s| {
            let (i, a) = (r / 2, r % 2);
            let (j, b) = (s / 2, s % 2);
            if i == b && a == j { ONE } else { c64(0.0, 0.0) }
        });
        assert_eq!(c.matrix, swap);
        assert!((c.min_eigenvalue().unwrap() + 1.0).abs() < 1e-12);
        assert!(!c.is_completely_positive(1e-10).unwrap());
    }

    #[test]
    fn choi_trace_out_detects_trace_preservation() {
        let phi = random_channel(10, 3, 3);
        let pt = phi.choi().trace_out_output();
        assert!((&pt - &ComplexMatrix::identity(3)).max_abs() < 1e-12);
        assert!(phi.choi().is_completely_positive(1e-10).unwrap());
    }

    #[test]
    fn kraus_from_choi_round_trip() {
        let phi = random_channel(11, 3, 4);
        let back = kraus_from_choi(&phi.choi()).unwrap();
        assert_eq!(back.len(), 4);
        same_action(&back, &phi, 1e-8);
        assert!((&back.choi().matrix - &phi.choi().matrix).max_abs() < 1e-8);
    }

    #[test]
    fn kraus_from_identity_choi_is_single_operator() {
        let k = kraus_from_choi(&KrausChannel::identity(3).choi()).unwrap();
        assert_eq!(k.len(), 1);
        let op = &k.kraus()[0];
        // proportional to I up to a phase
        let z = op[(0, 0)];
        assert!((z.norm() - 1.0).abs() < 1e-12);
        assert!((op - &ComplexMatrix::identity(3).scale(z)).max_abs() < 1e-12);
    }

    #[test]
    fn kraus_from_choi_rejects_indefinite() {
        let c = SuperOperator::transpose_map(2).choi();
        assert!(matches!(kraus_from_choi(&c), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn choi_to_superoperator_inverts() {
        let phi = random_channel(13, 2, 3);
        let s = phi.choi().to_superoperator();
        assert!((s.transfer() - phi.transfer_matrix().transfer()).max_abs() < 1e-13);
    }

    #[test]
    fn completion_examples() {
        let tp = random_channel(14, 2, 2);
        let c = tp.completion().unwrap();
        assert_eq!(c.len(), tp.len());
        same_action(&c, &tp, 1e-12);

        let zero = KrausChannel::new(vec![ComplexMatrix::zeros(2)]).unwrap();
        let c = zero.completion().unwrap();
        same_action(&c, &KrausChannel::identity(2), 1e-12);

        let u = random_unitary(&mut rng_from_seed(15), 2);
        let half = KrausChannel::new(vec![u.scale_real(0.5f64.sqrt())]).unwrap();
        let c = half.completion().unwrap();
        let rem = &c.kraus()[1];
        assert!((rem - &ComplexMatrix::identity(2).scale_real(0.5f64.sqrt())).max_abs() < 1e-12);
        assert!(c.is_trace_preserving(1e-9).unwrap().trace_preserving);

        let big = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(1.1)]).unwrap();
        assert!(matches!(big.completion(), Err(Error::NormExceedsOne { .. })));
    }

    #[test]
    fn channel_json_round_trip_and_errors() {
        let phi = random_channel(16, 2, 2);
        let s = serde_json::to_string(&phi).unwrap();
        let back: KrausChannel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, phi);
        let bad = r#"{"dim":3,"kraus":[{"dim":2,"re":[1,0,0,1],"im":[0,0,0,0]}]}"#;
        let err = serde_json::from_str::<KrausChannel>(bad).unwrap_err().to_string();
        assert!(err.contains("kraus[0]"), "{err}");
        let any: AnyMap = serde_json::from_str(&serde_json::to_string(&SuperOperator::transpose_map(2)).unwrap()).unwrap();
        assert!(matches!(any, AnyMap::Super(_)));
    }
}
