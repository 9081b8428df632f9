//! Dense square complex matrices and the small vector helpers built on them.
//!
//! Storage is row-major. Superoperators act on matrices through column-major
//! vectorization (`vec`/`unvec`), so `vec(A)[i + j*d] = A[(i, j)]`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A `dim x dim` complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Wire form: `{"dim": d, "re": [d*d reals], "im": [d*d reals]}`, row-major.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = String;

    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        if r.dim == 0 {
            return Err("field `dim` must be at least 1".into());
        }
        let n = r.dim * r.dim;
        if r.re.len() != n {
            return Err(format!("field `re` has {} entries, expected {}", r.re.len(), n));
        }
        if r.im.len() != n {
            return Err(format!("field `im` has {} entries, expected {}", r.im.len(), n));
        }
        let data = r.re.iter().zip(&r.im).map(|(&a, &b)| c64(a, b)).collect();
        Ok(ComplexMatrix { dim: r.dim, data })
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            dim: m.dim,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        ComplexMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| {
            assert_eq!(rows[i].len(), dim, "rows must form a square matrix");
            c64(rows[i][j], 0.0)
        })
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| {
            assert_eq!(rows[i].len(), dim, "rows must form a square matrix");
            rows[i][j]
        })
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = c64(x, 0.0);
        }
        m
    }

    /// Matrix unit `E_ij` (a single 1 at row `i`, column `j`).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(i, j)] = ONE;
        m
    }

    /// Rank-one operator `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `(A - A*)/(2i)`, so that `A = Re A + i Im A` with both parts Hermitian.
    pub fn anti_hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] - self[(j, i)].conj()) * c64(0.0, -0.5))
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum; an upper bound for the spectral norm of
    /// Hermitian matrices and the norm used for scaling decisions.
    pub fn norm_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `A - A*`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol)
        })
    }

    /// Hermitian within `tol` and minimum eigenvalue at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match crate::linalg::herm_eig(&self.hermitian_part()) {
            Ok(e) => e.eigenvalues[0] >= -tol,
            Err(_) => false,
        }
    }

    /// `||U*U - I||` entrywise maximum within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let g = &self.adjoint() * self;
        (&g - &Self::identity(self.dim)).max_abs() <= tol
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v, A v>` with the inner product antilinear in the first slot.
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        vector::dot(v, &self.matvec(v))
    }

    /// Kronecker product `self ⊗ other`; `self` carries the outer (slow) index.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (m, n) = (self.dim, other.dim);
        let mut out = Self::zeros(m * n);
        for i in 0..m {
            for j in 0..m {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        out[(i * n + k, j * n + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Column-major stacking of the entries.
    pub fn vec(&self) -> Vec<C64> {
        let d = self.dim;
        let mut v = vec![ZERO; d * d];
        for j in 0..d {
            for i in 0..d {
                v[i + j * d] = self[(i, j)];
            }
        }
        v
    }

    /// Inverse of [`ComplexMatrix::vec`].
    pub fn unvec(v: &[C64]) -> Result<Self> {
        let d = (v.len() as f64).sqrt().round() as usize;
        if d == 0 || d * d != v.len() {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} is not a vectorized square matrix",
                v.len()
            )));
        }
        Ok(Self::from_fn(d, |i, j| v[i + j * d]))
    }

    /// Hilbert-Schmidt inner product `tr(A* B)`.
    pub fn hs_inner(&self, other: &ComplexMatrix) -> C64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::identity(self.dim);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Helpers for vectors stored as `Vec<C64>`.
pub mod vector {
    use super::{C64, ZERO};

    /// `<u, v>`, antilinear in `u`.
    pub fn dot(u: &[C64], v: &[C64]) -> C64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(v: &[C64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
        let n = norm(v);
        (n > 0.0).then(|| v.iter().map(|z| z / n).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Vec<C64> {
        let mut e = vec![ZERO; dim];
        e[k] = C64::new(1.0, 0.0);
        e
    }

    pub fn kron(u: &[C64], v: &[C64]) -> Vec<C64> {
        u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
    }

    pub fn sub(u: &[C64], v: &[C64]) -> Vec<C64> {
        u.iter().zip(v).map(|(a, b)| a - b).collect()
    }

    pub fn scale(v: &[C64], s: C64) -> Vec<C64> {
        v.iter().map(|z| z * s).collect()
    }
}
