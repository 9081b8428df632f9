use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::herm_eig;
use crate::matrix::ComplexMatrix;

const DENSITY_TOL: f64 = 1e-10;

/// Positive semidefinite matrix of unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityInput", into = "ComplexMatrix")]
pub struct DensityMatrix(ComplexMatrix);

/// Accepted input forms: a full matrix object or `{"diag": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensityInput {
    Diag { diag: Vec<f64> },
    Full(ComplexMatrix),
}

impl TryFrom<DensityInput> for DensityMatrix {
    type Error = String;
    fn try_from(input: DensityInput) -> std::result::Result<Self, String> {
        match input {
            DensityInput::Diag { diag } => DensityMatrix::from_diag(&diag),
            DensityInput::Full(m) => DensityMatrix::new(m),
        }
        .map_err(|e| e.to_string())
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.0
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, `lambda_min >= -1e-10` and `|tr - 1| <= 1e-10`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let dev = m.hermiticity_residual();
        if dev > DENSITY_TOL {
            return Err(Error::BadDensity(format!("not Hermitian (deviation {dev:e})")));
        }
        let m = m.hermitian_part();
        let tr = m.trace().re;
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::BadDensity(format!("trace is {tr}, expected 1")));
        }
        let min_eig = herm_eig(&m)?.min();
        if min_eig < -DENSITY_TOL {
            return Err(Error::BadDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix(m))
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::BadDensity("empty diagonal".into()));
        }
        if let Some(x) = diag.iter().find(|x| !x.is_finite()) {
            return Err(Error::BadDensity(format!("non-finite entry {x}")));
        }
        Self::new(ComplexMatrix::real_diag(diag))
    }

    /// Hermitian part of `m` rescaled to unit trace; fails when that is not a state.
    pub fn normalized(m: &ComplexMatrix) -> Result<Self> {
        let h = m.hermitian_part();
        let tr = h.trace().re;
        if tr.abs() < f64::MIN_POSITIVE {
            return Err(Error::BadDensity("zero trace".into()));
        }
        Self::new(h.scale_real(1.0 / tr))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        herm_eig(&self.0).map(|e| e.min()).unwrap_or(f64::NAN)
    }

    /// Diagonal entries when the matrix is diagonal within `tol`, else `None`.
    pub fn diagonal_entries(&self, tol: f64) -> Option<Vec<f64>> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if i != j && self.0[(i, j)].norm() > tol {
                    return None;
                }
            }
        }
        Some((0..d).map(|i| self.0[(i, i)].re).collect())
    }
}
