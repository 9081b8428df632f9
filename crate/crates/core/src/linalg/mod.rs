//! Dense complex kernels: Hermitian eigensolver, SVD, general spectra,
//! matrix exponential, and the operator functions built on them.

mod cholesky;
mod eigh;
mod expm;
mod functions;
mod span;
mod spectrum;
pub mod svd;

pub use cholesky::exceeds_shift;
pub use eigh::{herm_eig, HermitianEigen};
pub use expm::{expm, solve, EXPM_GUARD};
pub use functions::{
    abs_op, abs_power, hermitian_psd_function, lp_norm, min_eigenvalue, op_norm, polar,
    pos_neg_parts, psd_sqrt, schatten_norm, trace_norm, NormOrder, PolarParts, RANK_RTOL,
};
pub use span::OrthoBasis;
pub use spectrum::general_spectrum;
pub use svd::{singular_values, svd, Svd};
