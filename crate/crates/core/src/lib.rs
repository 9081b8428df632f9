pub mod channel;
pub mod constructors;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod positivity;
pub mod random;
pub mod spectral;
pub mod verify;

pub use channel::{AnyMap, ChoiMatrix, KrausChannel, LinearMap, SuperOperator};
pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
