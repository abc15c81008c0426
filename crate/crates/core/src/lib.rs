#![forbid(unsafe_code)]

pub mod elliptic;
pub mod matrix;
pub mod operator;
pub mod poincare;
pub mod spectral;

pub use elliptic::{ComplexSpec, ConditionsReport};
pub use matrix::{CMatrix, RankTolerance, SvdResult};
pub use operator::{Operator, RankProfile};
pub use poincare::{EnsembleParams, PoincareReport, RieszTransforms};
pub use spectral::{GridField, MultiplierBank, SpectrumField};

mod error;
pub use error::{Error, Result};
