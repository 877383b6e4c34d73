//! Random-unitary decompositions of quantum channels, Hilbert-Schmidt
//! completeness certificates, correctability checks and recovery channels.
//!
//! Everything is generic over the real scalar `T: Real` (`f32` or `f64`);
//! the aliases at the bottom of this file fix `T = f64`, which is what the
//! default tolerances are calibrated for.

pub mod channels;
pub mod correctability;
pub mod error;
pub mod linalg;
pub mod recovery;
pub mod rng;
pub mod ru;
pub mod scalar;
pub mod state_ru;
pub mod states;

pub use error::{QchanError, Result};
pub use scalar::{Real, C};

pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Density = states::DensityMatrix<f64>;
pub type Pure = states::PureState<f64>;
pub type Kraus = channels::KrausSet<f64>;
pub type Eigen = linalg::HermitianEigen<f64>;
pub type Svd = linalg::SvdFactors<f64>;
pub type Code = recovery::CodeSpec<f64>;
pub type Plan = recovery::RecoveryPlan<f64>;
pub type Conversion = correctability::ConversionResult<f64>;
pub type StateRu = state_ru::StateRuDecomposition<f64>;
