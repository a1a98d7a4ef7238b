//! Finite-dimensional quantum channel toolkit: diamond-norm distances by
//! semidefinite programming, a computable lower bound on the distance from a
//! channel to the mixed-unitary channels, Schur channel machinery and
//! certificates for tensor-stable non-mixed-unitarity.
//!
//! The linear-algebra, channel and Schur layers are generic over the real
//! scalar ([`Real`], implemented for `f32` and `f64`); the optimization layers
//! work in `f64`. The aliases at the crate root fix `f64`.

pub mod bounds;
pub mod builtin;
pub mod channels;
pub mod diamond;
pub mod error;
pub mod estimate;
pub mod matcore;
pub mod sampling;
pub mod scalar;
pub mod sdp;
pub mod schur;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` dense complex matrix.
pub type ComplexMatrix = matcore::ComplexMatrix<f64>;
pub type ComplexVector = matcore::ComplexVector<f64>;
pub type DensityOperator = matcore::DensityOperator<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type ChoiMatrix = channels::ChoiMatrix<f64>;
pub type ChannelDifference = channels::ChannelDifference<f64>;

pub type ComplexMatrixF32 = matcore::ComplexMatrix<f32>;
pub type DensityOperatorF32 = matcore::DensityOperator<f32>;
pub type KrausChannelF32 = channels::KrausChannel<f32>;
pub type SchurMatrix = schur::SchurMatrix<f64>;
pub type DiagonalUnitaryMixture = schur::DiagonalUnitaryMixture<f64>;
