//! Exact algebra of translation-invariant valuations under SO(n), U(n), G2 and Spin(7).
//!
//! Coefficients live in the field Q(π) ([`qpi::PiScalar`]). Each model is a finite
//! graded algebra ([`model::Algebra`]) with product, Fourier transform and
//! convolution. Kinematic and additive kinematic formulas are derived from the
//! inverse of the Poincaré pairing ([`kinematics`]).

pub mod cli;
pub mod cones;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kinematics;
pub mod linalg;
pub mod model;
pub mod qpi;
pub mod quotient;
pub mod valuation;

pub use error::{Error, Result};
pub use model::{algebra, Algebra, BasisId, BasisIndex, ModelId};
pub use qpi::PiScalar;
pub use valuation::{TensorValuation, Valuation};
