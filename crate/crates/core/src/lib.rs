//! Toric self-dual Einstein 4-metrics built as quaternion Kähler quotients of the
//! quaternionic hyperboloids H^{k,l}.
//!
//! The quaternionic layer ([`hnum`]) is generic over the scalar type; everything above it
//! works in `f64`.

#![allow(clippy::needless_range_loop)]

pub mod curvature;
pub mod error;
pub mod hnum;
pub mod hyperfun;
pub mod moments;
pub mod orbits;
pub mod scalar;
pub mod slices;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Quaternion = hnum::Quat<f64>;
pub type ImQuaternion = hnum::ImQuat<f64>;
pub type HVector = hnum::HVec<f64>;
pub type HMatrix3 = hnum::HMat3<f64>;
pub type ChartPoint = hnum::ChartPt<f64>;

pub type Quaternion32 = hnum::Quat<f32>;
pub type HVector32 = hnum::HVec<f32>;
pub type HMatrix3F32 = hnum::HMat3<f32>;
