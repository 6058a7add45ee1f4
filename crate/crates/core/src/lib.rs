//! Discrete and fast Fourier transforms for spherical Gauss-Laguerre (SGL)
//! basis functions on ℝ³ with Gaussian weight.

pub mod bench;
pub mod error;
pub mod indexing;
pub mod kernels;
pub mod quadrature;
pub mod radial;
pub mod special;
pub mod spherical;
pub mod store;
pub mod transform;

pub use error::{Result, SglError};
pub use transform::{fsglft, ifsglft, TransformPlan, Variant};
