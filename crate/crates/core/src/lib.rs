//! Numerical anisotropic capillary geometry: Minkowski norms and Wulff
//! shapes, anisotropic curvatures of parametrized hypersurfaces, capillary
//! support functions, and evaluators for the integral identities and
//! inequalities that hold on capillary hypersurfaces in the half-space.

pub mod capillary;
pub mod error;
pub mod lab;
pub mod minkowski;
pub mod norm;
pub mod par;
pub mod poly;
pub mod quadrature;
pub mod sphere;
pub mod surface;
pub mod symmetric;

pub use error::{Error, Result};
pub use norm::{DerivativeMode, MinkowskiNorm, NormDocument, NormSpec, WulffShapeSpec};
pub use sphere::{Matrix, Vector};
