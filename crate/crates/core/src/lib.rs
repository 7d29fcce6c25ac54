//! Symmetry groups of Julia sets of polynomials, rational maps and root-finding
//! methods, with the dynamics and rendering needed to check them numerically.
//!
//! The core is generic over the real scalar (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod methods;
pub mod render;
pub mod report;
pub mod scalar;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Point, Real};

pub type Complex64 = num_complex::Complex<f64>;
pub type Point64 = Point<f64>;
pub type Polynomial64 = algebra::Polynomial<f64>;
pub type RationalMap64 = algebra::RationalMap<f64>;
pub type Mobius64 = algebra::MobiusTransform<f64>;
pub type Tolerance64 = algebra::ToleranceConfig<f64>;
pub type NormalForm64 = symmetry::NormalForm<f64>;
pub type SymmetryGroup64 = symmetry::SymmetryGroup<f64>;
pub type GridSpec64 = render::GridSpec<f64>;
pub type BasinImage64 = render::BasinImage<f64>;
pub type BoundaryMask64 = render::BoundaryMask<f64>;
