//! Weyl algebra over a finite-dimensional symplectic space, states given by
//! generating functions, their GNS geometry and the matching measure identities.
//!
//! Algorithms are generic over the scalar through [`Real`] (`f32`, `f64`);
//! phase-space points and the symplectic form are exact rationals.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bochner;
pub mod diagnostics;
pub mod error;
pub mod gaussian;
pub mod gns;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod scalar;
pub mod schrodinger;
pub mod state;
pub mod symplectic;
pub mod torus;
pub mod weyl;

pub use error::{Error, Result};
pub use gaussian::GaussianSpec;
pub use gns::GnsSpan;
pub use linalg::{hermitian_eigen, CMatrix, HermitianEigen};
pub use measure::{AtomicMeasure, SplitSpace};
pub use scalar::{Rational, Real};
pub use schrodinger::GridRep;
pub use state::GeneratingFunction;
pub use symplectic::{PhasePoint, RationalComplex, SymplecticSpace};
pub use torus::TorusRep;
pub use weyl::WeylElement;

pub type WeylElementF64 = WeylElement<f64>;
pub type WeylElementF32 = WeylElement<f32>;
pub type GeneratingFunctionF64 = GeneratingFunction<f64>;
pub type GeneratingFunctionF32 = GeneratingFunction<f32>;
pub type GnsSpanF64 = GnsSpan<f64>;
pub type GridRepF64 = GridRep<f64>;
pub type GridRepF32 = GridRep<f32>;
pub type TorusRepF64 = TorusRep<f64>;
pub type CMatrixF64 = CMatrix<f64>;
pub type AtomicMeasureF64 = AtomicMeasure<f64>;
