//! Analysis of vectorial Boolean functions over binary fields: differential
//! and Walsh statistics, Walsh-zero geometry, and CCZ-class exploration.

pub mod ccz;
pub mod claims;
pub mod error;
pub mod geometry;
pub mod gf2m;
pub mod io;
pub mod linalg;
pub mod methods;
pub mod registry;
pub mod spectrum;
pub mod trivariate;
pub mod vbf;

pub use error::{Error, Result};
pub use gf2m::{FieldElement, FieldSpec, Modulus};
pub use linalg::BinaryMatrix;
pub use spectrum::Spectrum;
pub use vbf::Vbf;
