//! Fourier-ratio bounds for smooth signals on the discrete torus ℤ_N^d and
//! on the sphere S², and ℓ¹ recovery from random samples.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod battery;
pub mod bench;
pub mod error;
pub mod io;
pub mod recovery;
pub mod sampler;
pub mod solver;
pub mod spectral;
pub mod sphere;
pub mod torus;

pub use error::{Error, Result};
