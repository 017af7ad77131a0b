//! Constructive universal Taylor series on the unit disc and on the strip
//! `{-1 < Re z < 1}`, together with the potential-theoretic instruments used
//! to study their boundary behaviour.

pub mod approx;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod potential;
pub mod probe;
pub mod universal;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, Poly, Precision, Real};
