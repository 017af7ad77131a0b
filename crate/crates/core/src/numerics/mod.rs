//! Multiprecision complex arithmetic, dense polynomials, bit-exact text
//! encoding of reals, and 1-D quadrature.

pub mod complex;
pub mod hexfloat;
pub mod poly;
pub mod quadrature;

pub use complex::{ComplexValue, Precision, Real, DEFAULT_PRECISION, MIN_PRECISION};
pub use poly::{partial_sum, Poly};
pub use quadrature::{integrate, integrate_interval, QuadEstimate, QuadRule, Quadrature};

/// `p(z)`; see [`Poly::eval`].
pub fn poly_eval(p: &Poly, z: &ComplexValue) -> ComplexValue {
    p.eval(z)
}
