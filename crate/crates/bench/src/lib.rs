//! Shared inputs for the kernel benchmarks.

use num_complex::Complex64;
use utaylor_core::geometry::{CompactSet, SampleDensity, Shape};
use utaylor_core::{ComplexValue, Poly, Precision};

/// `n` points on the circle `|z| = r`.
pub fn ring(n: usize, r: f64) -> Vec<Complex64> {
    (0..n).map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64)).collect()
}

pub fn ring_mp(n: usize, r: f64, prec: Precision) -> Vec<ComplexValue> {
    ring(n, r).into_iter().map(|z| ComplexValue::from_c64(prec, z)).collect()
}

/// Degree-`n` polynomial with coefficients `1 / (j + 1)`.
pub fn harmonic_poly(n: usize, prec: Precision) -> Poly {
    let c: Vec<(f64, f64)> = (0..=n).map(|j| (1.0 / (j + 1) as f64, 0.0)).collect();
    Poly::from_f64_pairs(prec, &c)
}

/// The closed disc `D(3, 1/2)`.
pub fn off_center_disc(prec: Precision) -> CompactSet {
    CompactSet::sample(
        "K",
        Shape::Disc { center: [3.0, 0.0], radius: 0.5 },
        SampleDensity { boundary: 128, interior: 32 },
        prec,
    )
    .expect("valid disc")
}
