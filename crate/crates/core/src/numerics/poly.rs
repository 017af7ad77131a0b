use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::numerics::complex::{mul_add_assign, ComplexValue, Precision, Real};

/// Dense polynomial about 0; `coeffs[j]` multiplies `z^j`.
///
/// Trailing zero coefficients are trimmed on construction, so `degree()` is
/// the highest index with a nonzero coefficient and the zero polynomial has
/// degree -1.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<ComplexValue>,
    prec: Precision,
}

impl Poly {
    pub fn new(prec: Precision, mut coeffs: Vec<ComplexValue>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Poly { coeffs: Vec::new(), prec }
    }

    pub fn constant(c: ComplexValue) -> Self {
        let prec = c.precision();
        Poly::new(prec, vec![c])
    }

    pub fn from_f64_pairs(prec: Precision, pairs: &[(f64, f64)]) -> Self {
        let coeffs = pairs.iter().map(|&(re, im)| ComplexValue::from_f64(prec, re, im)).collect();
        Poly::new(prec, coeffs)
    }

    /// `z^n`.
    pub fn monomial(prec: Precision, n: usize) -> Self {
        let mut coeffs = vec![ComplexValue::zero(prec); n + 1];
        coeffs[n] = ComplexValue::one(prec);
        Poly { coeffs, prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn coeffs(&self) -> &[ComplexValue] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ComplexValue> {
        self.coeffs
    }

    /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, j: usize) -> ComplexValue {
        self.coeffs.get(j).cloned().unwrap_or_else(|| ComplexValue::zero(self.prec))
    }

    /// Horner evaluation at working precision.
    pub fn eval(&self, z: &ComplexValue) -> ComplexValue {
        let mut acc = ComplexValue::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc += c;
        }
        acc
    }

    /// `z^n p(z)`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![ComplexValue::zero(self.prec); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs, prec: self.prec }
    }

    /// Truncation `sum_{j <= n} a_j z^j`.
    pub fn truncate(&self, n: usize) -> Self {
        let end = (n + 1).min(self.coeffs.len());
        Poly::new(self.prec, self.coeffs[..end].to_vec())
    }

    /// Coefficients of index strictly greater than `n`.
    pub fn tail_after(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().take(n + 1) {
            *c = ComplexValue::zero(self.prec);
        }
        Poly::new(self.prec, coeffs)
    }

    pub fn scale(&self, s: &ComplexValue) -> Self {
        Poly::new(self.prec, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(q(z))` by Horner's scheme over polynomials.
    pub fn compose(&self, q: &Poly) -> Self {
        let mut acc = Poly::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    /// `sum_j |a_j| r^j`, the Horner cancellation scale at radius `r`.
    pub fn abs_sum_at(&self, r: &Real) -> Real {
        let mut acc = Real::with_val(self.prec.bits(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= r;
            acc += c.abs();
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> Real {
        let mut m = Real::with_val(self.prec.bits(), 0);
        for c in &self.coeffs {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }
}

/// Truncation of a coefficient stream after index `n`.
pub fn partial_sum<I>(prec: Precision, coeffs: I, n: usize) -> Result<Poly>
where
    I: IntoIterator<Item = ComplexValue>,
{
    let taken: Vec<ComplexValue> = coeffs.into_iter().take(n + 1).collect();
    if taken.len() < n + 1 {
        return Err(Error::StreamExhausted { needed: n + 1, available: taken.len() });
    }
    Ok(Poly::new(prec, taken))
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect();
        Poly::new(self.prec, coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|j| &self.coeff(j) - &rhs.coeff(j)).collect();
        Poly::new(self.prec, coeffs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.prec);
        }
        let mut coeffs = vec![ComplexValue::zero(self.prec); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                mul_add_assign(&mut coeffs[i + j], a, b);
            }
        }
        Poly::new(self.prec, coeffs)
    }
}
