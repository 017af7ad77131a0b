use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiprecision real used throughout the crate.
pub type Real = Float;

pub const MIN_PRECISION: u32 = 53;
pub const DEFAULT_PRECISION: u32 = 256;

/// Mantissa width, in bits, for a run. Values below 53 bits are rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_PRECISION {
            return Err(Error::PrecisionTooLow(bits));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Real constant at this precision.
    pub fn real(self, v: f64) -> Real {
        Float::with_val(self.0, v)
    }

    pub fn pi(self) -> Real {
        Float::with_val(self.0, Constant::Pi)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION)
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(bits: u32) -> Result<Self> {
        Precision::new(bits)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

/// Complex number with multiprecision real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexValue {
    re: Real,
    im: Real,
}

impl ComplexValue {
    pub fn new(re: Real, im: Real) -> Self {
        ComplexValue { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        ComplexValue { re: Float::with_val(prec.bits(), re), im: Float::with_val(prec.bits(), im) }
    }

    pub fn from_c64(prec: Precision, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::with_val(re.prec(), 0);
        ComplexValue { re, im }
    }

    /// `r e^{i theta}`.
    pub fn from_polar(r: &Real, theta: &Real) -> Self {
        let prec = r.prec().max(theta.prec());
        let (s, c) = Float::with_val(prec, theta).sin_cos(Float::new(prec));
        ComplexValue { re: c * r, im: s * r }
    }

    /// `e^{i theta}`.
    pub fn unit(theta: &Real) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        ComplexValue { re: c, im: s }
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn into_parts(self) -> (Real, Real) {
        (self.re, self.im)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn precision(&self) -> Precision {
        Precision(self.prec().max(MIN_PRECISION))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Real {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn conj(&self) -> Self {
        ComplexValue { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn scale(&self, s: &Real) -> Self {
        let p = self.prec();
        ComplexValue { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let p = self.prec();
        ComplexValue { re: Float::with_val(p, &self.re / &d), im: Float::with_val(p, -&self.im) / &d }
    }

    /// `z^n` by binary powering.
    pub fn powu(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexValue::from_real(Float::with_val(self.prec(), 1));
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `z^n` for signed `n`; fails on `0^n` with `n < 0`.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.powu(n as u64))
        } else if self.is_zero() {
            Err(Error::Domain("negative power of zero".into()))
        } else {
            Ok(self.powu(n.unsigned_abs()).recip())
        }
    }

    /// Principal square root (branch cut along the negative real axis).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return ComplexValue::zero(Precision(p));
        }
        let r = self.abs();
        if self.re >= 0 {
            let t = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / &t) / 2u32;
            ComplexValue { re: t, im }
        } else {
            let t = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let re = Float::with_val(p, self.im.abs_ref()) / &t / 2u32;
            let im = if self.im.is_sign_negative() { -t } else { t };
            ComplexValue { re, im }
        }
    }

    /// Natural log of the modulus.
    pub fn ln_abs(&self) -> Real {
        self.abs().ln()
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_c64();
        if z.im.is_sign_negative() {
            write!(f, "{}-{}i", z.re, -z.im)
        } else {
            write!(f, "{}+{}i", z.re, z.im)
        }
    }
}

impl<'a> Add<&'a ComplexValue> for &'a ComplexValue {
    type Output = ComplexValue;
    fn add(self, rhs: &'a ComplexValue) -> ComplexValue {
        let p = self.prec().max(rhs.prec());
        ComplexValue { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl<'a> Sub<&'a ComplexValue> for &'a ComplexValue {
    type Output = ComplexValue;
    fn sub(self, rhs: &'a ComplexValue) -> ComplexValue {
        let p = self.prec().max(rhs.prec());
        ComplexValue { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl<'a> Mul<&'a ComplexValue> for &'a ComplexValue {
    type Output = ComplexValue;
    fn mul(self, rhs: &'a ComplexValue) -> ComplexValue {
        let p = self.prec().max(rhs.prec());
        ComplexValue {
            re: Float::with_val(p, &self.re * &rhs.re - &self.im * &rhs.im),
            im: Float::with_val(p, &self.re * &rhs.im + &self.im * &rhs.re),
        }
    }
}

impl<'a> Div<&'a ComplexValue> for &'a ComplexValue {
    type Output = ComplexValue;
    fn div(self, rhs: &'a ComplexValue) -> ComplexValue {
        let d = rhs.norm_sqr();
        let p = self.prec().max(rhs.prec());
        let re = Float::with_val(p, &self.re * &rhs.re + &self.im * &rhs.im) / &d;
        let im = Float::with_val(p, &self.im * &rhs.re - &self.re * &rhs.im) / &d;
        ComplexValue { re, im }
    }
}

impl Neg for &ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

impl Neg for ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue { re: -self.re, im: -self.im }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<ComplexValue> for ComplexValue {
            type Output = ComplexValue;
            fn $m(self, rhs: ComplexValue) -> ComplexValue {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ComplexValue> for ComplexValue {
            type Output = ComplexValue;
            fn $m(self, rhs: &'a ComplexValue) -> ComplexValue {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<'a> AddAssign<&'a ComplexValue> for ComplexValue {
    fn add_assign(&mut self, rhs: &'a ComplexValue) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a ComplexValue> for ComplexValue {
    fn sub_assign(&mut self, rhs: &'a ComplexValue) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a ComplexValue> for ComplexValue {
    fn mul_assign(&mut self, rhs: &'a ComplexValue) {
        *self = &*self * rhs;
    }
}

/// `acc += a * b` without allocating a temporary complex.
pub fn mul_add_assign(acc: &mut ComplexValue, a: &ComplexValue, b: &ComplexValue) {
    let p = acc.prec();
    let re = Float::with_val(p, &a.re * &b.re - &a.im * &b.im);
    let im = Float::with_val(p, &a.re * &b.im + &a.im * &b.re);
    acc.re += re;
    acc.im += im;
}

/// `acc += conj(a) * b`.
pub fn conj_mul_add_assign(acc: &mut ComplexValue, a: &ComplexValue, b: &ComplexValue) {
    let p = acc.prec();
    let re = Float::with_val(p, &a.re * &b.re + &a.im * &b.im);
    let im = Float::with_val(p, &a.re * &b.im - &a.im * &b.re);
    acc.re += re;
    acc.im += im;
}
