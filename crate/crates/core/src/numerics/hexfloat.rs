//! Bit-exact text encoding for multiprecision reals.
//!
//! A finite value `m * 2^e` is written as `[-]0x<hex m>p<e>`; the mantissa is
//! the integer significand returned by MPFR, so decoding at the same
//! precision reproduces the original bits.

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numerics::complex::{ComplexValue, Precision, Real};

pub fn encode_real(x: &Real) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0x0p0".into() } else { "0x0p0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    let (m, e) = x.to_integer_exp().expect("finite value");
    // Strip trailing zero bits so the encoding is canonical.
    let tz = m.find_one(0).unwrap_or(0);
    let m = Integer::from(&m >> tz);
    let e = e as i64 + tz as i64;
    let sign = if m < 0 { "-" } else { "" };
    let mag = Integer::from(m.abs_ref());
    format!("{sign}0x{}p{e}", mag.to_string_radix(16))
}

pub fn decode_real(s: &str, prec: Precision) -> Result<Real> {
    let bits = prec.bits();
    match s {
        "nan" => return Ok(Float::with_val(bits, rug::float::Special::Nan)),
        "inf" => return Ok(Float::with_val(bits, rug::float::Special::Infinity)),
        "-inf" => return Ok(Float::with_val(bits, rug::float::Special::NegInfinity)),
        _ => {}
    }
    let bad = || Error::Format(format!("malformed hex float {s:?}"));
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
    let (mant, exp) = rest.split_once('p').ok_or_else(bad)?;
    let m = Integer::from_str_radix(mant, 16).map_err(|_| bad())?;
    let e: i32 = exp.parse().map_err(|_| bad())?;
    if m.significant_bits() > bits {
        return Err(Error::Format(format!("hex float {s:?} needs {} bits, precision is {bits}", m.significant_bits())));
    }
    let mut x = Float::with_val(bits, &m);
    x <<= e;
    if neg {
        x = -x;
    }
    Ok(x)
}

pub fn encode_complex(z: &ComplexValue) -> [String; 2] {
    [encode_real(z.re()), encode_real(z.im())]
}

pub fn decode_complex(pair: &[String; 2], prec: Precision) -> Result<ComplexValue> {
    Ok(ComplexValue::new(decode_real(&pair[0], prec)?, decode_real(&pair[1], prec)?))
}

pub fn encode_f64(x: f64) -> String {
    encode_real(&Float::with_val(53, x))
}

pub fn decode_f64(s: &str) -> Result<f64> {
    Ok(decode_real(s, Precision::new(53)?)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        let p = Precision::default();
        assert_eq!(encode_real(&p.real(1.0)), "0x1p0");
        assert_eq!(encode_real(&p.real(-0.75)), "-0x3p-2");
        assert_eq!(encode_real(&p.real(0.0)), "0x0p0");
        assert_eq!(decode_real("0x3p-2", p).unwrap(), p.real(0.75));
        assert!(decode_real("0x3q-2", p).is_err());
    }

    #[test]
    fn full_precision_round_trip() {
        let p = Precision::default();
        let x = p.real(2.0).sqrt();
        assert_eq!(decode_real(&encode_real(&x), p).unwrap(), x);
        let pi = p.pi();
        assert_eq!(decode_real(&encode_real(&pi), p).unwrap(), pi);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(a in any::<f64>().prop_filter("finite", |v| v.is_finite()), b in 1e-300f64..1e300) {
            let p = Precision::default();
            // Mix in a division so the mantissa uses all 256 bits.
            let x = Float::with_val(p.bits(), a) / Float::with_val(p.bits(), b + 3.0);
            let back = decode_real(&encode_real(&x), p).unwrap();
            prop_assert_eq!(back.to_bits_string(), x.to_bits_string());
            prop_assert_eq!(decode_f64(&encode_f64(a)).unwrap().to_bits(), a.to_bits());
        }
    }

    trait BitsString {
        fn to_bits_string(&self) -> String;
    }

    impl BitsString for Float {
        fn to_bits_string(&self) -> String {
            format!("{:?}|{}", self.to_integer_exp(), self.is_sign_negative())
        }
    }
}
