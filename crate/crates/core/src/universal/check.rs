use crate::numerics::{ComplexValue, Precision, Real};

use super::schedule::WeightFn;

pub(crate) fn pow2(prec: Precision, e: i32) -> Real {
    Real::with_val(prec.bits(), 1) << e
}

pub(crate) struct Growth {
    pub ratio: Real,
    pub min_w: Real,
    pub margin: Real,
}

/// `max |q| / w`, `min w` and `min (bound w - |q|)` over the points where `w`
/// is finite.
pub(crate) fn growth<'a, F>(
    q: F,
    points: impl Iterator<Item = &'a ComplexValue>,
    w: WeightFn,
    bound: &Real,
    prec: Precision,
) -> Growth
where
    F: Fn(&ComplexValue) -> ComplexValue,
{
    let bits = prec.bits();
    let mut ratio = Real::with_val(bits, 0);
    let mut min_w = Real::with_val(bits, rug::float::Special::Infinity);
    let mut margin = Real::with_val(bits, rug::float::Special::Infinity);
    for z in points {
        let wz = w.eval(z);
        if wz.is_infinite() {
            continue;
        }
        let a = q(z).abs();
        let r = Real::with_val(bits, &a / &wz);
        if r > ratio {
            ratio = r;
        }
        let m = Real::with_val(bits, bound * &wz) - a;
        if m < margin {
            margin = m;
        }
        if wz < min_w {
            min_w = wz;
        }
    }
    Growth { ratio, min_w, margin }
}

pub(crate) fn sup_abs<'a, F>(f: F, points: impl Iterator<Item = &'a ComplexValue>, prec: Precision) -> Real
where
    F: Fn(&ComplexValue) -> ComplexValue,
{
    let mut worst = Real::with_val(prec.bits(), 0);
    for z in points {
        let a = f(z).abs();
        if a > worst {
            worst = a;
        }
    }
    worst
}

/// Smallest `n` in `[lo, n_max]` with `ok(n)`, assuming `ok` is monotone.
pub(crate) fn smallest_passing<F: Fn(usize) -> bool>(lo: usize, n_max: usize, ok: F) -> Option<usize> {
    if ok(lo) {
        return Some(lo);
    }
    let (mut bad, mut step) = (lo, 1usize);
    let good = loop {
        let n = bad.checked_add(step)?;
        if n > n_max {
            if bad < n_max && ok(n_max) {
                break n_max;
            }
            return None;
        }
        if ok(n) {
            break n;
        }
        bad = n;
        step *= 2;
    };
    let (mut bad, mut good) = (bad, good);
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if ok(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn search_finds_threshold(lo in 0usize..50, t in 0usize..5000) {
            let got = smallest_passing(lo, 4096, |n| n >= t);
            if t > 4096 {
                prop_assert_eq!(got, None);
            } else {
                prop_assert_eq!(got, Some(t.max(lo)));
            }
        }
    }
}
