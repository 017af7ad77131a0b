//! The maps `F+(z) = z / (2 - z)` and `F-(z) = F+(-z)`, which send the
//! half-planes `Re z < 1` and `Re z > -1` into the unit disc.

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

/// `F+(z)` for `Re z < 1`.
pub fn conformal_fplus(z: &ComplexValue) -> Result<ComplexValue> {
    if *z.re() >= 1u32 {
        return Err(Error::Domain(format!("F+ needs Re z < 1, got {z}")));
    }
    Ok(fplus_closure(z))
}

/// `F-(z)` for `Re z > -1`.
pub fn conformal_fminus(z: &ComplexValue) -> Result<ComplexValue> {
    conformal_fplus(&-z)
}

/// `F+` on the closed half-plane `Re z <= 1`, so `F+(1) = 1`.
pub(crate) fn fplus_closure(z: &ComplexValue) -> ComplexValue {
    let two = ComplexValue::from_f64(z.precision(), 2.0, 0.0);
    z / &(&two - z)
}

pub(crate) fn fminus_closure(z: &ComplexValue) -> ComplexValue {
    fplus_closure(&-z)
}
