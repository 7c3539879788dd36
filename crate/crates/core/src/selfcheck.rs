//! Reference pi from two independent Machin-type identities.
//!
//! `pi = 4 (4 atan(1/5) - atan(1/239))` and `pi = 4 (2 atan(1/2) - atan(1/7))`
//! share no arctangent argument, so agreement to `p` digits is a cheap check
//! on the whole series stack.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{EmiError, Result};
use crate::fixed::FixedReal;
use crate::precision::Precision;
use crate::series::atan_to_precision;

fn atan_inverse(q: i64, digits: u32, scale: u32) -> Result<FixedReal> {
    let x = FixedReal::from_rational(&BigRational::new(1.into(), q.into()), scale);
    Ok(atan_to_precision(&x, 1, digits)?.value)
}

fn combine(a: i64, p: i64, b: i64, q: i64, digits: u32) -> Result<FixedReal> {
    let prec = Precision::with_digits(digits);
    let inner = prec.inflate(2);
    let scale = inner.working_scale();
    let first = atan_inverse(p, inner.working_scale(), scale)?;
    let second = atan_inverse(q, inner.working_scale(), scale)?;
    let quarter = &first.mul_int(&BigInt::from(a)) - &second.mul_int(&BigInt::from(b));
    Ok(quarter.mul_int(&BigInt::from(4)).round_to(prec.working_scale()))
}

/// `4 (4 atan(1/5) - atan(1/239))`, good to `digits` plus the default guard.
pub fn pi_machin(digits: u32) -> Result<FixedReal> {
    combine(4, 5, 1, 239, digits)
}

/// `4 (2 atan(1/2) - atan(1/7))`, good to `digits` plus the default guard.
pub fn pi_two_seven(digits: u32) -> Result<FixedReal> {
    combine(2, 2, 1, 7, digits)
}

/// Returns `a` when `|a - b| < 10^-digits`, [`EmiError::SelfCheckFailed`]
/// otherwise.
pub fn check_agreement(a: &FixedReal, b: &FixedReal, digits: u32) -> Result<FixedReal> {
    let diff = (a - b).abs();
    if diff < FixedReal::new(BigInt::from(1), digits) {
        Ok(a.clone())
    } else {
        Err(EmiError::SelfCheckFailed {
            difference: diff.to_scientific(6),
        })
    }
}

/// Pi to `digits` fractional digits (plus guard), verified by two identities.
pub fn self_check_pi(digits: u32) -> Result<FixedReal> {
    let a = pi_machin(digits)?;
    let b = pi_two_seven(digits)?;
    check_agreement(&a, &b, digits + 1)
}

/// Checks `value` against the self-checked pi to `digits` digits.
pub fn verify_pi(value: &FixedReal, digits: u32) -> Result<FixedReal> {
    let reference = self_check_pi(digits)?;
    check_agreement(value, &reference, digits)
}
