//! Exact rational helpers. The rational type itself is `num_rational::BigRational`,
//! which keeps every value in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::Signed;

pub use num_rational::BigRational;

/// Double-angle step on an exact point of the unit circle:
/// `(sin t, cos t) -> (sin 2t, cos 2t) = (2sc, c^2 - s^2)`.
pub fn rat_double_angle_step(s: &BigRational, c: &BigRational) -> (BigRational, BigRational) {
    debug_assert!(
        s * s + c * c == BigRational::from_integer(1.into()),
        "input is not on the unit circle"
    );
    let two = BigRational::from_integer(2.into());
    (&two * s * c, c * c - s * s)
}

/// Decimal digit count of `|n|` from its bit length; exact or one high.
pub(crate) fn approx_decimal_digits(n: &BigInt) -> u64 {
    let bits = n.abs().bits();
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
}
