//! Decimal fixed-point reals on top of `BigInt`.
//!
//! A [`FixedReal`] is `mantissa * 10^(-scale)`. Addition and subtraction are
//! exact and keep the larger scale; multiplication, division and square root
//! round half-to-even to the working scale of a [`Precision`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{EmiError, Result};
use crate::precision::Precision;

#[derive(Clone, Debug)]
pub struct FixedReal {
    mantissa: BigInt,
    scale: u32,
}

pub(crate) fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u32).pow(exp)
}

/// `n / d` rounded half-to-even, `d > 0`. Symmetric under `n -> -n`.
pub(crate) fn div_round_half_even(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let (q, r) = n.magnitude().div_rem(d.magnitude());
    let twice: num_bigint::BigUint = &r << 1u32;
    let round_up = match twice.cmp(d.magnitude()) {
        Ordering::Greater => true,
        Ordering::Equal => q.is_odd(),
        Ordering::Less => false,
    };
    let q = if round_up { q + 1u32 } else { q };
    let sign = if q.is_zero() { Sign::NoSign } else { n.sign() };
    BigInt::from_biguint(sign, q)
}

/// Floor of the square root of a non-negative integer, by Newton's method
/// from a double-precision seed.
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    if n.is_zero() {
        return BigInt::zero();
    }
    let bits = n.bits();
    // keep ~104 leading bits for the f64 estimate, shift even
    let shift = bits.saturating_sub(104) & !1;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    let seed = BigInt::from(top.sqrt() as u128 + 1) << (shift / 2);

    let mut x = seed;
    loop {
        let y: BigInt = (&x + n / &x) >> 1;
        let step = (&y - &x).abs();
        x = y;
        if step <= BigInt::one() {
            break;
        }
    }
    while &x * &x > *n {
        x -= 1;
    }
    loop {
        let next = &x + 1;
        if &next * &next <= *n {
            x = next;
        } else {
            break;
        }
    }
    x
}

impl FixedReal {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        FixedReal { mantissa, scale }
    }

    pub fn zero() -> Self {
        FixedReal::new(BigInt::zero(), 0)
    }

    pub fn one() -> Self {
        FixedReal::new(BigInt::one(), 0)
    }

    pub fn from_int(v: i64) -> Self {
        FixedReal::new(BigInt::from(v), 0)
    }

    pub fn from_integer(v: BigInt) -> Self {
        FixedReal::new(v, 0)
    }

    /// `r` rounded half-to-even to `scale` fractional digits.
    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        let num = r.numer() * pow10(scale);
        FixedReal::new(div_round_half_even(&num, r.denom()), scale)
    }

    /// Nearest value to an `f64` at the given scale (exact binary expansion,
    /// then rounded).
    pub fn from_f64(v: f64, scale: u32) -> Result<Self> {
        let r = BigRational::from_float(v).ok_or_else(|| EmiError::Parse(format!("non-finite value {v}")))?;
        Ok(Self::from_rational(&r, scale))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        FixedReal::new(self.mantissa.abs(), self.scale)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.scale))
    }

    /// Round half-to-even to `scale` digits; widening pads exactly.
    pub fn round_to(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => FixedReal::new(&self.mantissa * pow10(scale - self.scale), scale),
            Ordering::Less => FixedReal::new(div_round_half_even(&self.mantissa, &pow10(self.scale - scale)), scale),
        }
    }

    /// Drop digits beyond `scale`, rounding toward zero.
    pub fn truncate_to(&self, scale: u32) -> Self {
        if scale >= self.scale {
            return self.round_to(scale);
        }
        FixedReal::new(&self.mantissa / pow10(self.scale - scale), scale)
    }

    fn aligned(&self, other: &FixedReal) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(other.scale);
        let a = &self.mantissa * pow10(scale - self.scale);
        let b = &other.mantissa * pow10(scale - other.scale);
        (a, b, scale)
    }

    /// Exact product, scale `a.scale + b.scale`.
    pub fn mul_exact(&self, other: &FixedReal) -> Self {
        FixedReal::new(&self.mantissa * &other.mantissa, self.scale + other.scale)
    }

    /// Product rounded to the working scale of `prec`.
    pub fn mul(&self, other: &FixedReal, prec: Precision) -> Self {
        self.mul_exact(other).round_to(prec.working_scale())
    }

    /// Exact multiplication by an integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        FixedReal::new(&self.mantissa * k, self.scale)
    }

    /// Quotient rounded half-to-even to the working scale.
    pub fn div(&self, other: &FixedReal, prec: Precision) -> Result<Self> {
        if other.is_zero() {
            return Err(EmiError::DivisionByZero);
        }
        let target = prec.working_scale();
        // result mantissa = a.m * 10^(target + b.s - a.s) / b.m
        let exp = i64::from(target) + i64::from(other.scale) - i64::from(self.scale);
        let (mut num, mut den) = if exp >= 0 {
            (&self.mantissa * pow10(exp as u32), other.mantissa.clone())
        } else {
            (self.mantissa.clone(), &other.mantissa * pow10((-exp) as u32))
        };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(FixedReal::new(div_round_half_even(&num, &den), target))
    }

    /// Division by a non-zero integer, rounded to the working scale.
    pub fn div_int(&self, k: &BigInt, prec: Precision) -> Result<Self> {
        self.div(&FixedReal::from_integer(k.clone()), prec)
    }

    /// Square root rounded to the working scale.
    pub fn sqrt(&self, prec: Precision) -> Result<Self> {
        if self.is_negative() {
            return Err(EmiError::NegativeOperand);
        }
        let target = prec.working_scale();
        let a = if self.scale > 2 * target {
            self.round_to(2 * target)
        } else {
            self.clone()
        };
        let radicand = &a.mantissa * pow10(2 * target - a.scale);
        let mut root = isqrt(&radicand);
        // round half: radicand >= root^2 + root + 1  <=>  sqrt > root + 1/2
        if radicand > &root * &root + &root {
            root += 1;
        }
        Ok(FixedReal::new(root, target))
    }

    /// Decimal rendering truncated (toward zero) to `n` fractional digits.
    /// The sign of the full value is kept, so `-0.001` renders as `-0.00`.
    pub fn to_digits(&self, n: u32) -> Result<String> {
        if n > self.scale {
            return Err(EmiError::InsufficientScale {
                requested: n,
                available: self.scale,
            });
        }
        let t = self.truncate_to(n);
        let mut digits = t.mantissa.magnitude().to_string();
        let n = n as usize;
        if digits.len() <= n {
            digits = format!("{}{}", "0".repeat(n + 1 - digits.len()), digits);
        }
        let sign = if self.is_negative() { "-" } else { "" };
        if n == 0 {
            Ok(format!("{sign}{digits}"))
        } else {
            let (int, frac) = digits.split_at(digits.len() - n);
            Ok(format!("{sign}{int}.{frac}"))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * 10f64.powf(self.log10_abs())
    }

    /// `log10(|self|)` in double precision; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.mantissa.magnitude();
        let bits = mag.bits();
        let shift = bits.saturating_sub(64);
        let top = (mag >> shift).to_f64().unwrap_or(f64::MAX);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2 - f64::from(self.scale)
    }

    /// Scientific notation with `sig` significant digits, e.g. `4.10922e-9`.
    /// Rounded half-to-even from the exact decimal value.
    pub fn to_scientific(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.is_zero() {
            return format!("{}e0", format_sig("0".repeat(sig)));
        }
        let mag = self.mantissa.magnitude().to_string();
        let len = mag.len();
        let mut exponent = len as i64 - 1 - i64::from(self.scale);
        let mut lead = if len > sig {
            let m = BigInt::from_biguint(Sign::Plus, self.mantissa.magnitude().clone());
            div_round_half_even(&m, &pow10((len - sig) as u32)).to_string()
        } else {
            format!("{mag}{}", "0".repeat(sig - len))
        };
        if lead.len() > sig {
            lead.truncate(sig);
            exponent += 1;
        }
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}{}e{exponent}", format_sig(lead))
    }
}

fn format_sig(digits: String) -> String {
    if digits.len() == 1 {
        digits
    } else {
        format!("{}.{}", &digits[..1], &digits[1..])
    }
}

impl FromStr for FixedReal {
    type Err = EmiError;

    /// Accepts `[+-]digits[.digits][e[+-]digits]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || EmiError::Parse(format!("not a finite decimal: {s:?}"));
        let s = s.trim();
        let (body, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, body) = match body.as_bytes().first() {
            Some(b'-') => (true, &body[1..]),
            Some(b'+') => (false, &body[1..]),
            _ => (false, body),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut mantissa: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
        if negative {
            mantissa = -mantissa;
        }
        let scale = frac.len() as i64 - exp;
        if scale >= 0 {
            let scale = u32::try_from(scale).map_err(|_| bad())?;
            Ok(FixedReal::new(mantissa, scale))
        } else {
            let up = u32::try_from(-scale).map_err(|_| bad())?;
            Ok(FixedReal::new(mantissa * pow10(up), 0))
        }
    }
}

impl fmt::Display for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // to_digits at the full scale cannot fail
        f.write_str(&self.to_digits(self.scale).expect("full-scale rendering"))
    }
}

impl PartialEq for FixedReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FixedReal {}

impl PartialOrd for FixedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FixedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.scale == other.scale {
            return self.mantissa.cmp(&other.mantissa);
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl Add for &FixedReal {
    type Output = FixedReal;
    fn add(self, rhs: &FixedReal) -> FixedReal {
        let (a, b, scale) = self.aligned(rhs);
        FixedReal::new(a + b, scale)
    }
}

impl Sub for &FixedReal {
    type Output = FixedReal;
    fn sub(self, rhs: &FixedReal) -> FixedReal {
        let (a, b, scale) = self.aligned(rhs);
        FixedReal::new(a - b, scale)
    }
}

impl Add for FixedReal {
    type Output = FixedReal;
    fn add(self, rhs: FixedReal) -> FixedReal {
        &self + &rhs
    }
}

impl Sub for FixedReal {
    type Output = FixedReal;
    fn sub(self, rhs: FixedReal) -> FixedReal {
        &self - &rhs
    }
}

impl Neg for FixedReal {
    type Output = FixedReal;
    fn neg(self) -> FixedReal {
        FixedReal::new(-self.mantissa, self.scale)
    }
}

impl Neg for &FixedReal {
    type Output = FixedReal;
    fn neg(self) -> FixedReal {
        FixedReal::new(-&self.mantissa, self.scale)
    }
}

impl From<i64> for FixedReal {
    fn from(v: i64) -> Self {
        FixedReal::from_int(v)
    }
}
