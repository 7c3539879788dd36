//! Two-term Machin-like formulas
//!
//! ```text
//! pi/4 = 2^(k-1) atan(1/gamma) + atan(second)
//! ```
//!
//! `gamma` comes from the nested radicals `a_0 = 0`, `a_(j+1) = sqrt(2 + a_j)`
//! as `a_k / sqrt(2 - a_(k-1))` (floored or ceiled, optionally on a `10^-m`
//! grid), so that `2^(k-1)/gamma` is close to `pi/4`. The second argument is
//! `(1 - sin(2^(k-1) theta)) / cos(2^(k-1) theta)` with
//! `tan(theta) = 2 gamma/(gamma^2 - 1)`; starting from the exact rational
//! `sin(theta) = 2 gamma/(gamma^2+1)`, `cos(theta) = (gamma^2-1)/(gamma^2+1)`
//! it is reached by `k - 1` angle doublings, either exactly or in fixed point.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{EmiError, Result};
use crate::fixed::{pow10, FixedReal};
use crate::precision::Precision;
use crate::rational::approx_decimal_digits;
use crate::series::{atan_emi, terms_for_digits};

/// Default digit budget for exact second arguments.
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedRadicalPair {
    pub k: u32,
    pub a_km1: FixedReal,
    pub a_k: FixedReal,
}

/// `a_(k-1)` and `a_k` of `a_0 = 0, a_(j+1) = sqrt(2 + a_j)`.
pub fn nested_radical(k: u32, prec: Precision) -> Result<NestedRadicalPair> {
    if k == 0 {
        return Err(EmiError::InvalidArgument("k must be at least 1".into()));
    }
    let two = FixedReal::from_int(2);
    let mut prev = FixedReal::zero();
    let mut cur = FixedReal::zero();
    for _ in 0..k {
        prev = cur;
        cur = (&two + &prev).sqrt(prec)?;
    }
    Ok(NestedRadicalPair {
        k,
        a_km1: prev,
        a_k: cur,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundingMode {
    Floor,
    Ceil,
}

impl FromStr for RoundingMode {
    type Err = EmiError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floor" => Ok(RoundingMode::Floor),
            "ceil" => Ok(RoundingMode::Ceil),
            other => Err(EmiError::Parse(format!(
                "rounding mode must be floor or ceil, got {other:?}"
            ))),
        }
    }
}

/// `a_k / sqrt(2 - a_(k-1))` at the working scale of `prec`.
///
/// `2 - a_(k-1)` is about `(pi/2^k)^2`, so roughly `0.6 k` leading digits
/// cancel; the radicals are carried with that many extra digits.
pub fn gamma_ratio(k: u32, prec: Precision) -> Result<FixedReal> {
    if k < 2 {
        return Err(EmiError::InvalidArgument("k must be at least 2".into()));
    }
    let inner = prec.inflate(k + k / 4 + 2);
    let pair = nested_radical(k, inner)?;
    let gap = (&FixedReal::from_int(2) - &pair.a_km1).sqrt(inner)?;
    Ok(pair.a_k.div(&gap, inner)?.round_to(prec.working_scale()))
}

/// `floor` or `ceil` of `10^m a_k / sqrt(2 - a_(k-1))`, times `10^-m`.
///
/// Fails with [`EmiError::AmbiguousRounding`] when the fractional part is
/// within `10 * 10^-guard` of an integer.
pub fn gamma_select(k: u32, m: u32, mode: RoundingMode, prec: Precision) -> Result<BigRational> {
    let inner = prec.inflate(m);
    let scaled = gamma_ratio(k, inner)?.mul_int(&pow10(m));
    let unit = pow10(scaled.scale());
    let (floor, rem) = scaled.mantissa().div_mod_floor(&unit);
    let margin = pow10(scaled.scale() + 1 - prec.guard().min(scaled.scale()));
    if rem < margin || &unit - &rem < margin {
        return Err(EmiError::AmbiguousRounding {
            value: scaled.to_digits(prec.digits().min(scaled.scale()))?,
        });
    }
    let chosen = match mode {
        RoundingMode::Floor => floor,
        RoundingMode::Ceil => floor + 1,
    };
    Ok(BigRational::new(chosen, pow10(m)))
}

/// `2^(k-1)/gamma - pi/4` for a given `pi`.
pub fn lead_residual(k: u32, gamma: &BigRational, pi: &FixedReal, prec: Precision) -> Result<FixedReal> {
    let lead = FixedReal::from_rational(&(lead_coefficient(k) / gamma), prec.working_scale());
    Ok(&lead - &pi.div_int(&BigInt::from(4), prec)?)
}

fn lead_coefficient(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << (k - 1))
}

fn check_gamma(k: u32, gamma: &BigRational) -> Result<()> {
    if k < 2 {
        return Err(EmiError::InvalidArgument("k must be at least 2".into()));
    }
    if *gamma <= BigRational::one() {
        return Err(EmiError::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
    }
    Ok(())
}

/// Exact `(sin theta, cos theta)` over a common denominator: `(S, C, D)`.
fn seed_triple(gamma: &BigRational) -> (BigInt, BigInt, BigInt) {
    let (p, q) = (gamma.numer(), gamma.denom());
    let s = BigInt::from(2) * p * q;
    let c = p * p - q * q;
    let d = p * p + q * q;
    let g = s.gcd(&c).gcd(&d);
    (s / &g, c / &g, d / &g)
}

/// Exact second argument after `k - 1` doublings.
///
/// The doublings run on integer triples `(S, C, D)` with
/// `sin = S/D, cos = C/D`, i.e. `(2SC, C^2 - S^2, D^2)`, and reduce once at
/// the end. Fails with [`EmiError::DigitCapExceeded`] before a doubling would
/// push the denominator past `cap` decimal digits.
pub fn second_argument_exact(k: u32, gamma: &BigRational, cap: u64) -> Result<BigRational> {
    check_gamma(k, gamma)?;
    let (mut s, mut c, mut d) = seed_triple(gamma);
    for _ in 1..k {
        let next_digits = 2 * approx_decimal_digits(&d);
        if next_digits > cap {
            return Err(EmiError::DigitCapExceeded {
                digits: next_digits,
                cap,
            });
        }
        let s_next = BigInt::from(2) * &s * &c;
        c = &c * &c - &s * &s;
        s = s_next;
        d = &d * &d;
    }
    if c.is_zero() {
        return Err(EmiError::DivisionByZero);
    }
    Ok(BigRational::new(&d - &s, c))
}

/// Fixed-point second argument, correct to the working scale of `prec`.
///
/// Doublings run with `2k` extra guard digits. The final quotient uses
/// `cos/(1 + sin)` when `sin >= 0`, which equals `(1 - sin)/cos` without the
/// cancellation near `sin = 1`.
pub fn second_argument_fixed(k: u32, gamma: &BigRational, prec: Precision) -> Result<FixedReal> {
    check_gamma(k, gamma)?;
    let inner = prec.inflate(2 * k);
    let scale = inner.working_scale();
    let (s0, c0, d0) = seed_triple(gamma);
    let mut s = FixedReal::from_rational(&BigRational::new(s0, d0.clone()), scale);
    let mut c = FixedReal::from_rational(&BigRational::new(c0, d0), scale);
    let two = BigInt::from(2);
    for _ in 1..k {
        let s_next = s.mul(&c, inner).mul_int(&two);
        c = &c.mul(&c, inner) - &s.mul(&s, inner);
        s = s_next;
    }
    let one = FixedReal::one();
    let v = if s.is_negative() {
        (&one - &s).div(&c, inner)?
    } else {
        c.div(&(&one + &s), inner)?
    };
    Ok(v.round_to(prec.working_scale()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondArgMode {
    Exact { cap: u64 },
    Fixed,
}

/// A generated formula `pi/4 = 2^(k-1) atan(1/gamma) + atan(second_arg)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachinTwoTerm {
    k: u32,
    gamma: BigRational,
    second_arg: Option<BigRational>,
    second_arg_fx: FixedReal,
    digits: u32,
}

impl MachinTwoTerm {
    /// Builds the formula for a chosen `gamma`. `prec.digits()` is recorded
    /// as the number of correct digits of the fixed second argument.
    pub fn from_gamma(k: u32, gamma: BigRational, mode: SecondArgMode, prec: Precision) -> Result<Self> {
        check_gamma(k, &gamma)?;
        let (second_arg, second_arg_fx) = match mode {
            SecondArgMode::Exact { cap } => {
                let exact = second_argument_exact(k, &gamma, cap)?;
                let fx = FixedReal::from_rational(&exact, prec.working_scale());
                (Some(exact), fx)
            }
            SecondArgMode::Fixed => (None, second_argument_fixed(k, &gamma, prec)?),
        };
        Ok(MachinTwoTerm {
            k,
            gamma,
            second_arg,
            second_arg_fx,
            digits: prec.digits(),
        })
    }

    /// Selects `gamma` with [`gamma_select`] and builds the formula.
    pub fn generate(k: u32, grain: u32, rounding: RoundingMode, mode: SecondArgMode, prec: Precision) -> Result<Self> {
        let gamma = gamma_select(k, grain, rounding, prec.with_target(prec.digits().max(60)))?;
        Self::from_gamma(k, gamma, mode, prec)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    pub fn second_arg(&self) -> Option<&BigRational> {
        self.second_arg.as_ref()
    }

    pub fn second_arg_fx(&self) -> &FixedReal {
        &self.second_arg_fx
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// `2^(k-1)`.
    pub fn lead_coefficient(&self) -> BigInt {
        BigInt::one() << (self.k - 1)
    }

    /// `n_max` for [`machin_eval`] to reach `digits` digits of pi with `M` nodes.
    pub fn terms_for_digits(&self, subintervals: u32, digits: u32) -> u32 {
        let lead_digits = (f64::from(self.k - 1) * std::f64::consts::LOG10_2).ceil() as u32 + 1;
        let inv_gamma = 1.0 / ratio_to_f64(&self.gamma);
        let first = terms_for_digits(inv_gamma, subintervals, digits + lead_digits);
        let second = terms_for_digits(self.second_arg_fx.abs().to_f64(), subintervals, digits + 1);
        first.max(second)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    FixedReal::from_rational(r, 20).to_f64()
}

/// Record form:
/// `k=<int> gamma=<num>/<den> second_arg=<num>/<den>|fixed:<decimal> digits=<p>`.
impl fmt::Display for MachinTwoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let second = match &self.second_arg {
            Some(r) => format!("{}/{}", r.numer(), r.denom()),
            None => format!("fixed:{}", self.second_arg_fx),
        };
        write!(
            f,
            "k={} gamma={}/{} second_arg={} digits={}",
            self.k,
            self.gamma.numer(),
            self.gamma.denom(),
            second,
            self.digits
        )
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || EmiError::Parse(format!("expected <num>/<den>, got {s:?}"));
    let (n, d) = s.split_once('/').ok_or_else(bad)?;
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if !d.is_positive() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for MachinTwoTerm {
    type Err = EmiError;

    fn from_str(line: &str) -> Result<Self> {
        let mut k = None;
        let mut gamma = None;
        let mut second = None;
        let mut digits = None;
        for field in line.split_ascii_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| EmiError::Parse(format!("field without '=': {field:?}")))?;
            match key {
                "k" => k = Some(value.parse::<u32>().map_err(|e| EmiError::Parse(format!("k: {e}")))?),
                "gamma" => gamma = Some(parse_ratio(value)?),
                "second_arg" => second = Some(value.to_string()),
                "digits" => {
                    digits = Some(
                        value
                            .parse::<u32>()
                            .map_err(|e| EmiError::Parse(format!("digits: {e}")))?,
                    )
                }
                other => return Err(EmiError::Parse(format!("unknown field {other:?}"))),
            }
        }
        let missing = |name: &str| EmiError::Parse(format!("missing field {name}"));
        let k = k.ok_or_else(|| missing("k"))?;
        let gamma = gamma.ok_or_else(|| missing("gamma"))?;
        let second = second.ok_or_else(|| missing("second_arg"))?;
        let digits = digits.ok_or_else(|| missing("digits"))?;
        check_gamma(k, &gamma)?;
        let (second_arg, second_arg_fx) = match second.strip_prefix("fixed:") {
            Some(decimal) => (None, decimal.parse::<FixedReal>()?),
            None => {
                let exact = parse_ratio(&second)?;
                let fx = FixedReal::from_rational(&exact, Precision::with_digits(digits).working_scale());
                (Some(exact), fx)
            }
        };
        Ok(MachinTwoTerm {
            k,
            gamma,
            second_arg,
            second_arg_fx,
            digits,
        })
    }
}

/// `4 (2^(k-1) atan(1/gamma) + atan(second_arg))` with both arctangents from
/// the generalized expansion at `M` nodes and `n_max` terms.
pub fn machin_eval(f: &MachinTwoTerm, subintervals: u32, n_max: u32, prec: Precision) -> Result<FixedReal> {
    let lead = f.lead_coefficient();
    // the lead coefficient multiplies the rounding error of the first term
    let inner = prec.inflate(approx_decimal_digits(&lead) as u32 + 1);
    let inv_gamma = FixedReal::from_rational(&f.gamma.recip(), inner.working_scale());
    let first = atan_emi(&inv_gamma, subintervals, n_max, inner)?.value;
    let second = atan_emi(&f.second_arg_fx, subintervals, n_max, inner)?.value;
    let quarter = &first.mul_int(&lead) + &second;
    Ok(quarter.mul_int(&BigInt::from(4)).round_to(prec.working_scale()))
}

/// Correct digits of pi at one truncation, and the gain over the previous one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncrementRecord {
    pub n_max: u32,
    pub correct_digits: i64,
    pub gained: Option<i64>,
}

/// `floor(-log10 |approx - reference|)`; `None` when they coincide at the
/// compared scale.
pub fn correct_digits(approx: &FixedReal, reference: &FixedReal) -> Option<i64> {
    let err = (approx - reference).abs();
    if err.is_zero() {
        None
    } else {
        Some((-err.log10_abs()).floor() as i64)
    }
}

/// Evaluates `f` for each `n_max` in `range` and records correct digits
/// against `pi_ref`. Stops at the first truncation that matches the
/// reference exactly.
pub fn digits_per_increment(
    f: &MachinTwoTerm,
    subintervals: u32,
    range: std::ops::RangeInclusive<u32>,
    pi_ref: &FixedReal,
    prec: Precision,
) -> Result<Vec<IncrementRecord>> {
    let mut out: Vec<IncrementRecord> = Vec::new();
    for n_max in range {
        let approx = machin_eval(f, subintervals, n_max, prec)?;
        let Some(digits) = correct_digits(&approx, pi_ref) else {
            break;
        };
        let gained = out.last().map(|prev| digits - prev.correct_digits);
        out.push(IncrementRecord {
            n_max,
            correct_digits: digits,
            gained,
        });
    }
    Ok(out)
}

/// `16 sum_{m=1..m_max} sum_{n=1..2m-1} (-4)^(n-1) C(2m-1, 2n-1) / ((2m-1) 5^(2m-1))`.
pub fn binomial_pi_series(m_max: u32, prec: Precision) -> Result<FixedReal> {
    if m_max == 0 {
        return Err(EmiError::InvalidArgument("m_max must be at least 1".into()));
    }
    let mut row = vec![BigInt::one()];
    let mut sum = BigRational::zero();
    let mut five_pow = BigInt::from(5);
    let twenty_five = BigInt::from(25);
    for m in 1..=m_max {
        let r = 2 * m - 1;
        // advance Pascal's row to index r
        while row.len() < r as usize + 1 {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
            next.push(BigInt::one());
            row = next;
        }
        if m > 1 {
            five_pow *= &twenty_five;
        }
        let mut inner = BigInt::zero();
        let mut weight = BigInt::one();
        for n in 1..=m {
            inner += &weight * &row[(2 * n - 1) as usize];
            weight *= -4;
        }
        sum += BigRational::new(inner, BigInt::from(r) * &five_pow);
    }
    Ok(FixedReal::from_rational(
        &(sum * BigRational::from_integer(16.into())),
        prec.working_scale(),
    ))
}
