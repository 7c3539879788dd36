//! Arctangent series.
//!
//! The main entry point is [`atan_emi`], the subinterval-generalized expansion
//!
//! ```text
//! atan(x) = 2 * sum_{m=1..M} sum_{n=1..n_max}
//!           alpha_n / ((2n-1) (2m-1)^(2n-1) (alpha_n^2 + beta_n^2))
//! ```
//!
//! where `(alpha_n, beta_n)` run the two-step recurrence of [`AlphaBetaState`]
//! at `x*t` with `t = (m - 1/2)/M`. No square roots or complex numbers are
//! involved. [`atan_emi_m1`], [`atan_maclaurin`] and [`atan_euler`] are the
//! single-node form and the two classical baselines, and
//! [`atan_complex_oracle`] evaluates the same double sum through complex
//! powers in `f64` as an independent check.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{EmiError, Result};
use crate::fixed::FixedReal;
use crate::precision::Precision;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesId {
    Maclaurin,
    Euler,
    EmiM1,
    EmiGeneral,
    ComplexOracle,
}

impl SeriesId {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesId::Maclaurin => "maclaurin",
            SeriesId::Euler => "euler",
            SeriesId::EmiM1 => "emi-m1",
            SeriesId::EmiGeneral => "emi",
            SeriesId::ComplexOracle => "complex-oracle",
        }
    }
}

impl std::str::FromStr for SeriesId {
    type Err = EmiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maclaurin" => Ok(SeriesId::Maclaurin),
            "euler" => Ok(SeriesId::Euler),
            "emi-m1" => Ok(SeriesId::EmiM1),
            "emi" => Ok(SeriesId::EmiGeneral),
            "complex-oracle" => Ok(SeriesId::ComplexOracle),
            other => Err(EmiError::Parse(format!("unknown series {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesResult {
    pub value: FixedReal,
    pub terms_used: u32,
    pub series_id: SeriesId,
}

/// Node `gamma_{m,M} = (m - 1/2)/M` of the `M`-subinterval midpoint grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaArg {
    m: u32,
    subintervals: u32,
}

impl GammaArg {
    pub fn new(m: u32, subintervals: u32) -> Result<Self> {
        if m == 0 || m > subintervals {
            return Err(EmiError::InvalidArgument(format!(
                "node index {m} outside 1..={subintervals}"
            )));
        }
        Ok(GammaArg { m, subintervals })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn subintervals(&self) -> u32 {
        self.subintervals
    }

    /// `2m - 1`, the odd numerator of the node.
    pub fn odd(&self) -> u32 {
        2 * self.m - 1
    }

    /// Exactly `(2m - 1) / (2M)`.
    pub fn exact(&self) -> BigRational {
        BigRational::new(self.odd().into(), (2 * self.subintervals).into())
    }

    pub fn value(&self, prec: Precision) -> FixedReal {
        FixedReal::from_rational(&self.exact(), prec.working_scale())
    }
}

/// The `(alpha_n, beta_n)` pair at a fixed product `xt`.
///
/// `alpha_1 = 1/(xt)`, `beta_1 = 1`, and each step maps the previous pair
/// simultaneously:
///
/// ```text
/// alpha' = alpha (1 - 1/(xt)^2) + 2 beta / (xt)
/// beta'  = beta  (1 - 1/(xt)^2) - 2 alpha / (xt)
/// ```
///
/// In complex form `alpha_n + i beta_n = i (1 - i/(xt))^(2n-1)`.
#[derive(Debug, Clone)]
pub struct AlphaBetaState {
    alpha: FixedReal,
    beta: FixedReal,
    n: u32,
    xt: FixedReal,
    factor: FixedReal,
    cross: FixedReal,
}

impl AlphaBetaState {
    /// State at `n = 1` for the product `x * t`.
    pub fn init(x: &FixedReal, t: &FixedReal, prec: Precision) -> Result<Self> {
        let xt = x.mul(t, prec);
        if xt.is_zero() {
            return Err(EmiError::ZeroArgument);
        }
        let inv = FixedReal::one().div(&xt, prec)?;
        Ok(Self::from_inverse(xt, inv, prec))
    }

    /// State at `n = 1` for `x` at a midpoint node. `1/(x t)` is formed as
    /// the single quotient `2M / ((2m-1) x)` so the node `t = 1/2` rounds
    /// exactly like the `2/x` of the single-node series.
    pub fn at_node(x: &FixedReal, node: &GammaArg, prec: Precision) -> Result<Self> {
        if x.is_zero() {
            return Err(EmiError::ZeroArgument);
        }
        let odd_x = x.mul_int(&BigInt::from(node.odd()));
        let two_m = BigInt::from(2 * node.subintervals());
        let inv = FixedReal::from_integer(two_m.clone()).div(&odd_x, prec)?;
        let xt = odd_x.div_int(&two_m, prec)?;
        Ok(Self::from_inverse(xt, inv, prec))
    }

    fn from_inverse(xt: FixedReal, inv: FixedReal, prec: Precision) -> Self {
        let factor = &FixedReal::one() - &inv.mul(&inv, prec);
        let cross = inv.mul_int(&BigInt::from(2));
        AlphaBetaState {
            alpha: inv,
            beta: FixedReal::one(),
            n: 1,
            xt,
            factor,
            cross,
        }
    }

    pub fn step(&self, prec: Precision) -> Self {
        let mut next = self.clone();
        next.advance(prec);
        next
    }

    pub fn advance(&mut self, prec: Precision) {
        let alpha = &self.alpha.mul(&self.factor, prec) + &self.beta.mul(&self.cross, prec);
        let beta = &self.beta.mul(&self.factor, prec) - &self.alpha.mul(&self.cross, prec);
        self.alpha = alpha;
        self.beta = beta;
        self.n += 1;
    }

    pub fn alpha(&self) -> &FixedReal {
        &self.alpha
    }

    pub fn beta(&self) -> &FixedReal {
        &self.beta
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn xt(&self) -> &FixedReal {
        &self.xt
    }

    /// `alpha / (weight * (alpha^2 + beta^2))`.
    pub fn weighted_term(&self, weight: &BigInt, prec: Precision) -> Result<FixedReal> {
        ratio_term(&self.alpha, &self.beta, weight, prec)
    }
}

fn ratio_term(a: &FixedReal, b: &FixedReal, weight: &BigInt, prec: Precision) -> Result<FixedReal> {
    let norm = &a.mul(a, prec) + &b.mul(b, prec);
    a.div(&norm.mul_int(weight), prec)
}

fn check_counts(subintervals: u32, n_max: u32) -> Result<()> {
    if subintervals == 0 {
        return Err(EmiError::InvalidArgument("M must be at least 1".into()));
    }
    if n_max == 0 {
        return Err(EmiError::InvalidArgument("n_max must be at least 1".into()));
    }
    Ok(())
}

/// Generalized expansion over `subintervals` midpoint nodes, truncated at
/// `n_max` terms per node. Summation order is fixed: n inside m, m ascending.
pub fn atan_emi(x: &FixedReal, subintervals: u32, n_max: u32, prec: Precision) -> Result<SeriesResult> {
    check_counts(subintervals, n_max)?;
    let mut sum = FixedReal::zero().round_to(prec.working_scale());
    if !x.is_zero() {
        for m in 1..=subintervals {
            sum = &sum + &node_sum(x, &GammaArg::new(m, subintervals)?, n_max, prec)?;
        }
    }
    Ok(SeriesResult {
        value: sum.mul_int(&BigInt::from(2)),
        terms_used: n_max,
        series_id: SeriesId::EmiGeneral,
    })
}

/// Inner n-sum for one node (without the leading factor 2).
fn node_sum(x: &FixedReal, node: &GammaArg, n_max: u32, prec: Precision) -> Result<FixedReal> {
    let odd = BigInt::from(node.odd());
    let odd_sq = &odd * &odd;
    let mut odd_pow = odd.clone();
    let mut state = AlphaBetaState::at_node(x, node, prec)?;
    let mut sum = FixedReal::zero();
    for n in 1..=n_max {
        if n > 1 {
            state.advance(prec);
            odd_pow *= &odd_sq;
        }
        let weight = &odd_pow * BigInt::from(2 * n - 1);
        sum = &sum + &state.weighted_term(&weight, prec)?;
    }
    Ok(sum)
}

/// Single-node series `2 sum g_n / ((2n-1)(g_n^2 + h_n^2))` with
/// `g_1 = 2/x`, `h_1 = 1` and the `(1 - 4/x^2)`, `4/x` update.
pub fn atan_emi_m1(x: &FixedReal, n_max: u32, prec: Precision) -> Result<SeriesResult> {
    check_counts(1, n_max)?;
    let mut sum = FixedReal::zero().round_to(prec.working_scale());
    if !x.is_zero() {
        let two_over_x = FixedReal::from_int(2).div(x, prec)?;
        let factor = &FixedReal::one() - &two_over_x.mul(&two_over_x, prec);
        let four_over_x = two_over_x.mul_int(&BigInt::from(2));
        let mut g = two_over_x;
        let mut h = FixedReal::one();
        for n in 1..=n_max {
            if n > 1 {
                let g_next = &g.mul(&factor, prec) + &h.mul(&four_over_x, prec);
                let h_next = &h.mul(&factor, prec) - &g.mul(&four_over_x, prec);
                g = g_next;
                h = h_next;
            }
            sum = &sum + &ratio_term(&g, &h, &BigInt::from(2 * n - 1), prec)?;
        }
    }
    Ok(SeriesResult {
        value: sum.mul_int(&BigInt::from(2)),
        terms_used: n_max,
        series_id: SeriesId::EmiM1,
    })
}

/// Partial Maclaurin sum `sum_{n=0..n_max} (-1)^n x^(2n+1) / (2n+1)`.
/// Diverges for `|x| > 1`; that is reported, not prevented.
pub fn atan_maclaurin(x: &FixedReal, n_max: u32, prec: Precision) -> Result<SeriesResult> {
    let x2 = x.mul(x, prec);
    let mut power = x.round_to(prec.working_scale());
    let mut sum = FixedReal::zero();
    for n in 0..=n_max {
        if n > 0 {
            power = power.mul(&x2, prec);
        }
        let term = power.div_int(&BigInt::from(2 * n + 1), prec)?;
        sum = if n % 2 == 0 { &sum + &term } else { &sum - &term };
    }
    Ok(SeriesResult {
        value: sum,
        terms_used: n_max + 1,
        series_id: SeriesId::Maclaurin,
    })
}

/// Partial Euler sum `sum_{n=0..n_max} c_n x^(2n+1)/(1+x^2)^(n+1)`,
/// `c_n = 2^(2n) (n!)^2 / (2n+1)!`. Terms are built with the ratio
/// `c_n / c_(n-1) = 2n/(2n+1)` so no factorials appear.
pub fn atan_euler(x: &FixedReal, n_max: u32, prec: Precision) -> Result<SeriesResult> {
    let x2 = x.mul(x, prec);
    let one_plus = &FixedReal::one() + &x2;
    let y = x2.div(&one_plus, prec)?;
    let mut term = x.div(&one_plus, prec)?;
    let mut sum = term.clone();
    for n in 1..=n_max {
        term = term
            .mul(&y, prec)
            .mul_int(&BigInt::from(2 * n))
            .div_int(&BigInt::from(2 * n + 1), prec)?;
        sum = &sum + &term;
    }
    Ok(SeriesResult {
        value: sum,
        terms_used: n_max + 1,
        series_id: SeriesId::Euler,
    })
}

/// Complex-power form of the expansion in `f64`, before the imaginary
/// residue is dropped:
///
/// `i sum_m sum_{n=0..n_max-1} (x/2M)^(2n+1)/(2n+1) [(x g+i)^-(2n+1) - (x g-i)^-(2n+1)]`.
pub fn atan_complex_oracle_parts(x: f64, subintervals: u32, n_max: u32) -> Complex64 {
    let i = Complex64::i();
    let big_m = f64::from(subintervals);
    let reach = x / (2.0 * big_m);
    let mut acc = Complex64::new(0.0, 0.0);
    if x == 0.0 {
        return acc;
    }
    for m in 1..=subintervals {
        let z = x * (f64::from(m) - 0.5) / big_m;
        let plus = reach / (z + i);
        let minus = reach / (z - i);
        for n in 0..n_max {
            let p = 2 * n as i32 + 1;
            acc += (plus.powi(p) - minus.powi(p)) / f64::from(p);
        }
    }
    i * acc
}

/// Real part of [`atan_complex_oracle_parts`].
pub fn atan_complex_oracle(x: f64, subintervals: u32, n_max: u32) -> f64 {
    atan_complex_oracle_parts(x, subintervals, n_max).re
}

/// Terms per node needed for the truncation error of [`atan_emi`] to drop
/// below `10^-(digits+1)`, plus two.
///
/// Every term of node `m` is bounded by `2 r^(2n-1)` with
/// `r^2 = u^2/(1+u^2)`, `u = |x|/(2M)`, so the tail after `n` terms over all
/// nodes is below `2 M r^(2n+1) (1+u^2)`.
pub fn terms_for_digits(x_abs: f64, subintervals: u32, digits: u32) -> u32 {
    if x_abs == 0.0 {
        return 1;
    }
    let u = x_abs / (2.0 * f64::from(subintervals.max(1)));
    let decay = 0.5 * (1.0 + 1.0 / (u * u)).log10();
    let needed = f64::from(digits) + 1.0 + (2.0 * f64::from(subintervals)).log10() + (1.0 + u * u).log10();
    let n = ((needed / decay - 1.0) / 2.0).ceil().max(1.0);
    if n >= f64::from(u32::MAX - 2) {
        u32::MAX
    } else {
        n as u32 + 2
    }
}

/// [`atan_emi`] with `n_max` chosen by [`terms_for_digits`] and the guard
/// sized for that many terms.
pub fn atan_to_precision(x: &FixedReal, subintervals: u32, digits: u32) -> Result<SeriesResult> {
    let n_max = terms_for_digits(x.abs().to_f64(), subintervals, digits);
    atan_emi(
        x,
        subintervals,
        n_max,
        Precision::for_series(digits, n_max, subintervals),
    )
}

/// Subinterval count that keeps the per-term factor below `1/17`.
pub fn reference_subintervals(x_abs: f64) -> u32 {
    (2.0 * x_abs).ceil().clamp(1.0, 1024.0) as u32
}

/// High-accuracy arctangent used as the reference for error measurement.
pub fn reference_atan(x: &FixedReal, digits: u32) -> Result<FixedReal> {
    let m = reference_subintervals(x.abs().to_f64());
    Ok(atan_to_precision(x, m, digits)?.value)
}
