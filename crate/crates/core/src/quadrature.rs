//! Enhanced midpoint integration.
//!
//! ```text
//! int_a^b f(t) dt ~ 2 sum_{m=1..M} sum_{n=0..N}
//!     (b-a)^(2n+1) / ((2M)^(2n+1) (2n+1)!) * f^(2n)(a + (b-a)(m-1/2)/M)
//! ```
//!
//! Only even derivatives are requested. Providers always differentiate in the
//! original variable; the `(b-a)` powers from the change of variable are
//! applied here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{EmiError, Result};
use crate::fixed::FixedReal;
use crate::precision::Precision;
use crate::series::{AlphaBetaState, GammaArg};

/// Even-order derivatives of an integrand at working precision.
pub trait DerivativeProvider {
    fn derivative(&self, t: &FixedReal, order: u32, prec: Precision) -> Result<FixedReal>;
}

/// Even-order derivatives in exact rational arithmetic.
pub trait ExactDerivativeProvider {
    fn derivative_exact(&self, t: &BigRational, order: u32) -> Result<BigRational>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadratureSpec {
    subintervals: u32,
    order: u32,
    a: FixedReal,
    b: FixedReal,
}

impl QuadratureSpec {
    /// `subintervals` is M (at least 1), `order` is N, the last n of the
    /// derivative sum.
    pub fn new(subintervals: u32, order: u32, a: FixedReal, b: FixedReal) -> Result<Self> {
        if a >= b {
            return Err(EmiError::EmptyInterval);
        }
        if subintervals == 0 {
            return Err(EmiError::InvalidArgument("M must be at least 1".into()));
        }
        Ok(QuadratureSpec {
            subintervals,
            order,
            a,
            b,
        })
    }

    /// Unit interval `(0, 1)`.
    pub fn unit(subintervals: u32, order: u32) -> Result<Self> {
        Self::new(subintervals, order, FixedReal::zero(), FixedReal::one())
    }

    pub fn subintervals(&self) -> u32 {
        self.subintervals
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn interval(&self) -> (&FixedReal, &FixedReal) {
        (&self.a, &self.b)
    }
}

/// `(b - a) t + a`.
pub fn interval_transform(a: &FixedReal, b: &FixedReal, t: &FixedReal) -> Result<FixedReal> {
    if a >= b {
        return Err(EmiError::EmptyInterval);
    }
    Ok(&(b - a).mul_exact(t) + a)
}

/// `(2M)^(2n+1) (2n+1)!` for n = 0..=N.
fn weights(subintervals: u32, order: u32) -> Vec<BigInt> {
    let two_m = BigInt::from(2 * subintervals);
    let two_m_sq = &two_m * &two_m;
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut power = two_m;
    let mut fact = BigInt::one();
    for n in 0..=order {
        if n > 0 {
            power *= &two_m_sq;
            fact *= BigInt::from((2 * n) * (2 * n + 1));
        }
        out.push(&power * &fact);
    }
    out
}

pub fn emi_integrate(f: &dyn DerivativeProvider, spec: &QuadratureSpec, prec: Precision) -> Result<FixedReal> {
    let width = &spec.b - &spec.a;
    let width_sq = width.mul_exact(&width);
    let weights = weights(spec.subintervals, spec.order);
    let two_m = BigInt::from(2 * spec.subintervals);
    let mut sum = FixedReal::zero();
    for m in 1..=spec.subintervals {
        let node = GammaArg::new(m, spec.subintervals)?;
        let t = &width.mul_int(&node.odd().into()).div_int(&two_m, prec)? + &spec.a;
        let mut width_pow = width.clone();
        for (n, weight) in weights.iter().enumerate() {
            if n > 0 {
                width_pow = width_pow.mul(&width_sq, prec);
            }
            let d = f.derivative(&t, 2 * n as u32, prec)?;
            let term = width_pow.mul(&d, prec).div_int(weight, prec)?;
            sum = &sum + &term;
        }
    }
    Ok(sum.mul_int(&BigInt::from(2)))
}

/// Same sum in exact rational arithmetic.
pub fn emi_integrate_exact(f: &dyn ExactDerivativeProvider, spec: &QuadratureSpec) -> Result<BigRational> {
    let a = spec.a.to_rational();
    let width = spec.b.to_rational() - &a;
    let width_sq = &width * &width;
    let weights = weights(spec.subintervals, spec.order);
    let mut sum = BigRational::zero();
    for m in 1..=spec.subintervals {
        let t = &width * GammaArg::new(m, spec.subintervals)?.exact() + &a;
        let mut width_pow = width.clone();
        for (n, weight) in weights.iter().enumerate() {
            if n > 0 {
                width_pow *= &width_sq;
            }
            let d = f.derivative_exact(&t, 2 * n as u32)?;
            sum += &width_pow * d / BigRational::from_integer(weight.clone());
        }
    }
    Ok(sum * BigRational::from_integer(2.into()))
}

/// Even t-derivative of `x / (1 + x^2 t^2)`.
///
/// For `order = 2j`, with `(alpha, beta)` advanced to index `j + 1` at `x t`,
/// the derivative is `(2j)! alpha / (t^(2j+1) (alpha^2 + beta^2))`. At `t = 0`
/// the Maclaurin coefficients give `(-1)^j (2j)! x^(2j+1)` directly.
pub fn atan_integrand_derivative(x: &FixedReal, t: &FixedReal, order: u32, prec: Precision) -> Result<FixedReal> {
    if order % 2 == 1 {
        return Err(EmiError::InvalidArgument(format!("odd derivative order {order}")));
    }
    if x.is_zero() {
        return Ok(FixedReal::zero());
    }
    let fact = factorial(order);
    if t.is_zero() {
        let mut power = x.clone();
        let x2 = x.mul_exact(x);
        for _ in 0..order / 2 {
            power = power.mul_exact(&x2);
        }
        let v = power.mul_int(&fact).round_to(prec.working_scale());
        return Ok(if (order / 2) % 2 == 1 { -v } else { v });
    }
    // dividing by t^(order+1) amplifies rounding by 1/|t|^(order+1)
    let lost = (-t.log10_abs()).max(0.0) * f64::from(order + 1);
    let inner = prec.inflate(lost.ceil() as u32 + 2);
    let mut state = AlphaBetaState::init(x, t, inner)?;
    for _ in 0..order / 2 {
        state.advance(inner);
    }
    let mut t_pow = t.clone();
    for _ in 0..order {
        t_pow = t_pow.mul_exact(t);
    }
    let v = state
        .weighted_term(&BigInt::one(), inner)?
        .mul_int(&fact)
        .div(&t_pow, inner)?;
    Ok(v.round_to(prec.working_scale()))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Polynomial `sum c_k t^k` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients of the `order`-th derivative.
    fn derived(&self, order: u32) -> Vec<BigRational> {
        let order = order as usize;
        self.coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(k, c)| {
                let falling: BigInt = ((k - order + 1)..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j));
                c * BigRational::from_integer(falling)
            })
            .collect()
    }

    fn horner(coeffs: &[BigRational], t: &BigRational) -> BigRational {
        coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    /// Exact `int_a^b p(t) dt`.
    pub fn integral(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let anti: Vec<BigRational> = std::iter::once(BigRational::zero())
            .chain(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c / BigRational::from_integer(BigInt::from(k + 1))),
            )
            .collect();
        Self::horner(&anti, b) - Self::horner(&anti, a)
    }
}

impl ExactDerivativeProvider for Polynomial {
    fn derivative_exact(&self, t: &BigRational, order: u32) -> Result<BigRational> {
        Ok(Self::horner(&self.derived(order), t))
    }
}

impl DerivativeProvider for Polynomial {
    fn derivative(&self, t: &FixedReal, order: u32, prec: Precision) -> Result<FixedReal> {
        let v = self.derivative_exact(&t.to_rational(), order)?;
        Ok(FixedReal::from_rational(&v, prec.working_scale()))
    }
}

/// `x / (1 + x^2 t^2)`, whose integral over `(0, 1)` is `atan(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArctanKernel {
    pub x: FixedReal,
}

impl DerivativeProvider for ArctanKernel {
    fn derivative(&self, t: &FixedReal, order: u32, prec: Precision) -> Result<FixedReal> {
        atan_integrand_derivative(&self.x, t, order, prec)
    }
}

/// Runge's function `1 / (1 + t^2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Runge;

impl DerivativeProvider for Runge {
    fn derivative(&self, t: &FixedReal, order: u32, prec: Precision) -> Result<FixedReal> {
        atan_integrand_derivative(&FixedReal::one(), t, order, prec)
    }
}

/// Central finite differences of an `f64` function. Double precision only,
/// meant as a test fallback for integrands without closed-form derivatives.
pub struct FiniteDifference<F: Fn(f64) -> f64> {
    f: F,
    step: f64,
}

impl<F: Fn(f64) -> f64> FiniteDifference<F> {
    pub fn new(f: F, step: f64) -> Self {
        FiniteDifference { f, step }
    }

    /// `sum_k (-1)^k C(order, k) f(t + (order/2 - k) h) / h^order`.
    pub fn eval(&self, t: f64, order: u32) -> f64 {
        let half = f64::from(order) / 2.0;
        let mut binom = 1.0;
        let mut acc = 0.0;
        for k in 0..=order {
            if k > 0 {
                binom *= f64::from(order - k + 1) / f64::from(k);
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * (self.f)(t + (half - f64::from(k)) * self.step);
        }
        acc / self.step.powi(order as i32)
    }
}

impl<F: Fn(f64) -> f64> DerivativeProvider for FiniteDifference<F> {
    fn derivative(&self, t: &FixedReal, order: u32, prec: Precision) -> Result<FixedReal> {
        let v = self.eval(t.to_f64(), order);
        if !v.is_finite() {
            return Err(EmiError::DomainError(format!("non-finite derivative at t = {t}")));
        }
        FixedReal::from_f64(v, prec.working_scale())
    }
}
