//! Error tables over a grid of arguments.
//!
//! Each cell evaluates one series at one `x` with a fixed `n_max` and measures
//! the absolute error against a high-precision reference. When an error is so
//! small that the reference is within 25 digits of it, the reference is
//! recomputed with more digits, so tiny errors are never measured against
//! reference noise.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{EmiError, Result};
use crate::fixed::FixedReal;
use crate::precision::Precision;
use crate::report::ConvergenceRecord;
use crate::selfcheck::self_check_pi;
use crate::series::{atan_emi, atan_emi_m1, atan_euler, atan_maclaurin, reference_atan, SeriesId};

/// Digits that must separate a measured error from the reference noise floor.
const REFERENCE_MARGIN: u32 = 25;

/// Grid spacing: a decimal, or `pi/N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridStep {
    Decimal(FixedReal),
    PiOver(u32),
}

impl FromStr for GridStep {
    type Err = EmiError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("pi") {
            let n = match rest.strip_prefix('/') {
                Some(n) => n
                    .parse::<u32>()
                    .map_err(|e| EmiError::Parse(format!("step {s:?}: {e}")))?,
                None if rest.is_empty() => 1,
                None => return Err(EmiError::Parse(format!("step {s:?}: expected pi/N"))),
            };
            if n == 0 {
                return Err(EmiError::Parse("step pi/0".into()));
            }
            return Ok(GridStep::PiOver(n));
        }
        let v: FixedReal = s.parse()?;
        if v <= FixedReal::zero() {
            return Err(EmiError::InvalidArgument(format!("step must be positive, got {s}")));
        }
        Ok(GridStep::Decimal(v))
    }
}

impl GridStep {
    fn value(&self, scale: u32) -> Result<FixedReal> {
        match self {
            GridStep::Decimal(v) => Ok(v.round_to(scale)),
            GridStep::PiOver(n) => {
                let pi = self_check_pi(scale)?;
                Ok(pi.div_int(&BigInt::from(*n), Precision::new(scale, 0))?.round_to(scale))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceConfig {
    pub x_min: FixedReal,
    pub x_max: FixedReal,
    pub step: GridStep,
    pub series: Vec<SeriesId>,
    pub subintervals: Vec<u32>,
    pub n_max: u32,
    pub reference_digits: u32,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            x_min: FixedReal::from_int(-20),
            x_max: FixedReal::from_int(20),
            step: GridStep::PiOver(20),
            series: vec![SeriesId::Maclaurin, SeriesId::Euler, SeriesId::EmiGeneral],
            subintervals: (1..=5).collect(),
            n_max: 10,
            reference_digits: 60,
        }
    }
}

impl ConvergenceConfig {
    /// Working scale of grid points and baseline evaluations.
    fn scale(&self) -> u32 {
        self.reference_digits + 20
    }

    /// `x_min + j * step` for every `j` with the point not above `x_max`.
    pub fn grid(&self) -> Result<Vec<FixedReal>> {
        if self.x_max < self.x_min {
            return Err(EmiError::EmptyInterval);
        }
        let step = self.step.value(self.scale())?;
        let mut xs = Vec::new();
        let mut x = self.x_min.round_to(self.scale());
        while x <= self.x_max {
            xs.push(x.clone());
            x = &x + &step;
        }
        Ok(xs)
    }

    fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(EmiError::InvalidArgument("no series selected".into()));
        }
        if self.series.contains(&SeriesId::ComplexOracle) {
            return Err(EmiError::InvalidArgument(
                "complex-oracle is double precision and not part of the grid".into(),
            ));
        }
        if self.subintervals.is_empty() || self.subintervals.contains(&0) {
            return Err(EmiError::InvalidArgument("M values must be at least 1".into()));
        }
        Ok(())
    }
}

fn evaluate(series: SeriesId, x: &FixedReal, m: u32, n_max: u32, digits: u32) -> Result<FixedReal> {
    let prec = Precision::for_series(digits, n_max, m.max(1));
    let r = match series {
        SeriesId::Maclaurin => atan_maclaurin(x, n_max, prec)?,
        SeriesId::Euler => atan_euler(x, n_max, prec)?,
        SeriesId::EmiM1 => atan_emi_m1(x, n_max, prec)?,
        SeriesId::EmiGeneral => atan_emi(x, m, n_max, prec)?,
        SeriesId::ComplexOracle => unreachable!("rejected by validate"),
    };
    Ok(r.value)
}

/// References for one `x`, cached by digit count.
struct References<'a> {
    x: &'a FixedReal,
    by_digits: BTreeMap<u32, FixedReal>,
}

impl<'a> References<'a> {
    fn get(&mut self, digits: u32) -> Result<&FixedReal> {
        if !self.by_digits.contains_key(&digits) {
            let v = reference_atan(self.x, digits)?;
            self.by_digits.insert(digits, v);
        }
        Ok(&self.by_digits[&digits])
    }
}

fn measure(series: SeriesId, refs: &mut References<'_>, m: u32, n_max: u32, base_digits: u32) -> Result<FixedReal> {
    let mut digits = base_digits;
    loop {
        let approx = evaluate(series, refs.x, m, n_max, digits)?;
        let err = (&approx - refs.get(digits)?).abs();
        if err.is_zero() && digits >= base_digits + 200 {
            return Ok(err);
        }
        let needed = if err.is_zero() {
            digits + 100
        } else {
            let err_digits = (-err.log10_abs()).ceil().max(0.0) as u32;
            if err_digits + REFERENCE_MARGIN <= digits {
                return Ok(err);
            }
            err_digits + REFERENCE_MARGIN + 10
        };
        digits = needed.max(digits + 10);
    }
}

/// All cells, ordered by series (as configured), then `x`, then `M`.
pub fn run_convergence(cfg: &ConvergenceConfig) -> Result<Vec<ConvergenceRecord>> {
    cfg.validate()?;
    let xs = cfg.grid()?;
    let mut m_list = cfg.subintervals.clone();
    m_list.sort_unstable();
    m_list.dedup();
    let mut out = Vec::new();
    let mut refs: Vec<References<'_>> = xs
        .iter()
        .map(|x| References {
            x,
            by_digits: BTreeMap::new(),
        })
        .collect();
    for &series in &cfg.series {
        let ms: &[u32] = match series {
            SeriesId::EmiGeneral => &m_list,
            SeriesId::EmiM1 => &[1],
            _ => &[0],
        };
        for r in refs.iter_mut() {
            for &m in ms {
                let abs_error = measure(series, r, m, cfg.n_max, cfg.reference_digits)?;
                out.push(ConvergenceRecord {
                    series,
                    x: r.x.clone(),
                    subintervals: m,
                    n_max: cfg.n_max,
                    abs_error,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_parsing() {
        assert_eq!("pi/20".parse::<GridStep>().unwrap(), GridStep::PiOver(20));
        assert_eq!("pi".parse::<GridStep>().unwrap(), GridStep::PiOver(1));
        assert_eq!(
            "0.25".parse::<GridStep>().unwrap(),
            GridStep::Decimal("0.25".parse().unwrap())
        );
        for bad in ["pi/0", "pi/x", "pie", "-1", "0", "abc"] {
            assert!(bad.parse::<GridStep>().is_err(), "{bad}");
        }
    }

    #[test]
    fn default_grid() {
        let xs = ConvergenceConfig::default().grid().unwrap();
        assert_eq!(xs.len(), 255);
        assert_eq!(xs[0], FixedReal::from_int(-20));
        assert!(xs[254] <= FixedReal::from_int(20));
        assert!(xs[254] > "19.8".parse().unwrap());
    }

    #[test]
    fn small_run_rows_and_order() {
        let cfg = ConvergenceConfig {
            x_min: FixedReal::from_int(-1),
            x_max: FixedReal::from_int(1),
            step: GridStep::Decimal("0.5".parse().unwrap()),
            subintervals: vec![3, 1, 2],
            ..ConvergenceConfig::default()
        };
        let rows = run_convergence(&cfg).unwrap();
        assert_eq!(rows.len(), 5 + 5 + 15);
        assert_eq!(rows[10].series, SeriesId::EmiGeneral);
        assert_eq!(
            rows[10..13].iter().map(|r| r.subintervals).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        // x = 0 is exact for every series
        assert!(rows.iter().filter(|r| r.x.is_zero()).all(|r| r.abs_error.is_zero()));
        // emi beats maclaurin away from the origin
        for (mac, emi) in rows[..5].iter().zip(rows[10..].iter().step_by(3)) {
            assert_eq!(mac.x, emi.x);
            assert!(emi.abs_error <= mac.abs_error);
        }
    }

    #[test]
    fn tiny_errors_get_a_deeper_reference() {
        let x: FixedReal = "0.05".parse().unwrap();
        let mut refs = References {
            x: &x,
            by_digits: BTreeMap::new(),
        };
        let err = measure(SeriesId::EmiGeneral, &mut refs, 5, 10, 60).unwrap();
        assert!(err.log10_abs() < -40.0);
        assert!(refs.by_digits.keys().any(|&d| d > 60));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = ConvergenceConfig {
            series: vec![SeriesId::ComplexOracle],
            ..ConvergenceConfig::default()
        };
        assert!(run_convergence(&cfg).is_err());
        cfg.series = vec![SeriesId::Euler];
        cfg.subintervals = vec![0];
        assert!(run_convergence(&cfg).is_err());
        cfg.subintervals = vec![1];
        cfg.x_max = FixedReal::from_int(-30);
        assert!(matches!(run_convergence(&cfg), Err(EmiError::EmptyInterval)));
    }
}
