//! Acceptance criteria 1-11. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; the process fails if any
//! criterion fails.

use std::time::{Duration, Instant};

use emi_core::convergence::{run_convergence, ConvergenceConfig, GridStep};
use emi_core::machin::{
    digits_per_increment, gamma_select, lead_residual, second_argument_exact, second_argument_fixed, MachinTwoTerm,
    RoundingMode, SecondArgMode, DEFAULT_DIGIT_CAP,
};
use emi_core::quadrature::{emi_integrate_exact, Polynomial, QuadratureSpec};
use emi_core::report::ConvergenceRecord;
use emi_core::selfcheck::{check_agreement, pi_machin, pi_two_seven, self_check_pi};
use emi_core::series::{atan_complex_oracle, atan_emi, atan_emi_m1, atan_to_precision, SeriesId};
use emi_core::{BigRational, EmiError, FixedReal, Precision};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const PI_110: &str =
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651";

// Tolerances and limits
const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_LIMIT: Duration = Duration::from_secs(1);
const C2_SIG_DIGITS: usize = 6;
const C3_LIMIT: Duration = Duration::from_secs(60);
const C4_LIMIT: Duration = Duration::from_secs(600);
const C4_GAIN: std::ops::RangeInclusive<i64> = 15..=17;
const C5_CASES: u32 = 100;
const C6_TOL: f64 = 1e-12;
const C7_LIMIT: Duration = Duration::from_secs(120);
const C7_GAP: f64 = 100.0;
const C8_DIGITS: u32 = 100;
const C10_DIGITS: u32 = 1000;

type Outcome = Result<String, String>;

fn fx(s: &str) -> FixedReal {
    s.parse().unwrap()
}

fn timed(limit: Duration, body: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = body()?;
    let took = start.elapsed();
    if took > limit {
        Err(format!("{out}; took {took:.2?}, limit {limit:?}"))
    } else {
        Ok(format!("{out}; {took:.2?}"))
    }
}

fn c1_gamma() -> Outcome {
    timed(C1_LIMIT, || {
        let g = gamma_select(27, 0, RoundingMode::Floor, Precision::with_digits(60)).map_err(|e| e.to_string())?;
        let want = BigRational::from_integer(85445659.into());
        if g == want {
            Ok(format!("gamma = {g}"))
        } else {
            Err(format!("gamma = {g}, want 85445659"))
        }
    })
}

fn c2_residual() -> Outcome {
    timed(C2_LIMIT, || {
        let prec = Precision::with_digits(60);
        let gamma = BigRational::from_integer(85445659.into());
        let pi = self_check_pi(60).map_err(|e| e.to_string())?;
        let r = lead_residual(27, &gamma, &pi, prec).map_err(|e| e.to_string())?;
        let got = r.to_scientific(C2_SIG_DIGITS);
        if got == "4.10922e-9" {
            Ok(format!("residual = {}", r.to_scientific(12)))
        } else {
            Err(format!("residual = {got}, want 4.10922e-9"))
        }
    })
}

fn c3_second_argument() -> Outcome {
    timed(C3_LIMIT, || {
        let gamma = BigRational::from_integer(85445659.into());
        let v = second_argument_fixed(27, &gamma, Precision::with_digits(1000)).map_err(|e| e.to_string())?;
        // 8 zeros then the 21 quoted significant digits
        let got = v.to_digits(29).map_err(|e| e.to_string())?;
        if got == "-0.00000000410922393614549022091" {
            Ok(format!("second_arg = {}", v.to_scientific(21)))
        } else {
            Err(format!("second_arg prefix {got}"))
        }
    })
}

fn c4_digits_per_increment() -> Outcome {
    timed(C4_LIMIT, || {
        let err = |e: EmiError| e.to_string();
        let prec = Precision::with_digits(1000);
        let gamma = BigRational::from_integer(85445659.into());
        let second = second_argument_fixed(27, &gamma, prec).map_err(err)?.round_to(1000);
        let record = format!("k=27 gamma=85445659/1 second_arg=fixed:{second} digits=1000");
        let formula: MachinTwoTerm = record.parse().map_err(err)?;
        let pi = self_check_pi(1010).map_err(err)?;
        let rows = digits_per_increment(&formula, 1, 2..=30, &pi, Precision::for_series(1000, 30, 1)).map_err(err)?;
        if rows.len() != 29 {
            return Err(format!("only {} truncations measured", rows.len()));
        }
        let gains: Vec<i64> = rows.iter().filter_map(|r| r.gained).collect();
        let bad: Vec<_> = gains.iter().filter(|g| !C4_GAIN.contains(g)).collect();
        let lo = gains.iter().min().unwrap();
        let hi = gains.iter().max().unwrap();
        let summary = format!(
            "{} steps, gains in [{lo}, {hi}], {} digits at n_max=30",
            gains.len(),
            rows.last().unwrap().correct_digits
        );
        if bad.is_empty() {
            Ok(summary)
        } else {
            Err(format!("{summary}; out of range: {bad:?}"))
        }
    })
}

fn c5_single_node_reduction() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: C5_CASES,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (-2_000_000_000_000i64..=2_000_000_000_000i64, 1u32..=20);
    runner
        .run(&strategy, |(raw, n)| {
            let x = FixedReal::new(BigInt::from(raw), 11);
            let prec = Precision::for_series(50, n, 1);
            let general = atan_emi(&x, 1, n, prec).unwrap().value;
            let single = atan_emi_m1(&x, n, prec).unwrap().value;
            prop_assert_eq!(&general, &single, "x = {}, n = {}", x, n);
            Ok(())
        })
        .map(|()| format!("{C5_CASES} random x in [-20, 20], identical to the last digit"))
        .map_err(|e| e.to_string())
}

fn c6_complex_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for x in [0.1, 1.0, 5.0, 19.0].into_iter().flat_map(|v| [v, -v]) {
        let xf = FixedReal::from_f64(x, 20).map_err(|e| e.to_string())?;
        for m in 1..=5u32 {
            for n in 1..=12u32 {
                let prec = Precision::for_series(30, n, m);
                let real = atan_emi(&xf, m, n, prec).map_err(|e| e.to_string())?.value.to_f64();
                let oracle = atan_complex_oracle(x, m, n);
                let diff = (real - oracle).abs();
                worst = worst.max(diff);
                if diff.is_nan() || diff >= C6_TOL {
                    return Err(format!("x={x} M={m} n={n}: {real} vs {oracle}"));
                }
            }
        }
    }
    Ok(format!("max |diff| = {worst:.3e} over 480 cells"))
}

fn c7_rows() -> Result<(Vec<ConvergenceRecord>, Duration), String> {
    let start = Instant::now();
    let rows = run_convergence(&ConvergenceConfig::default()).map_err(|e| e.to_string())?;
    Ok((rows, start.elapsed()))
}

fn c7a_maclaurin(rows: &[ConvergenceRecord], took: Duration) -> Outcome {
    if took > C7_LIMIT {
        return Err(format!("grid took {took:.2?}, limit {C7_LIMIT:?}"));
    }
    let threshold = fx("1.5");
    let one = FixedReal::from_int(1);
    let cells: Vec<_> = rows
        .iter()
        .filter(|r| r.series == SeriesId::Maclaurin && r.x.abs() > threshold)
        .collect();
    match cells.iter().find(|r| r.abs_error <= one) {
        None => Ok(format!(
            "{} cells with |x| > 1.5 all above 1; grid {took:.2?}",
            cells.len()
        )),
        Some(r) => Err(format!("x = {} error {}", r.x, r.abs_error.to_scientific(4))),
    }
}

fn c7b_single_node_beats_euler(rows: &[ConvergenceRecord]) -> Outcome {
    let euler: Vec<_> = rows.iter().filter(|r| r.series == SeriesId::Euler).collect();
    let emi: Vec<_> = rows
        .iter()
        .filter(|r| r.series == SeriesId::EmiGeneral && r.subintervals == 1)
        .collect();
    let mut checked = 0;
    for (e, g) in euler.iter().zip(&emi) {
        assert_eq!(e.x, g.x);
        if e.x.is_zero() {
            continue;
        }
        checked += 1;
        if !(g.abs_error < e.abs_error) {
            return Err(format!(
                "x = {}: emi {} vs euler {}",
                e.x,
                g.abs_error.to_scientific(4),
                e.abs_error.to_scientific(4)
            ));
        }
    }
    Ok(format!("{checked} nonzero grid points"))
}

fn errors_at_ten() -> Result<Vec<FixedReal>, String> {
    let cfg = ConvergenceConfig {
        x_min: FixedReal::from_int(10),
        x_max: FixedReal::from_int(10),
        step: GridStep::Decimal(FixedReal::from_int(1)),
        series: vec![SeriesId::EmiGeneral],
        ..ConvergenceConfig::default()
    };
    let rows = run_convergence(&cfg).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().map(|r| r.abs_error).collect())
}

fn describe(errs: &[FixedReal]) -> String {
    errs.iter().map(|e| e.to_scientific(3)).collect::<Vec<_>>().join(" > ")
}

fn c7c_strict_decrease() -> Outcome {
    let errs = errors_at_ten()?;
    if errs.windows(2).all(|w| w[1] < w[0]) {
        Ok(describe(&errs))
    } else {
        Err(describe(&errs))
    }
}

fn c7c_gap() -> Outcome {
    let errs = errors_at_ten()?;
    let ratios: Vec<f64> = errs
        .windows(2)
        .map(|w| 10f64.powf(w[0].log10_abs() - w[1].log10_abs()))
        .collect();
    let text = ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ");
    if ratios.iter().all(|&r| r >= C7_GAP) {
        Ok(format!("ratios {text}"))
    } else {
        Err(format!("ratios {text}; each must be >= {C7_GAP}"))
    }
}

fn c8_classic_identity() -> Outcome {
    let err = |e: EmiError| e.to_string();
    let prec = Precision::with_digits(C8_DIGITS);
    let gamma = gamma_select(2, 0, RoundingMode::Floor, prec).map_err(err)?;
    let second = second_argument_exact(2, &gamma, DEFAULT_DIGIT_CAP).map_err(err)?;
    if gamma != BigRational::from_integer(2.into()) || second != BigRational::new((-1).into(), 7.into()) {
        return Err(format!("gamma = {gamma}, second_arg = {second}"));
    }
    let formula = MachinTwoTerm::from_gamma(2, gamma, SecondArgMode::Exact { cap: 100 }, prec).map_err(err)?;
    if formula.second_arg() != Some(&second) {
        return Err("record lost the exact second argument".into());
    }
    let scale = prec.working_scale() + 5;
    let half = FixedReal::from_rational(&BigRational::new(1.into(), 2.into()), scale);
    let seventh = FixedReal::from_rational(&BigRational::new(1.into(), 7.into()), scale);
    let a = atan_to_precision(&half, 1, scale).map_err(err)?.value;
    let b = atan_to_precision(&seventh, 1, scale).map_err(err)?.value;
    let quarter = &a.mul_int(&BigInt::from(2)) - &b;
    let want = FixedReal::from_rational(&(fx(PI_110).to_rational() / BigRational::from_integer(4.into())), 110);
    let diff = (&quarter - &want).abs();
    if diff < FixedReal::new(BigInt::from(1), C8_DIGITS) {
        Ok(format!(
            "gamma = 2, second_arg = -1/7, |2 atan(1/2) - atan(1/7) - pi/4| = {}",
            diff.to_scientific(3)
        ))
    } else {
        Err(format!("difference {}", diff.to_scientific(3)))
    }
}

fn c9_polynomial_exactness() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 64,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let coeff = (-50i64..=50, 1i64..=9).prop_map(|(n, d)| BigRational::new(n.into(), d.into()));
    let strategy = (
        proptest::collection::vec(coeff, 1..=9),
        -30i64..=30,
        1i64..=40,
        1u32..=3,
    );
    runner
        .run(&strategy, |(coeffs, a10, w10, m)| {
            let p = Polynomial::new(coeffs);
            let d = p.degree() as u32;
            let a = FixedReal::new(BigInt::from(a10), 1);
            let b = FixedReal::new(BigInt::from(a10 + w10), 1);
            let order = d.div_ceil(2);
            let spec = QuadratureSpec::new(m, order, a.clone(), b.clone()).unwrap();
            let got = emi_integrate_exact(&p, &spec).unwrap();
            let want = p.integral(&a.to_rational(), &b.to_rational());
            prop_assert_eq!(got, want, "degree {} M {}", d, m);
            Ok(())
        })
        .map(|()| "64 random polynomials of degree <= 8, M in 1..=3, N = ceil(d/2)".to_string())
        .map_err(|e| e.to_string())?;
    // every degree and M explicitly
    for d in 0..=8usize {
        let coeffs: Vec<i64> = (0..=d as i64).map(|k| 3 * k - 7).collect();
        let p = Polynomial::from_ints(&coeffs);
        for m in 1..=3 {
            let spec = QuadratureSpec::new(m, (d as u32).div_ceil(2), fx("-1.5"), fx("2.25")).unwrap();
            let got = emi_integrate_exact(&p, &spec).map_err(|e| e.to_string())?;
            let want = p.integral(&fx("-1.5").to_rational(), &fx("2.25").to_rational());
            if got != want {
                return Err(format!("degree {d}, M {m}: {got} vs {want}"));
            }
        }
    }
    Ok("all degrees 0..=8 x M 1..=3 plus 64 random polynomials: exact".into())
}

fn c10_self_check() -> Outcome {
    let err = |e: EmiError| e.to_string();
    let a = pi_machin(C10_DIGITS).map_err(err)?;
    let b = pi_two_seven(C10_DIGITS).map_err(err)?;
    check_agreement(&a, &b, C10_DIGITS).map_err(err)?;
    let pi = self_check_pi(C10_DIGITS).map_err(err)?;
    let prefix = pi.to_digits(50).map_err(err)?;
    if prefix == PI_110[..52] {
        Ok(format!("agree to {C10_DIGITS} digits; prefix {prefix}"))
    } else {
        Err(format!("prefix {prefix}"))
    }
}

fn c11_record_scale() -> Outcome {
    let gamma = BigRational::from_integer(85445659.into());
    match second_argument_exact(27, &gamma, DEFAULT_DIGIT_CAP) {
        Err(EmiError::DigitCapExceeded { digits, cap }) => Ok(format!(
            "out of desk scale by design: exact k=27 second argument refused ({digits} > {cap} digits); \
             covered by criteria 3-4"
        )),
        Ok(_) => Err("exact k=27 second argument unexpectedly fit under the cap".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn main() {
    let mut failures = 0;
    let mut line = |id: &str, what: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id:<4} {tag} {what}: {detail}");
    };
    line("1", "gamma for k=27", c1_gamma());
    line("2", "lead residual", c2_residual());
    line("3", "fixed second argument, 1000 digits", c3_second_argument());
    line("4", "digits per increment, n_max 2..30", c4_digits_per_increment());
    line("5", "M=1 reduction", c5_single_node_reduction());
    line("6", "complex oracle equivalence", c6_complex_oracle());
    match c7_rows() {
        Ok((rows, took)) => {
            line("7a", "maclaurin diverges for |x| > 1.5", c7a_maclaurin(&rows, took));
            line("7b", "M=1 beats euler", c7b_single_node_beats_euler(&rows));
        }
        Err(e) => {
            line("7a", "maclaurin diverges for |x| > 1.5", Err(e.clone()));
            line("7b", "M=1 beats euler", Err(e));
        }
    }
    line("7c", "errors strictly decrease in M at x=10", c7c_strict_decrease());
    line("7c'", "each M step at x=10 gains >= 10^2", c7c_gap());
    line("8", "classic identity from k=2", c8_classic_identity());
    line("9", "polynomial exactness", c9_polynomial_exactness());
    line("10", "self-check pair, 1000 digits", c10_self_check());
    line("11", "record-scale exact rational", c11_record_scale());
    if failures > 0 {
        println!("{failures} criterion check(s) failed");
        std::process::exit(1);
    }
}
