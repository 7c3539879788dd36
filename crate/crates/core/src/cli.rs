//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure or other runtime error, 2 bad
//! arguments or configuration, 3 self-check failure, 4 exact digit cap
//! exceeded.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;

use crate::convergence::{run_convergence, ConvergenceConfig, GridStep};
use crate::error::EmiError;
use crate::fixed::FixedReal;
use crate::machin::{
    digits_per_increment, gamma_select, lead_residual, machin_eval, MachinTwoTerm, RoundingMode, SecondArgMode,
    DEFAULT_DIGIT_CAP,
};
use crate::precision::Precision;
use crate::quadrature::{emi_integrate, ArctanKernel, DerivativeProvider, Polynomial, QuadratureSpec, Runge};
use crate::report::{write_csv, write_text, RunReport};
use crate::selfcheck::{self_check_pi, verify_pi};
use crate::series::{atan_emi, reference_atan, terms_for_digits, SeriesId};
use crate::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "emi",
    version,
    about = "Arbitrary-precision arctangent and pi by enhanced midpoint integration"
)]
pub struct Cli {
    /// Fractional digits to produce (each command has its own default)
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// Override the guard digits carried on top of --digits
    #[arg(long, global = true)]
    pub guard: Option<u32>,
    /// Write the main output to a file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// The invocation as typed, echoed in run summaries
    #[arg(skip)]
    pub echo: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// arctan(x) from the generalized series
    Atan {
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Subintervals
        #[arg(short = 'M', default_value_t = 1)]
        subintervals: u32,
        /// Terms per node (default: enough for --digits)
        #[arg(short = 'n')]
        n_max: Option<u32>,
        /// Use atan(x) = sign(x) pi/2 - atan(1/x) when |x| > 1
        #[arg(long)]
        range_reduce: bool,
    },
    /// pi from a generated two-term Machin-like formula
    Pi {
        #[arg(short = 'k', default_value_t = 27)]
        k: u32,
        #[arg(short = 'M', default_value_t = 1)]
        subintervals: u32,
        /// Terms per node (default: enough for --digits)
        #[arg(short = 'n')]
        n_max: Option<u32>,
        /// Digits of the fixed-point second argument (default: --digits)
        #[arg(long)]
        second_arg_digits: Option<u32>,
        /// Keep the second argument as an exact rational
        #[arg(long)]
        exact: bool,
        /// Digit cap for --exact
        #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
        digit_cap: u64,
        /// Round gamma on a 10^-m grid
        #[arg(long, default_value_t = 0)]
        grain: u32,
        #[arg(long, default_value = "floor")]
        rounding: String,
        /// Print correct digits for n_max = 1..=rate-max
        #[arg(long)]
        report_rate: bool,
        #[arg(long, default_value_t = 30)]
        rate_max: u32,
    },
    /// Error table over a grid of x
    Convergence {
        #[arg(long, default_value = "-20", allow_hyphen_values = true)]
        x_min: String,
        #[arg(long, default_value = "20", allow_hyphen_values = true)]
        x_max: String,
        /// Decimal or pi/N
        #[arg(long, default_value = "pi/20")]
        step: String,
        #[arg(long, value_delimiter = ',', default_value = "maclaurin,euler,emi")]
        series: Vec<String>,
        #[arg(short = 'M', value_delimiter = ',', default_value = "1,2,3,4,5")]
        subintervals: Vec<u32>,
        #[arg(short = 'n', default_value_t = 10)]
        n_max: u32,
    },
    /// Integrate poly:c0,c1,..., atan-kernel:x or runge over (a, b)
    Integrate {
        integrand: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(short = 'M', default_value_t = 1)]
        subintervals: u32,
        /// Highest n in the derivative sum
        #[arg(short = 'N', default_value_t = 4)]
        order: u32,
    },
    /// The gamma selected for a given k
    Gamma {
        #[arg(short = 'k')]
        k: u32,
        #[arg(long, default_value_t = 0)]
        grain: u32,
        #[arg(long, default_value = "floor")]
        rounding: String,
    },
    /// Pi from two independent formulas, checked against each other
    SelfCheck,
}

#[derive(Debug)]
enum Failure {
    Emi(EmiError),
    Io(io::Error),
}

impl From<EmiError> for Failure {
    fn from(e: EmiError) -> Self {
        Failure::Emi(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Emi(e) => match e {
                EmiError::SelfCheckFailed { .. } => 3,
                EmiError::DigitCapExceeded { .. } => 4,
                EmiError::Parse(_)
                | EmiError::InvalidArgument(_)
                | EmiError::EmptyInterval
                | EmiError::AmbiguousRounding { .. }
                | EmiError::InsufficientScale { .. } => 2,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Emi(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// What a command produced: the main output and the summary for stderr.
struct Produced {
    body: String,
    report: Option<RunReport>,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. The main output goes to `stdout` or `--out`; summaries and errors go
/// to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo = args.iter().map(|a| a.to_string_lossy()).collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => Cli { echo, ..cli },
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            f.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome<()> {
    let started = Instant::now();
    let mut produced = match &cli.command {
        Command::Atan {
            x,
            subintervals,
            n_max,
            range_reduce,
        } => cmd_atan(cli, x, *subintervals, *n_max, *range_reduce)?,
        Command::Pi {
            k,
            subintervals,
            n_max,
            second_arg_digits,
            exact,
            digit_cap,
            grain,
            rounding,
            report_rate,
            rate_max,
        } => {
            let mode = if *exact {
                SecondArgMode::Exact { cap: *digit_cap }
            } else {
                SecondArgMode::Fixed
            };
            let opts = PiOptions {
                k: *k,
                subintervals: *subintervals,
                n_max: *n_max,
                second_arg_digits: *second_arg_digits,
                mode,
                grain: *grain,
                rounding: rounding.parse()?,
                rate_max: report_rate.then_some(*rate_max),
            };
            cmd_pi(cli, &opts)?
        }
        Command::Convergence {
            x_min,
            x_max,
            step,
            series,
            subintervals,
            n_max,
        } => {
            let cfg = ConvergenceConfig {
                x_min: x_min.parse()?,
                x_max: x_max.parse()?,
                step: step.parse::<GridStep>()?,
                series: series
                    .iter()
                    .map(|s| s.trim().parse::<SeriesId>())
                    .collect::<crate::Result<_>>()?,
                subintervals: subintervals.clone(),
                n_max: *n_max,
                reference_digits: cli.digits.unwrap_or(60),
            };
            cmd_convergence(cli, &cfg)?
        }
        Command::Integrate {
            integrand,
            a,
            b,
            subintervals,
            order,
        } => cmd_integrate(cli, integrand, a, b, *subintervals, *order)?,
        Command::Gamma { k, grain, rounding } => cmd_gamma(cli, *k, *grain, rounding.parse()?)?,
        Command::SelfCheck => {
            let digits = cli.digits.unwrap_or(50);
            let pi = self_check_pi(digits)?;
            let text = pi.to_digits(digits)?;
            Produced {
                body: format!("{text}\n"),
                report: Some(RunReport::new("self-check".into(), digits, 0, 0, 0, &text)),
            }
        }
    };
    match &cli.out {
        Some(path) => File::create(path)?.write_all(produced.body.as_bytes())?,
        None => stdout.write_all(produced.body.as_bytes())?,
    }
    if let Some(report) = produced.report.as_mut() {
        report.wall_ms = started.elapsed().as_millis();
        writeln!(stderr, "{report}")?;
    }
    Ok(())
}

fn precision(cli: &Cli, digits: u32, n_max: u32, subintervals: u32) -> Precision {
    match cli.guard {
        Some(g) => Precision::new(digits, g),
        None => Precision::for_series(digits, n_max, subintervals),
    }
}

fn cmd_atan(cli: &Cli, x: &str, subintervals: u32, n_max: Option<u32>, range_reduce: bool) -> Outcome<Produced> {
    let digits = cli.digits.unwrap_or(30);
    if subintervals == 0 {
        return Err(EmiError::InvalidArgument("M must be at least 1".into()).into());
    }
    let x: FixedReal = x.parse()?;
    let reduce = range_reduce && x.abs() > FixedReal::one();
    let base = Precision::with_digits(digits).inflate(5);
    let arg = if reduce {
        FixedReal::one().div(&x, base)?
    } else {
        x.clone()
    };
    let n = n_max.unwrap_or_else(|| terms_for_digits(arg.abs().to_f64(), subintervals, digits));
    let prec = precision(cli, digits, n, subintervals);
    let mut value = atan_emi(&arg, subintervals, n, prec)?.value;
    if reduce {
        let half_pi = self_check_pi(prec.working_scale())?.div_int(&BigInt::from(2), prec)?;
        let half_pi = if x.is_negative() { -half_pi } else { half_pi };
        value = (&half_pi - &value).round_to(prec.working_scale());
    }
    let text = value.to_digits(digits)?;
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Text => format!("{text}\n"),
        Format::Csv => format!("x,M,n_max,value\n{x},{subintervals},{n},{text}\n"),
    };
    let terms = u64::from(n) * u64::from(subintervals);
    Ok(Produced {
        body,
        report: Some(RunReport::new(cli.echo.clone(), digits, prec.guard(), 0, terms, &text)),
    })
}

struct PiOptions {
    k: u32,
    subintervals: u32,
    n_max: Option<u32>,
    second_arg_digits: Option<u32>,
    mode: SecondArgMode,
    grain: u32,
    rounding: RoundingMode,
    rate_max: Option<u32>,
}

fn cmd_pi(cli: &Cli, o: &PiOptions) -> Outcome<Produced> {
    let digits = cli.digits.unwrap_or(100);
    if o.subintervals == 0 {
        return Err(EmiError::InvalidArgument("M must be at least 1".into()).into());
    }
    let second_digits = o.second_arg_digits.unwrap_or(digits);
    let formula = MachinTwoTerm::generate(o.k, o.grain, o.rounding, o.mode, Precision::with_digits(second_digits))?;
    let n = o
        .n_max
        .unwrap_or_else(|| formula.terms_for_digits(o.subintervals, digits));
    let prec = precision(cli, digits, n, o.subintervals);
    let pi = machin_eval(&formula, o.subintervals, n, prec)?;
    verify_pi(&pi, digits)?;
    let text = pi.to_digits(digits)?;
    let format = cli.format.unwrap_or(Format::Text);
    let mut body = match format {
        Format::Text => format!("{text}\n"),
        Format::Csv => format!("k,M,n_max,pi\n{},{},{n},{text}\n", o.k, o.subintervals),
    };
    if let Some(rate_max) = o.rate_max {
        let reference = self_check_pi(digits + 10)?;
        let rate_prec = precision(cli, digits, rate_max, o.subintervals);
        let rows = digits_per_increment(&formula, o.subintervals, 1..=rate_max, &reference, rate_prec)?;
        if format == Format::Csv {
            body.push_str("n_max,correct_digits,gained\n");
        }
        for r in rows {
            let gained = r.gained.map_or(String::new(), |g| g.to_string());
            match format {
                Format::Text => body.push_str(&format!(
                    "n_max={} correct_digits={} gained={}\n",
                    r.n_max,
                    r.correct_digits,
                    if gained.is_empty() { "-" } else { &gained }
                )),
                Format::Csv => body.push_str(&format!("{},{},{gained}\n", r.n_max, r.correct_digits)),
            }
        }
    }
    let terms = 2 * u64::from(n) * u64::from(o.subintervals);
    let mut report = RunReport::new(cli.echo.clone(), digits, prec.guard(), 0, terms, &text);
    report.command = format!("{}\nformula: {formula}", report.command);
    Ok(Produced {
        body,
        report: Some(report),
    })
}

fn cmd_convergence(cli: &Cli, cfg: &ConvergenceConfig) -> Outcome<Produced> {
    let records = run_convergence(cfg)?;
    let mut buf = Vec::new();
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(&records, &mut buf)?,
        Format::Text => write_text(&records, &mut buf)?,
    }
    Ok(Produced {
        body: String::from_utf8(buf).expect("rows are ASCII"),
        report: None,
    })
}

enum Integrand {
    Poly(Polynomial),
    Kernel(ArctanKernel),
    Runge,
}

fn parse_integrand(s: &str) -> crate::Result<Integrand> {
    if s == "runge" {
        return Ok(Integrand::Runge);
    }
    if let Some(x) = s.strip_prefix("atan-kernel:") {
        return Ok(Integrand::Kernel(ArctanKernel { x: x.parse()? }));
    }
    if let Some(list) = s.strip_prefix("poly:") {
        let coeffs = list
            .split(',')
            .map(|c| c.trim().parse::<FixedReal>().map(|v| v.to_rational()))
            .collect::<crate::Result<Vec<BigRational>>>()?;
        return Ok(Integrand::Poly(Polynomial::new(coeffs)));
    }
    Err(EmiError::Parse(format!(
        "integrand must be poly:c0,c1,..., atan-kernel:x or runge, got {s:?}"
    )))
}

fn cmd_integrate(cli: &Cli, integrand: &str, a: &str, b: &str, subintervals: u32, order: u32) -> Outcome<Produced> {
    let digits = cli.digits.unwrap_or(30);
    let integrand = parse_integrand(integrand)?;
    let a: FixedReal = a.parse()?;
    let b: FixedReal = b.parse()?;
    let spec = QuadratureSpec::new(subintervals, order, a.clone(), b.clone())?;
    let prec = precision(cli, digits, order + 1, subintervals);
    let provider: &dyn DerivativeProvider = match &integrand {
        Integrand::Poly(p) => p,
        Integrand::Kernel(k) => k,
        Integrand::Runge => &Runge,
    };
    let estimate = emi_integrate(provider, &spec, prec)?;
    let exact = match &integrand {
        Integrand::Poly(p) => {
            FixedReal::from_rational(&p.integral(&a.to_rational(), &b.to_rational()), prec.working_scale())
        }
        Integrand::Kernel(k) => {
            let hi = reference_atan(&k.x.mul(&b, prec), digits + 5)?;
            let lo = reference_atan(&k.x.mul(&a, prec), digits + 5)?;
            &hi - &lo
        }
        Integrand::Runge => &reference_atan(&b, digits + 5)? - &reference_atan(&a, digits + 5)?,
    };
    let error = (&estimate - &exact).abs();
    let text = estimate.to_digits(digits)?;
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Text => format!("{text}\nabs_error={}\n", error.to_scientific(6)),
        Format::Csv => format!(
            "M,N,estimate,abs_error\n{subintervals},{order},{text},{}\n",
            error.to_scientific(6)
        ),
    };
    let terms = u64::from(order + 1) * u64::from(subintervals);
    Ok(Produced {
        body,
        report: Some(RunReport::new(cli.echo.clone(), digits, prec.guard(), 0, terms, &text)),
    })
}

fn cmd_gamma(cli: &Cli, k: u32, grain: u32, rounding: RoundingMode) -> Outcome<Produced> {
    let digits = cli.digits.unwrap_or(60);
    let prec = precision(cli, digits, 0, 0);
    let gamma = gamma_select(k, grain, rounding, prec)?;
    let pi = self_check_pi(digits)?;
    let residual = lead_residual(k, &gamma, &pi, prec)?;
    let lead = BigInt::one() << (k - 1);
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Text => format!(
            "gamma={}/{}\nlead_coefficient={lead}\nresidual={}\n",
            gamma.numer(),
            gamma.denom(),
            residual.to_scientific(12)
        ),
        Format::Csv => format!(
            "k,gamma,lead_coefficient,residual\n{k},{}/{},{lead},{}\n",
            gamma.numer(),
            gamma.denom(),
            residual.to_scientific(12)
        ),
    };
    Ok(Produced { body, report: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("emi").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["nonsense"]).0, 2);
        assert_eq!(run_args(&["atan", "abc"]).0, 2);
        assert_eq!(run_args(&["integrate", "runge", "1", "0"]).0, 2);
        assert_eq!(run_args(&["pi", "-k", "27", "--exact", "--digits", "10"]).0, 4);
        assert_eq!(run_args(&["pi", "-k", "5", "-n", "2", "--digits", "40"]).0, 3);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn atan_and_reduction() {
        let (code, out, _) = run_args(&["atan", "1", "-M", "2", "--digits", "20"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0.78539816339744830961\n");
        let (_, direct, _) = run_args(&["atan", "-7", "-M", "4", "--digits", "25"]);
        let (_, reduced, _) = run_args(&["atan", "-7", "--range-reduce", "--digits", "25"]);
        assert_eq!(direct, reduced);
        assert!(direct.starts_with("-1.4288992721907326964"));
    }

    #[test]
    fn integrate_and_gamma() {
        let (code, out, _) = run_args(&["integrate", "poly:0,0,3", "0", "2", "-M", "1", "-N", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("8.000"), "{out}");
        assert!(out.contains("abs_error=0.00000e0"));
        let (code, out, _) = run_args(&["gamma", "-k", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("gamma=2/1\nlead_coefficient=2\n"));
    }
}
