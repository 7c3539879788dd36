//! Per-run summaries and convergence rows.

use std::fmt;
use std::io::{self, Write};

use crate::fixed::FixedReal;
use crate::series::SeriesId;

/// One cell of the convergence grid. `subintervals` is 0 for series without
/// a node count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRecord {
    pub series: SeriesId,
    pub x: FixedReal,
    pub subintervals: u32,
    pub n_max: u32,
    pub abs_error: FixedReal,
}

pub const CSV_HEADER: &str = "series,x,M,n_max,abs_error,log10_error";

impl ConvergenceRecord {
    /// `log10 |error|`, or negative infinity for an exact hit.
    pub fn log10_error(&self) -> f64 {
        self.abs_error.log10_abs()
    }

    fn fields(&self) -> [String; 6] {
        let log = self.log10_error();
        let log = if log == f64::NEG_INFINITY {
            "-inf".to_string()
        } else {
            format!("{log:.6}")
        };
        [
            self.series.as_str().to_string(),
            self.x.round_to(12).to_string(),
            self.subintervals.to_string(),
            self.n_max.to_string(),
            self.abs_error.to_scientific(10),
            log,
        ]
    }

    pub fn to_csv_row(&self) -> String {
        self.fields().join(",")
    }
}

pub fn write_csv<W: Write>(records: &[ConvergenceRecord], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.to_csv_row())?;
    }
    Ok(())
}

pub fn write_text<W: Write>(records: &[ConvergenceRecord], out: &mut W) -> io::Result<()> {
    writeln!(
        out,
        "{:<10} {:>17} {:>4} {:>5} {:>18} {:>12}",
        "series", "x", "M", "n_max", "abs_error", "log10_error"
    )?;
    for r in records {
        let [series, x, m, n, err, log] = r.fields();
        writeln!(out, "{series:<10} {x:>17} {m:>4} {n:>5} {err:>18} {log:>12}")?;
    }
    Ok(())
}

/// Summary printed after a run: what was asked, how long it took and a digest
/// of the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub digits: u32,
    pub guard: u32,
    pub wall_ms: u128,
    pub terms: u64,
    pub head: String,
    pub tail: String,
}

impl RunReport {
    /// Fills `head`/`tail` with the first and last 20 characters of the
    /// fractional digits of `rendered`.
    pub fn new(command: String, digits: u32, guard: u32, wall_ms: u128, terms: u64, rendered: &str) -> Self {
        let frac = rendered.split_once('.').map_or("", |(_, f)| f);
        let head: String = frac.chars().take(20).collect();
        let skip = frac.len().saturating_sub(20);
        let tail: String = frac.chars().skip(skip).collect();
        RunReport {
            command,
            digits,
            guard,
            wall_ms,
            terms,
            head,
            tail,
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        writeln!(f, "digits: {} (guard {})", self.digits, self.guard)?;
        writeln!(f, "wall_ms: {}", self.wall_ms)?;
        writeln!(f, "terms: {}", self.terms)?;
        writeln!(f, "first_digits: {}", self.head)?;
        write!(f, "last_digits: {}", self.tail)
    }
}
