//! Parameter grids and scalar values as given on the command line.
//!
//! A float grid is a comma-separated list of items. Each item is a single
//! value `1.5`, or an inclusive evenly spaced range `start:stop:count`. An
//! item ending in `dB` is read in decibels: `10dB` is `10`, and `0:10:11dB`
//! is eleven points spaced evenly in decibels from 0 to 10 dB.
//!
//! An integer grid is a comma-separated list of values `n` and inclusive
//! ranges `a:b` or `a:b:step`.

use crate::error::CliError;
use lfb_core::from_db;
use std::str::FromStr;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_f64(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| bad(format!("not a number: '{s}'")))?;
    if !v.is_finite() {
        return Err(bad(format!("not a finite number: '{s}'")));
    }
    Ok(v)
}

fn strip_db(item: &str) -> (&str, bool) {
    let t = item.trim();
    match t.len().checked_sub(2) {
        Some(cut) if t.is_char_boundary(cut) && t[cut..].eq_ignore_ascii_case("db") => (&t[..cut], true),
        _ => (t, false),
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

/// Parses a float grid; see the module documentation for the syntax.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let (body, db) = strip_db(item);
        if body.is_empty() {
            return Err(bad(format!("empty item in grid '{s}'")));
        }
        let parts: Vec<&str> = body.split(':').collect();
        let values = match parts.as_slice() {
            [v] => vec![parse_f64(v)?],
            [a, b, n] => {
                let count: usize = n.trim().parse().map_err(|_| bad(format!("bad point count '{n}'")))?;
                if count == 0 {
                    return Err(bad(format!("range '{body}' has no points")));
                }
                linspace(parse_f64(a)?, parse_f64(b)?, count)
            }
            _ => return Err(bad(format!("expected 'value' or 'start:stop:count', got '{body}'"))),
        };
        out.extend(values.into_iter().map(|v| if db { from_db(v) } else { v }));
    }
    Ok(out)
}

/// Parses a single value, optionally in decibels.
pub fn parse_scalar(s: &str) -> Result<f64, CliError> {
    match parse_grid(s)?.as_slice() {
        [v] => Ok(*v),
        _ => Err(bad(format!("expected a single value, got '{s}'"))),
    }
}

/// Parses an integer grid; see the module documentation for the syntax.
pub fn parse_int_grid(s: &str) -> Result<Vec<usize>, CliError> {
    let int = |t: &str| -> Result<usize, CliError> {
        t.trim().parse().map_err(|_| bad(format!("not a nonnegative integer: '{t}'")))
    };
    let mut out = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(int(v)?),
            [a, b] => out.extend(int(a)?..=int(b)?),
            [a, b, step] => {
                let step = int(step)?;
                if step == 0 {
                    return Err(bad(format!("zero step in '{item}'")));
                }
                out.extend((int(a)?..=int(b)?).step_by(step));
            }
            _ => return Err(bad(format!("expected 'n', 'a:b' or 'a:b:step', got '{item}'"))),
        }
    }
    Ok(out)
}

/// How the power split `gamma` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaMode {
    /// A fixed value in `[0, 1]`.
    Value(f64),
    /// `(N - 1)/N`, the split of the S-K scheme.
    Sk,
    /// `gamma0`, the root of the stationarity equation.
    Optimal,
    /// `1/sqrt(N)`.
    Asymptotic,
    /// Numerical maximiser of the exact SNR.
    Exact,
}

impl FromStr for GammaMode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sk" => Ok(GammaMode::Sk),
            "optimal" => Ok(GammaMode::Optimal),
            "asymptotic" => Ok(GammaMode::Asymptotic),
            "exact" => Ok(GammaMode::Exact),
            other => {
                let v = parse_f64(other)
                    .map_err(|_| bad(format!("gamma must be a number or sk|optimal|asymptotic|exact, got '{s}'")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(format!("gamma must lie in [0, 1], got {v}")));
                }
                Ok(GammaMode::Value(v))
            }
        }
    }
}

impl std::fmt::Display for GammaMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaMode::Value(v) => write!(f, "{v}"),
            GammaMode::Sk => f.write_str("sk"),
            GammaMode::Optimal => f.write_str("optimal"),
            GammaMode::Asymptotic => f.write_str("asymptotic"),
            GammaMode::Exact => f.write_str("exact"),
        }
    }
}
