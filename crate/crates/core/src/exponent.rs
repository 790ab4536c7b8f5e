//! Error-exponent bounds for the AWGN channel without feedback and for the
//! concatenated scheme whose inner code is the geometric feedback scheme.
//!
//! All rates are in nats per channel use. `P` denotes the SNR of the channel
//! the bound is applied to; for the concatenated scheme the outer code sees
//! `SNR(N)` per superchannel use at rate `N R`.

use crate::builder::{scheme_snr_closed_form, solve_beta0, solve_gamma0};
use crate::error::{Error, Result};
use crate::model::ChannelParams;
use crate::roots::bisect;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default largest inner blocklength searched.
pub const DEFAULT_N_MAX: usize = 1024;

pub fn nats_to_bits(x: f64) -> f64 {
    x / std::f64::consts::LN_2
}

pub fn bits_to_nats(x: f64) -> f64 {
    x * std::f64::consts::LN_2
}

/// Capacity `ln(1 + P) / 2` in nats.
pub fn capacity(p: f64) -> f64 {
    0.5 * p.ln_1p()
}

fn check_power(p: f64) -> Result<()> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::Domain(format!("SNR must be finite and nonnegative, got {p}")));
    }
    Ok(())
}

fn check_rate(r: f64, p: f64) -> Result<()> {
    let c = capacity(p);
    if !(r >= 0.0) || r > c * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::Domain(format!("rate {r} outside [0, C = {c}]")));
    }
    Ok(())
}

/// Rates where the open-loop bound changes form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateThresholds {
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

pub fn rate_thresholds(p: f64) -> Result<RateThresholds> {
    check_power(p)?;
    let root = (1.0 + p * p / 4.0).sqrt();
    Ok(RateThresholds {
        r1: 0.5 * (0.5 + 0.5 * root).ln(),
        r2: 0.5 * (0.5 + p / 4.0 + 0.5 * root).ln(),
        c: capacity(p),
    })
}

/// Sphere-packing exponent with `theta = asin(exp(-R))`,
/// `g = (sqrt(P) cos theta + sqrt(P cos^2 theta + 4)) / 2`:
/// `P/2 - sqrt(P) g cos theta / 2 - ln(g sin theta)`.
pub fn sphere_packing_exponent(r: f64, p: f64) -> Result<f64> {
    check_power(p)?;
    check_rate(r, p)?;
    let sin = (-r).exp();
    let cos = (1.0 - sin * sin).max(0.0).sqrt();
    let sp = p.sqrt();
    let g = 0.5 * (sp * cos + (p * cos * cos + 4.0).sqrt());
    Ok((p / 2.0 - sp * g * cos / 2.0 - (g * sin).ln()).max(0.0))
}

/// `(1 + delta) H(delta / (1 + delta)) = (1 + delta) ln(1 + delta) - delta ln delta`.
fn md_rate(delta: f64) -> f64 {
    if delta == 0.0 {
        return 0.0;
    }
    (1.0 + delta) * delta.ln_1p() - delta * delta.ln()
}

/// Root `delta*` of `(1 + delta) H(delta / (1 + delta)) = R` and its residual.
pub fn delta_star(r: f64) -> Result<(f64, f64)> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("rate must be finite and nonnegative, got {r}")));
    }
    if r == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut hi = 1.0;
    while md_rate(hi) < r {
        hi *= 2.0;
    }
    let delta = bisect(|d| md_rate(d) - r, 0.0, hi, 200);
    Ok((delta, r - md_rate(delta)))
}

/// Minimum-distance exponent `(P/8) d^2` with
/// `d = sqrt(2) (sqrt(1 + delta*) - sqrt(delta*)) / sqrt(1 + 2 delta*)`.
pub fn min_distance_exponent(r: f64, p: f64) -> Result<f64> {
    check_power(p)?;
    let (delta, _) = delta_star(r)?;
    let diff = 1.0 / ((1.0 + delta).sqrt() + delta.sqrt());
    let d2 = 2.0 * diff * diff / (1.0 + 2.0 * delta);
    Ok(p / 8.0 * d2)
}

fn expurgated(r: f64, p: f64) -> f64 {
    p / 4.0 * (1.0 - (-(-2.0 * r).exp_m1()).sqrt())
}

/// Lower bound on the AWGN reliability function: expurgated on `[0, R1]`,
/// the unit-slope line on `(R1, R2]` and sphere packing on `(R2, C]`.
pub fn random_coding_lower_bound_openloop(r: f64, p: f64) -> Result<f64> {
    check_power(p)?;
    check_rate(r, p)?;
    let t = rate_thresholds(p)?;
    if r <= t.r1 {
        Ok(expurgated(r, p))
    } else if r <= t.r2 {
        Ok(expurgated(t.r1, p) + t.r1 - r)
    } else {
        sphere_packing_exponent(r, p)
    }
}

/// `(1 + sigma2) rho / (4 sigma2)`; infinite for noiseless feedback.
pub fn zero_rate_exponent(rho: f64, sigma2: f64) -> f64 {
    if sigma2 == 0.0 {
        return f64::INFINITY;
    }
    (1.0 + sigma2) * rho / (4.0 * sigma2)
}

/// `(1 + sigma2) rho / (2 sigma2)`; infinite for noiseless feedback.
pub fn binary_error_exponent(rho: f64, sigma2: f64) -> f64 {
    if sigma2 == 0.0 {
        return f64::INFINITY;
    }
    (1.0 + sigma2) * rho / (2.0 * sigma2)
}

/// Rate in bits per use above which the concatenated scheme should not use
/// feedback: `log2(1 + 2 (1 + sigma2)(1 - gamma0) rho / sigma2) / 2`.
pub fn feedback_useless_threshold(rho: f64, sigma2: f64, gamma0: f64) -> f64 {
    if sigma2 == 0.0 {
        return f64::INFINITY;
    }
    0.5 * (1.0 + 2.0 * (1.0 + sigma2) * (1.0 - gamma0) * rho / sigma2).log2()
}

/// `SNR(N)` of the geometric scheme with `(beta0, gamma0)` for
/// `N = 1..=n_max`; `SNR(1) = rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerSnrTable {
    rho: f64,
    sigma2: f64,
    snr: Vec<f64>,
    gamma0: Vec<f64>,
}

impl InnerSnrTable {
    /// Requires `sigma2 > 0`: with noiseless feedback `SNR(N)` grows without
    /// bound and the exponents are infinite.
    pub fn new(rho: f64, sigma2: f64, n_max: usize) -> Result<Self> {
        if !(sigma2 > 0.0) {
            return Err(Error::Domain("exponent bounds need sigma2 > 0".into()));
        }
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        ChannelParams::new(1, rho, sigma2)?;
        let entries: Vec<Result<(f64, f64)>> = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                if n == 1 {
                    return Ok((rho, 0.0));
                }
                let p = ChannelParams::new(n, rho, sigma2)?;
                let g = solve_gamma0(&p)?.gamma0;
                let b = solve_beta0(&p, g)?.beta0;
                Ok((scheme_snr_closed_form(&p, g, b)?, g))
            })
            .collect();
        let mut snr = Vec::with_capacity(n_max);
        let mut gamma0 = Vec::with_capacity(n_max);
        for e in entries {
            let (s, g) = e?;
            snr.push(s);
            gamma0.push(g);
        }
        Ok(InnerSnrTable { rho, sigma2, snr, gamma0 })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn n_max(&self) -> usize {
        self.snr.len()
    }

    /// `SNR(n)` for `1 <= n <= n_max`.
    pub fn snr(&self, n: usize) -> f64 {
        self.snr[n - 1]
    }

    pub fn gamma0(&self, n: usize) -> f64 {
        self.gamma0[n - 1]
    }

    /// Open-loop capacity `C(rho)`.
    pub fn capacity(&self) -> f64 {
        capacity(self.rho)
    }

    /// Whether inner length `n` may be used at rate `r`: always for `n = 1`,
    /// otherwise `n r < C(rho)` and `n r <= C(SNR(n))`.
    pub fn admissible(&self, n: usize, r: f64) -> bool {
        let nr = n as f64 * r;
        n == 1 || (nr < self.capacity() && nr <= capacity(self.snr(n)))
    }
}

/// Best `(1/N) f(N R, SNR(N))` over admissible `N`, first maximiser on ties.
fn best_over_n<F>(r: f64, table: &InnerSnrTable, f: F) -> Result<(f64, usize)>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut best = (f64::NEG_INFINITY, 1);
    for n in 1..=table.n_max() {
        if !table.admissible(n, r) {
            if r > 0.0 && n as f64 * r >= table.capacity() {
                break;
            }
            continue;
        }
        let v = f(n as f64 * r, table.snr(n))? / n as f64;
        if v > best.0 {
            best = (v, n);
        }
    }
    Ok(best)
}

/// Lower bound `max_N (1/N) E_openloop(N R; SNR(N))` and its maximiser.
/// Rates at or above `C(rho)` give `(0, 1)`.
pub fn feedback_exponent_lower(r: f64, table: &InnerSnrTable) -> Result<(f64, usize)> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("rate must be nonnegative, got {r}")));
    }
    if r >= table.capacity() {
        return Ok((0.0, 1));
    }
    best_over_n(r, table, random_coding_lower_bound_openloop)
}

/// Upper bound `max_N (1/N) min(E_md, E_sp)(N R; SNR(N))` over the same
/// admissible `N`, and its maximiser.
pub fn feedback_exponent_upper(r: f64, table: &InnerSnrTable) -> Result<(f64, usize)> {
    check_rate(r, table.rho)?;
    if r >= table.capacity() {
        return Ok((0.0, 1));
    }
    best_over_n(r, table, |nr, p| {
        Ok(min_distance_exponent(nr, p)?.min(sphere_packing_exponent(nr, p)?))
    })
}

/// How `theta_N` is read in the `N*` approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ThetaReading {
    /// `theta_N = asin(exp(-N R))`, matching the sphere-packing angle.
    #[default]
    ExpNegative,
    /// `theta_N = asin(-N R)` as literally written; undefined for `N R > 1`.
    Verbatim,
}

/// Result of the analytic `N*` approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NStarApprox {
    pub n: usize,
    /// Real root before flooring; `NaN` when none was found.
    pub root: f64,
    /// True when no root was found and `n` is the grid-search value.
    pub fallback: bool,
}

/// Floor of the root in `N > 1` of
/// `2 (N^(3/2) - N) = cos theta_N (1 - cos theta_N) / (R sin^2 theta_N)`,
/// clamped so that `n R < C(rho)`.
pub fn optimal_n_approx(r: f64, table: &InnerSnrTable, reading: ThetaReading) -> Result<NStarApprox> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("rate must be positive, got {r}")));
    }
    let c = table.capacity();
    let phi = |n: f64| {
        let (sin, cos) = match reading {
            ThetaReading::ExpNegative => {
                let s = (-n * r).exp();
                (s, (1.0 - s * s).max(0.0).sqrt())
            }
            ThetaReading::Verbatim => {
                let s = -n * r;
                (s, (1.0 - s * s).sqrt())
            }
        };
        2.0 * (n.powf(1.5) - n) - cos * (1.0 - cos) / (r * sin * sin)
    };
    let upper = (c / r).min(table.n_max() as f64);
    let step = 0.01;
    let mut root = f64::NAN;
    let mut a = 1.0 + 1e-9;
    let mut fa = phi(a);
    while a < upper {
        let b = (a + step).min(upper);
        let fb = phi(b);
        if fa.is_finite() && fb.is_finite() && (fa < 0.0) != (fb < 0.0) {
            root = bisect(phi, a, b, 100);
            break;
        }
        a = b;
        fa = fb;
    }
    if root.is_nan() {
        let (_, n) = feedback_exponent_lower(r, table)?;
        return Ok(NStarApprox { n, root, fallback: true });
    }
    let mut n = (root.floor() as usize).max(1);
    while n > 1 && n as f64 * r >= c {
        n -= 1;
    }
    Ok(NStarApprox { n, root, fallback: false })
}

/// One row of the `N*` scaling table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub rate: f64,
    pub n_star: usize,
    /// `C(rho) / R`.
    pub c_over_r: f64,
    /// `N* R / C(rho)`.
    pub ratio: f64,
}

/// `N*` against `C / R` over the given rates.
pub fn optimal_n_scaling_check(table: &InnerSnrTable, rates: &[f64]) -> Result<Vec<ScalingRow>> {
    let c = table.capacity();
    rates
        .iter()
        .map(|&rate| {
            let (_, n_star) = feedback_exponent_lower(rate, table)?;
            Ok(ScalingRow {
                rate,
                n_star,
                c_over_r: c / rate,
                ratio: n_star as f64 * rate / c,
            })
        })
        .collect()
}

/// One rate of an [`ExponentCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentRow {
    #[serde(rename = "R")]
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
    #[serde(rename = "N_star")]
    pub n_star: usize,
    /// Open-loop lower bound at `rho`.
    pub open_loop: f64,
    /// Analytic approximation of `N*` (`None` at `R = 0`).
    #[serde(rename = "N_approx")]
    pub n_approx: Option<usize>,
}

/// Exponent bounds sampled over a rate grid (nats).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentCurve {
    pub rho: f64,
    pub sigma2: f64,
    pub n_max: usize,
    pub units: String,
    pub rows: Vec<ExponentRow>,
}

impl ExponentCurve {
    /// Evaluates every rate in parallel; rows keep the order of `rates`.
    pub fn compute(rho: f64, sigma2: f64, rates: &[f64], n_max: usize) -> Result<Self> {
        let table = InnerSnrTable::new(rho, sigma2, n_max)?;
        Self::from_table(&table, rates)
    }

    pub fn from_table(table: &InnerSnrTable, rates: &[f64]) -> Result<Self> {
        let c = table.capacity();
        let rows: Vec<Result<ExponentRow>> = rates
            .par_iter()
            .map(|&rate| {
                check_rate(rate, table.rho())?;
                let (lower, n_star) = feedback_exponent_lower(rate, table)?;
                let (upper, _) = feedback_exponent_upper(rate, table)?;
                let open_loop = random_coding_lower_bound_openloop(rate.min(c), table.rho())?;
                let n_approx = if rate > 0.0 {
                    Some(optimal_n_approx(rate, table, ThetaReading::ExpNegative)?.n)
                } else {
                    None
                };
                Ok(ExponentRow {
                    rate,
                    lower,
                    upper,
                    n_star,
                    open_loop,
                    n_approx,
                })
            })
            .collect();
        Ok(ExponentCurve {
            rho: table.rho(),
            sigma2: table.sigma2(),
            n_max: table.n_max(),
            units: "nats".into(),
            rows: rows.into_iter().collect::<Result<_>>()?,
        })
    }
}
