//! Monte Carlo estimators: empirical SNR, binary BER and the concatenated
//! superchannel.
//!
//! Trials are cut into fixed chunks of [`CHUNK`] frames. Chunks run in
//! parallel and their tallies are merged in chunk order, so every result is
//! a deterministic function of the seed alone.

use super::outer::OuterCode;
use super::pam::SymbolSet;
use super::rng::{gaussian, stream, StreamKind};
use super::transmission::{run_seeded_transmission, run_sequential_transmission, EstimatorForm};
use crate::error::{Error, Result};
use crate::model::{received_snr_direct, transmit_power, LinearScheme};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Frames per parallel work unit.
pub const CHUNK: u64 = 1024;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Standard normal tail `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Antipodal error probability `Q(sqrt(snr))`.
pub fn binary_error_prob_analytic(snr: f64) -> f64 {
    q_function(snr.max(0.0).sqrt())
}

/// Chernoff bound `exp(-snr/2) / 2` on [`binary_error_prob_analytic`].
pub fn binary_error_bound(snr: f64) -> f64 {
    0.5 * (-snr.max(0.0) / 2.0).exp()
}

fn chunked<T, F>(trials: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| work(c * CHUNK..((c + 1) * CHUNK).min(trials)))
        .collect()
}

/// Raw power sums of a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: f64,
    s1: f64,
    s2: f64,
    s3: f64,
    s4: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        let v2 = v * v;
        self.n += 1.0;
        self.s1 += v;
        self.s2 += v2;
        self.s3 += v2 * v;
        self.s4 += v2 * v2;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.s1 += o.s1;
        self.s2 += o.s2;
        self.s3 += o.s3;
        self.s4 += o.s4;
    }

    fn mean(&self) -> f64 {
        self.s1 / self.n
    }

    /// Population central moments `(m2, m4)`.
    fn central(&self) -> (f64, f64) {
        let m = self.mean();
        let (e2, e3, e4) = (self.s2 / self.n, self.s3 / self.n, self.s4 / self.n);
        let m2 = e2 - m * m;
        let m4 = e4 - 4.0 * m * e3 + 6.0 * m * m * e2 - 3.0 * m.powi(4);
        (m2, m4)
    }

    fn variance(&self) -> f64 {
        self.central().0 * self.n / (self.n - 1.0)
    }

    fn mean_stderr(&self) -> f64 {
        (self.variance() / self.n).sqrt()
    }

    /// Delta-method standard error of the sample variance.
    fn variance_stderr(&self) -> f64 {
        let (m2, m4) = self.central();
        ((m4 - m2 * m2).max(0.0) / self.n).sqrt()
    }
}

/// Empirical SNR together with the moments it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrEstimate {
    /// `E[theta^2] (q^T g)^2 / var(theta_hat - (q^T g) theta)`.
    pub snr: f64,
    pub snr_stderr: f64,
    /// Sample mean of `theta_hat - (q^T g) theta`.
    pub error_mean: f64,
    pub error_mean_stderr: f64,
    pub error_variance: f64,
    pub error_variance_stderr: f64,
    /// Sample mean of `x^T x`.
    pub power_mean: f64,
    pub power_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Sends `theta = sqrt(E[theta^2])` through the scheme `trials` times using
/// the sequential transmitter.
pub fn estimate_empirical_snr(scheme: &LinearScheme, trials: u64, seed: u64) -> Result<SnrEstimate> {
    if trials < 1000 {
        return Err(Error::InvalidParameter(format!("at least 1000 trials required, got {trials}")));
    }
    let theta = scheme.signal_energy().sqrt();
    let gain = scheme.message_gain();
    let parts = chunked(trials, |range| -> Result<(Moments, Moments)> {
        let mut err = Moments::default();
        let mut pow = Moments::default();
        for t in range {
            let rec = run_seeded_transmission(scheme, seed, t, theta)?;
            err.push(rec.theta_hat - gain * theta);
            pow.push(rec.x.iter().map(|v| v * v).sum());
        }
        Ok((err, pow))
    });
    let mut err = Moments::default();
    let mut pow = Moments::default();
    for part in parts {
        let (e, p) = part?;
        err.merge(&e);
        pow.merge(&p);
    }
    let var = err.variance();
    let var_se = err.variance_stderr();
    let snr = scheme.signal_energy() * gain * gain / var;
    Ok(SnrEstimate {
        snr,
        snr_stderr: snr * var_se / var,
        error_mean: err.mean(),
        error_mean_stderr: err.mean_stderr(),
        error_variance: var,
        error_variance_stderr: var_se,
        power_mean: pow.mean(),
        power_stderr: pow.mean_stderr(),
        trials,
        seed,
    })
}

/// Sampling strategy for [`simulate_binary_ber`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Direct simulation of equiprobable antipodal symbols.
    Plain,
    /// Mean-shifted noise aimed at the decision boundary, reweighted by the
    /// likelihood ratio. Needed once the error rate is far below `1/trials`.
    Importance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerEstimate {
    pub ber: f64,
    pub stderr: f64,
    /// 95% half-width.
    pub radius: f64,
    /// Raw count of error events (unweighted).
    pub errors: u64,
    pub trials: u64,
    pub seed: u64,
    pub sampling: Sampling,
}

/// Bit error rate of antipodal signalling `theta = +-sqrt(E[theta^2])` with
/// the sign decision on `theta_hat`.
///
/// Uses the linear form `theta_hat = (q^T g) theta + a^T z + b^T n`, which is
/// exactly the sequential transmitter's output.
pub fn simulate_binary_ber(
    scheme: &LinearScheme,
    trials: u64,
    seed: u64,
    sampling: Sampling,
) -> Result<BerEstimate> {
    if trials < 2 {
        return Err(Error::InvalidParameter(format!("at least 2 trials required, got {trials}")));
    }
    let form = EstimatorForm::of(scheme);
    if form.gain == 0.0 {
        return Err(Error::Singular { denominator: 0.0 });
    }
    let amp = scheme.signal_energy().sqrt();
    let len = scheme.n();
    let sd_n = scheme.params().sigma2().sqrt();
    let s2 = scheme.params().sigma2();
    // importance shift: z -> z - t a, n -> n - t sigma2 b
    let margin = amp * form.gain.abs();
    let t = margin / form.noise_variance;

    let parts = chunked(trials, |range| {
        let mut z = vec![0.0; len];
        let mut n = vec![0.0; len];
        let mut acc = Moments::default();
        let mut errors = 0u64;
        for frame in range {
            let mut gz = gaussian(seed, frame, StreamKind::Forward);
            let mut gn = gaussian(seed, frame, StreamKind::Feedback);
            gz.fill(&mut z, 1.0);
            gn.fill(&mut n, sd_n);
            match sampling {
                Sampling::Plain => {
                    let bit: bool = stream(seed, frame, StreamKind::Bits).gen();
                    let theta = if bit { amp } else { -amp };
                    let decided = form.estimate(theta, &z, &n) * form.gain.signum() >= 0.0;
                    let e = u64::from(decided != bit);
                    errors += e;
                    acc.push(e as f64);
                }
                Sampling::Importance => {
                    let mut w = 0.0;
                    for k in 0..len {
                        z[k] -= t * form.a[k];
                        n[k] -= t * s2 * form.b[k];
                        w += form.a[k] * z[k] + form.b[k] * n[k];
                    }
                    let theta = amp * form.gain.signum();
                    let wrong = form.estimate(theta, &z, &n) < 0.0;
                    if wrong {
                        errors += 1;
                        acc.push((t * w + 0.5 * t * t * form.noise_variance).exp());
                    } else {
                        acc.push(0.0);
                    }
                }
            }
        }
        (acc, errors)
    });
    let mut acc = Moments::default();
    let mut errors = 0;
    for (m, e) in parts {
        acc.merge(&m);
        errors += e;
    }
    let ber = acc.mean();
    let stderr = match sampling {
        Sampling::Plain => (ber * (1.0 - ber) / trials as f64).sqrt(),
        Sampling::Importance => acc.mean_stderr(),
    };
    Ok(BerEstimate {
        ber,
        stderr,
        radius: Z95 * stderr,
        errors,
        trials,
        seed,
        sampling,
    })
}

/// How inner estimates reach the outer decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Exact bit log-likelihood ratios of the soft estimate.
    #[default]
    Soft,
    /// Nearest-level slicing before decoding.
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatConfig {
    /// Outer code blocks to simulate.
    pub frames: u64,
    pub seed: u64,
    pub decision: Decision,
}

/// Tallies of a concatenated-code run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub outer: String,
    /// `"none"` for the open-loop channel.
    pub inner: String,
    /// Channel uses per outer symbol.
    pub inner_n: usize,
    pub m: usize,
    pub decision: Decision,
    /// Simulated outer blocks.
    pub trials: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub ber_radius: f64,
    pub fer: f64,
    pub fer_radius: f64,
    /// Superchannel SNR measured on the soft estimates.
    pub empirical_snr: f64,
    pub empirical_snr_stderr: f64,
    pub analytic_snr: f64,
    /// Mean square of the outer symbols, `E[theta^2]`.
    pub symbol_energy: f64,
    /// Average transmitted energy per information bit.
    pub energy_per_info_bit: f64,
    pub seed: u64,
}

fn binomial_radius(p: f64, n: f64) -> f64 {
    Z95 * (p * (1.0 - p) / n).sqrt()
}

#[derive(Default)]
struct ConcatTally {
    bit_errors: u64,
    frame_errors: u64,
    noise: Moments,
}

/// Runs outer code + inner feedback scheme (or the bare channel when
/// `inner` is `None`) for `cfg.frames` outer blocks.
///
/// Frame `f` draws its bits, forward noise and feedback noise from the
/// streams `(seed, f, kind)`, so an `N = 1` inner scheme reproduces the bare
/// channel exactly.
pub fn simulate_concatenated(
    outer: &dyn OuterCode,
    inner: Option<&LinearScheme>,
    symbols: &SymbolSet,
    cfg: ConcatConfig,
) -> Result<SimReport> {
    let bps = symbols.bits_per_symbol().ok_or_else(|| {
        Error::InvalidParameter(format!("alphabet size {} is not a power of two", symbols.m()))
    })?;
    if !outer.n_coded().is_multiple_of(bps) {
        return Err(Error::InvalidParameter(format!(
            "mismatched alphabet sizes: {} coded bits do not fill {}-bit symbols",
            outer.n_coded(),
            bps
        )));
    }
    if cfg.frames < 2 {
        return Err(Error::InvalidParameter("at least 2 frames required".into()));
    }
    let (gain, noise_var, per_symbol_energy, analytic_snr, inner_n, inner_name) = match inner {
        Some(s) => {
            let e = s.signal_energy();
            if (symbols.energy() - e).abs() > 1e-9 * e.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "symbol energy {} does not match the inner signal energy {e}",
                    symbols.energy()
                )));
            }
            let form = EstimatorForm::of(s);
            (
                form.gain,
                form.noise_variance,
                transmit_power(s).total,
                received_snr_direct(s)?,
                s.n(),
                format!("{:?}", s.kind()),
            )
        }
        None => (1.0, 1.0, symbols.energy(), symbols.energy(), 1, "none".to_string()),
    };
    let k_sym = outer.n_coded() / bps;
    let k_info = outer.k_info();
    let sd_n = inner.map_or(0.0, |s| s.params().sigma2().sqrt());

    let parts = chunked(cfg.frames, |range| -> Result<ConcatTally> {
        let mut tally = ConcatTally::default();
        let mut z = vec![0.0; inner_n];
        let mut n = vec![0.0; inner_n];
        let mut llrs = Vec::with_capacity(outer.n_coded());
        for frame in range {
            let mut bit_rng = stream(cfg.seed, frame, StreamKind::Bits);
            let info: Vec<u8> = (0..k_info).map(|_| u8::from(bit_rng.gen::<bool>())).collect();
            let coded = outer.encode(&info);
            let mut gz = gaussian(cfg.seed, frame, StreamKind::Forward);
            let mut gn = gaussian(cfg.seed, frame, StreamKind::Feedback);
            llrs.clear();
            for sym in 0..k_sym {
                let theta = symbols.modulate(&coded[sym * bps..(sym + 1) * bps]);
                let theta_hat = match inner {
                    Some(s) => {
                        gz.fill(&mut z, 1.0);
                        gn.fill(&mut n, sd_n);
                        run_sequential_transmission(s, &z, &n, theta)?.theta_hat
                    }
                    None => theta + gz.sample(),
                };
                tally.noise.push(theta_hat / gain - theta);
                match cfg.decision {
                    Decision::Soft => llrs.extend(symbols.bit_llrs(theta_hat, gain, noise_var)),
                    Decision::Hard => {
                        let index = symbols.hard_decision(theta_hat, gain);
                        llrs.extend(
                            symbols
                                .label_bits(index)
                                .iter()
                                .map(|b| if *b == 0 { 1.0 } else { -1.0 }),
                        );
                    }
                }
            }
            let decoded = outer.decode(&llrs);
            let wrong = info.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64;
            tally.bit_errors += wrong;
            tally.frame_errors += u64::from(wrong > 0);
        }
        Ok(tally)
    });

    let mut total = ConcatTally::default();
    for part in parts {
        let p = part?;
        total.bit_errors += p.bit_errors;
        total.frame_errors += p.frame_errors;
        total.noise.merge(&p.noise);
    }
    let info_bits = cfg.frames * k_info as u64;
    let ber = total.bit_errors as f64 / info_bits as f64;
    let fer = total.frame_errors as f64 / cfg.frames as f64;
    let var = total.noise.variance();
    let empirical_snr = symbols.energy() / var;
    Ok(SimReport {
        outer: outer.name(),
        inner: inner_name,
        inner_n,
        m: symbols.m(),
        decision: cfg.decision,
        trials: cfg.frames,
        info_bits,
        bit_errors: total.bit_errors,
        frame_errors: total.frame_errors,
        ber,
        ber_radius: binomial_radius(ber, info_bits as f64),
        fer,
        fer_radius: binomial_radius(fer, cfg.frames as f64),
        empirical_snr,
        empirical_snr_stderr: empirical_snr * total.noise.variance_stderr() / var,
        analytic_snr,
        symbol_energy: symbols.energy(),
        energy_per_info_bit: k_sym as f64 * per_symbol_energy / k_info as f64,
        seed: cfg.seed,
    })
}
