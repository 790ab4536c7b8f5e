//! Causal, use-by-use transmission over the forward channel with noisy
//! unit-delay feedback.

use super::rng::{gaussian, StreamKind};
use crate::error::{Error, Result};
use crate::model::{noise_covariance, LinearScheme, TransmissionRecord};
use crate::Vector;

/// Sends `theta` use by use: `x[k]` only sees the feedback `z[j] + n[j]`
/// for `j < k`.
pub fn run_sequential_transmission(
    scheme: &LinearScheme,
    z: &[f64],
    n: &[f64],
    theta: f64,
) -> Result<TransmissionRecord> {
    let len = scheme.n();
    for got in [z.len(), n.len()] {
        if got != len {
            return Err(Error::DimensionMismatch { expected: len, got });
        }
    }
    let mut x = vec![0.0; len];
    let mut y = vec![0.0; len];
    let mut feedback = vec![0.0; len];
    let f = scheme.f();
    let g = scheme.g();
    let q = scheme.q();
    let mut theta_hat = 0.0;
    for k in 0..len {
        let mut acc = 0.0;
        for j in 0..k {
            acc += f[(k, j)] * feedback[j];
        }
        x[k] = acc + g[k] * theta;
        y[k] = x[k] + z[k];
        feedback[k] = y[k] - x[k] + n[k];
        theta_hat += q[k] * y[k];
    }
    Ok(TransmissionRecord { x, y, theta_hat })
}

/// Draws the forward and feedback noise of frame `frame` and transmits.
pub fn run_seeded_transmission(
    scheme: &LinearScheme,
    seed: u64,
    frame: u64,
    theta: f64,
) -> Result<TransmissionRecord> {
    let len = scheme.n();
    let mut z = vec![0.0; len];
    let mut n = vec![0.0; len];
    gaussian(seed, frame, StreamKind::Forward).fill(&mut z, 1.0);
    gaussian(seed, frame, StreamKind::Feedback).fill(&mut n, scheme.params().sigma2().sqrt());
    run_sequential_transmission(scheme, &z, &n, theta)
}

/// Noise variance of the superchannel normalised to signal power `rho`:
/// `rho / snr_c`.
pub fn effective_noise_variance(snr_c: f64, rho: f64) -> Result<f64> {
    if !(snr_c > 0.0) {
        return Err(Error::InvalidParameter(format!("superchannel SNR must be positive, got {snr_c}")));
    }
    Ok(rho / snr_c)
}

/// Linear view of the estimate: `theta_hat = (q^T g) theta + a^T z + b^T n`
/// with `a = (I + F)^T q` and `b = F^T q`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorForm {
    pub gain: f64,
    pub a: Vector,
    pub b: Vector,
    /// `||a||^2 + sigma2 ||b||^2`.
    pub noise_variance: f64,
}

impl EstimatorForm {
    pub fn of(scheme: &LinearScheme) -> Self {
        let q = scheme.q();
        let b = scheme.f().tr_mul(q);
        let a = &b + q;
        let s2 = scheme.params().sigma2();
        let noise_variance = a.norm_squared() + s2 * b.norm_squared();
        EstimatorForm {
            gain: scheme.message_gain(),
            a,
            b,
            noise_variance,
        }
    }

    pub fn estimate(&self, theta: f64, z: &[f64], n: &[f64]) -> f64 {
        let mut acc = self.gain * theta;
        for k in 0..z.len() {
            acc += self.a[k] * z[k] + self.b[k] * n[k];
        }
        acc
    }
}

/// `q^T C q` with `C` the effective noise covariance, i.e. the variance of
/// `theta_hat - (q^T g) theta`.
pub fn estimator_variance(scheme: &LinearScheme) -> f64 {
    let c = noise_covariance(scheme.f(), scheme.params().sigma2());
    scheme.q().dot(&(&c * scheme.q()))
}
