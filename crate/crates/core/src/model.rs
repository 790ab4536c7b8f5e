//! Linear feedback scheme data model.
//!
//! A scheme is the triple `(F, q, g)` together with the power split `gamma`
//! and the channel it was designed for. Everything here is exact matrix
//! arithmetic; the Monte Carlo counterpart lives in [`crate::sim`].

use crate::error::{Error, Result};
use crate::serde_matrix;
use crate::{Matrix, Vector};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Unit-norm tolerance for `q` and `g`.
pub const UNIT_TOL: f64 = 1e-12;

/// Blocklength, average power per channel use and feedback noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ChannelParams {
    n: usize,
    rho: f64,
    sigma2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(rename = "N")]
    n: usize,
    rho: f64,
    sigma2: f64,
}

impl TryFrom<RawParams> for ChannelParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        ChannelParams::new(r.n, r.rho, r.sigma2)
    }
}

impl From<ChannelParams> for RawParams {
    fn from(p: ChannelParams) -> Self {
        RawParams {
            n: p.n,
            rho: p.rho,
            sigma2: p.sigma2,
        }
    }
}

impl ChannelParams {
    pub fn new(n: usize, rho: f64, sigma2: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be nonnegative, got {sigma2}"
            )));
        }
        Ok(ChannelParams { n, rho, sigma2 })
    }

    /// Blocklength `N` (channel uses per message).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Average transmit power per channel use.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Feedback noise variance.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Same channel, different blocklength.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        ChannelParams::new(n, self.rho, self.sigma2)
    }

    /// Total energy budget `N rho` of one inner codeword.
    pub fn total_energy(&self) -> f64 {
        self.n as f64 * self.rho
    }
}

/// Where a scheme came from. The Schalkwijk-Kailath baseline is allowed a
/// non-unit combining vector as long as `|q^T g| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SchemeKind {
    /// Geometric combining vector with ratio `beta`.
    Proposed { beta: f64 },
    /// Output of the alternating optimisation.
    Optimized,
    SchalkwijkKailath,
    Custom,
}

/// A linear feedback scheme `(F, q, g)` with its power split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearScheme {
    #[serde(rename = "F", with = "serde_matrix::rows")]
    f: Matrix,
    #[serde(with = "serde_matrix::vector")]
    q: Vector,
    #[serde(with = "serde_matrix::vector")]
    g: Vector,
    gamma: f64,
    params: ChannelParams,
    signal_energy: f64,
    kind: SchemeKind,
    /// Relative excess over the noise-cancellation budget this scheme is
    /// declared to need.
    power_slack: f64,
}

impl LinearScheme {
    /// Builds a scheme, normalising `q` and `g` to unit length and setting
    /// `E[theta^2] = (1 - gamma) N rho`.
    pub fn new(f: Matrix, q: Vector, g: Vector, gamma: f64, params: ChannelParams) -> Result<Self> {
        let n = params.n();
        check_len(f.nrows(), n)?;
        check_len(f.ncols(), n)?;
        check_len(q.len(), n)?;
        check_len(g.len(), n)?;
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        let q = normalized(q, "q")?;
        let g = normalized(g, "g")?;
        Ok(LinearScheme {
            f,
            q,
            g,
            gamma,
            params,
            signal_energy: (1.0 - gamma) * params.total_energy(),
            kind: SchemeKind::Custom,
            power_slack: 0.0,
        })
    }

    /// Assembles a scheme verbatim, without normalisation or checks. Use
    /// [`validate_scheme`] to find out whether the result is admissible.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        f: Matrix,
        q: Vector,
        g: Vector,
        gamma: f64,
        params: ChannelParams,
        signal_energy: f64,
        kind: SchemeKind,
        power_slack: f64,
    ) -> Self {
        LinearScheme {
            f,
            q,
            g,
            gamma,
            params,
            signal_energy,
            kind,
            power_slack,
        }
    }

    pub(crate) fn with_kind(mut self, kind: SchemeKind) -> Self {
        self.kind = kind;
        self
    }

    pub(crate) fn with_power_slack(mut self, slack: f64) -> Self {
        self.power_slack = slack;
        self
    }

    /// Encoding matrix `F`.
    pub fn f(&self) -> &Matrix {
        &self.f
    }

    /// Combining vector `q`.
    pub fn q(&self) -> &Vector {
        &self.q
    }

    /// Message direction `g`.
    pub fn g(&self) -> &Vector {
        &self.g
    }

    /// Fraction of the power budget spent on noise cancellation.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// `E[theta^2]`.
    pub fn signal_energy(&self) -> f64 {
        self.signal_energy
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn power_slack(&self) -> f64 {
        self.power_slack
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    /// `q^T g`, the gain the message sees after combining.
    pub fn message_gain(&self) -> f64 {
        self.q.dot(&self.g)
    }

    /// Variance of `theta_hat - (q^T g) theta`, i.e. the SNR denominator.
    pub fn estimator_noise_variance(&self) -> f64 {
        snr_denominator(&self.f, &self.q, self.params.sigma2())
    }
}

fn check_len(got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn normalized(v: Vector, name: &str) -> Result<Vector> {
    let norm = v.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} must be a nonzero finite vector")));
    }
    Ok(v / norm)
}

/// `||q^T (I + F)||^2 + sigma2 ||q^T F||^2`.
pub fn snr_denominator(f: &Matrix, q: &Vector, sigma2: f64) -> f64 {
    let qf = f.tr_mul(q);
    let qif = &qf + q;
    qif.norm_squared() + sigma2 * qf.norm_squared()
}

/// `C = (I + F)(I + F)^T + sigma2 F F^T`, the covariance of the effective
/// noise `(I + F) z + F n`.
pub fn noise_covariance(f: &Matrix, sigma2: f64) -> Matrix {
    let n = f.nrows();
    let i_plus_f = Matrix::identity(n, n) + f;
    &i_plus_f * i_plus_f.transpose() + f * f.transpose() * sigma2
}

/// Received SNR `E[theta^2] |q^T g|^2 / (||q^T (I+F)||^2 + sigma2 ||q^T F||^2)`.
pub fn received_snr_direct(scheme: &LinearScheme) -> Result<f64> {
    let denominator = scheme.estimator_noise_variance();
    if !(denominator >= 1e-300) {
        return Err(Error::Singular { denominator });
    }
    let gain = scheme.message_gain();
    Ok(scheme.signal_energy * gain * gain / denominator)
}

/// Split of the average transmitted energy `E[x^T x]` of one codeword.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    /// `(1 + sigma2) ||F||_F^2`.
    pub noise_cancel: f64,
    /// `E[theta^2] ||g||^2`.
    pub signal: f64,
    pub total: f64,
}

pub fn transmit_power(scheme: &LinearScheme) -> PowerBreakdown {
    let noise_cancel = (1.0 + scheme.params.sigma2()) * scheme.f.norm_squared();
    let signal = scheme.signal_energy * scheme.g.norm_squared();
    PowerBreakdown {
        noise_cancel,
        signal,
        total: noise_cancel + signal,
    }
}

/// Outcome of sending one message through a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionRecord {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub theta_hat: f64,
}

/// Matrix form of one transmission: `x = F(z + n) + g theta`, `y = x + z`,
/// `theta_hat = q^T y`.
pub fn simulate_transmission_matrix(
    scheme: &LinearScheme,
    z: &[f64],
    n: &[f64],
    theta: f64,
) -> Result<TransmissionRecord> {
    let len = scheme.n();
    check_len(z.len(), len)?;
    check_len(n.len(), len)?;
    let z = Vector::from_column_slice(z);
    let fb = &z + Vector::from_column_slice(n);
    let x = &scheme.f * fb + &scheme.g * theta;
    let y = &x + &z;
    let theta_hat = scheme.q.dot(&y);
    Ok(TransmissionRecord {
        x: x.as_slice().to_vec(),
        y: y.as_slice().to_vec(),
        theta_hat,
    })
}

/// A broken scheme invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Dimension { what: &'static str, expected: usize, got: usize },
    NotStrictlyLowerTriangular { row: usize, col: usize, value: f64 },
    GNotUnit { norm: f64 },
    QNotUnit { norm: f64 },
    MessageGainNotUnit { gain: f64 },
    GammaOutOfRange { gamma: f64 },
    SignalEnergy { expected: f64, got: f64 },
    PowerExceeded { noise_cancel: f64, budget: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension { what, expected, got } => {
                write!(f, "{what} has dimension {got}, expected {expected}")
            }
            Violation::NotStrictlyLowerTriangular { row, col, value } => write!(
                f,
                "not strictly lower triangular: F[{row}][{col}] = {value}"
            ),
            Violation::GNotUnit { norm } => write!(f, "g not unit: ||g|| = {norm}"),
            Violation::QNotUnit { norm } => write!(f, "q not unit: ||q|| = {norm}"),
            Violation::MessageGainNotUnit { gain } => {
                write!(f, "|q^T g| = {} is not 1", gain.abs())
            }
            Violation::GammaOutOfRange { gamma } => write!(f, "gamma = {gamma} outside [0, 1]"),
            Violation::SignalEnergy { expected, got } => {
                write!(f, "signal energy {got} differs from (1 - gamma) N rho = {expected}")
            }
            Violation::PowerExceeded { noise_cancel, budget } => write!(
                f,
                "noise-cancellation power {noise_cancel} exceeds budget {budget}"
            ),
        }
    }
}

/// Lists every invariant the scheme breaks; empty means admissible.
///
/// The noise-cancellation power is checked against `N gamma rho (1 + slack)`.
pub fn validate_scheme(scheme: &LinearScheme, slack: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = scheme.n();
    for (what, got) in [
        ("F rows", scheme.f.nrows()),
        ("F cols", scheme.f.ncols()),
        ("q", scheme.q.len()),
        ("g", scheme.g.len()),
    ] {
        if got != n {
            out.push(Violation::Dimension { what, expected: n, got });
        }
    }
    if !out.is_empty() {
        return out;
    }

    for i in 0..n {
        for j in i..n {
            let value = scheme.f[(i, j)];
            if value != 0.0 {
                out.push(Violation::NotStrictlyLowerTriangular { row: i, col: j, value });
            }
        }
    }

    let g_norm = scheme.g.norm();
    if (g_norm - 1.0).abs() > UNIT_TOL {
        out.push(Violation::GNotUnit { norm: g_norm });
    }
    if scheme.kind == SchemeKind::SchalkwijkKailath {
        let gain = scheme.message_gain();
        if (gain.abs() - 1.0).abs() > UNIT_TOL {
            out.push(Violation::MessageGainNotUnit { gain });
        }
    } else {
        let q_norm = scheme.q.norm();
        if (q_norm - 1.0).abs() > UNIT_TOL {
            out.push(Violation::QNotUnit { norm: q_norm });
        }
    }

    let gamma = scheme.gamma;
    if !(0.0..=1.0).contains(&gamma) {
        out.push(Violation::GammaOutOfRange { gamma });
    }

    let total = scheme.params.total_energy();
    let expected = (1.0 - gamma) * total;
    if (scheme.signal_energy - expected).abs() > UNIT_TOL * total.max(1.0) {
        out.push(Violation::SignalEnergy {
            expected,
            got: scheme.signal_energy,
        });
    }

    let budget = gamma * total;
    let noise_cancel = transmit_power(scheme).noise_cancel;
    if noise_cancel > budget * (1.0 + slack) + UNIT_TOL * total.max(1.0) {
        out.push(Violation::PowerExceeded { noise_cancel, budget });
    }
    out
}
