//! Linear feedback coding for the AWGN channel with noisy feedback.
//!
//! A linear feedback scheme sends a real message `theta` over `N` channel
//! uses. Each transmission is a linear function of the message and of the
//! noisy feedback the transmitter has observed so far:
//!
//! ```text
//! x = F (z + n) + g theta,    y = x + z,    theta_hat = q^T y
//! ```
//!
//! where `F` is strictly lower triangular (causality), `z` is the unit
//! variance forward noise and `n` the feedback noise of variance `sigma2`.
//!
//! The crate is organised as follows:
//!
//! * [`model`]: the scheme data model and exact SNR / power evaluation.
//! * [`builder`]: the closed-form geometric scheme, its `beta` and power
//!   allocation root finders.
//! * [`optimizer`]: conditional SNR maximisations, the alternating
//!   procedure and analytic SNR upper bounds.
//! * [`sk`]: the Schalkwijk-Kailath baseline.
//! * [`sim`]: Monte Carlo engine, PAM mapping, outer codes and the
//!   concatenated superchannel.
//! * [`exponent`]: open-loop and feedback error-exponent bounds.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builder;
pub mod error;
pub mod exponent;
pub mod model;
pub mod optimizer;
pub mod roots;
pub mod sim;
pub mod sk;

mod serde_matrix;

pub use builder::{
    asymptotic_gamma, beta0_closed_form_n2, build_proposed_scheme, frobenius_closed_form,
    optimal_gamma_exact, scheme_snr_closed_form, solve_beta0, solve_gamma0, BetaSolution,
    GammaSolution,
};
pub use error::{Error, Result};
pub use exponent::{ExponentCurve, ExponentRow, InnerSnrTable, RateThresholds};
pub use model::{
    received_snr_direct, simulate_transmission_matrix, transmit_power, validate_scheme,
    ChannelParams, LinearScheme, PowerBreakdown, SchemeKind, TransmissionRecord, Violation,
};
pub use optimizer::{
    alternate_optimize, butman_bound, optimize_f_given_q, optimize_q_given_f,
    projection_combiner, snr_upper_bound, AlternateOptions, OptimizationTrace,
};
pub use sim::SimReport;
pub use sk::build_sk_scheme;

/// Dense real matrix used for encoding matrices.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Dense real column vector.
pub type Vector = nalgebra::DVector<f64>;

/// Converts a power ratio to decibels.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Converts decibels to a power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
