//! The geometric linear feedback scheme and its parameter root finders.
//!
//! The combining vector is `q_i = c beta^(i-1)` with `g = q`, and `F` is the
//! Toeplitz matrix whose `d`-th subdiagonal is `-(1 - beta^2) beta^(d-2) / (1 + sigma2)`.
//! `beta` is chosen as the root in `(0, 1)` of
//! `beta^(2N) - N (1 + (1 + sigma2) gamma rho) beta^2 + (N - 1)`, which makes the
//! noise-cancellation budget tight.

use crate::error::{Error, Result};
use crate::model::{ChannelParams, LinearScheme, SchemeKind};
use crate::roots::{bisect, first_sign_change, golden_section_max, newton_polish};
use crate::{Matrix, Vector};
use serde::{Deserialize, Serialize};

/// Grid size used to bracket the smallest sign change.
pub const ROOT_GRID_POINTS: usize = 10_000;
/// Bisection iterations after bracketing.
pub const BISECTION_ITERS: usize = 200;
/// Newton polish steps after bisection.
pub const POLISH_STEPS: usize = 5;
/// Power slack declared by [`build_proposed_scheme`].
pub const PROPOSED_POWER_SLACK: f64 = 1e-9;

/// Exact and approximate `beta` for a given power split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaSolution {
    /// Root of the `beta` polynomial in `(0, 1)`; `1` when `gamma = 0`.
    pub beta0: f64,
    /// `sqrt(1 / (1 + (1 + sigma2) gamma rho))`.
    pub beta1: f64,
    /// Polynomial value at `beta0`.
    pub residual: f64,
}

/// Power split maximising the SNR of the `beta1` scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSolution {
    pub gamma0: f64,
    /// False when no root exists in `(0, 1]` and `gamma0 = 0`.
    pub feedback_useful: bool,
    /// Value of the stationarity equation at `gamma0`.
    pub residual: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    Ok(())
}

fn noise_cancel_load(params: &ChannelParams, gamma: f64) -> f64 {
    (1.0 + params.sigma2()) * gamma * params.rho()
}

/// `beta^(2N) - N (1 + c) beta^2 + (N - 1)`, evaluated as
/// `(beta^(2N) - 1) + N (1 - beta^2) - N c beta^2` to keep precision near 1.
fn beta_polynomial(beta: f64, n: usize, c: f64) -> f64 {
    let nf = n as f64;
    let b2 = beta * beta;
    let one_minus_b2 = (1.0 - beta) * (1.0 + beta);
    (2.0 * nf * beta.ln()).exp_m1() + nf * one_minus_b2 - nf * c * b2
}

fn beta_polynomial_derivative(beta: f64, n: usize, c: f64) -> f64 {
    let nf = n as f64;
    2.0 * nf * beta.powi(2 * n as i32 - 1) - 2.0 * nf * (1.0 + c) * beta
}

/// `sqrt(1 / (1 + (1 + sigma2) gamma rho))`.
pub fn beta1(params: &ChannelParams, gamma: f64) -> f64 {
    (1.0 / (1.0 + noise_cancel_load(params, gamma))).sqrt()
}

/// `sqrt((N - 1) / (N (1 + (1 + sigma2) gamma rho)))`, the finite-`N`
/// approximation that drops only the `beta^(2N)` term of the polynomial.
pub fn beta_finite_approx(params: &ChannelParams, gamma: f64) -> f64 {
    let nf = params.n() as f64;
    ((nf - 1.0) / (nf * (1.0 + noise_cancel_load(params, gamma)))).sqrt()
}

/// Finds `beta0` by scanning a grid for the smallest sign change, bisecting
/// and polishing with Newton steps.
pub fn solve_beta0(params: &ChannelParams, gamma: f64) -> Result<BetaSolution> {
    let n = params.n();
    if n < 2 {
        return Err(Error::UnsupportedBlocklength(n));
    }
    check_gamma(gamma)?;
    let c = noise_cancel_load(params, gamma);
    let b1 = beta1(params, gamma);
    if c == 0.0 {
        return Ok(BetaSolution {
            beta0: 1.0,
            beta1: b1,
            residual: 0.0,
        });
    }
    let p = |b: f64| beta_polynomial(b, n, c);
    let (lo, hi) = first_sign_change(p, 1e-12, 1.0, ROOT_GRID_POINTS).ok_or_else(|| {
        Error::RootNotFound(format!("beta polynomial has no sign change in (0, 1) for N = {n}"))
    })?;
    let root = bisect(p, lo, hi, BISECTION_ITERS);
    let beta0 = newton_polish(p, |b| beta_polynomial_derivative(b, n, c), root, lo, hi, POLISH_STEPS);
    Ok(BetaSolution {
        beta0,
        beta1: b1,
        residual: p(beta0),
    })
}

/// Closed-form `beta0` at `N = 2`: `sqrt(x + 1) - sqrt(x)` with
/// `x = (1 + sigma2) gamma rho / 2`.
pub fn beta0_closed_form_n2(sigma2: f64, gamma: f64, rho: f64) -> f64 {
    let x = (1.0 + sigma2) * gamma * rho / 2.0;
    // (sqrt(x+1) - sqrt(x)) rewritten without cancellation
    1.0 / ((x + 1.0).sqrt() + x.sqrt())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok(())
}

/// Geometric combining vector `q_i = c beta^(i-1)`, unit norm.
pub fn geometric_combiner(n: usize, beta: f64) -> Vector {
    let v = Vector::from_fn(n, |i, _| beta.powi(i as i32));
    let norm = v.norm();
    v / norm
}

/// Toeplitz encoding matrix of the geometric scheme.
pub fn geometric_encoder(n: usize, beta: f64, sigma2: f64) -> Matrix {
    let scale = (1.0 - beta) * (1.0 + beta) / (1.0 + sigma2);
    Matrix::from_fn(n, n, |i, j| {
        if i > j {
            -scale * beta.powi((i - j) as i32 - 2)
        } else {
            0.0
        }
    })
}

/// Builds the geometric scheme for a given `beta` in `(0, 1]`. `beta = 1`
/// gives the no-feedback limit `F = 0`, `q = g = 1/sqrt(N)`.
pub fn build_proposed_scheme(params: &ChannelParams, gamma: f64, beta: f64) -> Result<LinearScheme> {
    check_beta(beta)?;
    check_gamma(gamma)?;
    let n = params.n();
    let q = geometric_combiner(n, beta);
    let f = geometric_encoder(n, beta, params.sigma2());
    Ok(LinearScheme::new(f, q.clone(), q, gamma, *params)?
        .with_kind(SchemeKind::Proposed { beta })
        .with_power_slack(PROPOSED_POWER_SLACK))
}

/// Builds the geometric scheme with `beta = beta0(gamma)`.
pub fn build_optimal_beta_scheme(params: &ChannelParams, gamma: f64) -> Result<LinearScheme> {
    if params.n() == 1 {
        return build_proposed_scheme(params, gamma, 1.0);
    }
    let sol = solve_beta0(params, gamma)?;
    build_proposed_scheme(params, gamma, sol.beta0)
}

/// `(1 + sigma2) N (1 - gamma) rho / (sigma2 + beta^(2(N-1)))`.
pub fn scheme_snr_closed_form(params: &ChannelParams, gamma: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    check_gamma(gamma)?;
    let s2 = params.sigma2();
    let nf = params.n() as f64;
    Ok((1.0 + s2) * nf * (1.0 - gamma) * params.rho() / (s2 + beta.powi(2 * (params.n() as i32 - 1))))
}

/// `||F||_F^2` of the geometric scheme:
/// `[beta^(2(N-1)) + (N - 1)/beta^2 - N] / (1 + sigma2)^2`.
pub fn frobenius_closed_form(beta: f64, params: &ChannelParams) -> Result<f64> {
    if beta == 0.0 {
        return Err(Error::Domain("beta = 0 makes the encoding matrix unbounded".into()));
    }
    check_beta(beta)?;
    let n = params.n();
    let nf = n as f64;
    let bracket = beta.powi(2 * (n as i32 - 1)) + (nf - 1.0) / (beta * beta) - nf;
    let s = 1.0 + params.sigma2();
    Ok(bracket.max(0.0) / (s * s))
}

/// Exact SNR of the geometric scheme with `beta = beta0(gamma)`; for `N = 1`
/// this is `(1 - gamma) rho`.
pub fn proposed_snr(params: &ChannelParams, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if params.n() == 1 {
        return Ok((1.0 - gamma) * params.rho());
    }
    let sol = solve_beta0(params, gamma)?;
    scheme_snr_closed_form(params, gamma, sol.beta0)
}

/// `a (1 + b gamma)^N - N b (1 - gamma) + (b + 1)`, `a = sigma2`, `b = rho (1 + sigma2)`.
fn gamma_equation(gamma: f64, n: usize, a: f64, b: f64) -> f64 {
    let nf = n as f64;
    a * (1.0 + b * gamma).powf(nf) - nf * b * (1.0 - gamma) + (b + 1.0)
}

fn gamma_equation_derivative(gamma: f64, n: usize, a: f64, b: f64) -> f64 {
    let nf = n as f64;
    a * nf * b * (1.0 + b * gamma).powf(nf - 1.0) + nf * b
}

/// Power split maximising `SNR(beta1, gamma)`.
///
/// The stationarity equation is strictly increasing in `gamma`, so a root
/// in `(0, 1]` exists exactly when its value at `gamma = 0`,
/// `(1 + sigma2)(1 - (N - 1) rho)`, is negative.
pub fn solve_gamma0(params: &ChannelParams) -> Result<GammaSolution> {
    let n = params.n();
    if n < 2 {
        return Err(Error::UnsupportedBlocklength(n));
    }
    let a = params.sigma2();
    let b = params.rho() * (1.0 + a);
    let h = |g: f64| gamma_equation(g, n, a, b);
    let h0 = h(0.0);
    if h0 >= 0.0 {
        return Ok(GammaSolution {
            gamma0: 0.0,
            feedback_useful: false,
            residual: h0,
        });
    }
    let root = bisect(h, 0.0, 1.0, BISECTION_ITERS);
    let gamma0 = newton_polish(h, |g| gamma_equation_derivative(g, n, a, b), root, 0.0, 1.0, POLISH_STEPS);
    Ok(GammaSolution {
        gamma0,
        feedback_useful: true,
        residual: h(gamma0),
    })
}

/// The closed-form no-root condition
/// `N < 1 + ((1 + 1/(N-1))^(N-1) sigma2 + 1) / (rho (1 + sigma2))`.
///
/// Whenever [`solve_gamma0`] finds no root and `sigma2 > 0` this holds as
/// well, but it can also hold when a root exists.
pub fn nogamma_condition(params: &ChannelParams) -> bool {
    let n = params.n();
    if n < 2 {
        return true;
    }
    let m = (n - 1) as f64;
    let s2 = params.sigma2();
    (n as f64) < 1.0 + ((1.0 + 1.0 / m).powf(m) * s2 + 1.0) / (params.rho() * (1.0 + s2))
}

/// `1 / sqrt(N)`.
pub fn asymptotic_gamma(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

/// Power split maximising the exact SNR `SNR(beta0(gamma), gamma)` by
/// golden-section search. Returns `(gamma, snr)`.
pub fn optimal_gamma_exact(params: &ChannelParams) -> Result<(f64, f64)> {
    if params.n() == 1 {
        return Ok((0.0, params.rho()));
    }
    // surface any failure of the root finder before the search swallows it
    proposed_snr(params, 0.5)?;
    let objective = |g: f64| proposed_snr(params, g).unwrap_or(f64::NEG_INFINITY);
    Ok(golden_section_max(objective, 0.0, 1.0, 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{received_snr_direct, transmit_power, validate_scheme};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(n: usize, rho: f64, sigma2: f64) -> ChannelParams {
        ChannelParams::new(n, rho, sigma2).unwrap()
    }

    /// Independent oracle: plain power-form polynomial scanned on a fine grid.
    fn beta_root_oracle(n: usize, c: f64, step: f64) -> (f64, usize) {
        let p = |b: f64| b.powi(2 * n as i32) - n as f64 * (1.0 + c) * b * b + (n as f64 - 1.0);
        let mut changes = 0;
        let mut first = f64::NAN;
        let mut prev = p(0.0);
        let steps = (1.0 / step) as usize;
        for k in 1..=steps {
            let b = k as f64 * step;
            let cur = p(b);
            if (cur < 0.0) != (prev < 0.0) {
                changes += 1;
                if first.is_nan() {
                    let (mut lo, mut hi) = (b - step, b);
                    for _ in 0..80 {
                        let m = 0.5 * (lo + hi);
                        if (p(m) < 0.0) == (p(lo) < 0.0) {
                            lo = m;
                        } else {
                            hi = m;
                        }
                    }
                    first = 0.5 * (lo + hi);
                }
            }
            prev = cur;
        }
        (first, changes)
    }

    #[test]
    fn beta0_two_uses_golden_ratio() {
        let s = solve_beta0(&params(2, 1.0, 0.0), 0.5).unwrap();
        assert_relative_eq!(s.beta0, (5f64.sqrt() - 1.0) / 2.0, max_relative = 1e-12);
        assert!(s.residual.abs() <= 1e-12);
    }

    #[test]
    fn beta1_example() {
        let s = solve_beta0(&params(2, 4.0, 0.0), 0.75).unwrap();
        assert_relative_eq!(s.beta1, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn beta0_ten_uses_matches_grid_oracle() {
        let p = params(10, 1.0, 0.01);
        let s = solve_beta0(&p, 0.5).unwrap();
        let c = 1.01 * 0.5;
        let (oracle, changes) = beta_root_oracle(10, c, 1e-6);
        assert_eq!(changes, 1);
        assert!((s.beta0 - oracle).abs() < 1e-9);
        assert!(s.residual.abs() <= 1e-12);
        assert!((s.beta0 - 0.773_562).abs() < 1e-6);
        assert!((s.beta1 - 0.815_139).abs() < 1e-6);
        assert!((s.beta0 - beta_finite_approx(&p, 0.5)).abs() < 1e-3);
    }

    #[test]
    fn beta0_rejects_single_use_and_handles_zero_gamma() {
        assert_eq!(solve_beta0(&params(1, 1.0, 0.0), 0.5), Err(Error::UnsupportedBlocklength(1)));
        assert_eq!(solve_beta0(&params(5, 1.0, 0.3), 0.0).unwrap().beta0, 1.0);
    }

    #[test]
    fn beta0_tiny_gamma_stays_below_one() {
        let s = solve_beta0(&params(8, 1.0, 0.1), 1e-14).unwrap();
        assert!(s.beta0 < 1.0 && s.beta0 > 0.999);
    }

    #[test]
    fn closed_form_two_uses() {
        assert_relative_eq!(beta0_closed_form_n2(0.0, 0.5, 1.0), 0.618_033_988_749_895, max_relative = 1e-14);
        assert_eq!(beta0_closed_form_n2(0.3, 0.0, 2.0), 1.0);
        assert_relative_eq!(beta0_closed_form_n2(1.0, 0.5, 2.0), 2f64.sqrt() - 1.0, max_relative = 1e-14);
    }

    #[test]
    fn build_two_uses_example() {
        let s = build_proposed_scheme(&params(2, 4.0, 0.0), 0.75, 0.5).unwrap();
        assert_relative_eq!(s.f()[(1, 0)], -1.5, max_relative = 1e-15);
        assert_eq!(s.f()[(0, 1)], 0.0);
        let c = (0.75f64 / 0.9375).sqrt();
        assert_relative_eq!(s.q()[0], c, max_relative = 1e-15);
        assert_relative_eq!(s.q()[1], 0.5 * c, max_relative = 1e-15);
        assert_eq!(s.q(), s.g());
        assert_relative_eq!(received_snr_direct(&s).unwrap(), 8.0, max_relative = 1e-12);
    }

    #[test]
    fn encoder_is_toeplitz() {
        for (n, beta) in [(2, 0.3), (5, 0.7), (9, 0.95)] {
            let s = build_proposed_scheme(&params(n, 1.0, 0.2), 0.4, beta).unwrap();
            let f = s.f();
            for d in 1..n {
                for i in d + 1..n {
                    assert_relative_eq!(f[(i, i - d)], f[(d, 0)], max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn beta_one_is_no_feedback() {
        let p = params(4, 1.0, 0.5);
        let s = build_proposed_scheme(&p, 0.0, 1.0).unwrap();
        assert_eq!(s.f().norm(), 0.0);
        for v in s.q().iter() {
            assert_relative_eq!(*v, 0.5, max_relative = 1e-15);
        }
        assert!(build_proposed_scheme(&p, 0.0, 1.2).is_err());
        assert!(build_proposed_scheme(&p, 0.0, 0.0).is_err());
    }

    #[test]
    fn beta0_scheme_is_valid_and_tight() {
        let p = params(6, 2.0, 0.3);
        let sol = solve_beta0(&p, 0.4).unwrap();
        let s = build_proposed_scheme(&p, 0.4, sol.beta0).unwrap();
        assert!(validate_scheme(&s, 1e-9).is_empty());
        let pw = transmit_power(&s);
        assert!((pw.noise_cancel - 6.0 * 0.4 * 2.0).abs() < 1e-9);
    }

    #[test]
    fn snr_closed_form_examples() {
        assert_relative_eq!(scheme_snr_closed_form(&params(2, 4.0, 0.0), 0.75, 0.5).unwrap(), 8.0);
        assert_eq!(scheme_snr_closed_form(&params(3, 1.0, 0.1), 1.0, 0.5).unwrap(), 0.0);
        let n = 10_000;
        let p = params(n, 1.0, 1.0);
        let g = asymptotic_gamma(n);
        let v = scheme_snr_closed_form(&p, g, beta1(&p, g)).unwrap();
        assert!((v / 2e4 - 1.0).abs() < 0.02);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_closed_form(1.0, &params(7, 1.0, 0.4)).unwrap(), 0.0);
        assert_relative_eq!(frobenius_closed_form(0.5, &params(2, 1.0, 0.0)).unwrap(), 2.25, max_relative = 1e-15);
        let p = params(3, 1.0, 0.01);
        let s = build_proposed_scheme(&p, 0.5, 0.6).unwrap();
        let mut brute = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                brute += s.f()[(i, j)] * s.f()[(i, j)];
            }
        }
        assert_relative_eq!(frobenius_closed_form(0.6, &p).unwrap(), brute, max_relative = 1e-12);
        assert!(matches!(frobenius_closed_form(0.0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn finite_approx_excess_power_identity() {
        for (n, rho, s2, gamma) in [(5, 1.0, 0.1, 0.3), (20, 2.0, 1.0, 0.5), (50, 0.5, 0.01, 0.2)] {
            let p = params(n, rho, s2);
            let b = beta_finite_approx(&p, gamma);
            let excess = (1.0 + s2) * frobenius_closed_form(b, &p).unwrap() - n as f64 * gamma * rho;
            let expected = b.powi(2 * (n as i32 - 1)) / (1.0 + s2);
            assert!((excess - expected).abs() < 1e-10 * (1.0 + expected));
        }
    }

    #[test]
    fn beta1_scheme_stays_inside_budget() {
        let p = params(10, 1.0, 0.01);
        let b = beta1(&p, 0.5);
        let s = build_proposed_scheme(&p, 0.5, b).unwrap();
        let excess = transmit_power(&s).noise_cancel - 10.0 * 0.5;
        let c = 1.01 * 0.5;
        assert!(excess < 0.0);
        assert_relative_eq!(excess, (b.powi(18) - 1.0 - c) / 1.01, max_relative = 1e-10);
    }

    #[test]
    fn gamma0_examples() {
        let g = solve_gamma0(&params(4, 1.0, 0.0)).unwrap();
        assert!(g.feedback_useful);
        assert!((g.gamma0 - 0.5).abs() < 1e-12);
        assert!(g.residual.abs() <= 1e-12);
        let g = solve_gamma0(&params(2, 1.0, 0.0)).unwrap();
        assert_eq!(g.gamma0, 0.0);
        assert!(!g.feedback_useful);
        let p = params(3, 1e-3, 0.5);
        let g = solve_gamma0(&p).unwrap();
        assert!(!g.feedback_useful && g.gamma0 == 0.0);
        assert!(nogamma_condition(&p));
    }

    #[test]
    fn gamma0_large_blocklength_finite() {
        let g = solve_gamma0(&params(1024, 1.0, 1.0)).unwrap();
        assert!(g.feedback_useful);
        assert!(g.gamma0 > 0.0 && g.gamma0 < 0.01);
    }

    #[test]
    fn no_root_implies_nogamma_condition() {
        let mut strictly_weaker = false;
        for n in 2..30 {
            for rho in [0.05, 0.2, 0.5, 1.0, 3.0] {
                for s2 in [0.01, 0.5, 2.0] {
                    let p = params(n, rho, s2);
                    let useful = solve_gamma0(&p).unwrap().feedback_useful;
                    if !useful {
                        assert!(nogamma_condition(&p));
                    }
                    strictly_weaker |= useful && nogamma_condition(&p);
                }
            }
        }
        assert!(strictly_weaker);
    }

    #[test]
    fn asymptotic_gamma_examples() {
        assert_eq!(asymptotic_gamma(1), 1.0);
        assert_eq!(asymptotic_gamma(4), 0.5);
        assert_relative_eq!(asymptotic_gamma(10_000), 0.01);
    }

    #[test]
    fn exact_gamma_beats_lemma_gamma() {
        for (n, rho, s2) in [(2, 0.5, 0.001), (8, 1.0, 1.0), (5, 2.0, 0.1)] {
            let p = params(n, rho, s2);
            let (g, snr) = optimal_gamma_exact(&p).unwrap();
            let g0 = solve_gamma0(&p).unwrap().gamma0;
            assert!((0.0..=1.0).contains(&g));
            assert!(snr >= proposed_snr(&p, g0).unwrap() * (1.0 - 1e-9));
        }
    }

    proptest! {
        #[test]
        fn two_use_root_matches_closed_form(s2 in 0.0f64..3.0, gamma in 0.0f64..1.0, rho in 0.01f64..10.0) {
            let b = solve_beta0(&params(2, rho, s2), gamma).unwrap().beta0;
            prop_assert!((b - beta0_closed_form_n2(s2, gamma, rho)).abs() <= 1e-10);
        }

        #[test]
        fn beta0_constraint_is_active(n in 2usize..40, rho in 0.05f64..8.0, s2 in 0.0f64..3.0, gamma in 0.01f64..0.99) {
            let p = params(n, rho, s2);
            let b = solve_beta0(&p, gamma).unwrap().beta0;
            let s = build_proposed_scheme(&p, gamma, b).unwrap();
            let budget = n as f64 * gamma * rho;
            prop_assert!((transmit_power(&s).noise_cancel - budget).abs() <= 1e-9 * budget.max(1.0));
        }

        #[test]
        fn closed_form_snr_matches_direct(n in 2usize..13, rho in 0.05f64..8.0, s2 in 0.0f64..3.0, gamma in 0.0f64..0.99) {
            let p = params(n, rho, s2);
            let b = solve_beta0(&p, gamma).unwrap().beta0;
            let direct = received_snr_direct(&build_proposed_scheme(&p, gamma, b).unwrap()).unwrap();
            let closed = scheme_snr_closed_form(&p, gamma, b).unwrap();
            prop_assert!((direct - closed).abs() <= 1e-9 * closed);
        }

        #[test]
        fn frobenius_matches_matrix(n in 1usize..20, beta in 0.05f64..1.0, s2 in 0.0f64..3.0) {
            let p = params(n, 1.0, s2);
            let s = build_proposed_scheme(&p, 0.5, beta).unwrap();
            let closed = frobenius_closed_form(beta, &p).unwrap();
            prop_assert!((s.f().norm_squared() - closed).abs() <= 1e-10 * closed.max(1.0));
        }

        #[test]
        fn sk_split_respects_saturation(n in 2usize..200, rho in 0.05f64..8.0, s2 in 0.01f64..3.0) {
            let p = params(n, rho, s2);
            let gamma = (n as f64 - 1.0) / n as f64;
            let v = scheme_snr_closed_form(&p, gamma, beta1(&p, gamma)).unwrap();
            prop_assert!(v <= (1.0 + s2) * rho / s2 * (1.0 + 1e-12));
        }
    }
}
