//! The five subcommands. Each returns the text of its output file.

use crate::args::{
    BuildSchemeArgs, DecisionArg, ExponentArgs, Format, GammaSweepArgs, OuterChoice, RateUnits, SchemeChoice,
    SimulateArgs, SweepSnrArgs,
};
use crate::error::CliError;
use crate::grid::{linspace, GammaMode};
use crate::output::{to_json, Csv, Field};
use lfb_core::builder::{beta1, build_optimal_beta_scheme, proposed_snr};
use lfb_core::exponent::{bits_to_nats, nats_to_bits, rate_thresholds, zero_rate_exponent};
use lfb_core::sim::{make_pam, simulate_concatenated, ConcatConfig, Decision, Hamming74, Identity, OuterCode, Repetition};
use lfb_core::{
    alternate_optimize, asymptotic_gamma, build_sk_scheme, butman_bound, optimal_gamma_exact, received_snr_direct,
    snr_upper_bound, solve_beta0, solve_gamma0, to_db, transmit_power, validate_scheme, AlternateOptions,
    ChannelParams, ExponentCurve, InnerSnrTable, LinearScheme, PowerBreakdown, SimReport, Vector,
};
use serde::Serialize;

fn nonempty<T>(name: &str, grid: &[T]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("--{name} grid is empty")));
    }
    Ok(())
}

/// Resolves the power split for `params`.
pub fn resolve_gamma(mode: GammaMode, params: &ChannelParams) -> Result<f64, CliError> {
    let n = params.n();
    Ok(match mode {
        GammaMode::Value(v) => v,
        GammaMode::Sk => (n as f64 - 1.0) / n as f64,
        GammaMode::Optimal if n == 1 => 0.0,
        GammaMode::Optimal => solve_gamma0(params)?.gamma0,
        GammaMode::Asymptotic => asymptotic_gamma(n),
        GammaMode::Exact => optimal_gamma_exact(params)?.0,
    })
}

#[derive(Debug, Serialize)]
struct Diagnostics {
    gamma_mode: String,
    gamma: f64,
    beta0: Option<f64>,
    beta1: Option<f64>,
    beta_residual: Option<f64>,
    gamma0: Option<f64>,
    feedback_useful: Option<bool>,
    snr: f64,
    snr_db: f64,
    snr_upper_bound: f64,
    butman_bound: f64,
    power: PowerBreakdown,
    optimizer_iterations: Option<usize>,
    violations: Vec<String>,
}

#[derive(Debug, Serialize)]
struct BuiltScheme {
    scheme: LinearScheme,
    diagnostics: Diagnostics,
}

pub fn build_scheme(args: &BuildSchemeArgs) -> Result<String, CliError> {
    if args.output.format == Some(Format::Csv) {
        return Err(CliError::Config("build-scheme only writes JSON".into()));
    }
    let params = ChannelParams::new(args.n, args.rho, args.sigma2)?;
    if args.n < 2 {
        return Err(lfb_core::Error::UnsupportedBlocklength(args.n).into());
    }
    let mode = match (args.scheme, args.gamma) {
        (SchemeChoice::Sk, None | Some(GammaMode::Sk)) => GammaMode::Sk,
        (SchemeChoice::Sk, Some(m)) => {
            return Err(CliError::Config(format!("the S-K scheme fixes gamma = (N-1)/N, got --gamma {m}")));
        }
        (_, m) => m.unwrap_or(GammaMode::Optimal),
    };
    let gamma = resolve_gamma(mode, &params)?;
    let gamma_solution = solve_gamma0(&params)?;
    let mut iterations = None;
    let (scheme, beta) = match args.scheme {
        SchemeChoice::Proposed => {
            let sol = solve_beta0(&params, gamma)?;
            (build_optimal_beta_scheme(&params, gamma)?, Some(sol))
        }
        SchemeChoice::Sk => (build_sk_scheme(&params)?, None),
        SchemeChoice::Optimized => {
            let q0 = Vector::from_element(args.n, 1.0);
            let (scheme, trace) = alternate_optimize(&q0, &params, gamma, AlternateOptions::default())?;
            iterations = Some(trace.iterations);
            (scheme, None)
        }
    };
    let snr = received_snr_direct(&scheme)?;
    let diagnostics = Diagnostics {
        gamma_mode: mode.to_string(),
        gamma,
        beta0: beta.map(|b| b.beta0),
        beta1: Some(beta1(&params, gamma)),
        beta_residual: beta.map(|b| b.residual),
        gamma0: Some(gamma_solution.gamma0),
        feedback_useful: Some(gamma_solution.feedback_useful),
        snr,
        snr_db: to_db(snr),
        snr_upper_bound: snr_upper_bound(&params),
        butman_bound: butman_bound(&scheme),
        power: transmit_power(&scheme),
        optimizer_iterations: iterations,
        violations: validate_scheme(&scheme, scheme.power_slack())
            .iter()
            .map(ToString::to_string)
            .collect(),
    };
    to_json(&BuiltScheme { scheme, diagnostics })
}

#[derive(Debug, Clone, Serialize)]
pub struct SnrRow {
    pub rho: f64,
    pub sigma2: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: f64,
    pub snr_proposed: f64,
    pub snr_sk: f64,
    pub snr_upper_bound: f64,
    pub butman_bound: f64,
}

/// Rows over `sigma2 x N x rho`, `rho` varying fastest.
pub fn snr_rows(args: &SweepSnrArgs) -> Result<Vec<SnrRow>, CliError> {
    nonempty("N", &args.n)?;
    nonempty("rho", &args.rho)?;
    nonempty("sigma2", &args.sigma2)?;
    let mut rows = Vec::new();
    for &sigma2 in &args.sigma2 {
        for &n in &args.n {
            for &rho in &args.rho {
                let params = ChannelParams::new(n, rho, sigma2)?;
                let gamma = resolve_gamma(args.gamma, &params)?;
                let proposed = build_optimal_beta_scheme(&params, gamma)?;
                let snr_sk = if n == 1 { rho } else { received_snr_direct(&build_sk_scheme(&params)?)? };
                rows.push(SnrRow {
                    rho,
                    sigma2,
                    n,
                    gamma,
                    snr_proposed: proposed_snr(&params, gamma)?,
                    snr_sk,
                    snr_upper_bound: snr_upper_bound(&params),
                    butman_bound: butman_bound(&proposed),
                });
            }
        }
    }
    Ok(rows)
}

pub fn sweep_snr(args: &SweepSnrArgs) -> Result<String, CliError> {
    let rows = snr_rows(args)?;
    if args.output.format == Some(Format::Json) {
        return to_json(&rows);
    }
    let mut csv = Csv::new(&[
        "rho",
        "rho_db",
        "sigma2",
        "N",
        "gamma",
        "snr_proposed",
        "snr_proposed_db",
        "snr_sk",
        "snr_sk_db",
        "snr_upper_bound",
        "snr_upper_bound_db",
        "butman_bound",
        "butman_bound_db",
    ]);
    for r in &rows {
        csv.row(vec![
            r.rho.into(),
            to_db(r.rho).into(),
            r.sigma2.into(),
            r.n.into(),
            r.gamma.into(),
            r.snr_proposed.into(),
            to_db(r.snr_proposed).into(),
            r.snr_sk.into(),
            to_db(r.snr_sk).into(),
            r.snr_upper_bound.into(),
            to_db(r.snr_upper_bound).into(),
            r.butman_bound.into(),
            to_db(r.butman_bound).into(),
        ]);
    }
    Ok(csv.finish())
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaRow {
    pub rho: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub sigma2: f64,
    pub gamma0: f64,
    pub feedback_useful: bool,
}

/// Rows over `sigma2 x N x rho`, `rho` varying fastest. Needs `N >= 2`.
pub fn gamma_rows(args: &GammaSweepArgs) -> Result<Vec<GammaRow>, CliError> {
    nonempty("N", &args.n)?;
    nonempty("rho", &args.rho)?;
    nonempty("sigma2", &args.sigma2)?;
    let mut rows = Vec::new();
    for &sigma2 in &args.sigma2 {
        for &n in &args.n {
            for &rho in &args.rho {
                let sol = solve_gamma0(&ChannelParams::new(n, rho, sigma2)?)?;
                rows.push(GammaRow {
                    rho,
                    n,
                    sigma2,
                    gamma0: sol.gamma0,
                    feedback_useful: sol.feedback_useful,
                });
            }
        }
    }
    Ok(rows)
}

pub fn gamma_sweep(args: &GammaSweepArgs) -> Result<String, CliError> {
    let rows = gamma_rows(args)?;
    if args.output.format == Some(Format::Json) {
        return to_json(&rows);
    }
    let mut csv = Csv::new(&["rho", "rho_db", "N", "sigma2", "gamma0", "feedback_useful"]);
    for r in &rows {
        csv.row(vec![
            r.rho.into(),
            to_db(r.rho).into(),
            r.n.into(),
            r.sigma2.into(),
            r.gamma0.into(),
            r.feedback_useful.into(),
        ]);
    }
    Ok(csv.finish())
}

#[derive(Debug, Serialize)]
struct ExponentHeader {
    rho: f64,
    sigma2: f64,
    n_max: usize,
    units: &'static str,
    #[serde(rename = "C")]
    capacity: f64,
    #[serde(rename = "R1")]
    r1: f64,
    #[serde(rename = "R2")]
    r2: f64,
    zero_rate_exponent: f64,
}

#[derive(Debug, Serialize)]
struct ExponentOutput {
    #[serde(flatten)]
    header: ExponentHeader,
    curve: ExponentCurve,
}

pub fn exponent_bounds(args: &ExponentArgs) -> Result<String, CliError> {
    let table = InnerSnrTable::new(args.rho, args.sigma2, args.n_max)?;
    let thresholds = rate_thresholds(args.rho)?;
    let rates: Vec<f64> = match (&args.rates, args.rate_units) {
        (None, _) => linspace(0.0, thresholds.c, 200),
        (Some(r), RateUnits::Nats) => r.clone(),
        (Some(r), RateUnits::Bits) => r.iter().map(|&b| bits_to_nats(b)).collect(),
    };
    nonempty("rates", &rates)?;
    let curve = ExponentCurve::from_table(&table, &rates)?;
    let header = ExponentHeader {
        rho: args.rho,
        sigma2: args.sigma2,
        n_max: args.n_max,
        units: "nats",
        capacity: thresholds.c,
        r1: thresholds.r1,
        r2: thresholds.r2,
        zero_rate_exponent: zero_rate_exponent(args.rho, args.sigma2),
    };
    if args.output.format == Some(Format::Json) {
        return to_json(&ExponentOutput { header, curve });
    }
    let mut csv = Csv::with_comment(
        &["R", "R_bits", "lower", "upper", "N_star", "open_loop", "N_approx"],
        &header,
    )?;
    for r in &curve.rows {
        csv.row(vec![
            r.rate.into(),
            nats_to_bits(r.rate).into(),
            r.lower.into(),
            r.upper.into(),
            r.n_star.into(),
            r.open_loop.into(),
            r.n_approx.into(),
        ]);
    }
    Ok(csv.finish())
}

/// One grid point of the A/B simulation.
#[derive(Debug, Clone, Serialize)]
pub struct AbPoint {
    pub rho: f64,
    pub sigma2: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma: f64,
    pub open_loop: SimReport,
    pub feedback: SimReport,
}

/// The identity code carries one PAM symbol per block.
fn outer_code(choice: OuterChoice, m: usize) -> Result<Box<dyn OuterCode>, CliError> {
    Ok(match choice {
        OuterChoice::Identity => Box::new(Identity {
            k: (m.trailing_zeros() as usize).max(1),
        }),
        OuterChoice::Repetition(r) => Box::new(Repetition::new(r)?),
        OuterChoice::Hamming74 => Box::new(Hamming74),
    })
}

/// Runs the outer code at symbol energy `rho` on the bare channel, and over
/// the inner scheme with `N` uses of power `rho / N`, so both spend `rho`
/// per outer symbol.
pub fn ab_points(args: &SimulateArgs) -> Result<Vec<AbPoint>, CliError> {
    nonempty("rho", &args.rho)?;
    if args.trials < 1 {
        return Err(CliError::Config("--trials must be at least 1".into()));
    }
    let outer = outer_code(args.outer, args.m)?;
    let frames = args.trials.div_ceil(outer.k_info() as u64).max(2);
    let cfg = ConcatConfig {
        frames,
        seed: args.seed,
        decision: match args.decision {
            DecisionArg::Soft => Decision::Soft,
            DecisionArg::Hard => Decision::Hard,
        },
    };
    let mut points = Vec::new();
    for &rho in &args.rho {
        let params = ChannelParams::new(args.n, rho / args.n as f64, args.sigma2)?;
        let gamma = resolve_gamma(args.gamma, &params)?;
        let inner = build_optimal_beta_scheme(&params, gamma)?;
        let open_loop = simulate_concatenated(outer.as_ref(), None, &make_pam(args.m, rho)?, cfg)?;
        let feedback =
            simulate_concatenated(outer.as_ref(), Some(&inner), &make_pam(args.m, inner.signal_energy())?, cfg)?;
        points.push(AbPoint {
            rho,
            sigma2: args.sigma2,
            n: args.n,
            gamma,
            open_loop,
            feedback,
        });
    }
    Ok(points)
}

pub fn simulate(args: &SimulateArgs) -> Result<String, CliError> {
    let points = ab_points(args)?;
    if args.output.format == Some(Format::Json) {
        return to_json(&points);
    }
    let mut csv = Csv::new(&[
        "rho",
        "rho_db",
        "sigma2",
        "N",
        "gamma",
        "energy_per_info_bit",
        "energy_per_info_bit_db",
        "info_bits",
        "ber_open_loop",
        "ber_open_loop_radius",
        "fer_open_loop",
        "snr_open_loop",
        "ber_feedback",
        "ber_feedback_radius",
        "fer_feedback",
        "snr_feedback",
        "snr_feedback_empirical",
    ]);
    for p in &points {
        let (a, b) = (&p.open_loop, &p.feedback);
        csv.row(vec![
            p.rho.into(),
            to_db(p.rho).into(),
            p.sigma2.into(),
            p.n.into(),
            p.gamma.into(),
            a.energy_per_info_bit.into(),
            to_db(a.energy_per_info_bit).into(),
            Field::from(a.info_bits),
            a.ber.into(),
            a.ber_radius.into(),
            a.fer.into(),
            a.analytic_snr.into(),
            b.ber.into(),
            b.ber_radius.into(),
            b.fer.into(),
            b.analytic_snr.into(),
            b.empirical_snr.into(),
        ]);
    }
    Ok(csv.finish())
}
