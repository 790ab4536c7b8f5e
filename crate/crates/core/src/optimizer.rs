//! Conditional SNR maximisation and the alternating fixed-point procedure.
//!
//! With `g = q` and `||q|| = 1` the SNR is `E[theta^2] / q^T M q` where
//! `M = (I + F)(I + F)^T + sigma2 F F^T`. For fixed `q` the best `F` solves a
//! norm-constrained least-squares problem column by column; for fixed `F` the
//! best `q` is the eigenvector of `M` for its smallest eigenvalue.

use crate::error::{Error, Result};
use crate::model::{noise_covariance, snr_denominator, ChannelParams, LinearScheme, SchemeKind};
use crate::{Matrix, Vector};
use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

/// Power slack declared for optimised schemes.
pub const OPTIMIZED_POWER_SLACK: f64 = 1e-9;
const LAMBDA_BISECTION_ITERS: usize = 200;

/// Suffix energies `s_j = sum_{i > j} q_i^2`.
fn suffix_energies(q: &Vector) -> Vec<f64> {
    let n = q.len();
    let mut s = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n).rev() {
        s[j] = acc;
        acc += q[j] * q[j];
    }
    s
}

/// `F(lambda)` with `f_{k,j} = -q_k q_j / ((1 + sigma2) s_j + lambda)` for `k > j`.
fn encoder_for_lambda(q: &Vector, s: &[f64], sigma2: f64, lambda: f64) -> Matrix {
    let n = q.len();
    Matrix::from_fn(n, n, |k, j| {
        let den = (1.0 + sigma2) * s[j] + lambda;
        if k > j && s[j] > 0.0 && den > 0.0 {
            -q[k] * q[j] / den
        } else {
            0.0
        }
    })
}

/// `||F(lambda)||_F^2 = sum_j q_j^2 s_j / ((1 + sigma2) s_j + lambda)^2`.
fn encoder_energy(q: &Vector, s: &[f64], sigma2: f64, lambda: f64) -> f64 {
    (0..q.len())
        .filter(|&j| s[j] > 0.0)
        .map(|j| {
            let den = (1.0 + sigma2) * s[j] + lambda;
            q[j] * q[j] * s[j] / (den * den)
        })
        .sum()
}

/// SNR-optimal encoding matrix for a fixed unit combining vector under the
/// budget `(1 + sigma2) ||F||_F^2 <= N gamma rho`.
///
/// Returns `F` and the multiplier `lambda` (`0` when the budget is slack,
/// infinite when `gamma = 0`). Columns whose suffix energy vanishes are zero.
pub fn optimize_f_given_q(q: &Vector, params: &ChannelParams, gamma: f64) -> Result<(Matrix, f64)> {
    let n = params.n();
    if q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.len() });
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    if gamma == 0.0 {
        return Ok((Matrix::zeros(n, n), f64::INFINITY));
    }
    let s2 = params.sigma2();
    let s = suffix_energies(q);
    let budget = n as f64 * gamma * params.rho() / (1.0 + s2);
    if encoder_energy(q, &s, s2, 0.0) <= budget {
        return Ok((encoder_for_lambda(q, &s, s2, 0.0), 0.0));
    }
    let mut hi = 1.0;
    while encoder_energy(q, &s, s2, hi) > budget {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..LAMBDA_BISECTION_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if encoder_energy(q, &s, s2, mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((encoder_for_lambda(q, &s, s2, hi), hi))
}

/// Unit eigenvector of `M = (I + F)(I + F)^T + sigma2 F F^T` for its smallest
/// eigenvalue, with that eigenvalue.
///
/// A degenerate smallest eigenspace is resolved by projecting `e_1, e_2, ...`
/// onto it and keeping the first non-null projection. The first nonzero
/// entry of the result is positive.
pub fn optimize_q_given_f(f: &Matrix, sigma2: f64) -> (Vector, f64) {
    let n = f.nrows();
    let m = noise_covariance(f, sigma2);
    let eig = SymmetricEigen::new(m);
    let delta = eig.eigenvalues.min();
    let scale = eig.eigenvalues.amax().max(1.0);
    let basis: Vec<usize> = (0..n)
        .filter(|&k| eig.eigenvalues[k] - delta <= 1e-12 * scale)
        .collect();

    let mut q = eig.eigenvectors.column(basis[0]).into_owned();
    if basis.len() > 1 {
        for i in 0..n {
            let mut p = Vector::zeros(n);
            for &k in &basis {
                let v = eig.eigenvectors.column(k);
                p += v * v[i];
            }
            if p.norm() > 1e-8 {
                q = p;
                break;
            }
        }
    }
    q /= q.norm();
    if let Some(first) = q.iter().find(|v| v.abs() > 1e-14) {
        if *first < 0.0 {
            q = -q;
        }
    }
    (q, delta)
}

/// Minimum-variance unbiased combiner `C^{-1} g / (g^T C^{-1} g)` for fixed
/// `F` and `g`, where `C` is the effective noise covariance.
pub fn projection_combiner(f: &Matrix, g: &Vector, sigma2: f64) -> Result<Vector> {
    let n = f.nrows();
    if g.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g.len() });
    }
    let c = noise_covariance(f, sigma2);
    let chol = c
        .cholesky()
        .ok_or(Error::Singular { denominator: 0.0 })?;
    let w = chol.solve(g);
    let den = g.dot(&w);
    if !(den.abs() >= 1e-300) {
        return Err(Error::Singular { denominator: den });
    }
    Ok(w / den)
}

/// Stopping rule for [`alternate_optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternateOptions {
    /// Stop once an iteration gains less than this much SNR.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AlternateOptions {
    fn default() -> Self {
        AlternateOptions {
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

/// One `(q, F, snr)` snapshot after a full alternation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    #[serde(with = "crate::serde_matrix::vector")]
    pub q: Vector,
    #[serde(rename = "F", with = "crate::serde_matrix::rows")]
    pub f: Matrix,
    pub snr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub iterates: Vec<Iterate>,
    pub converged: bool,
    pub iterations: usize,
}

impl OptimizationTrace {
    pub fn snrs(&self) -> impl Iterator<Item = f64> + '_ {
        self.iterates.iter().map(|it| it.snr)
    }
}

/// Flips signs `q -> D q`, `F -> D F D` with `D = diag(sign q)` so every
/// entry of `q` is nonnegative. The SNR is unchanged.
pub fn canonicalize_signs(q: &Vector, f: &Matrix) -> (Vector, Matrix) {
    let d: Vec<f64> = q.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
    let q = Vector::from_fn(q.len(), |i, _| d[i] * q[i]);
    let f = Matrix::from_fn(f.nrows(), f.ncols(), |i, j| d[i] * d[j] * f[(i, j)]);
    (q, f)
}

fn unit_snr(signal_energy: f64, f: &Matrix, q: &Vector, sigma2: f64) -> f64 {
    signal_energy * q.norm_squared().powi(2) / snr_denominator(f, q, sigma2)
}

/// Alternates the two conditional maximisations from `q0` until the SNR
/// gain of a full iteration drops below `opts.tol`.
///
/// A step that would lower the SNR (possible only through rounding) ends
/// the run as converged, so the recorded SNR sequence is non-decreasing.
pub fn alternate_optimize(
    q0: &Vector,
    params: &ChannelParams,
    gamma: f64,
    opts: AlternateOptions,
) -> Result<(LinearScheme, OptimizationTrace)> {
    let n = params.n();
    if q0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q0.len() });
    }
    let norm = q0.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter("q0 must be a nonzero finite vector".into()));
    }
    let energy = (1.0 - gamma) * params.total_energy();
    let s2 = params.sigma2();

    let mut q = q0 / norm;
    let mut f = Matrix::zeros(n, n);
    let mut iterates: Vec<Iterate> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let (f_next, _) = optimize_f_given_q(&q, params, gamma)?;
        let (q_next, _) = optimize_q_given_f(&f_next, s2);
        let snr = unit_snr(energy, &f_next, &q_next, s2);
        iterations += 1;
        if let Some(prev) = iterates.last().map(|it| it.snr) {
            if snr < prev {
                converged = true;
                break;
            }
            f = f_next;
            q = q_next;
            iterates.push(Iterate { q: q.clone(), f: f.clone(), snr });
            if snr - prev < opts.tol {
                converged = true;
                break;
            }
        } else {
            f = f_next;
            q = q_next;
            iterates.push(Iterate { q: q.clone(), f: f.clone(), snr });
            if n == 1 {
                converged = true;
                break;
            }
        }
    }

    let (q, f) = canonicalize_signs(&q, &f);
    let scheme = LinearScheme::new(f, q.clone(), q, gamma, *params)?
        .with_kind(SchemeKind::Optimized)
        .with_power_slack(OPTIMIZED_POWER_SLACK);
    Ok((
        scheme,
        OptimizationTrace {
            iterates,
            converged,
            iterations,
        },
    ))
}

/// `(1 + sigma2) N rho / sigma2`; infinite for noiseless feedback.
pub fn snr_upper_bound(params: &ChannelParams) -> f64 {
    let s2 = params.sigma2();
    if s2 == 0.0 {
        return f64::INFINITY;
    }
    (1.0 + s2) * params.total_energy() / s2
}

/// `(1 + sigma2) N rho / sigma2 + 2 ||F||_F^2 + N / sigma2`; infinite for
/// noiseless feedback.
pub fn butman_bound(scheme: &LinearScheme) -> f64 {
    let p = scheme.params();
    let s2 = p.sigma2();
    if s2 == 0.0 {
        return f64::INFINITY;
    }
    snr_upper_bound(p) + 2.0 * scheme.f().norm_squared() + p.n() as f64 / s2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_proposed_scheme, geometric_combiner, scheme_snr_closed_form, solve_beta0};
    use crate::model::{received_snr_direct, transmit_power};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(n: usize, rho: f64, sigma2: f64) -> ChannelParams {
        ChannelParams::new(n, rho, sigma2).unwrap()
    }

    /// Cyclic Jacobi eigenvalue iteration, independent of nalgebra's solver.
    #[allow(clippy::needless_range_loop)]
    fn jacobi_min_eigenvalue(m: &Matrix) -> f64 {
        let n = m.nrows();
        let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for r in p + 1..n {
                    off += a[p][r] * a[p][r];
                }
            }
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for r in p + 1..n {
                    if a[p][r].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akr = a[k][r];
                        a[k][p] = c * akp - s * akr;
                        a[k][r] = s * akp + c * akr;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let ark = a[r][k];
                        a[p][k] = c * apk - s * ark;
                        a[r][k] = s * apk + c * ark;
                    }
                }
            }
        }
        (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
    }

    fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vector {
        let v = Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let norm = v.norm();
        v / norm
    }

    fn random_lower(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i > j { rng.gen_range(-2.0..2.0) } else { 0.0 })
    }

    fn snr_of(f: &Matrix, q: &Vector, p: &ChannelParams, gamma: f64) -> f64 {
        (1.0 - gamma) * p.total_energy() / snr_denominator(f, q, p.sigma2())
    }

    #[test]
    fn zero_budget_gives_zero_encoder() {
        let p = params(4, 1.0, 0.1);
        let (f, lambda) = optimize_f_given_q(&geometric_combiner(4, 0.7), &p, 0.0).unwrap();
        assert_eq!(f.norm(), 0.0);
        assert!(lambda.is_infinite());
    }

    #[test]
    fn first_basis_combiner_gives_zero_encoder() {
        let p = params(4, 1.0, 0.1);
        let mut q = Vector::zeros(4);
        q[0] = 1.0;
        let (f, _) = optimize_f_given_q(&q, &p, 0.9).unwrap();
        assert_eq!(f.norm(), 0.0);
    }

    #[test]
    fn encoder_beats_random_search() {
        let p = params(3, 4.0, 0.1);
        let gamma = 0.8;
        let q = geometric_combiner(3, 0.6);
        let (f, _) = optimize_f_given_q(&q, &p, gamma).unwrap();
        let best = snr_of(&f, &q, &p, gamma);
        let budget = 3.0 * gamma * 4.0 / 1.1;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let mut r = random_lower(&mut rng, 3);
            let scale = rng.gen_range(0.0..1.0f64) * (budget / r.norm_squared()).sqrt();
            r *= scale;
            assert!(snr_of(&r, &q, &p, gamma) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lagrange_complementarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(2..9);
            let p = params(n, rng.gen_range(0.1..5.0), rng.gen_range(0.0..2.0));
            let gamma = rng.gen_range(0.01..1.0);
            let q = random_unit(&mut rng, n);
            let (f, lambda) = optimize_f_given_q(&q, &p, gamma).unwrap();
            let used = (1.0 + p.sigma2()) * f.norm_squared();
            let budget = n as f64 * gamma * p.rho();
            if lambda == 0.0 {
                assert!(used <= budget * (1.0 + 1e-12));
            } else {
                assert!(lambda > 0.0);
                assert!((used - budget).abs() <= 1e-9 * budget.max(1.0));
            }
        }
    }

    #[test]
    fn encoder_is_first_order_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = rng.gen_range(2..6);
            let p = params(n, rng.gen_range(0.2..3.0), rng.gen_range(0.01..1.0));
            let gamma = rng.gen_range(0.1..0.9);
            let q = random_unit(&mut rng, n);
            let (f, _) = optimize_f_given_q(&q, &p, gamma).unwrap();
            let base = snr_of(&f, &q, &p, gamma);
            let budget = n as f64 * gamma * p.rho() / (1.0 + p.sigma2());
            for i in 0..n {
                for j in 0..i {
                    if f[(i, j)] == 0.0 {
                        continue;
                    }
                    for h in [1e-4, -1e-4] {
                        let mut g = f.clone();
                        g[(i, j)] += h;
                        let e = g.norm_squared();
                        if e > budget {
                            g *= (budget / e).sqrt();
                        }
                        assert!(snr_of(&g, &q, &p, gamma) - base <= 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_encoder_combiner_is_first_basis_vector() {
        let (q, delta) = optimize_q_given_f(&Matrix::zeros(4, 4), 0.7);
        assert_eq!(q, Vector::from_vec(vec![1.0, 0.0, 0.0, 0.0]));
        assert_relative_eq!(delta, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn two_by_two_eigenproblem_by_hand() {
        let f = Matrix::from_row_slice(2, 2, &[0.0, 0.0, -1.5, 0.0]);
        let (q, delta) = optimize_q_given_f(&f, 0.0);
        // M = [[1, -1.5], [-1.5, 3.25]]: characteristic polynomial l^2 - 4.25 l + 1
        let expected = (4.25 - (4.25f64 * 4.25 - 4.0).sqrt()) / 2.0;
        assert_relative_eq!(delta, expected, max_relative = 1e-12);
        let m = noise_covariance(&f, 0.0);
        assert_relative_eq!(q.dot(&(&m * &q)), expected, max_relative = 1e-12);
        assert!(q[0] > 0.0);
    }

    #[test]
    fn combiner_beats_random_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_lower(&mut rng, 5);
        let m = noise_covariance(&f, 0.4);
        let (q, _) = optimize_q_given_f(&f, 0.4);
        let best = q.dot(&(&m * &q));
        for _ in 0..10_000 {
            let v = random_unit(&mut rng, 5);
            assert!(best <= v.dot(&(&m * &v)) + 1e-12);
        }
    }

    #[test]
    fn projection_examples() {
        let g = Vector::from_vec(vec![0.6, 0.8, 0.0]);
        let q = projection_combiner(&Matrix::zeros(3, 3), &g, 0.5).unwrap();
        assert!((q - &g).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_lower(&mut rng, 4);
        let (v, _) = optimize_q_given_f(&f, 0.3);
        let q = projection_combiner(&f, &v, 0.3).unwrap();
        assert!((q - &v).norm() < 1e-9);
    }

    #[test]
    fn projection_of_sk_matches_its_combiner() {
        let sk = crate::sk::build_sk_scheme(&params(3, 1.0, 0.0)).unwrap();
        let q = projection_combiner(sk.f(), sk.g(), 0.0).unwrap();
        // the S-K combiner is the MVU estimator at sigma2 = 0
        let c = noise_covariance(sk.f(), 0.0);
        let cinv = c.try_inverse().unwrap();
        let w = &cinv * sk.g();
        let oracle = &w / sk.g().dot(&w);
        assert!((&q - &oracle).norm() < 1e-12);
        assert!((&q - sk.q()).norm() < 1e-12);
    }

    #[test]
    fn fixed_point_from_geometric_start() {
        let p = params(6, 1.0, 0.2);
        let gamma = 0.4;
        let beta = solve_beta0(&p, gamma).unwrap().beta0;
        let (s, trace) = alternate_optimize(&geometric_combiner(6, beta), &p, gamma, AlternateOptions::default()).unwrap();
        assert!(trace.converged);
        assert!(trace.iterations <= 2);
        let closed = scheme_snr_closed_form(&p, gamma, beta).unwrap();
        assert!((received_snr_direct(&s).unwrap() - closed).abs() < 1e-9 * closed);
        let reference = build_proposed_scheme(&p, gamma, beta).unwrap();
        assert!((s.f() - reference.f()).norm() < 1e-7);
    }

    #[test]
    fn single_use_is_immediate() {
        let p = params(1, 2.0, 0.5);
        let (s, trace) = alternate_optimize(&Vector::from_vec(vec![-3.0]), &p, 0.25, AlternateOptions::default()).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.iterations, 1);
        assert_eq!(s.q()[0], 1.0);
        assert_relative_eq!(received_snr_direct(&s).unwrap(), 1.5, max_relative = 1e-14);
    }

    #[test]
    fn random_start_reaches_geometric_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 3..=8 {
            let p = params(n, 1.0, 0.1);
            let q0 = random_unit(&mut rng, n);
            let (s, trace) = alternate_optimize(&q0, &p, 0.3, AlternateOptions::default()).unwrap();
            assert!(trace.converged, "N = {n}");
            let q = s.q();
            let ratio = q[1] / q[0];
            for i in 1..n - 1 {
                assert!((q[i + 1] / q[i] - ratio).abs() < 1e-4, "N = {n}");
            }
            let f = s.f();
            for d in 1..n {
                for i in d + 1..n {
                    assert!((f[(i, i - d)] - f[(d, 0)]).abs() < 1e-4, "N = {n}");
                }
            }
        }
    }

    #[test]
    fn optimized_schemes_obey_bounds_and_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = rng.gen_range(2..7);
            let p = params(n, rng.gen_range(0.2..4.0), rng.gen_range(0.01..2.0));
            let gamma = rng.gen_range(0.05..0.95);
            let (s, trace) = alternate_optimize(&random_unit(&mut rng, n), &p, gamma, AlternateOptions::default()).unwrap();
            let snrs: Vec<f64> = trace.snrs().collect();
            assert!(snrs.windows(2).all(|w| w[1] >= w[0]));
            let snr = received_snr_direct(&s).unwrap();
            assert!(snr <= snr_upper_bound(&p));
            assert!(snr < butman_bound(&s));
            assert!(transmit_power(&s).noise_cancel <= n as f64 * gamma * p.rho() * (1.0 + 1e-9));
            assert!(s.q().iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(snr_upper_bound(&params(10, 2.0, 1.0)), 40.0);
        assert_eq!(snr_upper_bound(&params(10, 1.0, 1.0)), 20.0);
        assert!(snr_upper_bound(&params(10, 1.0, 0.0)).is_infinite());

        let p = params(2, 1.0, 1.0);
        let q = Vector::from_vec(vec![1.0, 0.0]);
        let s = LinearScheme::new(Matrix::zeros(2, 2), q.clone(), q, 0.0, p).unwrap();
        assert_eq!(butman_bound(&s), 6.0);

        let sk = crate::sk::build_sk_scheme(&params(2, 3.0, 1.0)).unwrap();
        assert_relative_eq!(butman_bound(&sk), 20.0, max_relative = 1e-12);
        assert!(butman_bound(&sk) > snr_upper_bound(sk.params()));
    }

    #[test]
    fn rate_of_unbounded_blocklength_vanishes() {
        let p = params(1_000_000, 1.0, 1.0);
        let rate = 0.5 * (1.0 + snr_upper_bound(&p)).log2() / 1e6;
        assert!(rate < 1e-4);
    }

    proptest! {
        #[test]
        fn eigen_objective_matches_jacobi(seed in 0u64..1000, n in 1usize..8, s2 in 0.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_lower(&mut rng, n);
            let (q, delta) = optimize_q_given_f(&f, s2);
            let m = noise_covariance(&f, s2);
            let oracle = jacobi_min_eigenvalue(&m);
            let scale = m.amax().max(1.0);
            prop_assert!((delta - oracle).abs() <= 1e-10 * scale);
            prop_assert!((q.dot(&(&m * &q)) - oracle).abs() <= 1e-10 * scale);
        }

        #[test]
        fn sign_canonicalization_preserves_snr(seed in 0u64..1000, n in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_lower(&mut rng, n);
            let q = random_unit(&mut rng, n);
            let (q2, f2) = canonicalize_signs(&q, &f);
            let a = snr_denominator(&f, &q, 0.3);
            let b = snr_denominator(&f2, &q2, 0.3);
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }
    }
}
