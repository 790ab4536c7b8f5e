//! The Schalkwijk-Kailath scheme written as a linear feedback scheme.
//!
//! With `alpha^2 = 1 + rho` and `r = sqrt(rho)`, the message goes out once in
//! the first use (`g = e_1`) and every later use retransmits the scaled
//! estimation error of the receiver. The combining vector is not unit norm
//! but `q^T g = 1`.

use crate::error::{Error, Result};
use crate::model::{ChannelParams, LinearScheme, SchemeKind};
use crate::{Matrix, Vector};

/// Builds the S-K scheme for `N >= 2` with `gamma = (N - 1)/N`.
///
/// Entries (1-indexed): `f_{i,1} = -r / alpha^(i-2)` for `i >= 2`, and
/// `f_{i,j} = -r^2 / alpha^(i-j)` for `2 <= j < i`. The combining vector is
/// `q = [1, r/alpha^2, r/alpha^3, ..., r/alpha^N]`.
pub fn build_sk_scheme(params: &ChannelParams) -> Result<LinearScheme> {
    let n = params.n();
    if n < 2 {
        return Err(Error::UnsupportedBlocklength(n));
    }
    let rho = params.rho();
    let alpha = (1.0 + rho).sqrt();
    let r = rho.sqrt();

    let f = Matrix::from_fn(n, n, |i, j| match (i, j) {
        (i, j) if i <= j => 0.0,
        (i, 0) => -r / alpha.powi(i as i32 - 1),
        (i, j) => -rho / alpha.powi((i - j) as i32),
    });
    let q = Vector::from_fn(n, |k, _| if k == 0 { 1.0 } else { r / alpha.powi(k as i32 + 1) });
    let mut g = Vector::zeros(n);
    g[0] = 1.0;

    let gamma = (n as f64 - 1.0) / n as f64;
    let signal_energy = (1.0 - gamma) * params.total_energy();
    // (1 + sigma2)||F||^2 = (1 + sigma2)(N - 1) rho: the scheme overspends
    // the budget by a relative sigma2 when the feedback is noisy.
    let slack = params.sigma2() + 1e-12;
    Ok(LinearScheme::from_parts(
        f,
        q,
        g,
        gamma,
        *params,
        signal_energy,
        SchemeKind::SchalkwijkKailath,
        slack,
    ))
}
