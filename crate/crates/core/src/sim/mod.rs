//! Monte Carlo simulation of linear feedback schemes and of the
//! concatenated outer-code / inner-feedback-code superchannel.

pub mod montecarlo;
pub mod outer;
pub mod pam;
pub mod rng;
pub mod transmission;

pub use montecarlo::{
    binary_error_bound, binary_error_prob_analytic, estimate_empirical_snr, q_function,
    simulate_binary_ber, simulate_concatenated, BerEstimate, ConcatConfig, Decision, Sampling,
    SimReport, SnrEstimate,
};
pub use outer::{Hamming74, Identity, OuterCode, Repetition};
pub use pam::{make_pam, Labelling, SymbolSet};
pub use transmission::{
    effective_noise_variance, estimator_variance, run_seeded_transmission,
    run_sequential_transmission, EstimatorForm,
};
