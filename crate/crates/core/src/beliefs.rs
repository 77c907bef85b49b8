//! Bayesian posterior beliefs about the true infection state given the
//! received signal.
//!
//! Agents combine a prior infection probability with the known signalling
//! accuracies. The prior is `kappa * y` clamped to [0, 1]; `kappa != 1`
//! models agents that systematically mis-estimate the infection level while
//! the epidemic itself evolves with the true `y`.

use serde::Serialize;

use crate::model::SignalScheme;

/// Posterior probabilities of being susceptible, one per received signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beliefs {
    /// P[susceptible | susceptible signal].
    pub pi_s_given_sbar: f64,
    /// P[susceptible | infected signal].
    pub pi_s_given_ibar: f64,
    /// The susceptible signal had probability zero; its posterior was set to
    /// the unconditional belief `1 - prior`.
    pub degenerate_sbar: bool,
    /// Same convention applied to the infected signal.
    pub degenerate_ibar: bool,
}

/// Bayes update of the (possibly scaled) prior against the signal channel.
///
/// A signal with probability zero carries no information; its posterior is
/// set to the unconditional belief `1 - prior` and flagged as degenerate.
pub fn posterior(y: f64, s: &SignalScheme) -> Beliefs {
    let prior = (s.kappa * y).clamp(0.0, 1.0);
    let susceptible = 1.0 - prior;

    let den_sbar = (1.0 - s.mu_i) * prior + s.mu_s * susceptible;
    let (pi_s_given_sbar, degenerate_sbar) = if den_sbar == 0.0 {
        (susceptible, true)
    } else {
        (s.mu_s * susceptible / den_sbar, false)
    };

    let den_ibar = s.mu_i * prior + (1.0 - s.mu_s) * susceptible;
    let (pi_s_given_ibar, degenerate_ibar) = if den_ibar == 0.0 {
        (susceptible, true)
    } else {
        ((1.0 - s.mu_s) * susceptible / den_ibar, false)
    };

    Beliefs { pi_s_given_sbar, pi_s_given_ibar, degenerate_sbar, degenerate_ibar }
}
