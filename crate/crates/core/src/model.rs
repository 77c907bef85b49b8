//! Model parameters, population state, and the epidemic layer.
//!
//! Agents are either susceptible or infected (SIS compartments) and either
//! protected or unprotected. A principal sends each agent a noisy signal of
//! its infection status; strategies are tracked per received signal, so the
//! population state is the triple `(y, z_sbar, z_ibar)`: infected proportion
//! plus the unprotected fraction among recipients of each signal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Epidemic and cost constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Protection effectiveness factor in (0, 1); scales both the
    /// susceptibility of protected susceptibles and the infectiousness of
    /// protected infected.
    pub alpha: f64,
    /// Transmission rate of a protected infected agent (1/time).
    pub beta_p: f64,
    /// Transmission rate of an unprotected infected agent (1/time).
    pub beta_u: f64,
    /// Recovery rate (1/time).
    pub gamma: f64,
    /// Loss incurred upon becoming infected (utility units).
    pub big_l: f64,
    /// Cost of adopting protection (utility units).
    pub c_p: f64,
    /// Expected penalty on an unprotected infected agent (utility units).
    pub c_u: f64,
}

impl Default for ModelParams {
    /// Baseline parameter set used by the bundled experiments.
    fn default() -> Self {
        Self {
            alpha: 0.45,
            beta_p: 0.5,
            beta_u: 0.65,
            gamma: 0.2,
            big_l: 80.0,
            c_p: 15.0,
            c_u: 22.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

/// Signalling accuracies and the prior-scaling factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalScheme {
    /// Probability that a susceptible agent receives the susceptible signal.
    pub mu_s: f64,
    /// Probability that an infected agent receives the infected signal.
    pub mu_i: f64,
    /// Prior-scaling factor: agents use `kappa * y`, clamped to [0, 1], as
    /// their prior infection probability. `kappa = 1` is the correct prior.
    #[serde(default = "one")]
    pub kappa: f64,
}

impl Default for SignalScheme {
    fn default() -> Self {
        Self { mu_s: 0.8, mu_i: 1.0, kappa: 1.0 }
    }
}

impl SignalScheme {
    /// Scheme with the given susceptible-signal accuracy, a fully truthful
    /// infected signal, and the correct prior.
    pub fn truthful_infected(mu_s: f64) -> Self {
        Self { mu_s, mu_i: 1.0, kappa: 1.0 }
    }
}

/// Population state: infected proportion and unprotected fraction per
/// received signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    /// Infected proportion.
    pub y: f64,
    /// Unprotected fraction among recipients of the susceptible signal.
    pub z_sbar: f64,
    /// Unprotected fraction among recipients of the infected signal.
    pub z_ibar: f64,
}

impl PopulationState {
    pub fn new(y: f64, z_sbar: f64, z_ibar: f64) -> Self {
        Self { y, z_sbar, z_ibar }
    }

    /// All coordinates within [0, 1]. States are accepted on the closed cube;
    /// equilibria routinely sit on its boundary.
    pub fn in_unit_cube(&self) -> bool {
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        ok(self.y) && ok(self.z_sbar) && ok(self.z_ibar)
    }

    /// Coordinate-wise clamp to [0, 1].
    pub fn clamped(&self) -> Self {
        Self {
            y: self.y.clamp(0.0, 1.0),
            z_sbar: self.z_sbar.clamp(0.0, 1.0),
            z_ibar: self.z_ibar.clamp(0.0, 1.0),
        }
    }

    /// Sup-norm distance to another state.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        (self.y - other.y)
            .abs()
            .max((self.z_sbar - other.z_sbar).abs())
            .max((self.z_ibar - other.z_ibar).abs())
    }
}

/// Unprotected fractions conditioned on the true infection state rather than
/// on the received signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionMarginals {
    /// Unprotected fraction among truly susceptible agents.
    pub z_s: f64,
    /// Unprotected fraction among truly infected agents.
    pub z_i: f64,
}

/// Outcome of parameter validation. Range violations are listed; the
/// truthful-signal regime is flagged rather than enforced because the
/// dynamics remain well-defined outside it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    /// Violated range constraints, empty when every field is in range.
    pub violations: Vec<String>,
    /// `c_p < c_u` and `gamma < alpha * beta_p`: protection is cheaper than
    /// the infected penalty and keeps the epidemic endemic.
    pub cost_rate_ok: bool,
    /// `cost_rate_ok` plus a fully truthful infected signal (`mu_i = 1`);
    /// the regime in which the analytic classifier applies.
    pub assumption_one: bool,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks parameter ranges and reports the analytic-regime flags.
/// Comparisons are phrased positively so NaN inputs fail them.
pub fn validate_params(p: &ModelParams, s: &SignalScheme) -> ValidationReport {
    fn require(violations: &mut Vec<String>, ok: bool, msg: String) {
        if !ok {
            violations.push(msg);
        }
    }
    let mut violations = Vec::new();
    let v = &mut violations;
    require(v, p.alpha > 0.0 && p.alpha < 1.0, format!("alpha must lie in (0, 1), got {}", p.alpha));
    require(v, p.beta_p > 0.0, format!("beta_p must be positive, got {}", p.beta_p));
    require(
        v,
        p.beta_u > p.beta_p,
        format!("beta_u must exceed beta_p, got beta_u = {} <= beta_p = {}", p.beta_u, p.beta_p),
    );
    require(v, p.gamma > 0.0, format!("gamma must be positive, got {}", p.gamma));
    require(v, p.big_l > 0.0, format!("big_l must be positive, got {}", p.big_l));
    require(v, p.c_p > 0.0, format!("c_p must be positive, got {}", p.c_p));
    require(v, p.c_u > 0.0, format!("c_u must be positive, got {}", p.c_u));
    require(v, (0.0..=1.0).contains(&s.mu_s), format!("mu_s must lie in [0, 1], got {}", s.mu_s));
    require(v, (0.0..=1.0).contains(&s.mu_i), format!("mu_i must lie in [0, 1], got {}", s.mu_i));
    require(v, s.kappa > 0.0, format!("kappa must be positive, got {}", s.kappa));
    let cost_rate_ok = p.c_p < p.c_u && p.gamma < p.alpha * p.beta_p;
    ValidationReport {
        violations,
        cost_rate_ok,
        assumption_one: cost_rate_ok && s.mu_i == 1.0,
    }
}

/// Converts per-signal strategies into per-infection-state strategies by the
/// law of total probability over the signal channel.
pub fn action_marginals(state: &PopulationState, s: &SignalScheme) -> ActionMarginals {
    ActionMarginals {
        z_s: state.z_sbar * s.mu_s + state.z_ibar * (1.0 - s.mu_s),
        z_i: state.z_ibar * s.mu_i + state.z_sbar * (1.0 - s.mu_i),
    }
}

/// Effective infection rate of the population: infectiousness of the infected
/// pool times susceptibility of the susceptible pool, each averaged over the
/// protection mix.
pub fn effective_beta(state: &PopulationState, s: &SignalScheme, p: &ModelParams) -> f64 {
    let m = action_marginals(state, s);
    (p.beta_p * (1.0 - m.z_i) + p.beta_u * m.z_i) * (p.alpha * (1.0 - m.z_s) + m.z_s)
}

/// Nonzero fixed point of the epidemic for frozen strategies,
/// `1 - gamma / beta_eff`.
///
/// Errors when recovery dominates transmission (`gamma >= beta_eff`); under
/// the validated regime `beta_eff >= alpha * beta_p > gamma` this cannot
/// happen.
pub fn endemic_equilibrium(
    z_sbar: f64,
    z_ibar: f64,
    s: &SignalScheme,
    p: &ModelParams,
) -> Result<f64> {
    let state = PopulationState::new(0.0, z_sbar, z_ibar);
    let beta_eff = effective_beta(&state, s, p);
    if p.gamma >= beta_eff {
        return Err(Error::NonEndemic { gamma: p.gamma, beta_eff });
    }
    Ok(1.0 - p.gamma / beta_eff)
}

/// Time derivative of the infected proportion for frozen strategies.
pub fn sis_vector_field(state: &PopulationState, s: &SignalScheme, p: &ModelParams) -> f64 {
    ((1.0 - state.y) * effective_beta(state, s, p) - p.gamma) * state.y
}
