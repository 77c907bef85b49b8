//! Instantaneous rewards, expected utilities, and decision margins.
//!
//! Rewards depend on the true infection state and the chosen action; agents
//! weigh them by their posterior beliefs. The decision margins
//! `du = U[x, protect] - U[x, not protect]` drive the strategy dynamics:
//! a positive margin favours protection.

use serde::Serialize;

use crate::beliefs::{self, Beliefs};
use crate::model::{action_marginals, ModelParams, PopulationState, SignalScheme};

/// Rewards by true infection state and action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rewards {
    /// Susceptible and unprotected: expected loss of becoming infected.
    pub f_s_u: f64,
    /// Susceptible and protected: protection cost plus the attenuated loss.
    pub f_s_p: f64,
    /// Infected and unprotected: the expected penalty.
    pub f_i_u: f64,
    /// Infected and protected: the protection cost.
    pub f_i_p: f64,
}

/// Rewards, expected utilities per signal and action, and decision margins,
/// all evaluated at one population-state snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffTable {
    pub f_s_u: f64,
    pub f_s_p: f64,
    pub f_i_u: f64,
    pub f_i_p: f64,
    pub u_sbar_p: f64,
    pub u_sbar_u: f64,
    pub u_ibar_p: f64,
    pub u_ibar_u: f64,
    /// `u_sbar_p - u_sbar_u`.
    pub du_sbar: f64,
    /// `u_ibar_p - u_ibar_u`.
    pub du_ibar: f64,
    /// Posteriors used, including degenerate-signal flags.
    pub beliefs: Beliefs,
}

/// Rewards at the given state. The infection risk of a susceptible agent
/// scales with the infectiousness of the infected pool, so it depends on the
/// unprotected fraction among the truly infected.
pub fn rewards(state: &PopulationState, s: &SignalScheme, p: &ModelParams) -> Rewards {
    let m = action_marginals(state, s);
    let f_s_u = -p.big_l * (m.z_i * p.beta_u + (1.0 - m.z_i) * p.beta_p) * state.y;
    Rewards {
        f_s_u,
        f_s_p: -p.c_p + p.alpha * f_s_u,
        f_i_u: -p.c_u,
        f_i_p: -p.c_p,
    }
}

/// Expected utilities and decision margins at the given state.
///
/// Beliefs and rewards are computed from the same snapshot; the margins are
/// exact for any signalling accuracies and any prior scaling.
pub fn utilities(state: &PopulationState, s: &SignalScheme, p: &ModelParams) -> PayoffTable {
    let r = rewards(state, s, p);
    let b = beliefs::posterior(state.y, s);

    let expect = |pi_s: f64, f_s: f64, f_i: f64| pi_s * f_s + (1.0 - pi_s) * f_i;
    let u_sbar_p = expect(b.pi_s_given_sbar, r.f_s_p, r.f_i_p);
    let u_sbar_u = expect(b.pi_s_given_sbar, r.f_s_u, r.f_i_u);
    let u_ibar_p = expect(b.pi_s_given_ibar, r.f_s_p, r.f_i_p);
    let u_ibar_u = expect(b.pi_s_given_ibar, r.f_s_u, r.f_i_u);

    PayoffTable {
        f_s_u: r.f_s_u,
        f_s_p: r.f_s_p,
        f_i_u: r.f_i_u,
        f_i_p: r.f_i_p,
        u_sbar_p,
        u_sbar_u,
        u_ibar_p,
        u_ibar_u,
        du_sbar: u_sbar_p - u_sbar_u,
        du_ibar: u_ibar_p - u_ibar_u,
        beliefs: b,
    }
}
