//! Coupled epidemic and strategy-revision dynamics.
//!
//! The infected proportion follows the SIS vector field while the per-signal
//! unprotected fractions follow an evolutionary revision rule evaluated on
//! the decision margins at the same state snapshot:
//!
//! * pairwise comparison (Smith): agents switch toward the better action at a
//!   rate proportional to the payoff gap, so stationary strategy profiles
//!   coincide with Nash best responses;
//! * logit choice: agents resample actions from a softmax with rationality
//!   `lambda`, recovering the best response as `lambda` grows.

use serde::{Deserialize, Serialize};

use crate::model::{self, ModelParams, PopulationState, SignalScheme};
use crate::payoffs;

/// Strategy revision rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RevisionRule {
    Smith,
    Logit,
}

impl std::str::FromStr for RevisionRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smith" => Ok(RevisionRule::Smith),
            "logit" => Ok(RevisionRule::Logit),
            other => Err(format!("unknown rule '{other}', expected 'smith' or 'logit'")),
        }
    }
}

/// Integration and convergence settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub rule: RevisionRule,
    /// Logit rationality; ignored under the Smith rule.
    pub lambda: f64,
    /// Fixed step size (time units).
    pub dt: f64,
    /// Integration horizon (time units).
    pub t_max: f64,
    /// Sup-norm threshold on the vector field below which the state counts
    /// as converged.
    pub conv_tol: f64,
    /// A sample is recorded every this many steps (plus the final state).
    pub record_stride: usize,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            rule: RevisionRule::Smith,
            lambda: 1.0,
            dt: 0.01,
            t_max: 5000.0,
            conv_tol: 1e-9,
            record_stride: 100,
        }
    }
}

/// Recorded trajectory of one integration.
#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub times: Vec<f64>,
    pub states: Vec<PopulationState>,
    pub converged: bool,
    /// First time at which the convergence test held.
    pub t_converge: Option<f64>,
    pub final_state: PopulationState,
    /// Largest coordinate clamp applied after any step; bounded by the
    /// integration error since the vector field points inward on the
    /// boundary of the unit cube.
    pub max_clamp: f64,
}

/// Pairwise-comparison revision applied to both per-signal strategies.
/// `z` grows where not protecting pays (`du < 0`) and shrinks where
/// protecting pays (`du > 0`).
pub fn smith_field(du_sbar: f64, du_ibar: f64, state: &PopulationState) -> (f64, f64) {
    let rate = |z: f64, du: f64| (1.0 - z) * (-du).max(0.0) - z * du.max(0.0);
    (rate(state.z_sbar, du_sbar), rate(state.z_ibar, du_ibar))
}

/// Mean logit revision for one strategy: relax toward the softmax choice
/// probability of not protecting. Computed with max-subtraction so large
/// `lambda` cannot overflow.
pub fn logit_field(u_x_u: f64, u_x_p: f64, z_x: f64, lambda: f64) -> f64 {
    let a = lambda * u_x_u;
    let b = lambda * u_x_p;
    let m = a.max(b);
    let e_u = (a - m).exp();
    let e_p = (b - m).exp();
    e_u / (e_u + e_p) - z_x
}

/// Time derivatives `[dy, dz_sbar, dz_ibar]` of the coupled system, with the
/// margins and the epidemic evaluated at the same snapshot.
pub fn coupled_field(
    state: &PopulationState,
    p: &ModelParams,
    s: &SignalScheme,
    cfg: &DynamicsConfig,
) -> [f64; 3] {
    let dy = model::sis_vector_field(state, s, p);
    let t = payoffs::utilities(state, s, p);
    let (dz_sbar, dz_ibar) = match cfg.rule {
        RevisionRule::Smith => smith_field(t.du_sbar, t.du_ibar, state),
        RevisionRule::Logit => (
            logit_field(t.u_sbar_u, t.u_sbar_p, state.z_sbar, cfg.lambda),
            logit_field(t.u_ibar_u, t.u_ibar_p, state.z_ibar, cfg.lambda),
        ),
    };
    [dy, dz_sbar, dz_ibar]
}

fn sup_norm(v: &[f64; 3]) -> f64 {
    v[0].abs().max(v[1].abs()).max(v[2].abs())
}

fn offset(state: &PopulationState, k: &[f64; 3], scale: f64) -> PopulationState {
    PopulationState::new(
        state.y + scale * k[0],
        state.z_sbar + scale * k[1],
        state.z_ibar + scale * k[2],
    )
}

/// Classic fourth-order fixed-step integration of the coupled dynamics with
/// post-step clamping to the unit cube.
///
/// The integration stops as soon as the field's sup-norm drops below
/// `cfg.conv_tol` (checked before every step, so a stationary initial state
/// converges at `t = 0`) or when the horizon `cfg.t_max` is reached, in which
/// case the trace is returned with `converged = false`.
pub fn integrate(
    initial: &PopulationState,
    p: &ModelParams,
    s: &SignalScheme,
    cfg: &DynamicsConfig,
) -> Trace {
    let n_max = (cfg.t_max / cfg.dt).round().max(1.0) as u64;
    let mut state = *initial;
    let mut times = vec![0.0];
    let mut states = vec![state];
    let mut converged = false;
    let mut t_converge = None;
    let mut max_clamp: f64 = 0.0;
    let mut t = 0.0;

    for step in 0..=n_max {
        t = step as f64 * cfg.dt;
        let k1 = coupled_field(&state, p, s, cfg);
        if sup_norm(&k1) < cfg.conv_tol {
            converged = true;
            t_converge = Some(t);
            break;
        }
        if step == n_max {
            break;
        }

        let half = 0.5 * cfg.dt;
        let k2 = coupled_field(&offset(&state, &k1, half), p, s, cfg);
        let k3 = coupled_field(&offset(&state, &k2, half), p, s, cfg);
        let k4 = coupled_field(&offset(&state, &k3, cfg.dt), p, s, cfg);
        let sixth = cfg.dt / 6.0;
        let raw = PopulationState::new(
            state.y + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            state.z_sbar + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            state.z_ibar + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        );
        let clamped = raw.clamped();
        max_clamp = max_clamp.max(raw.sup_distance(&clamped));
        state = clamped;

        let next = step + 1;
        if cfg.record_stride > 0 && next % cfg.record_stride as u64 == 0 && next != n_max {
            times.push(next as f64 * cfg.dt);
            states.push(state);
        }
    }

    if *times.last().expect("trace never empty") < t {
        times.push(t);
        states.push(state);
    } else {
        // The initial state converged immediately; the single sample stands.
        *states.last_mut().expect("trace never empty") = state;
    }

    Trace { times, states, converged, t_converge, final_state: state, max_clamp }
}
