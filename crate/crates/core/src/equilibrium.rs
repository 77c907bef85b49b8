//! Stationary Nash equilibria: thresholds, classifiers, and the verifier.
//!
//! A population state is a stationary Nash equilibrium (SNE) when the
//! infection level sits at its endemic equilibrium for the frozen strategies
//! and no agent gains by switching action given its posterior belief.
//!
//! Under a fully truthful infected signal (`mu_i = 1`) the SNE admits a
//! closed characterization into five mutually exclusive cases, driven by the
//! cost thresholds below and by the sign pattern of the margin function `g`
//! on the all-unprotected-susceptible-signal branch. Full information
//! disclosure (`mu_s = mu_i = 1`) collapses the five cases to three. For
//! noisy infected signals no closed form exists and equilibria are found by
//! integrating the strategy dynamics and verifying the limit.

use serde::Serialize;

use crate::dynamics::{self, DynamicsConfig, RevisionRule};
use crate::error::{Error, Result};
use crate::model::{
    endemic_equilibrium, validate_params, ModelParams, PopulationState, SignalScheme,
};
use crate::payoffs;

/// Absolute tolerance at which a classifying inequality counts as a tie.
pub const TIE_TOL: f64 = 1e-9;

/// Interval width at which bisection stops.
pub const BISECT_TOL: f64 = 1e-10;

/// Infection-level thresholds and signal-accuracy cutoffs that organize the
/// equilibrium cases (all defined for the truthful-infected-signal regime).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Endemic level when all susceptibles are unprotected and all infected
    /// protect: `1 - gamma / beta_p`.
    pub y_star_u: f64,
    /// Infection level at which a signalled susceptible is indifferent:
    /// `c_p / (big_l (1 - alpha) beta_p)`.
    pub y_star_int: f64,
    /// Endemic level under universal protection: `1 - gamma / (alpha beta_p)`.
    pub y_star_p: f64,
    /// Signal accuracy below which the all-unprotected state is an
    /// equilibrium (even signal-infected agents stay unprotected). `None`
    /// when protection is cheap enough that this can never happen; undefined
    /// exactly at the degenerate cost
    /// `c_p = (1 - alpha) big_l (beta_u - gamma)`.
    pub mu_s_min: Option<f64>,
    /// `c_p` sits exactly at the degenerate cost making `mu_s_min` undefined.
    pub mu_s_min_boundary: bool,
    /// Signal accuracy above which signal-infected agents all protect,
    /// in [0, 1): zero when `g(0, 0) >= 0`, otherwise the root of
    /// `g(0, mu_s)`.
    pub mu_s_max: f64,
}

/// Margin functions on the branch where every signalled susceptible is
/// unprotected (`z_sbar = 1`), as functions of the unprotected fraction
/// `z_ibar` among signalled infected. Returns `(h, g)` where
///
/// * `h` is the protection margin deficit of a signalled susceptible,
///   `(1-alpha) big_l (beta_p + (beta_u - beta_p) z_ibar) y_ee - c_p`, and
/// * `g` is the signed margin of a signalled infected, rescaled by the
///   (positive) probability of receiving the infected signal:
///   `y_ee (c_u - c_p) - (1 - mu_s)(1 - y_ee)(-h)`.
///
/// Uses the truthful-infected endemic level `y_ee(1, z_ibar; mu_s)`
/// regardless of the scheme's `mu_i`.
pub fn g_and_h(z_ibar: f64, s: &SignalScheme, p: &ModelParams) -> (f64, f64) {
    g_h(z_ibar, s.mu_s, p)
}

fn g_h(z_ibar: f64, mu_s: f64, p: &ModelParams) -> (f64, f64) {
    let scheme = SignalScheme::truthful_infected(mu_s);
    let y = endemic_equilibrium(1.0, z_ibar, &scheme, p)
        .expect("endemic level defined under the validated regime");
    let h = (1.0 - p.alpha) * p.big_l * (p.beta_p + (p.beta_u - p.beta_p) * z_ibar) * y - p.c_p;
    let g = y * (p.c_u - p.c_p) - (1.0 - mu_s) * (1.0 - y) * (-h);
    (h, g)
}

/// Plain bisection on [lo, hi]; `f(lo)` must be negative and `f(hi)`
/// positive. Deterministic and derivative-free.
fn bisect_increasing<F: Fn(f64) -> f64>(mut lo: f64, mut hi: f64, f: F) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest signal accuracy at which the all-unprotected-infected-signal
/// strategy `z_ibar = 0` is consistent: zero when `g(0, 0) >= 0`, otherwise
/// the unique root of `g(0, mu_s)` in (0, 1).
pub fn find_mu_s_max(p: &ModelParams) -> Result<f64> {
    let (_, g00) = g_h(0.0, 0.0, p);
    if g00 >= 0.0 {
        return Ok(0.0);
    }
    bisect_increasing(0.0, 1.0, |mu_s| g_h(0.0, mu_s, p).1)
}

/// Interior unprotected fraction among signalled infected solving
/// `g(z, mu_s) = 0`; requires `g(0, mu_s) < 0 < g(1, mu_s)`.
pub fn find_z_dagger_ibar(s: &SignalScheme, p: &ModelParams) -> Result<f64> {
    let (_, g0) = g_h(0.0, s.mu_s, p);
    let (_, g1) = g_h(1.0, s.mu_s, p);
    if !(g0 < 0.0 && g1 > 0.0) {
        return Err(Error::NoInteriorRoot { g_at_zero: g0, g_at_one: g1 });
    }
    bisect_increasing(0.0, 1.0, |z| g_h(z, s.mu_s, p).1)
}

/// Interior unprotected fraction among signalled susceptibles that pins the
/// endemic level at `y_star_int`, with an in-range flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZDaggerSbar {
    pub value: f64,
    /// The closed-form value lies in (0, 1); outside that range the interior
    /// equilibrium does not exist for these parameters.
    pub in_range: bool,
}

/// Closed form for the interior unprotected fraction among signalled
/// susceptibles. Errors at `mu_s = 0`, where no agent receives the
/// susceptible signal and the fraction is undefined.
pub fn z_dagger_sbar(s: &SignalScheme, p: &ModelParams) -> Result<ZDaggerSbar> {
    if s.mu_s == 0.0 {
        return Err(Error::MuSZero);
    }
    let y_int = y_star_int(p);
    let value = (p.gamma - p.alpha * p.beta_p * (1.0 - y_int))
        / (p.beta_p * (1.0 - p.alpha) * (1.0 - y_int) * s.mu_s);
    Ok(ZDaggerSbar { value, in_range: value > 0.0 && value < 1.0 })
}

fn y_star_int(p: &ModelParams) -> f64 {
    p.c_p / (p.big_l * (1.0 - p.alpha) * p.beta_p)
}

/// Computes every threshold; `mu_s_max` requires a bisection, the rest are
/// closed forms.
pub fn thresholds(p: &ModelParams, s: &SignalScheme) -> Result<Thresholds> {
    let _ = s; // thresholds are scheme-independent; kept for call-site symmetry
    let y_star_u = 1.0 - p.gamma / p.beta_p;
    let y_star_p = 1.0 - p.gamma / (p.alpha * p.beta_p);
    let edge = (1.0 - p.alpha) * p.big_l * (p.beta_u - p.gamma);
    let (mu_s_min, mu_s_min_boundary) = if p.c_p == edge {
        (None, true)
    } else if p.c_p < edge {
        // The all-unprotected state cannot be an equilibrium at any signal
        // accuracy; the cutoff is moot.
        (None, false)
    } else {
        let v = 1.0
            - ((p.beta_u - p.gamma) * (p.c_u - p.c_p)) / (p.gamma * (p.c_p - edge));
        (Some(v), false)
    };
    Ok(Thresholds {
        y_star_u,
        y_star_int: y_star_int(p),
        y_star_p,
        mu_s_min,
        mu_s_min_boundary,
        mu_s_max: find_mu_s_max(p)?,
    })
}

/// Identifier of an equilibrium characterization.
///
/// `Pid*` are the five cases under partial information disclosure with a
/// truthful infected signal; `Fid*` the three full-information-disclosure
/// cases; `Numeric` marks equilibria found by simulation and verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    #[serde(rename = "PID_1")]
    Pid1,
    #[serde(rename = "PID_2")]
    Pid2,
    #[serde(rename = "PID_3")]
    Pid3,
    #[serde(rename = "PID_4")]
    Pid4,
    #[serde(rename = "PID_5")]
    Pid5,
    #[serde(rename = "FID_E1")]
    FidE1,
    #[serde(rename = "FID_E2")]
    FidE2,
    #[serde(rename = "FID_E3")]
    FidE3,
    #[serde(rename = "NUMERIC")]
    Numeric,
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseId::Pid1 => "PID_1",
            CaseId::Pid2 => "PID_2",
            CaseId::Pid3 => "PID_3",
            CaseId::Pid4 => "PID_4",
            CaseId::Pid5 => "PID_5",
            CaseId::FidE1 => "FID_E1",
            CaseId::FidE2 => "FID_E2",
            CaseId::FidE3 => "FID_E3",
            CaseId::Numeric => "NUMERIC",
        };
        f.write_str(s)
    }
}

/// The inequality values a classification was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificates {
    pub y_star_u: f64,
    pub y_star_int: f64,
    pub y_star_p: f64,
    pub mu_s_max: Option<f64>,
    pub mu_s_min: Option<f64>,
    /// Endemic level when all signalled susceptibles are unprotected and all
    /// signalled infected protect.
    pub y_ee_full_sbar: f64,
    pub h_at_zero: f64,
    pub h_at_one: f64,
    pub g_at_zero: f64,
    pub g_at_one: f64,
}

/// A classified (or numerically found) stationary Nash equilibrium.
#[derive(Debug, Clone, Serialize)]
pub struct SneResult {
    pub case_id: CaseId,
    #[serde(flatten)]
    pub state: PopulationState,
    /// A classifying inequality held only within the tie tolerance.
    pub boundary: bool,
    /// `None` for numerically found equilibria.
    pub certificates: Option<Certificates>,
}

/// One inequality `value >= 0`, tolerant of ties.
struct Cond {
    matched: bool,
    tie: bool,
}

fn ge(value: f64) -> Cond {
    Cond { matched: value >= -TIE_TOL, tie: value.abs() <= TIE_TOL }
}

fn all(conds: &[Cond]) -> (bool, bool) {
    (
        conds.iter().all(|c| c.matched),
        conds.iter().any(|c| c.tie),
    )
}

/// Classifies the SNE under a truthful infected signal by checking the five
/// mutually exclusive characterizations in order, lowest case first. A
/// condition holding only within [`TIE_TOL`] still matches and sets the
/// boundary flag.
pub fn classify_sne(p: &ModelParams, s: &SignalScheme) -> Result<SneResult> {
    let report = validate_params(p, s);
    if !report.ok() || !report.assumption_one {
        let mut violations = report.violations;
        let costs_ok = p.c_p < p.c_u;
        if !costs_ok {
            violations.push(format!("requires c_p < c_u, got c_p = {} >= c_u = {}", p.c_p, p.c_u));
        }
        let rates_ok = p.gamma < p.alpha * p.beta_p;
        if !rates_ok {
            violations.push(format!(
                "requires gamma < alpha * beta_p, got gamma = {} >= {}",
                p.gamma,
                p.alpha * p.beta_p
            ));
        }
        if s.mu_i != 1.0 {
            violations.push(format!("requires a truthful infected signal, got mu_i = {}", s.mu_i));
        }
        return Err(Error::AssumptionViolated { violations });
    }

    let th = thresholds(p, s)?;
    let truthful = SignalScheme::truthful_infected(s.mu_s);
    let y_ee_full_sbar = endemic_equilibrium(1.0, 0.0, &truthful, p)?;
    let (h0, g0) = g_h(0.0, s.mu_s, p);
    let (h1, g1) = g_h(1.0, s.mu_s, p);
    let certificates = Certificates {
        y_star_u: th.y_star_u,
        y_star_int: th.y_star_int,
        y_star_p: th.y_star_p,
        mu_s_max: Some(th.mu_s_max),
        mu_s_min: th.mu_s_min,
        y_ee_full_sbar,
        h_at_zero: h0,
        h_at_one: h1,
        g_at_zero: g0,
        g_at_one: g1,
    };
    let done = |case_id, state: PopulationState, boundary| {
        Ok(SneResult { case_id, state, boundary, certificates: Some(certificates) })
    };

    // Universal protection: indifference level above the fully protected
    // endemic level.
    let (matched, tie) = all(&[ge(th.y_star_p - th.y_star_int)]);
    if matched {
        return done(CaseId::Pid1, PopulationState::new(th.y_star_p, 0.0, 0.0), tie);
    }

    // Interior protection among signalled susceptibles, signalled infected
    // all protect.
    let (matched, tie) = all(&[
        ge(th.y_star_int - th.y_star_p),
        ge(y_ee_full_sbar - th.y_star_int),
    ]);
    if matched {
        let z = z_dagger_sbar(s, p)?.value.clamp(0.0, 1.0);
        return done(CaseId::Pid2, PopulationState::new(th.y_star_int, z, 0.0), tie);
    }

    // Signalled susceptibles all unprotected, signalled infected all protect.
    let (matched, tie) = all(&[ge(g0), ge(th.y_star_int - y_ee_full_sbar)]);
    if matched {
        return done(CaseId::Pid3, PopulationState::new(y_ee_full_sbar, 1.0, 0.0), tie);
    }

    // Interior protection among signalled infected.
    let (matched, tie) = all(&[ge(-g0), ge(g1)]);
    if matched {
        // Ties can leave the bracket degenerate; the root then sits at the
        // corresponding endpoint.
        let z = if g0 >= 0.0 {
            0.0
        } else if g1 <= 0.0 {
            1.0
        } else {
            find_z_dagger_ibar(s, p)?
        };
        let y = endemic_equilibrium(1.0, z, &truthful, p)?;
        return done(CaseId::Pid4, PopulationState::new(y, 1.0, z), tie);
    }

    // Nobody protects.
    let (matched, tie) = all(&[ge(-g1)]);
    if matched {
        let y = 1.0 - p.gamma / p.beta_u;
        return done(CaseId::Pid5, PopulationState::new(y, 1.0, 1.0), tie);
    }

    Err(Error::NoCaseMatched { g_at_zero: g0, g_at_one: g1 })
}

/// Classifies the SNE under full information disclosure
/// (`mu_s = mu_i = 1`). Assumes the validated cost/rate regime. Checked in
/// the order that mirrors the partial-disclosure cases so boundary ties
/// resolve consistently.
pub fn classify_fid(p: &ModelParams) -> SneResult {
    let y_star_u = 1.0 - p.gamma / p.beta_p;
    let y_star_p = 1.0 - p.gamma / (p.alpha * p.beta_p);
    let y_int = y_star_int(p);
    let full = SignalScheme { mu_s: 1.0, mu_i: 1.0, kappa: 1.0 };
    let (h0, g0) = g_h(0.0, 1.0, p);
    let (h1, g1) = g_h(1.0, 1.0, p);
    let certificates = Some(Certificates {
        y_star_u,
        y_star_int: y_int,
        y_star_p,
        mu_s_max: find_mu_s_max(p).ok(),
        mu_s_min: thresholds(p, &full).map(|t| t.mu_s_min).unwrap_or(None),
        y_ee_full_sbar: y_star_u,
        h_at_zero: h0,
        h_at_one: h1,
        g_at_zero: g0,
        g_at_one: g1,
    });

    // Universal protection.
    let (matched, tie) = all(&[ge(y_star_p - y_int)]);
    if matched {
        return SneResult {
            case_id: CaseId::FidE3,
            state: PopulationState::new(y_star_p, 0.0, 0.0),
            boundary: tie,
            certificates,
        };
    }

    // Interior protection among signalled susceptibles.
    let (matched, tie) = all(&[ge(y_int - y_star_p), ge(y_star_u - y_int)]);
    if matched {
        let z = ((p.gamma / (p.beta_p * (1.0 - y_int)) - p.alpha) / (1.0 - p.alpha))
            .clamp(0.0, 1.0);
        return SneResult {
            case_id: CaseId::FidE2,
            state: PopulationState::new(y_int, z, 0.0),
            boundary: tie,
            certificates,
        };
    }

    // Signalled susceptibles all unprotected.
    let (_, tie) = all(&[ge(y_int - y_star_u)]);
    SneResult {
        case_id: CaseId::FidE1,
        state: PopulationState::new(y_star_u, 1.0, 0.0),
        boundary: tie,
        certificates,
    }
}

/// First-principles verdict on a candidate equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    /// `|y - y_ee(z_sbar, z_ibar)|`; infinite when no endemic level exists.
    pub endemic_residual: f64,
    /// Endemic level implied by the strategies, when defined.
    pub y_ee: Option<f64>,
    pub du_sbar: f64,
    pub du_ibar: f64,
    /// Violation of the best-response condition for the susceptible signal.
    pub sbar_residual: f64,
    /// Violation of the best-response condition for the infected signal.
    pub ibar_residual: f64,
    pub tol: f64,
}

/// Violation magnitude of a per-signal best-response condition. Strategy
/// values within `tol` of an endpoint are treated as that endpoint so that
/// numerically converged boundary strategies verify.
fn strategy_residual(z: f64, du: f64, tol: f64) -> f64 {
    if z <= tol {
        // Everyone protects: protection must be weakly preferred.
        (-du).max(0.0)
    } else if z >= 1.0 - tol {
        // Nobody protects: protection must be weakly dispreferred.
        du.max(0.0)
    } else {
        // Interior mix: indifference.
        du.abs()
    }
}

/// Checks the definition of a stationary Nash equilibrium directly: the
/// infection level is endemic for the frozen strategies and each per-signal
/// strategy best-responds to the margin evaluated at the given state. Valid
/// for any signalling accuracies and prior scaling.
pub fn verify_sne(
    state: &PopulationState,
    p: &ModelParams,
    s: &SignalScheme,
    tol: f64,
) -> VerifyReport {
    let (endemic_residual, y_ee) = match endemic_equilibrium(state.z_sbar, state.z_ibar, s, p) {
        Ok(y_ee) => ((state.y - y_ee).abs(), Some(y_ee)),
        Err(_) => (f64::INFINITY, None),
    };
    let t = payoffs::utilities(state, s, p);
    let sbar_residual = strategy_residual(state.z_sbar, t.du_sbar, tol);
    let ibar_residual = strategy_residual(state.z_ibar, t.du_ibar, tol);
    VerifyReport {
        pass: endemic_residual <= tol && sbar_residual <= tol && ibar_residual <= tol,
        endemic_residual,
        y_ee,
        du_sbar: t.du_sbar,
        du_ibar: t.du_ibar,
        sbar_residual,
        ibar_residual,
        tol,
    }
}

/// A simulated limit that passed verification.
#[derive(Debug, Clone, Serialize)]
pub struct VerifiedSne {
    pub result: SneResult,
    pub verify: VerifyReport,
    pub t_converge: f64,
}

/// A run that either failed to converge or converged to a state that does
/// not verify.
#[derive(Debug, Clone, Serialize)]
pub struct NumericFailure {
    pub initial: PopulationState,
    pub final_state: PopulationState,
    pub converged: bool,
    pub verify: VerifyReport,
}

/// Outcome of the simulation-based equilibrium search.
#[derive(Debug, Clone, Serialize)]
pub struct NumericSneOutcome {
    /// Verified limits, deduplicated within [`DEDUP_TOL`] in sup-norm.
    pub equilibria: Vec<VerifiedSne>,
    pub failures: Vec<NumericFailure>,
}

/// Sup-norm distance below which two simulated limits count as the same
/// equilibrium.
pub const DEDUP_TOL: f64 = 1e-6;

/// Finds stationary Nash equilibria by integrating the pairwise-comparison
/// strategy dynamics from each initial state and verifying the limit.
/// This is the only route available for noisy infected signals, where the
/// closed classification does not apply.
pub fn numeric_sne(
    p: &ModelParams,
    s: &SignalScheme,
    initials: &[PopulationState],
    cfg: &DynamicsConfig,
    verify_tol: f64,
) -> NumericSneOutcome {
    let cfg = DynamicsConfig { rule: RevisionRule::Smith, ..*cfg };
    let mut outcome = NumericSneOutcome { equilibria: Vec::new(), failures: Vec::new() };
    for initial in initials {
        let trace = dynamics::integrate(initial, p, s, &cfg);
        let report = verify_sne(&trace.final_state, p, s, verify_tol);
        if trace.converged && report.pass {
            let duplicate = outcome
                .equilibria
                .iter()
                .any(|e| e.result.state.sup_distance(&trace.final_state) <= DEDUP_TOL);
            if !duplicate {
                outcome.equilibria.push(VerifiedSne {
                    result: SneResult {
                        case_id: CaseId::Numeric,
                        state: trace.final_state,
                        boundary: false,
                        certificates: None,
                    },
                    verify: report,
                    t_converge: trace.t_converge.unwrap_or(0.0),
                });
            }
        } else {
            outcome.failures.push(NumericFailure {
                initial: *initial,
                final_state: trace.final_state,
                converged: trace.converged,
                verify: report,
            });
        }
    }
    outcome
}
