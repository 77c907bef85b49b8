//! Cross-module properties of the dynamics and the equilibrium search.

mod common;

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sis_persuasion::dynamics::{coupled_field, integrate, DynamicsConfig, RevisionRule};
use sis_persuasion::equilibrium::{classify_sne, numeric_sne, verify_sne, CaseId};
use sis_persuasion::model::{PopulationState, SignalScheme};

fn sup_norm(v: &[f64; 3]) -> f64 {
    v[0].abs().max(v[1].abs()).max(v[2].abs())
}

#[test]
fn halving_dt_leaves_limits_unchanged() {
    let base = DynamicsConfig::default();
    let half = DynamicsConfig { dt: base.dt / 2.0, ..base };
    for c_p in FIVE_COSTS {
        let p = table_with_cp(c_p);
        let a = integrate(&default_initial(), &p, &scheme08(), &base);
        let b = integrate(&default_initial(), &p, &scheme08(), &half);
        assert!(a.converged && b.converged);
        let d = a.final_state.sup_distance(&b.final_state);
        assert!(d < 1e-6, "c_p = {c_p}: dt halving moved the limit by {d}");
    }
}

#[test]
fn smith_stationarity_iff_verified_equilibrium() {
    let cfg = DynamicsConfig::default();
    let s = scheme08();
    // Classified equilibria: stationary and verified.
    for c_p in FIVE_COSTS {
        let p = table_with_cp(c_p);
        let state = classify_sne(&p, &s).unwrap().state;
        assert!(verify_sne(&state, &p, &s, 1e-6).pass);
        assert!(sup_norm(&coupled_field(&state, &p, &s, &cfg)) <= 1e-6);
    }
    // Random states: fail one test iff they fail the other.
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..500 {
        let c_p = FIVE_COSTS[rng.random_range(0..FIVE_COSTS.len())];
        let p = table_with_cp(c_p);
        let state = PopulationState::new(
            rng.random_range(0.001..1.0),
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=1.0),
        );
        let verified = verify_sne(&state, &p, &s, 1e-6).pass;
        let stationary = sup_norm(&coupled_field(&state, &p, &s, &cfg)) <= 1e-6;
        assert_eq!(verified, stationary, "state {state:?} at c_p = {c_p}");
    }
}

#[test]
fn forward_invariance_from_random_initials() {
    let mut rng = StdRng::seed_from_u64(13);
    let cfg = DynamicsConfig { t_max: 200.0, ..DynamicsConfig::default() };
    for _ in 0..20 {
        let c_p = FIVE_COSTS[rng.random_range(0..FIVE_COSTS.len())];
        let initial = PopulationState::new(
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=1.0),
            rng.random_range(0.0..=1.0),
        );
        let trace = integrate(&initial, &table_with_cp(c_p), &scheme08(), &cfg);
        assert!(trace.states.iter().all(PopulationState::in_unit_cube));
        assert!(trace.max_clamp <= 1e-6 * cfg.dt, "clamp {}", trace.max_clamp);
    }
}

#[test]
fn numeric_search_agrees_with_classifier() {
    let p = table_with_cp(15.0);
    let out = numeric_sne(&p, &scheme08(), &[default_initial()], &DynamicsConfig::default(), 1e-6);
    assert_eq!(out.equilibria.len(), 1);
    assert!(out.failures.is_empty());
    let found = &out.equilibria[0];
    assert_eq!(found.result.case_id, CaseId::Numeric);
    let classified = classify_sne(&p, &scheme08()).unwrap().state;
    assert!(found.result.state.sup_distance(&classified) <= 1e-6);
}

#[test]
fn numeric_search_handles_noisy_infected_signal() {
    // No closed classification exists here; the simulated limit must verify.
    let p = table_with_cp(15.0);
    let s = SignalScheme { mu_s: 0.8, mu_i: 0.9, kappa: 1.0 };
    let out = numeric_sne(&p, &s, &[default_initial()], &DynamicsConfig::default(), 1e-6);
    assert_eq!(out.equilibria.len(), 1);
    let found = &out.equilibria[0];
    assert!(found.verify.pass);
    assert!(found.verify.endemic_residual <= 1e-6);
    assert!(found.verify.sbar_residual <= 1e-6);
    assert!(found.verify.ibar_residual <= 1e-6);
}

#[test]
fn numeric_search_reports_non_convergence() {
    let cfg = DynamicsConfig { t_max: 0.1, ..DynamicsConfig::default() };
    let out = numeric_sne(&table_with_cp(15.0), &scheme08(), &[default_initial()], &cfg, 1e-6);
    assert!(out.equilibria.is_empty());
    assert_eq!(out.failures.len(), 1);
    assert!(!out.failures[0].converged);
}

#[test]
fn classifier_exhaustive_on_random_regime_draws() {
    let mut rng = StdRng::seed_from_u64(17);
    let mut case_seen = [false; 5];
    for i in 0..2000 {
        let p = draw_valid_params(&mut rng);
        let s = SignalScheme::truthful_infected(rng.random_range(0.0..=1.0));
        let r = classify_sne(&p, &s).unwrap_or_else(|e| panic!("draw {i}: {e} ({p:?})"));
        let idx = match r.case_id {
            CaseId::Pid1 => 0,
            CaseId::Pid2 => 1,
            CaseId::Pid3 => 2,
            CaseId::Pid4 => 3,
            CaseId::Pid5 => 4,
            other => panic!("draw {i}: unexpected {other:?}"),
        };
        case_seen[idx] = true;
        // Every classification satisfies the endemic consistency invariant.
        let y_ee = sis_persuasion::model::endemic_equilibrium(
            r.state.z_sbar,
            r.state.z_ibar,
            &SignalScheme::truthful_infected(s.mu_s),
            &p,
        )
        .unwrap();
        assert!((r.state.y - y_ee).abs() <= 1e-10, "draw {i}");
    }
    assert!(case_seen.iter().all(|&b| b), "sampler missed a case: {case_seen:?}");
}

#[test]
fn logit_approaches_uniform_choice_at_low_rationality() {
    let cfg = DynamicsConfig {
        rule: RevisionRule::Logit,
        lambda: 0.01,
        ..DynamicsConfig::default()
    };
    let trace = integrate(&default_initial(), &table_with_cp(15.0), &scheme08(), &cfg);
    assert!(trace.converged);
    assert!((trace.final_state.z_sbar - 0.5).abs() < 0.05);
    assert!((trace.final_state.z_ibar - 0.5).abs() < 0.05);
}
