#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use sis_persuasion::model::{ModelParams, PopulationState, SignalScheme};

pub fn table_with_cp(c_p: f64) -> ModelParams {
    ModelParams { c_p, ..ModelParams::default() }
}

pub fn scheme08() -> SignalScheme {
    SignalScheme::truthful_infected(0.8)
}

pub fn default_initial() -> PopulationState {
    PopulationState::new(0.01, 0.5, 0.5)
}

pub const FIVE_COSTS: [f64; 5] = [1.5, 5.0, 15.0, 21.0, 21.85];

/// Random parameter draw inside the validated analytic regime:
/// `0 < alpha < 1`, `0 < beta_p < beta_u`, `gamma < alpha * beta_p`,
/// `0 < c_p < c_u`.
pub fn draw_valid_params(rng: &mut StdRng) -> ModelParams {
    let alpha = rng.random_range(0.05..0.95);
    let beta_p = rng.random_range(0.1..1.0);
    let beta_u = beta_p * rng.random_range(1.05..2.5);
    let gamma = alpha * beta_p * rng.random_range(0.1..0.95);
    let big_l = rng.random_range(10.0..200.0);
    let c_u = rng.random_range(1.0..50.0);
    let c_p = c_u * rng.random_range(0.02..0.98);
    ModelParams { alpha, beta_p, beta_u, gamma, big_l, c_p, c_u }
}

/// Independent root locator: midpoint of the first negative-to-nonnegative
/// bracket of `f` on a uniform grid with the given step.
pub fn grid_scan_root<F: Fn(f64) -> f64>(step: f64, f: F) -> Option<f64> {
    let n = (1.0 / step).round() as usize;
    let mut prev = f(0.0);
    for i in 1..=n {
        let x = i as f64 * step;
        let cur = f(x);
        if prev < 0.0 && cur >= 0.0 {
            return Some(x - 0.5 * step);
        }
        prev = cur;
    }
    None
}

/// Prints the per-criterion verdict line.
pub fn report(name: &str, pass: bool, detail: &str) {
    println!("criterion {name}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
}
