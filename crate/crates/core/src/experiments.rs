//! Parameter-sweep experiments emitting CSV datasets.
//!
//! Five bundled experiments: the five reference protection costs with their
//! trajectories, the cost-times-signal-accuracy equilibrium comparison, the
//! prior-misestimation sweep, the logit-rationality sweep, and the
//! infected-signal-accuracy heatmap. Each produces rows with a common column
//! set; the logit and heatmap experiments append one comparison column each.
//!
//! Rows are computed in grid order and depend only on their own grid point,
//! so output is deterministic and byte-identical across runs.

use serde::Serialize;

use crate::dynamics::{integrate, DynamicsConfig, RevisionRule, Trace};
use crate::equilibrium::{classify_fid, classify_sne, numeric_sne, CaseId, SneResult};
use crate::error::Result;
use crate::model::{ModelParams, PopulationState, SignalScheme};

/// How sweep points are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Closed-form classification only.
    Analytic,
    /// Simulated strategy dynamics only.
    Simulate,
    /// Both, one row each per grid point.
    Both,
}

impl std::str::FromStr for SweepMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(SweepMode::Analytic),
            "simulate" => Ok(SweepMode::Simulate),
            "both" => Ok(SweepMode::Both),
            other => Err(format!(
                "unknown mode '{other}', expected 'analytic', 'simulate', or 'both'"
            )),
        }
    }
}

/// Base configuration shared by every grid point of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub params: ModelParams,
    pub scheme: SignalScheme,
    pub dynamics: DynamicsConfig,
    pub initial: PopulationState,
    pub mode: SweepMode,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            scheme: SignalScheme::default(),
            dynamics: DynamicsConfig::default(),
            initial: PopulationState::new(0.01, 0.5, 0.5),
            mode: SweepMode::Analytic,
        }
    }
}

/// One sweep output row.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub c_p: f64,
    pub mu_s: f64,
    pub mu_i: f64,
    pub kappa: f64,
    pub lambda: Option<f64>,
    pub case_id: Option<CaseId>,
    pub y_star: Option<f64>,
    pub z_sbar_star: Option<f64>,
    pub z_ibar_star: Option<f64>,
    pub fid_y_star: f64,
    pub converged: Option<bool>,
    pub t_converge: Option<f64>,
    pub status: String,
    /// Smith-limit infection level at the same grid point (logit sweep only).
    pub smith_y_star: Option<f64>,
    /// `y_star(mu_i = 1) - y_star(mu_i)` (heatmap only).
    pub diff: Option<f64>,
}

impl SweepRow {
    fn blank(c_p: f64, scheme: &SignalScheme, fid_y_star: f64) -> Self {
        Self {
            c_p,
            mu_s: scheme.mu_s,
            mu_i: scheme.mu_i,
            kappa: scheme.kappa,
            lambda: None,
            case_id: None,
            y_star: None,
            z_sbar_star: None,
            z_ibar_star: None,
            fid_y_star,
            converged: None,
            t_converge: None,
            status: "ok".to_string(),
            smith_y_star: None,
            diff: None,
        }
    }

    fn set_state(&mut self, case_id: CaseId, state: &PopulationState) {
        self.case_id = Some(case_id);
        self.y_star = Some(state.y);
        self.z_sbar_star = Some(state.z_sbar);
        self.z_ibar_star = Some(state.z_ibar);
    }
}

/// The five reference protection costs exercised by the bundled trajectories.
pub const FIVE_CASE_COSTS: [f64; 5] = [1.5, 5.0, 15.0, 21.0, 21.85];

/// Tolerance at which a simulated limit must agree with the analytic
/// classification.
pub const AGREEMENT_TOL: f64 = 1e-3;

/// One reference-cost run: classification, trajectory, and their distance.
#[derive(Debug, Clone)]
pub struct CaseRun {
    pub c_p: f64,
    pub result: SneResult,
    pub trace: Trace,
    /// Sup-norm distance between the trajectory limit and the classified
    /// equilibrium.
    pub distance: f64,
}

/// Classifies and simulates each of the five reference costs. Convergence
/// failures are carried in the returned traces.
pub fn run_five_cases(spec: &SweepSpec) -> Result<Vec<CaseRun>> {
    let mut runs = Vec::with_capacity(FIVE_CASE_COSTS.len());
    for c_p in FIVE_CASE_COSTS {
        let params = ModelParams { c_p, ..spec.params };
        let result = classify_sne(&params, &spec.scheme)?;
        let cfg = DynamicsConfig { rule: RevisionRule::Smith, ..spec.dynamics };
        let trace = integrate(&spec.initial, &params, &spec.scheme, &cfg);
        let distance = trace.final_state.sup_distance(&result.state);
        runs.push(CaseRun { c_p, result, trace, distance });
    }
    Ok(runs)
}

/// Summary rows for the reference-cost runs, one per cost.
pub fn five_case_summary(runs: &[CaseRun], spec: &SweepSpec) -> Vec<SweepRow> {
    runs.iter()
        .map(|run| {
            let params = ModelParams { c_p: run.c_p, ..spec.params };
            let mut row = SweepRow::blank(run.c_p, &spec.scheme, classify_fid(&params).state.y);
            row.set_state(run.result.case_id, &run.result.state);
            row.converged = Some(run.trace.converged);
            row.t_converge = run.trace.t_converge;
            row.status = if !run.trace.converged {
                "non-convergence".to_string()
            } else if run.distance > AGREEMENT_TOL {
                format!("limit differs from classification by {}", run.distance)
            } else {
                "ok".to_string()
            };
            row
        })
        .collect()
}

fn simulate_row(
    params: &ModelParams,
    scheme: &SignalScheme,
    spec: &SweepSpec,
    fid_y_star: f64,
) -> SweepRow {
    let mut row = SweepRow::blank(params.c_p, scheme, fid_y_star);
    let out = numeric_sne(params, scheme, &[spec.initial], &spec.dynamics, 1e-6);
    if let Some(found) = out.equilibria.first() {
        row.set_state(CaseId::Numeric, &found.result.state);
        row.converged = Some(true);
        row.t_converge = Some(found.t_converge);
    } else if let Some(failure) = out.failures.first() {
        row.converged = Some(failure.converged);
        row.y_star = Some(failure.final_state.y);
        row.z_sbar_star = Some(failure.final_state.z_sbar);
        row.z_ibar_star = Some(failure.final_state.z_ibar);
        row.status = if failure.converged {
            "limit failed verification".to_string()
        } else {
            "non-convergence".to_string()
        };
    }
    row
}

/// Equilibrium infection level across a protection-cost grid for several
/// susceptible-signal accuracies, with the full-disclosure level alongside.
pub fn sweep_cp_mus(spec: &SweepSpec, cp_grid: &[f64], mu_s_set: &[f64]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &mu_s in mu_s_set {
        let scheme = SignalScheme { mu_s, ..spec.scheme };
        for &c_p in cp_grid {
            let params = ModelParams { c_p, ..spec.params };
            let fid_y_star = classify_fid(&params).state.y;
            if matches!(spec.mode, SweepMode::Analytic | SweepMode::Both) {
                let mut row = SweepRow::blank(c_p, &scheme, fid_y_star);
                match classify_sne(&params, &scheme) {
                    Ok(r) => {
                        row.set_state(r.case_id, &r.state);
                        if r.boundary {
                            row.status = "boundary tie".to_string();
                        }
                    }
                    Err(e) => row.status = e.to_string(),
                }
                rows.push(row);
            }
            if matches!(spec.mode, SweepMode::Simulate | SweepMode::Both) {
                rows.push(simulate_row(&params, &scheme, spec, fid_y_star));
            }
        }
    }
    rows
}

/// Simulated equilibria under scaled priors. The verification inside the
/// simulation uses the same scaled beliefs the agents act on.
pub fn sweep_prior(spec: &SweepSpec, kappa_set: &[f64], cp_grid: &[f64]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &kappa in kappa_set {
        let scheme = SignalScheme { kappa, ..spec.scheme };
        for &c_p in cp_grid {
            let params = ModelParams { c_p, ..spec.params };
            let fid_y_star = classify_fid(&params).state.y;
            rows.push(simulate_row(&params, &scheme, spec, fid_y_star));
        }
    }
    rows
}

/// Simulated logit limits across rationality values, with the Smith limit at
/// the same grid point in a comparison column.
pub fn sweep_logit(spec: &SweepSpec, lambda_set: &[f64], cp_grid: &[f64]) -> Vec<SweepRow> {
    let mut smith_limits = Vec::with_capacity(cp_grid.len());
    for &c_p in cp_grid {
        let params = ModelParams { c_p, ..spec.params };
        let cfg = DynamicsConfig { rule: RevisionRule::Smith, ..spec.dynamics };
        let trace = integrate(&spec.initial, &params, &spec.scheme, &cfg);
        smith_limits.push((trace.converged, trace.final_state.y));
    }

    let mut rows = Vec::new();
    for &lambda in lambda_set {
        for (idx, &c_p) in cp_grid.iter().enumerate() {
            let params = ModelParams { c_p, ..spec.params };
            let fid_y_star = classify_fid(&params).state.y;
            let mut row = SweepRow::blank(c_p, &spec.scheme, fid_y_star);
            row.lambda = Some(lambda);
            let (smith_ok, smith_y) = smith_limits[idx];
            row.smith_y_star = smith_ok.then_some(smith_y);

            let cfg = DynamicsConfig { rule: RevisionRule::Logit, lambda, ..spec.dynamics };
            let trace = integrate(&spec.initial, &params, &spec.scheme, &cfg);
            row.y_star = Some(trace.final_state.y);
            row.z_sbar_star = Some(trace.final_state.z_sbar);
            row.z_ibar_star = Some(trace.final_state.z_ibar);
            row.converged = Some(trace.converged);
            row.t_converge = trace.t_converge;
            if !trace.converged {
                row.status = "non-convergence".to_string();
            } else if !smith_ok {
                row.status = "smith reference non-convergence".to_string();
            }
            rows.push(row);
        }
    }
    rows
}

/// Infection-level difference between the truthful-infected-signal
/// equilibrium and the simulated equilibrium at each `mu_i`, over a cost
/// grid. Rows at `mu_i = 1` are classified analytically and have a zero
/// difference by construction.
pub fn heatmap_mui_cp(spec: &SweepSpec, mu_i_grid: &[f64], cp_grid: &[f64]) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &mu_i in mu_i_grid {
        for &c_p in cp_grid {
            let params = ModelParams { c_p, ..spec.params };
            let truthful = SignalScheme { mu_i: 1.0, ..spec.scheme };
            let fid_y_star = classify_fid(&params).state.y;
            let reference = classify_sne(&params, &truthful);

            if mu_i == 1.0 {
                let mut row = SweepRow::blank(c_p, &truthful, fid_y_star);
                match reference {
                    Ok(r) => {
                        row.set_state(r.case_id, &r.state);
                        // The row is its own reference.
                        row.diff = Some(0.0);
                    }
                    Err(e) => row.status = e.to_string(),
                }
                rows.push(row);
                continue;
            }

            let scheme = SignalScheme { mu_i, ..spec.scheme };
            let mut row = simulate_row(&params, &scheme, spec, fid_y_star);
            match (&reference, row.y_star) {
                (Ok(r), Some(y)) if row.status == "ok" => {
                    row.diff = Some(r.state.y - y);
                }
                (Err(e), _) => {
                    row.status = format!("reference classification failed: {e}");
                }
                _ => {}
            }
            rows.push(row);
        }
    }
    rows
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a grid needs at least two points");
    let h = (to - from) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i == steps - 1 { to } else { from + h * i as f64 })
        .collect()
}

/// `steps` log-spaced values from `from` to `to` inclusive; `from > 0`.
pub fn logspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    assert!(from > 0.0 && to > from);
    linspace(from.ln(), to.ln(), steps)
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 {
                from
            } else if i == steps - 1 {
                to
            } else {
                x.exp()
            }
        })
        .collect()
}

/// Default protection-cost grid: 200 log-spaced points spanning near-zero
/// cost up to just below the infected penalty.
pub fn default_cp_grid() -> Vec<f64> {
    logspace(1e-7, 21.9, 200)
}

/// Default susceptible-signal accuracies for the cost sweep.
pub const DEFAULT_MU_S_SET: [f64; 4] = [0.7, 0.8, 0.9, 1.0];

/// Extra comparison column appended by an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSchema {
    Base,
    /// Appends `smith_y_star`.
    Logit,
    /// Appends `diff`.
    Heatmap,
}

/// Shortest round-trip decimal for a float, switching to scientific
/// notation outside [1e-4, 1e16) so asymptotically tiny values stay short.
pub fn fmt_f64(v: f64) -> String {
    if v != 0.0 && !(1e-4..1e16).contains(&v.abs()) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn push_f64(out: &mut String, v: f64) {
    out.push_str(&fmt_f64(v));
}

/// Quotes a free-text field when it contains a delimiter, quote, or newline.
fn push_text(out: &mut String, text: &str) {
    if text.contains([',', '"', '\n']) {
        out.push('"');
        out.push_str(&text.replace('"', "\"\""));
        out.push('"');
    } else {
        out.push_str(text);
    }
}

fn push_opt_f64(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        push_f64(out, v);
    }
}

/// Serializes sweep rows; floats use shortest round-trip formatting, absent
/// values are empty fields.
pub fn sweep_csv(rows: &[SweepRow], schema: SweepSchema) -> String {
    let mut out = String::from(
        "c_p,mu_s,mu_i,kappa,lambda,case_id,y_star,z_sbar_star,z_ibar_star,fid_y_star,converged,t_converge,status",
    );
    match schema {
        SweepSchema::Base => {}
        SweepSchema::Logit => out.push_str(",smith_y_star"),
        SweepSchema::Heatmap => out.push_str(",diff"),
    }
    out.push('\n');
    for row in rows {
        push_f64(&mut out, row.c_p);
        out.push(',');
        push_f64(&mut out, row.mu_s);
        out.push(',');
        push_f64(&mut out, row.mu_i);
        out.push(',');
        push_f64(&mut out, row.kappa);
        out.push(',');
        push_opt_f64(&mut out, row.lambda);
        out.push(',');
        if let Some(case) = row.case_id {
            out.push_str(&case.to_string());
        }
        out.push(',');
        push_opt_f64(&mut out, row.y_star);
        out.push(',');
        push_opt_f64(&mut out, row.z_sbar_star);
        out.push(',');
        push_opt_f64(&mut out, row.z_ibar_star);
        out.push(',');
        push_f64(&mut out, row.fid_y_star);
        out.push(',');
        if let Some(c) = row.converged {
            out.push_str(if c { "true" } else { "false" });
        }
        out.push(',');
        push_opt_f64(&mut out, row.t_converge);
        out.push(',');
        push_text(&mut out, &row.status);
        match schema {
            SweepSchema::Base => {}
            SweepSchema::Logit => {
                out.push(',');
                push_opt_f64(&mut out, row.smith_y_star);
            }
            SweepSchema::Heatmap => {
                out.push(',');
                push_opt_f64(&mut out, row.diff);
            }
        }
        out.push('\n');
    }
    out
}

/// Serializes a trajectory as `t,y,z_sbar,z_ibar` rows.
pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from("t,y,z_sbar,z_ibar\n");
    for (t, state) in trace.times.iter().zip(&trace.states) {
        push_f64(&mut out, *t);
        out.push(',');
        push_f64(&mut out, state.y);
        out.push(',');
        push_f64(&mut out, state.z_sbar);
        out.push(',');
        push_f64(&mut out, state.z_ibar);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_cases_agree_with_classification() {
        let runs = run_five_cases(&SweepSpec::default()).unwrap();
        assert_eq!(runs.len(), 5);
        let cases =
            [CaseId::Pid1, CaseId::Pid2, CaseId::Pid3, CaseId::Pid4, CaseId::Pid5];
        for (run, case) in runs.iter().zip(cases) {
            assert_eq!(run.result.case_id, case, "c_p = {}", run.c_p);
            assert!(run.trace.converged, "c_p = {}", run.c_p);
            assert!(run.distance <= AGREEMENT_TOL, "c_p = {} distance {}", run.c_p, run.distance);
        }
        let summary = five_case_summary(&runs, &SweepSpec::default());
        assert!(summary.iter().all(|r| r.status == "ok"));
    }

    #[test]
    fn cp_mus_sweep_row_count_and_agreement() {
        let spec = SweepSpec { mode: SweepMode::Analytic, ..SweepSpec::default() };
        let grid = linspace(1.0, 21.0, 9);
        let rows = sweep_cp_mus(&spec, &grid, &[0.8, 1.0]);
        assert_eq!(rows.len(), 18);
        for row in &rows {
            assert!(row.status == "ok", "{row:?}");
            let y = row.y_star.unwrap();
            // Wherever the indifference level undercuts the all-unprotected
            // endemic level, partial and full disclosure coincide.
            if row.mu_s == 0.8 && row.c_p / 22.0 <= 0.55 {
                assert!((y - row.fid_y_star).abs() <= 1e-12, "{row:?}");
            }
        }
    }

    #[test]
    fn both_mode_rows_agree() {
        let spec = SweepSpec { mode: SweepMode::Both, ..SweepSpec::default() };
        let rows = sweep_cp_mus(&spec, &[1.5, 15.0], &[0.8]);
        assert_eq!(rows.len(), 4);
        for pair in rows.chunks(2) {
            let (analytic, simulated) = (&pair[0], &pair[1]);
            assert!(analytic.case_id != Some(CaseId::Numeric));
            assert_eq!(simulated.case_id, Some(CaseId::Numeric));
            let d = (analytic.y_star.unwrap() - simulated.y_star.unwrap()).abs();
            assert!(d <= AGREEMENT_TOL, "{d}");
        }
    }

    #[test]
    fn heatmap_truthful_column_is_exact_zero() {
        let spec = SweepSpec::default();
        let rows = heatmap_mui_cp(&spec, &[1.0], &[5.0, 15.0]);
        for row in rows {
            assert_eq!(row.diff, Some(0.0));
            assert!(row.case_id.is_some());
        }
    }

    #[test]
    fn heatmap_sign_examples() {
        let spec = SweepSpec { mode: SweepMode::Simulate, ..SweepSpec::default() };
        // Slightly noisy infected signals raise infection where the
        // susceptible-signal crowd is already fully unprotected (plateau
        // costs), and lower it where that strategy is interior.
        let rows = heatmap_mui_cp(&spec, &[0.8], &[15.0]);
        assert!(rows[0].diff.unwrap() < 0.0, "{:?}", rows[0]);
        let rows = heatmap_mui_cp(&spec, &[0.1], &[5.0]);
        assert!(rows[0].diff.unwrap() > 0.0, "{:?}", rows[0]);
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = linspace(1.0, 21.0, 21);
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 1.0);
        assert_eq!(*g.last().unwrap(), 21.0);
        let g = default_cp_grid();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 1e-7);
        assert_eq!(*g.last().unwrap(), 21.9);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn csv_output_is_deterministic() {
        let spec = SweepSpec::default();
        let rows = sweep_cp_mus(&spec, &[1.5, 15.0, 21.85], &[0.8]);
        let a = sweep_csv(&rows, SweepSchema::Base);
        let rows = sweep_cp_mus(&spec, &[1.5, 15.0, 21.85], &[0.8]);
        let b = sweep_csv(&rows, SweepSchema::Base);
        assert_eq!(a, b);
        assert!(a.starts_with(
            "c_p,mu_s,mu_i,kappa,lambda,case_id,y_star,z_sbar_star,z_ibar_star,fid_y_star,converged,t_converge,status\n"
        ));
        assert_eq!(a.lines().count(), 4);
    }

    #[test]
    fn free_text_status_is_quoted() {
        let mut row = SweepRow::blank(1.0, &SignalScheme::default(), 0.5);
        row.status = "alpha must lie in (0, 1), got 1.2".to_string();
        let csv = sweep_csv(&[row], SweepSchema::Base);
        let data_line = csv.lines().nth(1).unwrap();
        assert!(data_line.ends_with("\"alpha must lie in (0, 1), got 1.2\""));
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.0, 1.0, 21.85, 1e-7, 8.4e-322, -0.5505617977528089, 1e17, 5000.0] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            assert!(s.len() < 30, "{s}");
        }
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(21.85), "21.85");
    }

    #[test]
    fn trace_csv_shape() {
        let runs = run_five_cases(&SweepSpec::default()).unwrap();
        let csv = trace_csv(&runs[0].trace);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,y,z_sbar,z_ibar"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0,0.01,0.5,0.5"));
    }
}
