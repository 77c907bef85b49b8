//! Command-line interface: classify equilibria, simulate the coupled
//! dynamics, verify candidate states, and run the bundled sweeps.
//!
//! Configuration is one flat JSON object; every key has a same-named
//! kebab-case flag that overrides the file value. The effective merged
//! configuration is echoed into every output (a `config` field on JSON
//! results, `# config` comment lines on CSV files) so a run can be
//! reproduced from its artifacts.
//!
//! Exit codes: 0 success, 1 failed verification verdict, 2 configuration or
//! usage error, 3 analytic-regime violation, 4 non-convergence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use sis_persuasion::dynamics::{integrate, DynamicsConfig, RevisionRule};
use sis_persuasion::equilibrium::{classify_fid, classify_sne, verify_sne, SneResult};
use sis_persuasion::error::Error as CoreError;
use sis_persuasion::experiments::{
    default_cp_grid, five_case_summary, fmt_f64, heatmap_mui_cp, linspace, run_five_cases,
    sweep_cp_mus, sweep_logit, sweep_prior, sweep_csv, trace_csv, SweepMode, SweepSchema,
    SweepSpec, DEFAULT_MU_S_SET,
};
use sis_persuasion::model::{validate_params, ModelParams, PopulationState, SignalScheme};

#[derive(Parser)]
#[command(
    name = "sis-persuasion",
    version,
    about = "SIS epidemic protection game under noisy infection-status signalling"
)]
struct Cli {
    /// Flat JSON configuration file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: GlobalOverrides,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Default)]
struct GlobalOverrides {
    /// Protection effectiveness factor in (0, 1).
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Transmission rate of protected infected agents.
    #[arg(long, global = true)]
    beta_p: Option<f64>,
    /// Transmission rate of unprotected infected agents.
    #[arg(long, global = true)]
    beta_u: Option<f64>,
    /// Recovery rate.
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Loss upon infection.
    #[arg(long, global = true)]
    big_l: Option<f64>,
    /// Expected penalty on unprotected infected agents.
    #[arg(long, global = true)]
    c_u: Option<f64>,
    /// Strategy revision rule: smith or logit.
    #[arg(long, global = true)]
    rule: Option<RevisionRule>,
    /// Integration step size.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Integration horizon.
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Sup-norm derivative threshold for convergence.
    #[arg(long, global = true)]
    conv_tol: Option<f64>,
    /// Trajectory samples are kept every this many steps.
    #[arg(long, global = true)]
    record_stride: Option<usize>,
    /// Initial infected proportion.
    #[arg(long, global = true)]
    y0: Option<f64>,
    /// Initial unprotected fraction among susceptible-signal recipients.
    #[arg(long, global = true)]
    z_sbar0: Option<f64>,
    /// Initial unprotected fraction among infected-signal recipients.
    #[arg(long, global = true)]
    z_ibar0: Option<f64>,
    /// Output path (file, or directory for `sweep five-cases`).
    #[arg(long, global = true)]
    out: Option<String>,
}

/// Scalar model flags for the single-point commands.
#[derive(Args, Debug, Clone, Default)]
struct ScalarArgs {
    /// Protection cost.
    #[arg(long)]
    c_p: Option<f64>,
    /// Susceptible-signal accuracy.
    #[arg(long)]
    mu_s: Option<f64>,
    /// Infected-signal accuracy.
    #[arg(long)]
    mu_i: Option<f64>,
    /// Prior-scaling factor.
    #[arg(long)]
    kappa: Option<f64>,
    /// Logit rationality.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the stationary Nash equilibrium (requires mu_i = 1).
    Classify(ScalarArgs),
    /// Classify the full-information-disclosure equilibrium (mu_s = mu_i = 1).
    Fid(ScalarArgs),
    /// Integrate the coupled dynamics; writes a trajectory CSV and prints a
    /// summary.
    Simulate(ScalarArgs),
    /// Check a candidate state against the equilibrium conditions.
    Verify {
        /// Candidate state as `y,z_sbar,z_ibar`.
        #[arg(long)]
        state: String,
        /// Verification tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        scalars: ScalarArgs,
    },
    /// Run a bundled experiment and write its CSV dataset(s).
    Sweep {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Five reference protection costs: per-case trajectories plus a summary.
    FiveCases,
    /// Equilibrium level over a protection-cost grid per signal accuracy.
    CpMus {
        /// Cost grid: `lo:hi:steps`, a comma list, or one value.
        #[arg(long)]
        c_p: Option<String>,
        /// Signal accuracies (comma list).
        #[arg(long)]
        mu_s: Option<String>,
        /// analytic, simulate, or both.
        #[arg(long)]
        mode: Option<SweepMode>,
    },
    /// Simulated equilibria under scaled priors.
    Prior {
        #[arg(long)]
        c_p: Option<String>,
        /// Prior-scaling factors (comma list).
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Simulated logit limits with the Smith limit alongside.
    Logit {
        #[arg(long)]
        c_p: Option<String>,
        /// Rationality values (comma list).
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Infection-level difference against the truthful infected signal.
    MuiHeatmap {
        #[arg(long)]
        c_p: Option<String>,
        /// Infected-signal accuracy grid.
        #[arg(long)]
        mu_i: Option<String>,
    },
}

/// The flat configuration object; field order fixes the serialization order
/// used in output echoes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Config {
    alpha: f64,
    beta_p: f64,
    beta_u: f64,
    gamma: f64,
    big_l: f64,
    c_p: f64,
    c_u: f64,
    mu_s: f64,
    mu_i: f64,
    kappa: f64,
    rule: RevisionRule,
    lambda: f64,
    dt: f64,
    t_max: f64,
    conv_tol: f64,
    record_stride: usize,
    y0: f64,
    z_sbar0: f64,
    z_ibar0: f64,
    out: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        let p = ModelParams::default();
        let s = SignalScheme::default();
        let d = DynamicsConfig::default();
        Self {
            alpha: p.alpha,
            beta_p: p.beta_p,
            beta_u: p.beta_u,
            gamma: p.gamma,
            big_l: p.big_l,
            c_p: p.c_p,
            c_u: p.c_u,
            mu_s: s.mu_s,
            mu_i: s.mu_i,
            kappa: s.kappa,
            rule: d.rule,
            lambda: d.lambda,
            dt: d.dt,
            t_max: d.t_max,
            conv_tol: d.conv_tol,
            record_stride: d.record_stride,
            y0: 0.01,
            z_sbar0: 0.5,
            z_ibar0: 0.5,
            out: None,
        }
    }
}

impl Config {
    fn params(&self) -> ModelParams {
        ModelParams {
            alpha: self.alpha,
            beta_p: self.beta_p,
            beta_u: self.beta_u,
            gamma: self.gamma,
            big_l: self.big_l,
            c_p: self.c_p,
            c_u: self.c_u,
        }
    }

    fn scheme(&self) -> SignalScheme {
        SignalScheme { mu_s: self.mu_s, mu_i: self.mu_i, kappa: self.kappa }
    }

    fn dynamics(&self) -> DynamicsConfig {
        DynamicsConfig {
            rule: self.rule,
            lambda: self.lambda,
            dt: self.dt,
            t_max: self.t_max,
            conv_tol: self.conv_tol,
            record_stride: self.record_stride,
        }
    }

    fn initial(&self) -> PopulationState {
        PopulationState::new(self.y0, self.z_sbar0, self.z_ibar0)
    }

    fn apply_overrides(&mut self, o: &GlobalOverrides) {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = o.$field.clone() { self.$field = v.into(); })*
            };
        }
        set!(alpha, beta_p, beta_u, gamma, big_l, c_u, dt, t_max, conv_tol, record_stride);
        set!(y0, z_sbar0, z_ibar0);
        if let Some(rule) = o.rule {
            self.rule = rule;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
    }

    fn apply_scalars(&mut self, s: &ScalarArgs) {
        if let Some(v) = s.c_p {
            self.c_p = v;
        }
        if let Some(v) = s.mu_s {
            self.mu_s = v;
        }
        if let Some(v) = s.mu_i {
            self.mu_i = v;
        }
        if let Some(v) = s.kappa {
            self.kappa = v;
        }
        if let Some(v) = s.lambda {
            self.lambda = v;
        }
    }

    fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    kind: &'static str,
    detail: String,
    violations: Vec<String>,
}

impl Failure {
    fn config(detail: impl Into<String>) -> Self {
        Self { code: 2, kind: "config", detail: detail.into(), violations: Vec::new() }
    }

    fn usage(detail: impl Into<String>) -> Self {
        Self { code: 2, kind: "usage", detail: detail.into(), violations: Vec::new() }
    }

    fn assumption(violations: Vec<String>) -> Self {
        Self {
            code: 3,
            kind: "assumption",
            detail: "analytic regime requirements violated".into(),
            violations,
        }
    }

    fn non_convergence(detail: impl Into<String>) -> Self {
        Self { code: 4, kind: "non-convergence", detail: detail.into(), violations: Vec::new() }
    }

    fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::AssumptionViolated { violations } => Self::assumption(violations),
            other => Self::config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let payload = serde_json::json!({
                "error": f.kind,
                "detail": f.detail,
                "violations": f.violations,
            });
            eprintln!("{payload}");
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<Config>(&text)
                .map_err(|e| Failure::config(format!("invalid config {}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    cfg.apply_overrides(&cli.overrides);

    match cli.cmd {
        Cmd::Classify(scalars) => {
            cfg.apply_scalars(&scalars);
            cmd_classify(&cfg)
        }
        Cmd::Fid(scalars) => {
            cfg.apply_scalars(&scalars);
            cmd_fid(&cfg)
        }
        Cmd::Simulate(scalars) => {
            cfg.apply_scalars(&scalars);
            cmd_simulate(&cfg)
        }
        Cmd::Verify { state, tol, scalars } => {
            cfg.apply_scalars(&scalars);
            cmd_verify(&cfg, &state, tol)
        }
        Cmd::Sweep { experiment } => cmd_sweep(&cfg, experiment),
    }
}

/// Range validation shared by every command.
fn validated(cfg: &Config) -> Result<(), Failure> {
    let report = validate_params(&cfg.params(), &cfg.scheme());
    if !report.ok() {
        return Err(Failure {
            code: 2,
            kind: "config",
            detail: "parameter ranges violated".into(),
            violations: report.violations,
        });
    }
    for (name, v) in [("y0", cfg.y0), ("z_sbar0", cfg.z_sbar0), ("z_ibar0", cfg.z_ibar0)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Failure::config(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    let integrator_ok = cfg.dt > 0.0 && cfg.t_max >= cfg.dt && cfg.conv_tol > 0.0;
    if !integrator_ok {
        return Err(Failure::config("need dt > 0, t_max >= dt, conv_tol > 0"));
    }
    let lambda_ok = cfg.lambda > 0.0;
    if cfg.rule == RevisionRule::Logit && !lambda_ok {
        return Err(Failure::config(format!(
            "logit rule needs lambda > 0, got {}",
            cfg.lambda
        )));
    }
    Ok(())
}

fn emit_result(cfg: &Config, result: serde_json::Value) {
    let envelope = serde_json::json!({
        "config": serde_json::from_str::<serde_json::Value>(&cfg.echo()).unwrap(),
        "result": result,
    });
    println!("{}", serde_json::to_string_pretty(&envelope).expect("result serializes"));
}

fn warn_boundary(r: &SneResult) {
    if r.boundary {
        eprintln!(
            "warning: classification decided at a boundary tie (within 1e-9); \
             a neighbouring case holds the same state"
        );
    }
}

fn cmd_classify(cfg: &Config) -> Result<ExitCode, Failure> {
    validated(cfg)?;
    // Ranges are clean here, so any classifier error is a regime violation
    // and maps to exit code 3.
    let r = classify_sne(&cfg.params(), &cfg.scheme()).map_err(Failure::from_core)?;
    warn_boundary(&r);
    emit_result(cfg, serde_json::to_value(&r).expect("result serializes"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_fid(cfg: &Config) -> Result<ExitCode, Failure> {
    validated(cfg)?;
    let report = validate_params(&cfg.params(), &cfg.scheme());
    if !report.cost_rate_ok {
        return Err(Failure::assumption(vec![format!(
            "requires c_p < c_u and gamma < alpha * beta_p (c_p = {}, c_u = {}, gamma = {}, alpha*beta_p = {})",
            cfg.c_p,
            cfg.c_u,
            cfg.gamma,
            cfg.alpha * cfg.beta_p
        )]));
    }
    let r = classify_fid(&cfg.params());
    warn_boundary(&r);
    emit_result(cfg, serde_json::to_value(&r).expect("result serializes"));
    Ok(ExitCode::SUCCESS)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| Failure::config(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_simulate(cfg: &Config) -> Result<ExitCode, Failure> {
    validated(cfg)?;
    let params = cfg.params();
    let scheme = cfg.scheme();
    let trace = integrate(&cfg.initial(), &params, &scheme, &cfg.dynamics());

    let out = PathBuf::from(cfg.out.clone().unwrap_or_else(|| "trace.csv".into()));
    let csv = format!("# config {}\n{}", cfg.echo(), trace_csv(&trace));
    write_file(&out, &csv)?;

    let report = validate_params(&params, &scheme);
    let (sne, distance) = if report.assumption_one {
        match classify_sne(&params, &scheme) {
            Ok(r) => {
                let d = trace.final_state.sup_distance(&r.state);
                (serde_json::to_value(&r).ok(), Some(d))
            }
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    let result = serde_json::json!({
        "final": trace.final_state,
        "converged": trace.converged,
        "t_converge": trace.t_converge,
        "max_clamp": trace.max_clamp,
        "trace_file": out.display().to_string(),
        "sne": sne,
        "distance": distance,
    });
    emit_result(cfg, result);

    if !trace.converged {
        return Err(Failure::non_convergence(format!(
            "no convergence within t_max = {} (final field sup-norm above {})",
            cfg.t_max, cfg.conv_tol
        )));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cfg: &Config, state: &str, tol: f64) -> Result<ExitCode, Failure> {
    validated(cfg)?;
    let parts: Vec<&str> = state.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::usage(format!(
            "--state expects y,z_sbar,z_ibar, got '{state}'"
        )));
    }
    let mut values = [0.0; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| Failure::usage(format!("cannot parse '{part}' in --state: {e}")))?;
        if !(0.0..=1.0).contains(slot) {
            return Err(Failure::usage(format!("state component {slot} outside [0, 1]")));
        }
    }
    let tol_ok = tol > 0.0;
    if !tol_ok {
        return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
    }
    let candidate = PopulationState::new(values[0], values[1], values[2]);
    let report = verify_sne(&candidate, &cfg.params(), &cfg.scheme(), tol);
    emit_result(cfg, serde_json::to_value(report).expect("report serializes"));
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Parses `lo:hi:steps`, a comma list, or a single value.
fn parse_grid(spec: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Failure::usage(format!("cannot parse '{s}' in --{flag}: {e}")))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::usage(format!("--{flag} range must be lo:hi:steps, got '{spec}'")));
        }
        let lo = parse(parts[0])?;
        let hi = parse(parts[1])?;
        let steps = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Failure::usage(format!("bad step count in --{flag}: {e}")))?;
        let range_ok = steps >= 2 && hi > lo;
        if !range_ok {
            return Err(Failure::usage(format!(
                "--{flag} range needs hi > lo and steps >= 2, got '{spec}'"
            )));
        }
        return Ok(linspace(lo, hi, steps));
    }
    let values: Result<Vec<f64>, Failure> = spec.split(',').map(parse).collect();
    let values = values?;
    if values.is_empty() {
        return Err(Failure::usage(format!("--{flag} is empty")));
    }
    Ok(values)
}

fn grid_echo(name: &str, values: &[f64]) -> String {
    let joined: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    format!("{name}={}", joined.join(","))
}

fn cmd_sweep(cfg: &Config, experiment: Experiment) -> Result<ExitCode, Failure> {
    validated(cfg)?;
    let spec = SweepSpec {
        params: cfg.params(),
        scheme: cfg.scheme(),
        dynamics: cfg.dynamics(),
        initial: cfg.initial(),
        mode: SweepMode::Analytic,
    };

    match experiment {
        Experiment::FiveCases => {
            let dir = PathBuf::from(cfg.out.clone().unwrap_or_else(|| "five_cases".into()));
            let runs = run_five_cases(&spec).map_err(Failure::from_core)?;
            let mut files = Vec::new();
            for (idx, run) in runs.iter().enumerate() {
                let path = dir.join(format!("case_{}.csv", idx + 1));
                let csv = format!(
                    "# experiment five-cases c_p={}\n# config {}\n{}",
                    run.c_p,
                    cfg.echo(),
                    trace_csv(&run.trace)
                );
                write_file(&path, &csv)?;
                files.push(path.display().to_string());
            }
            let summary_path = dir.join("summary.csv");
            let summary = format!(
                "# experiment five-cases\n# config {}\n{}",
                cfg.echo(),
                sweep_csv(&five_case_summary(&runs, &spec), SweepSchema::Base)
            );
            write_file(&summary_path, &summary)?;
            files.push(summary_path.display().to_string());
            emit_result(cfg, serde_json::json!({ "files": files }));
            if let Some(run) = runs.iter().find(|r| !r.trace.converged) {
                return Err(Failure::non_convergence(format!(
                    "c_p = {} did not converge within t_max = {}",
                    run.c_p, cfg.t_max
                )));
            }
            Ok(ExitCode::SUCCESS)
        }
        Experiment::CpMus { c_p, mu_s, mode } => {
            let cp_grid = match c_p {
                Some(s) => parse_grid(&s, "c-p")?,
                None => default_cp_grid(),
            };
            let mu_s_set = match mu_s {
                Some(s) => parse_grid(&s, "mu-s")?,
                None => DEFAULT_MU_S_SET.to_vec(),
            };
            let spec = SweepSpec { mode: mode.unwrap_or(SweepMode::Analytic), ..spec };
            let rows = sweep_cp_mus(&spec, &cp_grid, &mu_s_set);
            finish_sweep(
                cfg,
                "cp-mus",
                &[grid_echo("c_p", &cp_grid), grid_echo("mu_s", &mu_s_set)],
                &rows,
                SweepSchema::Base,
                "cp_mus.csv",
            )
        }
        Experiment::Prior { c_p, kappa } => {
            let cp_grid = match c_p {
                Some(s) => parse_grid(&s, "c-p")?,
                None => default_cp_grid(),
            };
            let kappa_set = match kappa {
                Some(s) => parse_grid(&s, "kappa")?,
                None => vec![0.75, 1.0, 1.25],
            };
            let spec = SweepSpec { mode: SweepMode::Simulate, ..spec };
            let rows = sweep_prior(&spec, &kappa_set, &cp_grid);
            finish_sweep(
                cfg,
                "prior",
                &[grid_echo("kappa", &kappa_set), grid_echo("c_p", &cp_grid)],
                &rows,
                SweepSchema::Base,
                "prior.csv",
            )
        }
        Experiment::Logit { c_p, lambda } => {
            let cp_grid = match c_p {
                Some(s) => parse_grid(&s, "c-p")?,
                None => linspace(1.0, 21.85, 20),
            };
            let lambda_set = match lambda {
                Some(s) => parse_grid(&s, "lambda")?,
                None => vec![0.1, 1.0, 10.0],
            };
            if !lambda_set.iter().all(|&l| l > 0.0) {
                return Err(Failure::usage("--lambda values must be positive"));
            }
            let spec = SweepSpec { mode: SweepMode::Simulate, ..spec };
            let rows = sweep_logit(&spec, &lambda_set, &cp_grid);
            finish_sweep(
                cfg,
                "logit",
                &[grid_echo("lambda", &lambda_set), grid_echo("c_p", &cp_grid)],
                &rows,
                SweepSchema::Logit,
                "logit.csv",
            )
        }
        Experiment::MuiHeatmap { c_p, mu_i } => {
            let cp_grid = match c_p {
                Some(s) => parse_grid(&s, "c-p")?,
                None => linspace(1.0, 21.0, 21),
            };
            let mu_i_grid = match mu_i {
                Some(s) => parse_grid(&s, "mu-i")?,
                None => linspace(0.1, 1.0, 10),
            };
            if !mu_i_grid.iter().all(|&m| m > 0.0 && m <= 1.0) {
                return Err(Failure::usage("--mu-i values must lie in (0, 1]"));
            }
            let spec = SweepSpec { mode: SweepMode::Simulate, ..spec };
            let rows = heatmap_mui_cp(&spec, &mu_i_grid, &cp_grid);
            finish_sweep(
                cfg,
                "mui-heatmap",
                &[grid_echo("mu_i", &mu_i_grid), grid_echo("c_p", &cp_grid)],
                &rows,
                SweepSchema::Heatmap,
                "mui_heatmap.csv",
            )
        }
    }
}

fn finish_sweep(
    cfg: &Config,
    name: &str,
    grids: &[String],
    rows: &[sis_persuasion::experiments::SweepRow],
    schema: SweepSchema,
    default_out: &str,
) -> Result<ExitCode, Failure> {
    let out = PathBuf::from(cfg.out.clone().unwrap_or_else(|| default_out.into()));
    let csv = format!(
        "# experiment {name} {}\n# config {}\n{}",
        grids.join(" "),
        cfg.echo(),
        sweep_csv(rows, schema)
    );
    write_file(&out, &csv)?;
    emit_result(
        cfg,
        serde_json::json!({
            "file": out.display().to_string(),
            "rows": rows.len(),
        }),
    );
    if rows.iter().any(|r| r.status == "non-convergence") {
        return Err(Failure::non_convergence("one or more grid points did not converge"));
    }
    Ok(ExitCode::SUCCESS)
}
