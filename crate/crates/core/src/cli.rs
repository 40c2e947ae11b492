//! Command-line drivers: JSON run configs, the three experiments, CSV output.
//!
//! Config keys mirror the physical symbols (`N`, `A`, `S_inv`, `R0`, ...);
//! the README lists the full schema.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::curvegeom::{Curve, CurveError, MarkerCurve, ModePhase};
use crate::evolver::{run, DiagnosticsRow, EvolverOptions, RunError, RunObserver, RunOptions, Snapshot, SsdPrefactor};
use crate::linalg::GmresOptions;
use crate::lintheory::{integrate_linear, marginal_s_inv, radius_rate, ASchedule, LinParams, LinTheoryError, LinearState};
use crate::membrane::{BendingModel, MembraneError};
use crate::specialfn::{grid, FilterSettings};
use crate::stokesbim::{PhysParams, SolverOptions, StokesError, TumorModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Malformed(String),
    #[error("config must be a JSON object")]
    NotAnObject,
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error("unknown key: {0}")]
    UnknownKey(String),
    #[error("invalid value for `{field}`: {value} (expected {expected})")]
    InvalidEnum { field: &'static str, value: String, expected: &'static str },
    #[error("N = {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid `{field}`: {reason}")]
    InvalidValue { field: &'static str, reason: String },
    #[error("weakening bending needs both `C` and `lambda_c`")]
    IncompleteWeakening,
    #[error("bad override `{0}` (expected dotted.key=value)")]
    BadOverride(String),
    #[error("self-similar runs need exactly one shape mode, got {0}")]
    SelfSimilarModes(usize),
    #[error("linear theory needs a shape mode")]
    NoMode,
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { field, reason: reason.into() }
}

/// How the apoptosis ratio is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Apoptosis {
    Fixed(f64),
    /// Recomputed every step so that the shape mode is neutral.
    SelfSimilar,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Phase {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BendingSpec {
    Uniform,
    Weakening { c: f64, lambda_c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialShape {
    pub r0: f64,
    /// `(l, amplitude, phase)`: `r = R0 + sum a trig(l α)`.
    pub modes: Vec<(u32, f64, ModePhase)>,
}

impl InitialShape {
    pub fn curve(&self, n: usize) -> Result<Curve, CurveError> {
        Curve::from_markers(&MarkerCurve::polar(n, self.r0, &self.modes).points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub nutrient: GmresOptions,
    pub stokes: GmresOptions,
    pub filter: FilterSettings,
    pub apply_filters: bool,
    pub ssd_prefactor: SsdPrefactor,
    pub reproject_interval: usize,
}

/// Sampling for the `linear` tables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTables {
    pub lambdas: Vec<f64>,
    pub marginal_r: [f64; 2],
    pub a_values: Vec<f64>,
    pub growth_r_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_points: usize,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_interval: usize,
    pub apoptosis: Apoptosis,
    pub lambda: f64,
    pub s_inv: f64,
    pub bending: BendingSpec,
    pub initial_shape: InitialShape,
    pub numerics: Numerics,
    pub linear: LinearTables,
    pub output_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    n: Option<usize>,
    dt: Option<f64>,
    t_final: Option<f64>,
    snapshot_interval: Option<usize>,
    #[serde(rename = "A")]
    a: Option<Value>,
    lambda: Option<f64>,
    #[serde(rename = "S_inv")]
    s_inv: Option<f64>,
    #[serde(rename = "R0")]
    r0: Option<f64>,
    #[serde(default)]
    modes: Vec<(u32, f64, Phase)>,
    #[serde(default)]
    bending: RawBending,
    #[serde(default)]
    numerics: RawNumerics,
    #[serde(default)]
    linear: RawLinear,
    output_dir: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawBending {
    kind: Option<String>,
    #[serde(rename = "C")]
    c: Option<f64>,
    lambda_c: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    gmres_tol_nutrient: Option<f64>,
    gmres_tol_stokes: Option<f64>,
    gmres_restart: Option<usize>,
    gmres_max_iter: Option<usize>,
    filter_order: Option<u32>,
    filter_strength: Option<f64>,
    krasny_threshold: Option<f64>,
    apply_filters: Option<bool>,
    ssd_prefactor: Option<Value>,
    reproject_interval: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLinear {
    lambdas: Option<Vec<f64>>,
    marginal_r: Option<[f64; 2]>,
    a_values: Option<Vec<f64>>,
    growth_r_max: Option<f64>,
    samples: Option<usize>,
}

fn serde_error(e: serde_json::Error) -> ConfigError {
    let msg = e.to_string();
    if msg.starts_with("unknown field") {
        ConfigError::UnknownKey(msg)
    } else if msg.starts_with("unknown variant") {
        ConfigError::InvalidEnum { field: "modes", value: msg, expected: "cos or sin" }
    } else {
        ConfigError::Malformed(msg)
    }
}

/// Sets `key=value` on a JSON tree; `key` may be dotted, `value` is JSON
/// when it parses as such and a plain string otherwise.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<(), ConfigError> {
    let bad = || ConfigError::BadOverride(assignment.to_string());
    let (key, raw) = assignment.split_once('=').ok_or_else(bad)?;
    if key.is_empty() {
        return Err(bad());
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        node = node
            .as_object_mut()
            .ok_or_else(bad)?
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    node.as_object_mut().ok_or_else(bad)?.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    parse_config_with(path, &[])
}

/// Reads `path`, applies `--set` overrides, then validates.
pub fn parse_config_with(path: &Path, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    config_from_value(value)
}

pub fn config_from_value(value: Value) -> Result<RunConfig, ConfigError> {
    if !value.is_object() {
        return Err(ConfigError::NotAnObject);
    }
    let raw: RawConfig = serde_json::from_value(value).map_err(serde_error)?;

    let n = raw.n.ok_or(ConfigError::MissingField("N"))?;
    if !n.is_power_of_two() || n < 8 {
        return Err(ConfigError::NotPowerOfTwo(n));
    }
    let dt = raw.dt.ok_or(ConfigError::MissingField("dt"))?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt", "must be positive"));
    }
    let t_final = raw.t_final.ok_or(ConfigError::MissingField("t_final"))?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(invalid("t_final", "must be non-negative"));
    }
    let apoptosis = match raw.a.ok_or(ConfigError::MissingField("A"))? {
        Value::Number(x) => Apoptosis::Fixed(x.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) if s == "self-similar" => Apoptosis::SelfSimilar,
        other => {
            return Err(ConfigError::InvalidEnum { field: "A", value: other.to_string(), expected: "a number or \"self-similar\"" })
        }
    };
    if let Apoptosis::Fixed(a) = apoptosis {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(invalid("A", "must be non-negative"));
        }
    }
    let lambda = raw.lambda.ok_or(ConfigError::MissingField("lambda"))?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", "must be positive"));
    }
    let s_inv = raw.s_inv.ok_or(ConfigError::MissingField("S_inv"))?;
    if !(s_inv >= 0.0 && s_inv.is_finite()) {
        return Err(invalid("S_inv", "must be non-negative"));
    }
    let r0 = raw.r0.ok_or(ConfigError::MissingField("R0"))?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(invalid("R0", "must be positive"));
    }
    let modes = raw
        .modes
        .into_iter()
        .map(|(l, a, ph)| (l, a, if ph == Phase::Cos { ModePhase::Cos } else { ModePhase::Sin }))
        .collect();

    let b = raw.bending;
    let bending = match (b.kind.as_deref(), b.c, b.lambda_c) {
        (None | Some("uniform"), None, None) => BendingSpec::Uniform,
        (Some("uniform"), _, _) => return Err(invalid("bending", "uniform bending takes no C or lambda_c")),
        (None | Some("weakening"), Some(c), Some(lambda_c)) => BendingSpec::Weakening { c, lambda_c },
        (None | Some("weakening"), _, _) => return Err(ConfigError::IncompleteWeakening),
        (Some(other), _, _) => {
            return Err(ConfigError::InvalidEnum {
                field: "bending.kind",
                value: other.to_string(),
                expected: "\"uniform\" or \"weakening\"",
            })
        }
    };

    let nm = raw.numerics;
    let filter0 = FilterSettings::default();
    let solver0 = SolverOptions::default();
    let gmres = |tol: Option<f64>, base: GmresOptions| GmresOptions {
        tol: tol.unwrap_or(base.tol),
        restart: nm.gmres_restart.unwrap_or(base.restart),
        max_iter: nm.gmres_max_iter.unwrap_or(base.max_iter),
    };
    let ssd_prefactor = match nm.ssd_prefactor {
        None => SsdPrefactor::Fixed(1.0),
        Some(Value::Number(x)) => SsdPrefactor::Fixed(x.as_f64().unwrap_or(f64::NAN)),
        Some(Value::String(s)) if s == "matched" => SsdPrefactor::Matched,
        Some(other) => {
            return Err(ConfigError::InvalidEnum {
                field: "numerics.ssd_prefactor",
                value: other.to_string(),
                expected: "a number or \"matched\"",
            })
        }
    };
    if let SsdPrefactor::Fixed(p) = ssd_prefactor {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(invalid("numerics.ssd_prefactor", "must be non-negative"));
        }
    }
    let numerics = Numerics {
        nutrient: gmres(nm.gmres_tol_nutrient, solver0.nutrient),
        stokes: gmres(nm.gmres_tol_stokes, solver0.stokes),
        filter: FilterSettings {
            order: nm.filter_order.unwrap_or(filter0.order),
            strength: nm.filter_strength.unwrap_or(filter0.strength),
            krasny_level: nm.krasny_threshold.unwrap_or(filter0.krasny_level),
        },
        apply_filters: nm.apply_filters.unwrap_or(true),
        ssd_prefactor,
        reproject_interval: nm.reproject_interval.unwrap_or(50),
    };
    for (field, tol) in [("numerics.gmres_tol_nutrient", numerics.nutrient.tol), ("numerics.gmres_tol_stokes", numerics.stokes.tol)] {
        if !(tol > 0.0) {
            return Err(invalid(field, "must be positive"));
        }
    }

    let lin = raw.linear;
    let linear = LinearTables {
        lambdas: lin.lambdas.unwrap_or_else(|| vec![0.5, 1.5, 2.5]),
        marginal_r: lin.marginal_r.unwrap_or([1.5, 5.0]),
        a_values: lin.a_values.unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]),
        growth_r_max: lin.growth_r_max.unwrap_or(6.0),
        samples: lin.samples.unwrap_or(200),
    };
    let [r_lo, r_hi] = linear.marginal_r;
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(invalid("linear.marginal_r", "need 0 < R_min < R_max"));
    }
    if linear.samples < 2 || !(linear.growth_r_max > 0.0) {
        return Err(invalid("linear", "need samples >= 2 and growth_r_max > 0"));
    }

    Ok(RunConfig {
        n_points: n,
        dt,
        t_final,
        snapshot_interval: raw.snapshot_interval.unwrap_or(10),
        apoptosis,
        lambda,
        s_inv,
        bending,
        initial_shape: InitialShape { r0, modes },
        numerics,
        linear,
        output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("output")),
    })
}

impl RunConfig {
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Non-fatal issues worth reporting.
    pub fn warnings(&self) -> Vec<String> {
        let total: f64 = self.initial_shape.modes.iter().map(|m| m.1.abs()).sum();
        let mut w = Vec::new();
        if total > 0.5 * self.initial_shape.r0 {
            w.push(format!("shape amplitudes sum to {total}, above half of R0 = {}", self.initial_shape.r0));
        }
        let steps = self.n_steps() as f64 * self.dt;
        if (steps - self.t_final).abs() > 1e-9 * self.t_final.max(1.0) {
            w.push(format!("t_final is not a multiple of dt; running to t = {steps}"));
        }
        w
    }

    pub fn bending_model(&self) -> Result<BendingModel, MembraneError> {
        match self.bending {
            BendingSpec::Uniform => BendingModel::uniform(self.s_inv),
            BendingSpec::Weakening { c, lambda_c } => BendingModel::weakening(self.s_inv, c, lambda_c),
        }
    }

    pub fn evolver_options(&self) -> EvolverOptions {
        EvolverOptions {
            dt: self.dt,
            ssd_prefactor: self.numerics.ssd_prefactor,
            filter: self.numerics.filter,
            apply_filters: self.numerics.apply_filters,
            reproject_interval: self.numerics.reproject_interval,
        }
    }

    pub fn model(&self) -> Result<TumorModel, CliError> {
        let bending = self.bending_model().map_err(|e| ConfigError::InvalidValue { field: "bending", reason: e.to_string() })?;
        let a = match self.apoptosis {
            Apoptosis::Fixed(a) => a,
            Apoptosis::SelfSimilar => 0.0,
        };
        let params = PhysParams::new(a, self.lambda).map_err(|e| invalid("A", e.to_string()))?;
        let mut model = TumorModel::new(params, bending);
        model.options = SolverOptions { nutrient: self.numerics.nutrient, stokes: self.numerics.stokes, filter: self.numerics.filter };
        if self.apoptosis == Apoptosis::SelfSimilar {
            model = model.self_similar(self.single_mode()?);
        }
        Ok(model)
    }

    fn single_mode(&self) -> Result<u32, ConfigError> {
        match self.initial_shape.modes.as_slice() {
            [(l, ..)] => Ok(*l),
            m => Err(ConfigError::SelfSimilarModes(m.len())),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("run failed: {0}")]
    Run(#[from] RunError),
    #[error("linear theory failed: {0}")]
    Linear(#[from] LinTheoryError),
    #[error("initial shape invalid: {0}")]
    Shape(#[from] CurveError),
    #[error("model setup failed: {0}")]
    Model(#[from] StokesError),
    #[error("writing output failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 3,
        }
    }
}

/// Writes through a sibling temp file and renames, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(f64::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub const DIAGNOSTICS_HEADER: &str = "t,R_eff,area,length,shape_factor,A,gmres_nutrient_iters,gmres_stokes_iters";

/// Interface markers as `alpha,x,y,kappa` rows.
pub fn marker_csv(curve: &Curve) -> String {
    let m = curve.reconstruct();
    let kappa = curve.curvature();
    let rows = grid(curve.n()).into_iter().zip(&m.points).zip(&kappa).map(|((a, p), k)| vec![a, p[0], p[1], *k]);
    csv("alpha,x,y,kappa", rows)
}

/// Streams snapshots to disk and rewrites `diagnostics.csv` alongside each one.
pub struct CsvWriter {
    dir: PathBuf,
    pub rows: Vec<DiagnosticsRow>,
}

impl CsvWriter {
    pub fn new(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), rows: Vec::new() })
    }

    pub fn flush(&self) -> std::io::Result<()> {
        let rows = self.rows.iter().map(|r| {
            vec![
                r.t,
                r.r_eff,
                r.area,
                r.length,
                r.shape_factor,
                r.a,
                r.gmres_nutrient_iters as f64,
                r.gmres_stokes_iters as f64,
            ]
        });
        write_atomic(&self.dir.join("diagnostics.csv"), &csv(DIAGNOSTICS_HEADER, rows))
    }
}

impl RunObserver for CsvWriter {
    fn diagnostics(&mut self, row: &DiagnosticsRow) -> std::io::Result<()> {
        self.rows.push(*row);
        Ok(())
    }

    fn snapshot(&mut self, snap: &Snapshot) -> std::io::Result<()> {
        let rows = (0..snap.alpha.len()).map(|j| vec![snap.alpha[j], snap.points[j][0], snap.points[j][1], snap.kappa[j], snap.v[j]]);
        write_atomic(&self.dir.join(format!("interface_{:06}.csv", snap.step)), &csv("alpha,x,y,kappa,V", rows))?;
        self.flush()
    }
}

/// Runs the configured simulation. On a solver failure the diagnostics so far
/// and the last valid interface (`failed_state.csv`) are written before the error is returned.
pub fn cmd_simulate(config: &RunConfig) -> Result<Vec<DiagnosticsRow>, CliError> {
    let mut model = config.model()?;
    let curve = config.initial_shape.curve(config.n_points)?;
    let mut out = CsvWriter::new(&config.output_dir)?;
    let opts = RunOptions { n_steps: config.n_steps(), snapshot_interval: config.snapshot_interval };
    match run(curve, &mut model, &config.evolver_options(), &opts, &mut out) {
        Ok(_) => {
            out.flush()?;
            Ok(out.rows)
        }
        Err(e) => {
            out.flush()?;
            if let RunError::Step { last, .. } = &e {
                write_atomic(&config.output_dir.join("failed_state.csv"), &marker_csv(last))?;
            }
            Err(e.into())
        }
    }
}

/// Largest `|s(t)/s(0) - 1|` of the shape factor over a run.
pub fn shape_factor_drift(rows: &[DiagnosticsRow]) -> f64 {
    let s0 = rows.first().map_or(0.0, |r| r.shape_factor);
    rows.iter().map(|r| (r.shape_factor / s0 - 1.0).abs()).fold(0.0, f64::max)
}

/// Simulation with `A` chosen each step to freeze the single shape mode;
/// adds `selfsimilar.csv` with the shape-factor drift.
pub fn cmd_selfsimilar(config: &RunConfig) -> Result<Vec<DiagnosticsRow>, CliError> {
    config.single_mode()?;
    let config = RunConfig { apoptosis: Apoptosis::SelfSimilar, ..config.clone() };
    let rows = cmd_simulate(&config)?;
    let s0 = rows[0].shape_factor;
    let table = rows.iter().map(|r| vec![r.t, r.r_eff, r.shape_factor, r.a, r.shape_factor / s0 - 1.0]);
    write_atomic(&config.output_dir.join("selfsimilar.csv"), &csv("t,R_eff,shape_factor,A,drift", table))?;
    Ok(rows)
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Writes `marginal.csv`, `growth.csv` and `trajectory.csv`.
pub fn cmd_linear(config: &RunConfig) -> Result<(), CliError> {
    let &(l, amp, _) = config.initial_shape.modes.first().ok_or(ConfigError::NoMode)?;
    let t = &config.linear;
    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;
    let a = match config.apoptosis {
        Apoptosis::Fixed(a) => a,
        Apoptosis::SelfSimilar => 0.0,
    };

    let mut marginal = Vec::new();
    for &lambda in &t.lambdas {
        for r in linspace(t.marginal_r[0], t.marginal_r[1], t.samples) {
            marginal.push(vec![lambda, r, marginal_s_inv(l, a, r, lambda)?]);
        }
    }
    write_atomic(&dir.join("marginal.csv"), &csv("lambda,R,S_inv_marginal", marginal))?;

    let mut growth = Vec::new();
    for &av in &t.a_values {
        // R = 0 is a removable point of I1/I0; start one step in.
        for r in linspace(0.0, t.growth_r_max, t.samples + 1).skip(1) {
            growth.push(vec![av, r, radius_rate(r, av)]);
        }
    }
    write_atomic(&dir.join("growth.csv"), &csv("A,R,dR_dt", growth))?;

    let r0 = config.initial_shape.r0;
    let state = LinearState { r: r0, delta_over_r: amp / r0, l, params: LinParams { a, lambda: config.lambda, s_inv: config.s_inv } };
    let schedule = match config.apoptosis {
        Apoptosis::Fixed(_) => ASchedule::Constant,
        Apoptosis::SelfSimilar => ASchedule::SelfSimilar,
    };
    let traj = integrate_linear(&state, schedule, config.t_final, config.dt)?;
    let rows = traj.iter().map(|s| vec![s.t, s.r, s.delta_over_r, s.a]);
    write_atomic(&dir.join("trajectory.csv"), &csv("t,R,delta_over_R,A", rows))?;
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "tumorbim", version, about = "Elastic tumor interface simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Override a config field, e.g. `--set numerics.ssd_prefactor=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    /// Replaces `output_dir` from the config.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonlinear interface evolution.
    Simulate { config: PathBuf },
    /// Linear-theory tables and trajectory.
    Linear { config: PathBuf },
    /// Nonlinear run with the shape-freezing apoptosis schedule.
    Selfsimilar { config: PathBuf },
}

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let path = match &cli.command {
        Command::Simulate { config } | Command::Linear { config } | Command::Selfsimilar { config } => config,
    };
    let mut config = parse_config_with(path, &cli.set)?;
    if let Some(dir) = &cli.output_dir {
        config.output_dir = dir.clone();
    }
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    let mut msg = String::new();
    match cli.command {
        Command::Simulate { .. } => {
            let rows = cmd_simulate(&config)?;
            let last = rows.last().expect("run emits the initial row");
            let _ = write!(msg, "t = {}, R_eff = {}, shape factor = {}", last.t, last.r_eff, last.shape_factor);
        }
        Command::Selfsimilar { .. } => {
            let rows = cmd_selfsimilar(&config)?;
            let last = rows.last().expect("run emits the initial row");
            let _ = write!(
                msg,
                "R_eff {} -> {}, max shape factor drift {:.3e}",
                rows[0].r_eff,
                last.r_eff,
                shape_factor_drift(&rows)
            );
        }
        Command::Linear { .. } => {
            cmd_linear(&config)?;
            msg.push_str("wrote marginal.csv, growth.csv, trajectory.csv");
        }
    }
    Ok(msg)
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
