//! Experiment driver behind the `fraclap` binary: solve, verify and sweep.
//!
//! Exit codes: 0 all certificates pass, 1 some certificate failed,
//! 2 input error, 3 solver failure.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::analysis::{self, Certificate, NormReport};
use crate::error::{Error, Result};
use crate::grid::{build_grid, Grid};
use crate::nonlinearity::{HSpec, MeasureSchedule, MeasureSpec, SourceSpec};
use crate::operator::{assemble_operator, smallest_eigenvalue, OperatorMatrix};
use crate::solver::{
    approximation_limit, comparison_certificate, phi_l2_bound, solve_limit, Level, ProblemSpec, Solution,
    SolverOptions,
};

pub const SCHEMA_VERSION: &str = "1";
pub const OUTPUT_DIR_ENV: &str = "FRACLAP_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_solver_tol")]
    pub solver: f64,
    #[serde(default = "default_newton_max")]
    pub newton_max: usize,
    #[serde(default = "default_entropy_pairs")]
    pub entropy_pairs: usize,
}

fn default_solver_tol() -> f64 {
    1e-10
}
fn default_newton_max() -> usize {
    200
}
fn default_entropy_pairs() -> usize {
    50
}
fn default_exclusion() -> usize {
    2
}
fn default_margin() -> f64 {
    0.25
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solver: default_solver_tol(),
            newton_max: default_newton_max(),
            entropy_pairs: default_entropy_pairs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub a: f64,
    pub b: f64,
    pub n_cells: usize,
    pub s: f64,
    pub q: f64,
    pub h_spec: HSpec,
    pub f_spec: SourceSpec,
    pub mu_spec: MeasureSpec,
    #[serde(default)]
    pub schedule: MeasureSchedule,
    pub n_schedule: Vec<usize>,
    pub k_list: Vec<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_exclusion")]
    pub envelope_exclusion: usize,
    #[serde(default = "default_margin")]
    pub compact_margin: f64,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn grid(&self) -> Result<Grid> {
        build_grid(self.a, self.b, self.n_cells)
    }

    pub fn problem(&self) -> Result<ProblemSpec> {
        let p = ProblemSpec {
            q: self.q,
            h_spec: self.h_spec.clone(),
            f_spec: self.f_spec.clone(),
            mu_spec: self.mu_spec.clone(),
            s: self.s,
            grid: self.grid()?,
            schedule: self.schedule,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        self.problem()?;
        if self.n_schedule.is_empty() || self.n_schedule[0] == 0 || self.n_schedule.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Input("n_schedule must be a nonempty increasing list of positive levels".into()));
        }
        if self.k_list.len() < 3
            || self.k_list[0] <= 0.0
            || self.k_list.windows(2).any(|p| p[1] <= p[0])
            || self.k_list[self.k_list.len() - 1] < 10.0 * self.k_list[0]
        {
            return Err(Error::Input("k_list must be increasing, positive, and span a decade".into()));
        }
        if !(self.tolerances.solver > 0.0) || self.tolerances.newton_max == 0 {
            return Err(Error::Input("tolerances must be positive".into()));
        }
        if !(self.compact_margin > 0.0 && self.compact_margin < 0.5 * (self.b - self.a)) {
            return Err(Error::Input("compact_margin must lie in (0, (b - a)/2)".into()));
        }
        if self.envelope_exclusion == 0 || 2 * self.envelope_exclusion >= grid.len() {
            return Err(Error::Input("envelope_exclusion must be >= 1 and leave interior nodes".into()));
        }
        Ok(())
    }

    /// Output directory, overridden by the environment variable when set.
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }

    /// Hash of the canonical JSON form; orders sweep entries.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            max_newton: self.tolerances.newton_max,
            ..SolverOptions::with_tol(self.tolerances.solver)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub n: Level,
    pub residual: f64,
    pub newton_iters: usize,
    pub continuation_stages: usize,
    pub max_value: f64,
    pub min_value: f64,
}

impl LevelRecord {
    fn from(sol: &Solution) -> Self {
        Self {
            n: sol.level,
            residual: sol.residual_norm,
            newton_iters: sol.newton_iters,
            continuation_stages: sol.continuation_trace.len(),
            max_value: sol.values.max(),
            min_value: sol.values.min(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub message: String,
    pub trace: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub regime: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
    pub levels: Vec<LevelRecord>,
    /// Certificates computed from the stored solution alone.
    pub solution_certificates: Vec<Certificate>,
    /// Certificates that need additional solves.
    pub pipeline_certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norms: Option<NormReport>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    #[serde(skip)]
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    fn new(command: &str, config: &ExperimentConfig) -> Self {
        let regime = if config.s >= 0.5 {
            "outside supported regime (s >= 1/2)"
        } else {
            "inside supported regime"
        };
        let (klo, khi) = config.h_spec.thresholds();
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            config: config.clone(),
            regime: regime.into(),
            status: "ok".into(),
            lambda1: None,
            levels: vec![],
            solution_certificates: vec![],
            pipeline_certificates: vec![],
            norms: None,
            notes: vec![
                format!("h growth thresholds K_lower = {klo}, K_upper = {khi}"),
                "test functions: smooth nodal vectors supported away from the boundary".into(),
                "entropy left side uses the discrete pairing B(u, T_k(u - phi))".into(),
                "limit level 'inf' is the untruncated problem solved directly".into(),
            ],
            failure: None,
            timings: BTreeMap::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.solution_certificates.iter().chain(&self.pipeline_certificates).all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            EXIT_SOLVER
        } else if self.all_pass() {
            EXIT_OK
        } else {
            EXIT_CERTIFICATE
        }
    }

    fn finish(&mut self) {
        if self.failure.is_some() {
            self.status = "solver_failure".into();
        } else if !self.all_pass() {
            self.status = "certificate_failure".into();
        }
    }
}

struct Timer(BTreeMap<String, f64>, Instant);

impl Timer {
    fn new() -> Self {
        Self(BTreeMap::new(), Instant::now())
    }
    fn lap(&mut self, name: &str) {
        self.0.insert(name.into(), self.1.elapsed().as_secs_f64());
        self.1 = Instant::now();
    }
}

/// Certificates that depend only on (config, operator, u); shared by solve and verify.
pub fn solution_certificates(
    config: &ExperimentConfig,
    problem: &ProblemSpec,
    op: &OperatorMatrix,
    lambda1: f64,
    u: &DVector<f64>,
) -> Result<Vec<Certificate>> {
    let grid = &problem.grid;
    let positive = u.iter().all(|&x| x > 0.0);
    let mut certs = vec![Certificate::new("positivity", 0.0).with("min_value", u.min()).verdict(positive)];
    certs.push(analysis::weak_formulation_certificate(
        u,
        Level::Limit,
        problem,
        op,
        config.tolerances.solver,
        config.seed,
    )?);
    certs.push(analysis::l2_apriori_certificate(u, op, lambda1)?);
    certs.push(analysis::truncation_energy_certificate(u, op, &config.k_list)?);
    certs.push(match analysis::energy_growth_certificate(u, op, &config.k_list) {
        Ok(c) => c,
        Err(Error::Input(msg)) => Certificate::new("energy_growth", 4.0).note(&msg).verdict(false),
        Err(e) => return Err(e),
    });
    if config.s < 0.5 {
        certs.push(analysis::tail_exponent_certificate(u, grid, config.s, &config.k_list)?);
    }
    certs.push(analysis::boundary_envelope_certificate(u, grid, config.s, config.envelope_exclusion)?);
    if positive {
        certs.push(analysis::entropy_certificate(
            u,
            problem,
            op,
            config.tolerances.entropy_pairs,
            config.seed,
        )?);
    } else {
        certs.push(Certificate::new("entropy", 1e-6).note("u is not positive").verdict(false));
    }
    Ok(certs)
}

fn norm_table(u: &DVector<f64>, config: &ExperimentConfig, grid: &Grid) -> Result<NormReport> {
    let r = if config.s < 0.5 { 1.0 / (1.0 - 2.0 * config.s) } else { 1.0 };
    analysis::norm_report(u, grid, &[1.0, 2.0], &[(config.s, 2.0)], &[r])
}

fn write_solution_csv(path: &Path, grid: &Grid, u: &DVector<f64>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(["node", "x", "delta", "u"]).map_err(io_err)?;
    for i in 0..grid.len() {
        w.write_record(&[
            (i + 1).to_string(),
            format!("{:.17e}", grid.nodes[i]),
            format!("{:.17e}", grid.delta[i]),
            format!("{:.17e}", u[i]),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn io_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Input(format!("io: {e}"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io_err)?;
    text.push('\n');
    fs::write(path, text).map_err(io_err)
}

/// Full pipeline: schedule of approximants, limit solve, certificates, outputs.
pub fn run_solve(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let out = config.resolved_output_dir();
    fs::create_dir_all(&out).map_err(io_err)?;
    let report = solve_report(config);
    write_outputs(&out, &report)?;
    Ok(report.0)
}

fn write_outputs(out: &Path, (report, limit, seq): &(RunReport, Option<DVector<f64>>, Vec<(usize, f64, f64)>)) -> Result<()> {
    let grid = report.config.grid()?;
    if let Some(u) = limit {
        write_solution_csv(&out.join("solution.csv"), &grid, u)?;
    }
    let mut w = csv::Writer::from_path(out.join("sequence.csv")).map_err(io_err)?;
    w.write_record(["n", "max_gap_next", "residual"]).map_err(io_err)?;
    for (n, gap, res) in seq {
        w.write_record(&[n.to_string(), format!("{gap:.17e}"), format!("{res:.17e}")]).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    write_json(&out.join("report.json"), report)?;
    write_json(&out.join("timings.json"), &report.timings)
}

type SolveOutput = (RunReport, Option<DVector<f64>>, Vec<(usize, f64, f64)>);

fn solve_report(config: &ExperimentConfig) -> SolveOutput {
    let mut report = RunReport::new("solve", config);
    let mut timer = Timer::new();
    let mut seq = Vec::new();
    let result = (|| -> Result<DVector<f64>> {
        let problem = config.problem()?;
        let op = assemble_operator(&problem.grid, config.s)?;
        let spec = smallest_eigenvalue(&op, 1e-9)?;
        report.lambda1 = Some(spec.lambda1);
        timer.lap("assemble");
        let ladder = approximation_limit(&problem, &config.n_schedule, &op, config.tolerances.solver)?;
        for (j, sol) in ladder.solutions.iter().enumerate() {
            report.levels.push(LevelRecord::from(sol));
            let gap = ladder.gaps.get(j).copied().unwrap_or(f64::NAN);
            seq.push((ladder.levels[j], gap, sol.residual_norm));
        }
        timer.lap("approximants");
        let limit = solve_limit(&problem, &op, &config.solver_options())?;
        report.levels.push(LevelRecord::from(&limit));
        timer.lap("limit");

        report.solution_certificates = solution_certificates(config, &problem, &op, spec.lambda1, &limit.values)?;
        report.norms = Some(norm_table(&limit.values, config, &problem.grid)?);
        timer.lap("solution_certificates");

        let mut pipeline = Vec::new();
        let floor = 1e3 * config.tolerances.solver;
        let cauchy = ladder.gaps.windows(2).all(|p| p[1] <= p[0] || p[1] <= floor);
        let mut c = Certificate::new("cauchy_sequence", floor)
            .with("last_gap", ladder.gaps.last().copied().unwrap_or(0.0))
            .verdict(cauchy);
        if let Some(m) = ladder.monotone_min {
            c = c.with("monotone_min", m);
        }
        pipeline.push(c);
        pipeline.push(comparison_over_schedule(config, &problem, &op)?);
        let mut worst_bound: f64 = f64::MIN;
        let mut worst_rayleigh: f64 = f64::MIN;
        for (j, sol) in ladder.solutions.iter().enumerate() {
            let n = ladder.levels[j];
            let l2 = problem.grid.h * sol.values.norm_squared();
            worst_bound = worst_bound.max(l2 / phi_l2_bound(&problem, n, spec.lambda1)?);
            let c = analysis::l2_apriori_certificate(&sol.values, &op, spec.lambda1)?;
            worst_rayleigh = worst_rayleigh.max(c.get("lambda1_l2") - c.get("energy"));
        }
        pipeline.push(
            Certificate::new("approximant_l2_bounds", 1e-10)
                .with("max_l2_over_phi_bound", worst_bound)
                .with("max_rayleigh_excess", worst_rayleigh)
                .verdict(worst_bound <= 1.0 && worst_rayleigh <= 1e-10),
        );
        if config.s * config.q < 0.5 {
            let tests = analysis::seeded_tests(20, 6, config.seed);
            pipeline.push(analysis::hardy_sobolev_certificate(&tests, config.s, config.q, &problem.grid)?);
        }
        report.pipeline_certificates = pipeline;
        timer.lap("pipeline_certificates");
        Ok(limit.values)
    })();
    let limit = match result {
        Ok(u) => Some(u),
        Err(Error::Solver { message, trace }) => {
            report.failure = Some(Failure { message, trace });
            None
        }
        Err(e) => {
            report.failure = Some(Failure {
                message: e.to_string(),
                trace: vec![],
            });
            None
        }
    };
    report.finish();
    report.timings = timer.0;
    (report, limit, seq)
}

fn comparison_over_schedule(config: &ExperimentConfig, problem: &ProblemSpec, op: &OperatorMatrix) -> Result<Certificate> {
    let certs: Vec<Certificate> = config
        .n_schedule
        .par_iter()
        .map(|&n| comparison_certificate(problem, n, op, config.compact_margin, config.tolerances.solver))
        .collect::<Result<_>>()?;
    let min_of = |key: &str| certs.iter().map(|c| c.get(key)).fold(f64::INFINITY, f64::min);
    Ok(Certificate::new("comparison", 1e-9)
        .with("min_w_minus_v", min_of("min_w_minus_v"))
        .with("min_vnext_minus_v", min_of("min_vnext_minus_v"))
        .with("c_k", certs[0].get("c_k"))
        .with("margin", config.compact_margin)
        .verdict(certs.iter().all(|c| c.pass)))
}

#[derive(Debug, Deserialize)]
struct SolutionRow {
    #[allow(dead_code)]
    node: usize,
    x: f64,
    #[allow(dead_code)]
    delta: f64,
    u: f64,
}

pub fn read_solution_csv(path: &Path, grid: &Grid) -> Result<DVector<f64>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let rows: Vec<SolutionRow> = rd
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    if rows.len() != grid.len() {
        return Err(Error::Input(format!(
            "solution has {} rows, grid has {} nodes",
            rows.len(),
            grid.len()
        )));
    }
    for (row, x) in rows.iter().zip(&grid.nodes) {
        if (row.x - x).abs() > 1e-9 * (grid.b - grid.a) {
            return Err(Error::Input(format!("node at {} does not match grid node {x}", row.x)));
        }
    }
    Ok(DVector::from_iterator(rows.len(), rows.iter().map(|r| r.u)))
}

/// Certificates for a stored solution; no solving.
pub fn run_verify(config: &ExperimentConfig, solution_file: &Path) -> Result<RunReport> {
    config.validate()?;
    let problem = config.problem()?;
    let u = read_solution_csv(solution_file, &problem.grid)?;
    let mut timer = Timer::new();
    let mut report = RunReport::new("verify", config);
    let op = assemble_operator(&problem.grid, config.s)?;
    let spec = smallest_eigenvalue(&op, 1e-9)?;
    report.lambda1 = Some(spec.lambda1);
    report.solution_certificates = solution_certificates(config, &problem, &op, spec.lambda1, &u)?;
    report.norms = Some(norm_table(&u, config, &problem.grid)?);
    timer.lap("certificates");
    report.finish();
    report.timings = timer.0;
    let out = config.resolved_output_dir();
    fs::create_dir_all(&out).map_err(io_err)?;
    write_json(&out.join("verify_report.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub hash: String,
    pub n_cells: usize,
    pub h: f64,
    pub s: f64,
    pub q: f64,
    pub n_max: usize,
    pub u_max: f64,
    pub limit_residual: f64,
    pub getoor_dev_all: f64,
    pub getoor_dev_interior: f64,
    pub certificates_passed: usize,
    pub certificates_total: usize,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: String,
    pub rows: Vec<SweepRow>,
    /// Log-log rate of the interior Getoor deviation in h, per s with >= 2 meshes.
    pub getoor_rates: BTreeMap<String, f64>,
    pub exit_code: i32,
}

/// Fields that may differ across a sweep are n_cells, s, q, n_schedule (and output_dir).
fn sweep_key(c: &ExperimentConfig) -> ExperimentConfig {
    let mut k = c.clone();
    k.n_cells = 0;
    k.s = 0.0;
    k.q = 0.0;
    k.n_schedule.clear();
    k.output_dir = PathBuf::new();
    k
}

pub fn load_sweep(pattern: &str) -> Result<Vec<ExperimentConfig>> {
    let paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| Error::Input(format!("bad pattern {pattern}: {e}")))?
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Input(e.to_string()))?;
    if paths.is_empty() {
        return Err(Error::Input(format!("no configs match {pattern}")));
    }
    paths.iter().map(|p| ExperimentConfig::from_file(p)).collect()
}

pub fn run_sweep(configs: &[ExperimentConfig]) -> Result<SweepReport> {
    if configs.is_empty() {
        return Err(Error::Input("empty sweep".into()));
    }
    for c in configs {
        c.validate()?;
    }
    let key = sweep_key(&configs[0]);
    if configs.iter().any(|c| sweep_key(c) != key) {
        return Err(Error::Input("sweep configs differ outside the axes n_cells, s, q, n_schedule".into()));
    }
    let mut ordered: Vec<&ExperimentConfig> = configs.iter().collect();
    ordered.sort_by_key(|c| c.hash());
    let root = configs[0].resolved_output_dir().join("sweep");
    fs::create_dir_all(&root).map_err(io_err)?;
    let rows: Vec<SweepRow> = ordered
        .par_iter()
        .map(|c| -> Result<SweepRow> {
            let hash = c.hash();
            let out = root.join(&hash);
            fs::create_dir_all(&out).map_err(io_err)?;
            let full = solve_report(c);
            write_outputs(&out, &full)?;
            let (report, limit, _) = full;
            let grid = c.grid()?;
            let (dev_all, dev_in) = analysis::getoor_deviation(&grid, c.s, c.compact_margin)?;
            let certs: Vec<&Certificate> = report.solution_certificates.iter().chain(&report.pipeline_certificates).collect();
            Ok(SweepRow {
                hash,
                n_cells: c.n_cells,
                h: grid.h,
                s: c.s,
                q: c.q,
                n_max: *c.n_schedule.last().unwrap(),
                u_max: limit.as_ref().map_or(f64::NAN, |u| u.max()),
                limit_residual: report.levels.last().map_or(f64::NAN, |l| l.residual),
                getoor_dev_all: dev_all,
                getoor_dev_interior: dev_in,
                certificates_passed: certs.iter().filter(|c| c.pass).count(),
                certificates_total: certs.len(),
                status: report.status.clone(),
            })
        })
        .collect::<Result<_>>()?;

    let mut by_s: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &rows {
        by_s.entry(format!("{}", r.s)).or_default().push((r.h.ln(), r.getoor_dev_interior.ln()));
    }
    let getoor_rates = by_s
        .into_iter()
        .filter(|(_, pts)| {
            let mut hs: Vec<u64> = pts.iter().map(|p| p.0.to_bits()).collect();
            hs.sort();
            hs.dedup();
            hs.len() >= 2
        })
        .map(|(s, pts)| (s, analysis::fit_slope(&pts)))
        .collect();
    let exit_code = if rows.iter().any(|r| r.status == "solver_failure") {
        EXIT_SOLVER
    } else if rows.iter().all(|r| r.status == "ok") {
        EXIT_OK
    } else {
        EXIT_CERTIFICATE
    };
    let report = SweepReport {
        schema_version: SCHEMA_VERSION.into(),
        rows,
        getoor_rates,
        exit_code,
    };
    let mut w = csv::Writer::from_path(root.join("sweep.csv")).map_err(io_err)?;
    for r in &report.rows {
        w.serialize(r).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    write_json(&root.join("sweep_report.json"), &report)?;
    Ok(report)
}

/// Maps a library error to the exit-code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Solver { .. } => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}
