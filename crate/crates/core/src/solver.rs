//! Regularized and approximating problems: damped Newton with epsilon
//! continuation on L w = R(w), where R is a non-increasing reaction.

use nalgebra::{Cholesky, DVector};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::certificate::Certificate;
use crate::error::{check_len, Error, Result};
use crate::grid::{compact_subset, Grid};
use crate::nonlinearity::{measure_scheduled, source_truncated, HSpec, MeasureSchedule, MeasureSpec, SourceSpec};
use crate::operator::OperatorMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub q: f64,
    pub h_spec: HSpec,
    pub f_spec: SourceSpec,
    pub mu_spec: MeasureSpec,
    pub s: f64,
    pub grid: Grid,
    pub schedule: MeasureSchedule,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::Input(format!("q must lie in (0, 1), got {}", self.q)));
        }
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::Input(format!("s must lie in (0, 1), got {}", self.s)));
        }
        self.h_spec.validate()?;
        self.f_spec.validate()?;
        self.mu_spec.validate(&self.grid)
    }

    pub fn outside_supported_regime(&self) -> bool {
        self.s >= 0.5
    }
}

/// Regularization level; `Limit` is the untruncated problem solved directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Finite(usize),
    Limit,
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Level::Finite(n) => ser.serialize_u64(*n as u64),
            Level::Limit => ser.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    #[serde(skip)]
    pub values: DVector<f64>,
    pub level: Level,
    pub residual_norm: f64,
    pub newton_iters: usize,
    /// (epsilon, residual at the end of the stage)
    pub continuation_trace: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_newton: usize,
    /// Residual target for intermediate continuation stages.
    pub stage_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_newton: 200,
            stage_tol: 1e-8,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            stage_tol: tol.max(1e-8),
            ..Self::default()
        }
    }
}

/// Reaction values and derivatives at w for continuation parameter eps.
type Reaction<'a> = dyn Fn(&DVector<f64>, f64) -> (DVector<f64>, DVector<f64>) + Sync + 'a;

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn torsion(op: &OperatorMatrix) -> DVector<f64> {
    op.cholesky().solve(&DVector::from_element(op.dim(), 1.0))
}

fn residual(op: &OperatorMatrix, react: &Reaction, w: &DVector<f64>, eps: f64) -> DVector<f64> {
    &op.matrix * w - react(w, eps).0
}

fn newton_stage(
    op: &OperatorMatrix,
    react: &Reaction,
    w: &mut DVector<f64>,
    eps: f64,
    tol: f64,
    max_iter: usize,
    trace: &[(f64, f64)],
) -> Result<(f64, usize)> {
    let mut r = residual(op, react, w, eps);
    let mut rn = max_abs(&r);
    let mut iters = 0;
    while rn > tol {
        if iters >= max_iter {
            return Err(stagnation(format!("no convergence in {max_iter} Newton steps at eps = {eps:e} (residual {rn:e})"), trace, eps, rn));
        }
        iters += 1;
        let (_, slope) = react(w, eps);
        let mut jac = op.matrix.clone();
        for i in 0..w.len() {
            jac[(i, i)] -= slope[i];
        }
        let step = Cholesky::new(jac)
            .ok_or_else(|| stagnation("Jacobian lost positive definiteness".into(), trace, eps, rn))?
            .solve(&(-&r));
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            let trial = &*w + t * &step;
            if trial.iter().all(|&x| x > 0.0) {
                let rt = residual(op, react, &trial, eps);
                let rtn = max_abs(&rt);
                if rtn < rn {
                    *w = trial;
                    r = rt;
                    rn = rtn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(stagnation(format!("no residual decrease across 50 damped steps at eps = {eps:e}"), trace, eps, rn));
        }
    }
    Ok((rn, iters))
}

fn stagnation(message: String, trace: &[(f64, f64)], eps: f64, rn: f64) -> Error {
    let mut trace = trace.to_vec();
    trace.push((eps, rn));
    Error::Solver { message, trace }
}

/// Epsilon continuation from eps = 1 by halving down to 1e-12 max(w), then eps = 0.
fn continuation_solve(
    op: &OperatorMatrix,
    react: &Reaction,
    mut w: DVector<f64>,
    level: Level,
    opts: &SolverOptions,
    continuation: bool,
) -> Result<Solution> {
    let mut trace = Vec::new();
    let mut iters = 0;
    if continuation {
        let mut eps = 1.0;
        while eps > 1e-12 * w.max() {
            let (rn, k) = newton_stage(op, react, &mut w, eps, opts.stage_tol, opts.max_newton, &trace)?;
            iters += k;
            trace.push((eps, rn));
            eps *= 0.5;
        }
    }
    let (rn, k) = newton_stage(op, react, &mut w, 0.0, opts.tol, opts.max_newton, &trace)?;
    iters += k;
    trace.push((0.0, rn));
    Ok(Solution {
        values: w,
        level,
        residual_norm: rn,
        newton_iters: iters,
        continuation_trace: trace,
    })
}

fn check_data(g: &DVector<f64>) -> Result<()> {
    if g.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::Input("right-hand side must be finite and nonnegative".into()));
    }
    Ok(())
}

/// w > 0 with L w = w^{-q} + g.
pub fn solve_regularized(op: &OperatorMatrix, g: &DVector<f64>, q: f64, tol: f64) -> Result<Solution> {
    solve_regularized_weighted(op, g, q, 1.0, &SolverOptions::with_tol(tol))
}

/// L w = weight * w^{-q} + g; weight 0 turns the singular term off.
pub fn solve_regularized_weighted(
    op: &OperatorMatrix,
    g: &DVector<f64>,
    q: f64,
    weight: f64,
    opts: &SolverOptions,
) -> Result<Solution> {
    check_len(op.dim(), g.len())?;
    check_data(g)?;
    let react = move |w: &DVector<f64>, eps: f64| {
        let v = DVector::from_iterator(w.len(), w.iter().zip(g.iter()).map(|(x, gi)| weight * (x + eps).powf(-q) + gi));
        let d = w.map(|x| -weight * q * (x + eps).powf(-q - 1.0));
        (v, d)
    };
    continuation_solve(op, &react, torsion(op), Level::Finite(0), opts, weight != 0.0)
}

/// f_n h_n(|v| + 1/n) + mu_n.
pub fn frozen_data(problem: &ProblemSpec, n: usize, v: &DVector<f64>) -> Result<DVector<f64>> {
    let fnv = source_truncated(n, &problem.f_spec, &problem.grid);
    let mu = measure_scheduled(&problem.mu_spec, problem.schedule, n, &problem.grid)?;
    let shift = 1.0 / n as f64;
    let mut g = DVector::zeros(v.len());
    for i in 0..v.len() {
        let (h, _) = problem.h_spec.truncated_with_slope(n as f64, v[i].abs() + shift)?;
        g[i] = fnv[i] * h + mu[i];
    }
    Ok(g)
}

/// Phi(v): the solution of L w = w^{-q} + f_n h_n(|v| + 1/n) + mu_n.
pub fn fixed_point_map(
    problem: &ProblemSpec,
    n: usize,
    v: &DVector<f64>,
    op: &OperatorMatrix,
    tol: f64,
) -> Result<Solution> {
    check_len(op.dim(), v.len())?;
    let g = frozen_data(problem, n, v)?;
    let mut sol = solve_regularized(op, &g, problem.q, tol)?;
    sol.level = Level::Finite(n);
    Ok(sol)
}

/// Upper bound for h sum w^2 over all w = Phi(v) at level n, from
/// lambda_1 |w|^2 <= B(w, w) = (w^{1-q} + g, w) and Holder on the first term.
pub fn phi_l2_bound(problem: &ProblemSpec, n: usize, lambda1: f64) -> Result<f64> {
    let grid = &problem.grid;
    let fmax = source_truncated(n, &problem.f_spec, grid).max();
    let mumax = measure_scheduled(&problem.mu_spec, problem.schedule, n, grid)?.max();
    let hmax = problem.h_spec.truncated_with_slope(n as f64, 1.0 / n as f64)?.0;
    let gmax = fmax * hmax + mumax;
    let measure = grid.h * grid.len() as f64;
    let a = measure.powf(0.5 * (1.0 + problem.q));
    let b = gmax * measure.sqrt();
    let y = (2.0 * a / lambda1).powf(1.0 / (1.0 + problem.q)).max(2.0 * b / lambda1);
    Ok(y * y)
}

fn approximant_reaction<'a>(
    problem: &'a ProblemSpec,
    n: usize,
) -> Result<impl Fn(&DVector<f64>, f64) -> (DVector<f64>, DVector<f64>) + Sync + 'a> {
    let fnv = source_truncated(n, &problem.f_spec, &problem.grid);
    let mu = measure_scheduled(&problem.mu_spec, problem.schedule, n, &problem.grid)?;
    let q = problem.q;
    let cap = n as f64;
    let shift = 1.0 / cap;
    Ok(move |w: &DVector<f64>, eps: f64| {
        let mut v = DVector::zeros(w.len());
        let mut d = DVector::zeros(w.len());
        for i in 0..w.len() {
            let (h, dh) = problem
                .h_spec
                .truncated_with_slope(cap, w[i] + shift)
                .expect("iterates stay positive");
            v[i] = (w[i] + eps).powf(-q) + fnv[i] * h + mu[i];
            d[i] = -q * (w[i] + eps).powf(-q - 1.0) + fnv[i] * dh;
        }
        (v, d)
    })
}

/// w_n solving L w = w^{-q} + f_n h_n(w + 1/n) + mu_n by Newton on the full residual.
pub fn solve_approximant(problem: &ProblemSpec, n: usize, op: &OperatorMatrix, tol: f64) -> Result<Solution> {
    solve_approximant_with(problem, n, op, &SolverOptions::with_tol(tol))
}

pub fn solve_approximant_with(
    problem: &ProblemSpec,
    n: usize,
    op: &OperatorMatrix,
    opts: &SolverOptions,
) -> Result<Solution> {
    if n == 0 {
        return Err(Error::Input("level n must be >= 1".into()));
    }
    problem.validate()?;
    let react = approximant_reaction(problem, n)?;
    continuation_solve(op, &react, torsion(op), Level::Finite(n), opts, true)
}

/// The untruncated problem L u = u^{-q} + f h(u) + mu solved directly.
///
/// The continuation shift enters h as well, since h(0+) is infinite.
pub fn solve_limit(problem: &ProblemSpec, op: &OperatorMatrix, opts: &SolverOptions) -> Result<Solution> {
    problem.validate()?;
    let f = problem.f_spec.values(&problem.grid);
    let mu = problem.mu_spec.nodal(&problem.grid)?;
    let q = problem.q;
    let react = |w: &DVector<f64>, eps: f64| {
        let mut v = DVector::zeros(w.len());
        let mut d = DVector::zeros(w.len());
        for i in 0..w.len() {
            let (h, dh) = problem.h_spec.eval_with_slope(w[i] + eps).expect("iterates stay positive");
            v[i] = (w[i] + eps).powf(-q) + f[i] * h + mu[i];
            d[i] = -q * (w[i] + eps).powf(-q - 1.0) + f[i] * dh;
        }
        (v, d)
    };
    continuation_solve(op, &react, torsion(op), Level::Limit, opts, true)
}

/// Picard iteration v <- Phi(v) from v = 0, the oracle for `solve_approximant`.
///
/// Returns the fixed point and the successive gaps max|Phi(v) - v|.
pub fn picard_over_phi(
    problem: &ProblemSpec,
    n: usize,
    op: &OperatorMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(Solution, Vec<f64>)> {
    let mut v = DVector::zeros(op.dim());
    let mut gaps = Vec::new();
    for _ in 0..max_iter {
        let w = fixed_point_map(problem, n, &v, op, 1e-13)?;
        let gap = max_abs(&(&w.values - &v));
        gaps.push(gap);
        v = w.values.clone();
        if gap <= tol {
            return Ok((Solution { values: v, ..w }, gaps));
        }
    }
    Err(Error::Solver {
        message: format!("Picard over Phi did not reach {tol} in {max_iter} steps"),
        trace: vec![],
    })
}

/// v solving L v = f_n h_n(v + 1/n); zero when f = 0.
pub fn solve_lower_barrier(problem: &ProblemSpec, n: usize, op: &OperatorMatrix, tol: f64) -> Result<Solution> {
    if problem.f_spec.is_zero() {
        return Ok(Solution {
            values: DVector::zeros(op.dim()),
            level: Level::Finite(n),
            residual_norm: 0.0,
            newton_iters: 0,
            continuation_trace: vec![],
        });
    }
    let fnv = source_truncated(n, &problem.f_spec, &problem.grid);
    let cap = n as f64;
    let react = |w: &DVector<f64>, _eps: f64| {
        let mut v = DVector::zeros(w.len());
        let mut d = DVector::zeros(w.len());
        for i in 0..w.len() {
            let (h, dh) = problem.h_spec.truncated_with_slope(cap, w[i] + 1.0 / cap).expect("positive iterate");
            v[i] = fnv[i] * h;
            d[i] = fnv[i] * dh;
        }
        (v, d)
    };
    continuation_solve(op, &react, torsion(op), Level::Finite(n), &SolverOptions::with_tol(tol), false)
}

/// w_n >= v_n >= v_1 >= C_K > 0 on the compact subset.
pub fn comparison_certificate(
    problem: &ProblemSpec,
    n: usize,
    op: &OperatorMatrix,
    margin: f64,
    tol: f64,
) -> Result<Certificate> {
    let w = solve_approximant(problem, n, op, tol)?;
    let vn = solve_lower_barrier(problem, n, op, tol)?;
    let vnext = solve_lower_barrier(problem, n + 1, op, tol)?;
    let v1 = solve_lower_barrier(problem, 1, op, tol)?;
    let subset = compact_subset(&problem.grid, margin)?;
    let w_minus_v = (&w.values - &vn.values).min();
    let v_step = (&vnext.values - &vn.values).min();
    let ck = subset.indices.iter().map(|&i| v1.values[i]).fold(f64::INFINITY, f64::min);
    let floor = -1e-9;
    let ck_ok = if problem.f_spec.is_zero() { ck >= floor } else { ck > 0.0 };
    let mut cert = Certificate::new("comparison", 1e-9)
        .with("n", n as f64)
        .with("margin", margin)
        .with("min_w_minus_v", w_minus_v)
        .with("min_vnext_minus_v", v_step)
        .with("c_k", ck)
        .with("min_w", w.values.min())
        .verdict(w_minus_v >= floor && v_step >= floor && ck_ok && w.values.min() > 0.0);
    if problem.f_spec.is_zero() {
        cert = cert.note("f = 0: lower barrier is identically zero");
    }
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub levels: Vec<usize>,
    /// max |w_next - w_n| between consecutive schedule entries
    pub gaps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// min(w_next - w_n), reported when the monotone construction applies
    pub monotone_min: Option<f64>,
    #[serde(skip)]
    pub solutions: Vec<Solution>,
}

impl LimitReport {
    pub fn last(&self) -> &Solution {
        self.solutions.last().expect("nonempty schedule")
    }
}

/// Solves every level of the schedule (in parallel) and reports the Cauchy gaps.
pub fn approximation_limit(
    problem: &ProblemSpec,
    n_schedule: &[usize],
    op: &OperatorMatrix,
    tol: f64,
) -> Result<LimitReport> {
    if n_schedule.is_empty() || n_schedule.windows(2).any(|p| p[1] <= p[0]) || n_schedule[0] == 0 {
        return Err(Error::Input("n_schedule must be a nonempty increasing list of positive levels".into()));
    }
    let solutions: Vec<Solution> = n_schedule
        .par_iter()
        .map(|&n| solve_approximant(problem, n, op, tol))
        .collect::<Result<_>>()?;
    let gaps: Vec<f64> = solutions
        .windows(2)
        .map(|p| max_abs(&(&p[1].values - &p[0].values)))
        .collect();
    let monotone = problem.mu_spec.is_density() && problem.schedule == MeasureSchedule::Truncation;
    let monotone_min = monotone.then(|| {
        solutions
            .windows(2)
            .map(|p| (&p[1].values - &p[0].values).min())
            .fold(f64::INFINITY, f64::min)
    });
    if let Some(m) = monotone_min {
        if m < -1e-9 {
            return Err(Error::Solver {
                message: format!("monotone construction violated: min(w_next - w_n) = {m:e}"),
                trace: vec![],
            });
        }
    }
    let floor = 1e3 * tol;
    if gaps.len() >= 3 {
        let tail = &gaps[gaps.len() - 3..];
        if tail.windows(2).any(|p| p[1] > p[0] && p[1] > floor) {
            return Err(Error::Solver {
                message: format!("approximations are not Cauchy: last gaps {tail:?}"),
                trace: vec![],
            });
        }
    }
    Ok(LimitReport {
        levels: n_schedule.to_vec(),
        gaps,
        residuals: solutions.iter().map(|s| s.residual_norm).collect(),
        monotone_min,
        solutions,
    })
}
