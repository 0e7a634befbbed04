//! Norms of nodal functions and certificates for the a-priori structure.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub use crate::certificate::Certificate;
use crate::error::{check_len, Error, Result};
use crate::grid::{compact_subset, Grid};
use crate::nonlinearity::{measure_scheduled, source_truncated, truncate_vec};
use crate::operator::{assemble_operator, bilinear_form, OperatorMatrix};
use crate::quadrature::GaussLegendre;
use crate::solver::{Level, ProblemSpec};

pub fn lp_norm(u: &DVector<f64>, p: f64, grid: &Grid) -> Result<f64> {
    check_len(grid.len(), u.len())?;
    if !(p >= 1.0) {
        return Err(Error::Input(format!("p must be >= 1, got {p}")));
    }
    Ok((grid.h * u.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p))
}

/// Gagliardo seminorm over D_Omega of the piecewise-linear interpolant with
/// zero boundary values, kernel |x - y|^{-1 - s1 p}.
pub fn gagliardo_seminorm(u: &DVector<f64>, s1: f64, p: f64, grid: &Grid) -> Result<f64> {
    check_len(grid.len(), u.len())?;
    if !(s1 > 0.0 && s1 < 1.0) || !(p >= 1.0) {
        return Err(Error::Input(format!("need s1 in (0, 1) and p >= 1, got s1 = {s1}, p = {p}")));
    }
    let n = grid.n_cells;
    let h = grid.h;
    let sig = s1 * p;
    let mut nodal = vec![0.0; n + 1];
    nodal[1..n].copy_from_slice(u.as_slice());
    let slope: Vec<f64> = (0..n).map(|k| (nodal[k + 1] - nodal[k]) / h).collect();

    let gl8 = GaussLegendre::new(8);
    let xs: Vec<f64> = gl8.nodes.iter().map(|x| 0.5 * (x + 1.0) * h).collect();
    let ws: Vec<f64> = gl8.weights.iter().map(|w| 0.5 * w * h).collect();
    let vals: Vec<[f64; 8]> = (0..n)
        .map(|k| std::array::from_fn(|j| nodal[k] + slope[k] * xs[j]))
        .collect();
    // kernel between GL points of cells d apart, d >= 2
    let kern: Vec<[[f64; 8]; 8]> = (0..n)
        .map(|d| {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    if d < 2 {
                        0.0
                    } else {
                        (d as f64 * h + xs[j] - xs[i]).powf(-1.0 - sig)
                    }
                })
            })
        })
        .collect();
    let gl16 = GaussLegendre::new(16);
    let dd = p - 1.0 - sig;
    let adjacent = h.powf(dd + 2.0) / (dd + 2.0);
    let same = 2.0 * h.powf(p + 1.0 - sig) / ((p - sig) * (p + 1.0 - sig));
    let edge = h.powf(p - sig + 1.0) / (sig * (p - sig + 1.0));

    let pow = |x: f64| if p == 2.0 { x * x } else { x.abs().powf(p) };
    let per_cell: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut acc = slope[k].abs().powf(p) * same;
            if k + 1 < n {
                let (gk, gl) = (slope[k], slope[k + 1]);
                acc += 2.0 * adjacent * (edge_integral(&gl16, gk, gl, p, sig) + edge_integral(&gl16, gl, gk, p, sig));
            }
            for l in (k + 2)..n {
                let kk = &kern[l - k];
                let mut pair = 0.0;
                for i in 0..8 {
                    let mut row = 0.0;
                    for j in 0..8 {
                        row += ws[j] * pow(vals[k][i] - vals[l][j]) * kk[i][j];
                    }
                    pair += ws[i] * row;
                }
                acc += 2.0 * pair;
            }
            // exterior, counted twice by symmetry of D_Omega
            let left = if k == 0 {
                slope[0].abs().powf(p) * edge
            } else {
                (0..8)
                    .map(|j| ws[j] * vals[k][j].abs().powf(p) * (k as f64 * h + xs[j]).powf(-sig) / sig)
                    .sum()
            };
            let right = if k == n - 1 {
                slope[k].abs().powf(p) * edge
            } else {
                (0..8)
                    .map(|j| ws[j] * vals[k][j].abs().powf(p) * ((n - k) as f64 * h - xs[j]).powf(-sig) / sig)
                    .sum()
            };
            acc + 2.0 * (left + right)
        })
        .collect();
    Ok(per_cell.iter().sum::<f64>().powf(1.0 / p))
}

/// \int_0^1 |a + b t|^p (1 + t)^{-1 - sig} dt, split at a sign change.
fn edge_integral(gl: &GaussLegendre, a: f64, b: f64, p: f64, sig: f64) -> f64 {
    let f = |t: f64| (a + b * t).abs().powf(p) * (1.0 + t).powf(-1.0 - sig);
    if b != 0.0 {
        let root = -a / b;
        if root > 0.0 && root < 1.0 {
            return gl.graded_right(f, 0.0, root, 20) + gl.graded_left(f, root, 1.0, 20);
        }
    }
    gl.integrate(f, 0.0, 1.0)
}

/// Measure of {|u| >= t}.
pub fn distribution_function(u: &DVector<f64>, t: f64, grid: &Grid) -> Result<f64> {
    check_len(grid.len(), u.len())?;
    if !(t > 0.0) {
        return Err(Error::Input(format!("threshold must be > 0, got {t}")));
    }
    Ok(grid.h * u.iter().filter(|x| x.abs() >= t).count() as f64)
}

/// sup_t t * omega(|u| >= t)^{1/r}, attained at a nodal value.
pub fn marcinkiewicz_norm(u: &DVector<f64>, r: f64, grid: &Grid) -> Result<f64> {
    check_len(grid.len(), u.len())?;
    if !(r > 0.0) {
        return Err(Error::Input(format!("r must be > 0, got {r}")));
    }
    let mut levels: Vec<f64> = u.iter().map(|x| x.abs()).filter(|&x| x > 0.0).collect();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // after sorting descending, the j-th level has at least j + 1 nodes above it
    let mut best: f64 = 0.0;
    for (j, &t) in levels.iter().enumerate() {
        let mut count = j + 1;
        while count < levels.len() && levels[count] >= t {
            count += 1;
        }
        best = best.max(t * (grid.h * count as f64).powf(1.0 / r));
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct NormReport {
    pub lp: BTreeMap<String, f64>,
    pub gagliardo: BTreeMap<String, f64>,
    pub marcinkiewicz: BTreeMap<String, f64>,
}

pub fn norm_report(
    u: &DVector<f64>,
    grid: &Grid,
    ps: &[f64],
    gagliardo: &[(f64, f64)],
    rs: &[f64],
) -> Result<NormReport> {
    let mut rep = NormReport::default();
    for &p in ps {
        rep.lp.insert(format!("{p}"), lp_norm(u, p, grid)?);
    }
    for &(s1, p) in gagliardo {
        rep.gagliardo.insert(format!("s={s1},p={p}"), gagliardo_seminorm(u, s1, p, grid)?);
    }
    for &r in rs {
        rep.marcinkiewicz.insert(format!("{r}"), marcinkiewicz_norm(u, r, grid)?);
    }
    Ok(rep)
}

fn check_levels(k_list: &[f64]) -> Result<()> {
    if k_list.len() < 3 || k_list.windows(2).any(|p| p[1] <= p[0]) || k_list[0] <= 0.0 {
        return Err(Error::Input("k_list must hold at least three increasing positive levels".into()));
    }
    Ok(())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// e(k) = B(T_k w, T_k w) grows at most linearly: max e(k)/k <= 4 median of
/// the ratios over the three smallest levels.
pub fn energy_growth_certificate(w: &DVector<f64>, op: &OperatorMatrix, k_list: &[f64]) -> Result<Certificate> {
    check_levels(k_list)?;
    if k_list[k_list.len() - 1] < 10.0 * k_list[0] {
        return Err(Error::Input("k_list must span at least one decade".into()));
    }
    if !(w.max() > 0.0) {
        return Err(Error::Input("degenerate w: no positive values to truncate".into()));
    }
    let mut cert = Certificate::new("energy_growth", 4.0);
    let mut ratios = Vec::new();
    for &k in k_list {
        let t = truncate_vec(k, w)?;
        let e = bilinear_form(op, &t, &t)?;
        ratios.push(e / k);
        cert = cert.with(&format!("e({k})"), e);
    }
    let c_fit = 4.0 * median(ratios[..3].to_vec());
    let max_ratio = ratios.iter().cloned().fold(f64::MIN, f64::max);
    Ok(cert
        .with("c_fit", c_fit)
        .with("max_ratio", max_ratio)
        .verdict(max_ratio <= c_fit))
}

/// B(T_k w, T_k w) <= B(w, T_k w) + 1e-9 for each k.
pub fn truncation_energy_certificate(w: &DVector<f64>, op: &OperatorMatrix, k_list: &[f64]) -> Result<Certificate> {
    let mut worst = f64::MIN;
    for &k in k_list {
        let t = truncate_vec(k, w)?;
        worst = worst.max(bilinear_form(op, &t, &t)? - bilinear_form(op, w, &t)?);
    }
    Ok(Certificate::new("truncation_energy", 1e-9)
        .with("max_excess", worst)
        .verdict(worst <= 1e-9))
}

/// lambda_1 h sum w^2 <= B(w, w).
pub fn l2_apriori_certificate(w: &DVector<f64>, op: &OperatorMatrix, lambda1: f64) -> Result<Certificate> {
    let lhs = lambda1 * op.grid.h * w.norm_squared();
    let rhs = bilinear_form(op, w, w)?;
    Ok(Certificate::new("l2_apriori", 1e-10)
        .with("lambda1_l2", lhs)
        .with("energy", rhs)
        .verdict(lhs <= rhs + 1e-10))
}

/// Log-log slope of the distribution function against the exponent N/(N - 2s).
pub fn tail_exponent_certificate(w: &DVector<f64>, grid: &Grid, s: f64, k_list: &[f64]) -> Result<Certificate> {
    if !(s > 0.0 && s < 0.5) {
        return Err(Error::Regime(format!("tail exponent needs s < 1/2, got {s}")));
    }
    check_levels(k_list)?;
    let target = 1.0 / (1.0 - 2.0 * s);
    let slack = 0.3;
    let mut pts = Vec::new();
    let mut vanished = false;
    for &k in k_list {
        let d = distribution_function(w, k, grid)?;
        if d > 0.0 {
            pts.push((k.ln(), d.ln()));
        } else {
            vanished = true;
        }
    }
    let mut cert = Certificate::new("tail_exponent", slack)
        .with("target_exponent", target)
        .with("critical_exponent_2s_star", 2.0 / (1.0 - 2.0 * s))
        .with("vanished", if vanished { 1.0 } else { 0.0 });
    let mut slope_ok = false;
    if pts.len() >= 2 {
        let slope = fit_slope(&pts);
        slope_ok = slope <= -target + slack;
        cert = cert.with("slope", slope);
    }
    Ok(cert.verdict(vanished || slope_ok))
}

/// Least-squares slope through (x, y) points.
pub fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub const ENVELOPE_HEADROOM: f64 = 50.0;

/// k1 = min, k2 = max of u / delta^s away from `exclusion` nodes at each end.
pub fn boundary_envelope_certificate(u: &DVector<f64>, grid: &Grid, s: f64, exclusion: usize) -> Result<Certificate> {
    check_len(grid.len(), u.len())?;
    let (k1, k2) = envelope(u, grid, s, exclusion)?;
    Ok(Certificate::new("boundary_envelope", ENVELOPE_HEADROOM)
        .with("k1", k1)
        .with("k2", k2)
        .with("ratio", k2 / k1)
        .with("exclusion", exclusion as f64)
        .verdict(k1 > 0.0 && k2 / k1 <= ENVELOPE_HEADROOM))
}

fn envelope(u: &DVector<f64>, grid: &Grid, s: f64, exclusion: usize) -> Result<(f64, f64)> {
    if exclusion == 0 || 2 * exclusion >= grid.len() {
        return Err(Error::Input(format!("exclusion {exclusion} leaves no nodes")));
    }
    let mut k1 = f64::INFINITY;
    let mut k2 = f64::NEG_INFINITY;
    for i in exclusion..grid.len() - exclusion {
        let r = u[i] / grid.delta[i].powf(s);
        k1 = k1.min(r);
        k2 = k2.max(r);
    }
    Ok((k1, k2))
}

/// Envelope on a refinement pair: both meshes pass and k2/k1 does not grow.
pub fn boundary_envelope_refinement(
    coarse: (&DVector<f64>, &Grid),
    fine: (&DVector<f64>, &Grid),
    s: f64,
    exclusion: usize,
) -> Result<Certificate> {
    let c = boundary_envelope_certificate(coarse.0, coarse.1, s, exclusion)?;
    let f = boundary_envelope_certificate(fine.0, fine.1, s, exclusion)?;
    let (rc, rf) = (c.get("ratio"), f.get("ratio"));
    Ok(Certificate::new("boundary_envelope_refinement", ENVELOPE_HEADROOM)
        .with("ratio_coarse", rc)
        .with("ratio_fine", rf)
        .with("k1_fine", f.get("k1"))
        .with("k2_fine", f.get("k2"))
        .verdict(c.pass && f.pass && rf <= rc * (1.0 + 1e-12)))
}

/// B(u, T_k(u - phi)) - [(u^{-q} + f h(u), T_k(u - phi)) + <mu, T_k(u - phi)>].
pub fn entropy_residual(
    u: &DVector<f64>,
    phi: &DVector<f64>,
    k: f64,
    problem: &ProblemSpec,
    op: &OperatorMatrix,
) -> Result<f64> {
    check_len(op.dim(), u.len())?;
    check_len(op.dim(), phi.len())?;
    let t = truncate_vec(k, &(u - phi))?;
    let lhs = bilinear_form(op, u, &t)?;
    let f = problem.f_spec.values(&problem.grid);
    let mut rhs = 0.0;
    for i in 0..u.len() {
        let hu = crate::nonlinearity::h_eval(&problem.h_spec, u[i])?;
        rhs += (u[i].powf(-problem.q) + f[i] * hu) * t[i];
    }
    rhs = rhs * problem.grid.h + problem.mu_spec.pair(&problem.grid, &t)?;
    Ok(lhs - rhs)
}

/// Entropy inequality over seeded (phi, k) pairs with bound 1e-6 (1 + |phi|_inf).
pub fn entropy_certificate(
    u: &DVector<f64>,
    problem: &ProblemSpec,
    op: &OperatorMatrix,
    pairs: usize,
    seed: u64,
) -> Result<Certificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let umax = u.max();
    let mut worst = f64::MIN;
    let mut worst_raw = f64::MIN;
    for _ in 0..pairs {
        let amp = rng.gen_range(0.0..2.0 * umax);
        let test = SmoothTest::random(&mut rng, 6);
        let phi = test.sample(&problem.grid) * amp;
        let k = rng.gen_range(0.05 * umax..2.0 * umax);
        let r = entropy_residual(u, &phi, k, problem, op)?;
        let pnorm = phi.amax();
        worst = worst.max(r / (1.0 + pnorm));
        worst_raw = worst_raw.max(r);
    }
    Ok(Certificate::new("entropy", 1e-6)
        .with("pairs", pairs as f64)
        .with("max_scaled_residual", worst)
        .with("max_residual", worst_raw)
        .note("left side evaluated as the discrete pairing B(u, T_k(u - phi))")
        .verdict(worst <= 1e-6))
}

/// Right-hand side of the equation at a level: truncated data for finite n,
/// untruncated data for the limit.
pub fn level_rhs(values: &DVector<f64>, level: Level, problem: &ProblemSpec) -> Result<DVector<f64>> {
    let grid = &problem.grid;
    let mut rhs = DVector::zeros(values.len());
    match level {
        Level::Finite(n) => {
            let f = source_truncated(n, &problem.f_spec, grid);
            let mu = measure_scheduled(&problem.mu_spec, problem.schedule, n, grid)?;
            for i in 0..values.len() {
                let h = crate::nonlinearity::h_truncated(n, &problem.h_spec, values[i] + 1.0 / n as f64)?;
                rhs[i] = values[i].powf(-problem.q) + f[i] * h + mu[i];
            }
        }
        Level::Limit => {
            let f = problem.f_spec.values(grid);
            let mu = problem.mu_spec.nodal(grid)?;
            for i in 0..values.len() {
                let h = crate::nonlinearity::h_eval(&problem.h_spec, values[i])?;
                rhs[i] = values[i].powf(-problem.q) + f[i] * h + mu[i];
            }
        }
    }
    Ok(rhs)
}

/// |B(w, phi) - (rhs, phi)| <= tol |Omega| |phi|_inf for random phi vanishing
/// within `margin` of the boundary.
pub fn weak_formulation_certificate(
    values: &DVector<f64>,
    level: Level,
    problem: &ProblemSpec,
    op: &OperatorMatrix,
    tol: f64,
    seed: u64,
) -> Result<Certificate> {
    if values.iter().any(|&x| !(x > 0.0)) {
        return Ok(Certificate::new("weak_formulation", tol).with("min_value", values.min()).verdict(false));
    }
    let grid = &problem.grid;
    let rhs = level_rhs(values, level, problem)?;
    let margin = 0.1 * (grid.b - grid.a);
    let inside = compact_subset(grid, margin)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = tol * (grid.b - grid.a);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let test = SmoothTest::random(&mut rng, 8);
        let full = test.sample(grid);
        let mut phi = DVector::zeros(grid.len());
        for &i in &inside.indices {
            phi[i] = full[i];
        }
        let r = (bilinear_form(op, values, &phi)? - grid.h * rhs.dot(&phi)).abs();
        worst = worst.max(r / phi.amax().max(f64::MIN_POSITIVE));
    }
    Ok(Certificate::new("weak_formulation", bound)
        .with("max_scaled_residual", worst)
        .with("margin", margin)
        .note("test functions: random smooth vectors supported at distance >= margin from the boundary")
        .verdict(worst <= bound))
}

/// B(T_k(u - v), T_k(u - v)).
pub fn uniqueness_gap(u: &DVector<f64>, v: &DVector<f64>, k: f64, op: &OperatorMatrix) -> Result<f64> {
    check_len(op.dim(), u.len())?;
    check_len(op.dim(), v.len())?;
    let d = truncate_vec(k, &(u - v))?;
    bilinear_form(op, &d, &d)
}

/// Smooth function sum_k c_k sin((k+1) pi (x - a)/(b - a)) times a quadratic
/// vanishing at both endpoints; mesh independent, so it can be sampled on a
/// refinement pair.
#[derive(Debug, Clone)]
pub struct SmoothTest {
    pub coeffs: Vec<f64>,
}

impl SmoothTest {
    pub fn random<R: Rng>(rng: &mut R, modes: usize) -> Self {
        Self {
            coeffs: (0..modes).map(|k| rng.gen_range(-1.0..1.0) / (k + 1) as f64).collect(),
        }
    }

    pub fn eval(&self, x: f64, grid: &Grid) -> f64 {
        let len = grid.b - grid.a;
        let z = (x - grid.a) / len;
        let bump = 4.0 * z * (1.0 - z);
        bump * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * ((k + 1) as f64 * PI * z).sin())
            .sum::<f64>()
    }

    pub fn sample(&self, grid: &Grid) -> DVector<f64> {
        DVector::from_iterator(grid.len(), grid.nodes.iter().map(|&x| self.eval(x, grid)))
    }

    /// Sample with the boundary-adjacent nodes set to zero.
    pub fn sample_interior(&self, grid: &Grid) -> DVector<f64> {
        let mut v = self.sample(grid);
        let m = v.len();
        v[0] = 0.0;
        v[m - 1] = 0.0;
        v
    }
}

pub fn seeded_tests(count: usize, modes: usize, seed: u64) -> Vec<SmoothTest> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| SmoothTest::random(&mut rng, modes)).collect()
}

fn hardy_ratios(phis: &[SmoothTest], s: f64, q: f64, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
    let sq = s * q;
    let mut ratios = Vec::new();
    let mut chain = Vec::new();
    for phi in phis {
        let v = phi.sample_interior(grid);
        let weighted: f64 = grid.h
            * v.iter()
                .zip(&grid.delta)
                .map(|(x, d)| x * x / d.powf(2.0 * sq))
                .sum::<f64>();
        let low = gagliardo_seminorm(&v, sq, 2.0, grid)?;
        let high = gagliardo_seminorm(&v, s, 2.0, grid)?;
        ratios.push(weighted / (low * low));
        chain.push(low / high);
    }
    Ok((ratios, chain))
}

/// Weighted L^2 over seminorm^2 at order s q, on the grid and its refinement.
pub fn hardy_sobolev_certificate(phis: &[SmoothTest], s: f64, q: f64, grid: &Grid) -> Result<Certificate> {
    if !(s * q > 0.0 && s * q < 0.5) {
        return Err(Error::Input(format!("need 0 < s q < 1/2, got {}", s * q)));
    }
    if phis.is_empty() {
        return Err(Error::Input("no test functions".into()));
    }
    let fine = grid.refine();
    let (rc, cc) = hardy_ratios(phis, s, q, grid)?;
    let (rf, cf) = hardy_ratios(phis, s, q, &fine)?;
    let mx = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max);
    let (max_c, max_f) = (mx(&rc), mx(&rf));
    let (med_c, med_f) = (median(rc.clone()), median(rf.clone()));
    let (chain_c, chain_f) = (mx(&cc), mx(&cf));
    let bounded = max_c.is_finite() && max_f.is_finite();
    let spread = max_c <= 2.0 * med_c && max_f <= 2.0 * med_f;
    let stable = max_f <= 2.0 * max_c && max_c <= 2.0 * max_f;
    let chain_ok = chain_c.is_finite() && chain_f <= 2.0 * chain_c;
    Ok(Certificate::new("hardy_sobolev", 2.0)
        .with("max_ratio_coarse", max_c)
        .with("max_ratio_fine", max_f)
        .with("median_ratio_coarse", med_c)
        .with("median_ratio_fine", med_f)
        .with("embedding_ratio_coarse", chain_c)
        .with("embedding_ratio_fine", chain_f)
        .with("n_cells_coarse", grid.n_cells as f64)
        .verdict(bounded && spread && stable && chain_ok))
}

/// Max relative deviation of L (1 - x^2)^s scaled to the interval from the
/// Getoor constant, over all nodes and over nodes at distance >= margin.
pub fn getoor_deviation(grid: &Grid, s: f64, margin: f64) -> Result<(f64, f64)> {
    let op = assemble_operator(grid, s)?;
    let c = crate::operator::getoor_constant(s)?;
    let mid = 0.5 * (grid.a + grid.b);
    let r = 0.5 * (grid.b - grid.a);
    let u = DVector::from_iterator(
        grid.len(),
        grid.nodes.iter().map(|x| (r * r - (x - mid).powi(2)).powf(s)),
    );
    let lu = &op.matrix * u;
    let mut all: f64 = 0.0;
    let mut inner: f64 = 0.0;
    for i in 0..grid.len() {
        let dev = (lu[i] / c - 1.0).abs();
        all = all.max(dev);
        if grid.delta[i] >= margin {
            inner = inner.max(dev);
        }
    }
    Ok((all, inner))
}
