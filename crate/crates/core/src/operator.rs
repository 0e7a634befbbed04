//! Dense discrete restricted fractional Laplacian on a uniform interval mesh.
//!
//! Row i approximates C_{1,s} P.V. \int (u(x_i) - u(y)) |x_i - y|^{-1-2s} dy with
//! u = 0 outside (a, b). The near field |y - x_i| < h uses the quadratic model
//! through u_{i-1}, u_i, u_{i+1}; the far field integrates the kernel exactly
//! against the hat interpolant; the exterior enters the diagonal in closed form.
//! Nodes in the first `BOUNDARY_LAYER` cells at each end get a diagonal
//! correction that removes the interpolation defect of the profile (y - a)^s,
//! which dominates the consistency error near the boundary.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{check_len, Error, Result};
use crate::grid::Grid;
use crate::quadrature::GaussLegendre;

pub const BOUNDARY_LAYER: usize = 8;
const GRADED_LEVELS: usize = 48;

/// C_{1,s} = 4^s Gamma(1/2 + s) / (sqrt(pi) |Gamma(-s)|).
pub fn normalization_constant(s: f64) -> Result<f64> {
    check_order(s)?;
    Ok(4f64.powf(s) * gamma(0.5 + s) / (std::f64::consts::PI.sqrt() * gamma(-s).abs()))
}

/// Value of the operator on the profile (1 - x^2)^s over (-1, 1).
///
/// The same constant holds for ((x - a)(b - x))^s scaled to any interval
/// of half-length R once multiplied by R^{-2s}; for (R^2 - (x-c)^2)^s it is unchanged.
pub fn getoor_constant(s: f64) -> Result<f64> {
    check_order(s)?;
    Ok(4f64.powf(s) * gamma(1.0 + s) * gamma(0.5 + s) / std::f64::consts::PI.sqrt())
}

fn check_order(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Input(format!("s must lie in (0, 1), got {s}")));
    }
    Ok(())
}

/// Kernel mass of R \ (a, b) seen from x, without the normalization constant.
pub fn tail_weight(x: f64, grid: &Grid, s: f64) -> Result<f64> {
    check_order(s)?;
    if !(x > grid.a && x < grid.b) {
        return Err(Error::Domain(format!(
            "x = {x} is not inside ({}, {})",
            grid.a, grid.b
        )));
    }
    Ok(((x - grid.a).powf(-2.0 * s) + (grid.b - x).powf(-2.0 * s)) / (2.0 * s))
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorMatrix {
    pub s: f64,
    pub c_ns: f64,
    #[serde(skip)]
    pub matrix: DMatrix<f64>,
    /// C_{1,s} times the exterior tail weight at each node.
    pub tail: DVector<f64>,
    /// Diagonal mass from the two boundary cells and the boundary-layer correction.
    pub boundary: DVector<f64>,
    pub grid: Grid,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn outside_supported_regime(&self) -> bool {
        self.s >= 0.5
    }

    pub fn cholesky(&self) -> Cholesky<f64, Dyn> {
        Cholesky::new(self.matrix.clone()).expect("operator is symmetric positive definite")
    }
}

/// Far-field weight of the hat at distance k cells, in units of h^{-2s}.
fn far_weight(gl: &GaussLegendre, k: usize, s: f64) -> f64 {
    let kf = k as f64;
    let ker = |t: f64| t.powf(-1.0 - 2.0 * s);
    if k == 1 {
        return gl.integrate(|t| (2.0 - t) * ker(t), 1.0, 2.0);
    }
    rising_piece(gl, k, s) + gl.integrate(|t| (kf + 1.0 - t) * ker(t), kf, kf + 1.0)
}

/// Half hat rising over [k-1, k]; the k = 1 piece lies in the near field.
fn rising_piece(gl: &GaussLegendre, k: usize, s: f64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    let kf = k as f64;
    gl.integrate(|t| (t - kf + 1.0) * t.powf(-1.0 - 2.0 * s), kf - 1.0, kf)
}

/// (1 + x)^s + (1 - x)^s - 2 without cancellation for small x.
fn second_difference_unit(x: f64, s: f64) -> f64 {
    if x >= 0.5 {
        return (1.0 + x).powf(s) + (1.0 - x).powf(s) - 2.0;
    }
    // 2 * sum_k binom(s, 2k) x^{2k}
    let x2 = x * x;
    let mut coeff = 1.0;
    let mut pow = 1.0;
    let mut acc = 0.0;
    for k in 1..60 {
        let j = 2 * k;
        coeff *= (s - (j - 2) as f64) * (s - (j - 1) as f64) / ((j - 1) as f64 * j as f64);
        pow *= x2;
        let term = coeff * pow;
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    2.0 * acc
}

/// Quadrature defect of the scheme on rho(y) = (y - a)^s at node i (1-based),
/// in units where h = 1. Multiplying by h^{-s} gives the physical defect.
fn layer_defect(gl: &GaussLegendre, i: usize, s: f64, layer: usize) -> f64 {
    let ker_exp = -1.0 - 2.0 * s;
    let fi = i as f64;
    let mut total = 0.0;
    if i <= layer {
        let ri = fi.powf(s);
        let d2 = (fi + 1.0).powf(s) - 2.0 * ri + (fi - 1.0).powf(s);
        let f = |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            (ri * second_difference_unit(t / fi, s) - t * t * d2) * t.powf(ker_exp)
        };
        total += gl.graded_left(f, 0.0, 0.5, GRADED_LEVELS);
        total += gl.graded_right(f, 0.5, 1.0, GRADED_LEVELS);
    }
    for m in 0..layer {
        if m + 1 == i || m == i {
            continue;
        }
        let y0 = m as f64;
        let r0 = y0.powf(s);
        let r1 = (y0 + 1.0).powf(s);
        let f = |y: f64| (y.max(0.0).powf(s) - (r0 + (r1 - r0) * (y - y0))) * (fi - y).abs().powf(ker_exp);
        total += if m == 0 {
            gl.graded_left(f, 0.0, 1.0, GRADED_LEVELS)
        } else {
            gl.integrate(f, y0, y0 + 1.0)
        };
    }
    total
}

pub fn assemble_operator(grid: &Grid, s: f64) -> Result<OperatorMatrix> {
    let c = normalization_constant(s)?;
    let gl = GaussLegendre::new(16);
    let n = grid.n_cells;
    let m = grid.len();
    let scale = grid.h.powf(-2.0 * s);
    let near = scale / (2.0 - 2.0 * s);

    let far: Vec<f64> = (0..=n)
        .map(|k| if k == 0 { 0.0 } else { scale * far_weight(&gl, k, s) })
        .collect();
    let rising: Vec<f64> = (0..=n).map(|k| scale * rising_piece(&gl, k, s)).collect();

    // correction for the left layer; the right layer is its mirror image
    let layer = BOUNDARY_LAYER.min(n / 2);
    let left: Vec<f64> = (1..=m)
        .into_par_iter()
        .map(|i| -c * scale * layer_defect(&gl, i, s, layer) / (i as f64).powf(s))
        .collect();

    let mut matrix = DMatrix::<f64>::zeros(m, m);
    let mut tail = DVector::<f64>::zeros(m);
    let mut boundary = DVector::<f64>::zeros(m);
    for i in 0..m {
        let mut row_mass = 0.0;
        for j in 0..m {
            if i == j {
                continue;
            }
            let d = i.abs_diff(j);
            let w = far[d] + if d == 1 { near } else { 0.0 };
            matrix[(i, j)] = -c * w;
            row_mass += w;
        }
        let dl = (i + 1) as f64 * grid.h;
        let dr = (m - i) as f64 * grid.h;
        tail[i] = c * (dl.powf(-2.0 * s) + dr.powf(-2.0 * s)) / (2.0 * s);
        // ghost neighbours at the endpoints take the near coupling and the half hats
        let mut edge = rising[i + 1] + rising[m - i];
        if i == 0 {
            edge += near;
        }
        if i == m - 1 {
            edge += near;
        }
        boundary[i] = c * edge + left[i] + left[m - 1 - i];
        matrix[(i, i)] = c * row_mass + tail[i] + boundary[i];
    }

    Ok(OperatorMatrix {
        s,
        c_ns: c,
        matrix,
        tail,
        boundary,
        grid: grid.clone(),
    })
}

pub fn apply(op: &OperatorMatrix, u: &DVector<f64>) -> Result<DVector<f64>> {
    check_len(op.dim(), u.len())?;
    Ok(&op.matrix * u)
}

/// h u^T L v, the discrete pairing of the Gagliardo energy scaled by C_{1,s}/2.
pub fn bilinear_form(op: &OperatorMatrix, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    check_len(op.dim(), u.len())?;
    check_len(op.dim(), v.len())?;
    Ok(op.grid.h * u.dot(&(&op.matrix * v)))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralEstimate {
    pub lambda1: f64,
    #[serde(skip)]
    pub eigvec: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Inverse power iteration; the eigenvector is normalized to unit max entry.
pub fn smallest_eigenvalue(op: &OperatorMatrix, tol: f64) -> Result<SpectralEstimate> {
    let chol = op.cholesky();
    let m = op.dim();
    let mut v = DVector::from_element(m, 1.0);
    let max_iter = 500;
    for it in 1..=max_iter {
        let mut w = chol.solve(&v);
        let norm = w.norm();
        w /= norm;
        let lw = &op.matrix * &w;
        let lambda = w.dot(&lw);
        let residual = (lw - lambda * &w).norm();
        v = w;
        if residual <= tol {
            if v.sum() < 0.0 {
                v.neg_mut();
            }
            let peak = v.amax();
            v /= peak;
            if v.iter().any(|&x| x <= 0.0) {
                return Err(Error::Solver {
                    message: "ground state is not strictly positive".into(),
                    trace: vec![],
                });
            }
            return Ok(SpectralEstimate {
                lambda1: lambda,
                eigvec: v,
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::Solver {
        message: format!("inverse iteration did not reach {tol} in {max_iter} steps"),
        trace: vec![],
    })
}
