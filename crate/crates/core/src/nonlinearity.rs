//! Truncation, the singular reaction, the nonlinearity family h, the datum f,
//! and measure approximants.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// T_k(s): clip s to [-k, k].
pub fn truncate(k: f64, s: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Input(format!("truncation level must be > 0, got {k}")));
    }
    Ok(s.clamp(-k, k))
}

pub fn truncate_vec(k: f64, u: &DVector<f64>) -> Result<DVector<f64>> {
    if !(k > 0.0) {
        return Err(Error::Input(format!("truncation level must be > 0, got {k}")));
    }
    Ok(u.map(|x| x.clamp(-k, k)))
}

/// Componentwise u^{-q}; nonpositive entries are a domain error.
pub fn singular_term(u: &DVector<f64>, q: f64) -> Result<DVector<f64>> {
    if let Some((i, x)) = u.iter().enumerate().find(|(_, &x)| !(x > 0.0)) {
        return Err(Error::Domain(format!("u[{i}] = {x} is not positive")));
    }
    Ok(u.map(|x| x.powf(-q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HForm {
    /// h(t) = 1 / (t^gamma + t^theta)
    #[default]
    Canonical,
    /// h(t) = c1; degenerate form used to check that the fixed-point map decouples
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HSpec {
    pub gamma: f64,
    pub theta: f64,
    #[serde(default = "one")]
    pub c1: f64,
    #[serde(default = "one")]
    pub c2: f64,
    #[serde(default)]
    pub form: HForm,
}

fn one() -> f64 {
    1.0
}

impl HSpec {
    pub fn canonical(gamma: f64, theta: f64) -> Self {
        Self {
            gamma,
            theta,
            c1: 1.0,
            c2: 1.0,
            form: HForm::Canonical,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Input(format!("gamma must lie in (0, 1], got {}", self.gamma)));
        }
        if !(self.theta > 0.0) {
            return Err(Error::Input(format!("theta must be > 0, got {}", self.theta)));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::Input("growth constants must be positive".into()));
        }
        Ok(())
    }

    /// Thresholds below/above which the growth bounds hold.
    pub fn thresholds(&self) -> (f64, f64) {
        (1.0, 1.0)
    }

    fn value(&self, t: f64) -> f64 {
        match self.form {
            HForm::Canonical => 1.0 / (t.powf(self.gamma) + t.powf(self.theta)),
            HForm::Constant => self.c1,
        }
    }

    fn slope(&self, t: f64) -> f64 {
        match self.form {
            HForm::Canonical => {
                let den = t.powf(self.gamma) + t.powf(self.theta);
                -(self.gamma * t.powf(self.gamma - 1.0) + self.theta * t.powf(self.theta - 1.0))
                    / (den * den)
            }
            HForm::Constant => 0.0,
        }
    }

    /// h(t) and h'(t).
    pub fn eval_with_slope(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("h needs t > 0, got {t}")));
        }
        Ok((self.value(t), self.slope(t)))
    }

    /// T_n(h)(t) and its slope (zero where the cap is active).
    pub fn truncated_with_slope(&self, n: f64, t: f64) -> Result<(f64, f64)> {
        let (v, d) = self.eval_with_slope(t)?;
        Ok(if v > n { (n, 0.0) } else { (v, d) })
    }
}

pub fn h_eval(spec: &HSpec, t: f64) -> Result<f64> {
    spec.eval_with_slope(t).map(|(v, _)| v)
}

/// min(h(t), n).
pub fn h_truncated(n: usize, spec: &HSpec, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Input("truncation level n must be >= 1".into()));
    }
    spec.truncated_with_slope(n as f64, t).map(|(v, _)| v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Constant,
    BoundarySingular,
}

/// f(x) = amplitude, or amplitude * delta(x)^{-beta}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub amplitude: f64,
    #[serde(default)]
    pub beta: f64,
}

impl SourceSpec {
    pub fn constant(amplitude: f64) -> Self {
        Self {
            kind: SourceKind::Constant,
            amplitude,
            beta: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::Input(format!("source amplitude must be >= 0, got {}", self.amplitude)));
        }
        if !(self.beta >= 0.0 && self.beta < 1.0) {
            return Err(Error::Input(format!("beta must lie in [0, 1), got {}", self.beta)));
        }
        Ok(())
    }

    pub fn values(&self, grid: &Grid) -> DVector<f64> {
        match self.kind {
            SourceKind::Constant => DVector::from_element(grid.len(), self.amplitude),
            SourceKind::BoundarySingular => {
                DVector::from_iterator(grid.len(), grid.delta.iter().map(|d| self.amplitude * d.powf(-self.beta)))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// Nodal vector min(f(x_i), n).
pub fn source_truncated(n: usize, spec: &SourceSpec, grid: &Grid) -> DVector<f64> {
    let cap = n as f64;
    spec.values(grid).map(|v| v.min(cap))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    Constant { value: f64 },
    Nodal { values: Vec<f64> },
    BoundarySingular { amplitude: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    L1Density { density: Density },
    Dirac { atom_location: f64, mass: f64 },
}

impl MeasureSpec {
    pub fn zero() -> Self {
        MeasureSpec::L1Density {
            density: Density::Constant { value: 0.0 },
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        match self {
            MeasureSpec::L1Density { density } => match density {
                Density::Constant { value } if !(*value >= 0.0 && value.is_finite()) => {
                    Err(Error::Input("density must be finite and >= 0".into()))
                }
                Density::Nodal { values } => {
                    if values.len() != grid.len() {
                        return Err(Error::Input(format!(
                            "nodal density has {} entries, grid has {} nodes",
                            values.len(),
                            grid.len()
                        )));
                    }
                    if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                        return Err(Error::Input("density must be finite and >= 0".into()));
                    }
                    Ok(())
                }
                Density::BoundarySingular { amplitude, beta } => {
                    if !(*amplitude >= 0.0) || !(*beta >= 0.0 && *beta < 1.0) {
                        return Err(Error::Input("boundary-singular density needs amplitude >= 0, beta in [0, 1)".into()));
                    }
                    Ok(())
                }
                _ => Ok(()),
            },
            MeasureSpec::Dirac { atom_location, mass } => {
                if !(*atom_location > grid.a && *atom_location < grid.b) {
                    return Err(Error::Input(format!(
                        "atom at {atom_location} is outside ({}, {})",
                        grid.a, grid.b
                    )));
                }
                if !(*mass >= 0.0 && mass.is_finite()) {
                    return Err(Error::Input("atom mass must be >= 0".into()));
                }
                Ok(())
            }
        }
    }

    pub fn is_density(&self) -> bool {
        matches!(self, MeasureSpec::L1Density { .. })
    }

    /// Untruncated nodal representation: the density, or mass/h at the nearest node.
    pub fn nodal(&self, grid: &Grid) -> Result<DVector<f64>> {
        self.validate(grid)?;
        Ok(match self {
            MeasureSpec::L1Density { density } => match density {
                Density::Constant { value } => DVector::from_element(grid.len(), *value),
                Density::Nodal { values } => DVector::from_column_slice(values),
                Density::BoundarySingular { amplitude, beta } => {
                    DVector::from_iterator(grid.len(), grid.delta.iter().map(|d| amplitude * d.powf(-beta)))
                }
            },
            MeasureSpec::Dirac { atom_location, mass } => {
                let mut v = DVector::zeros(grid.len());
                v[nearest_node(grid, *atom_location)] = mass / grid.h;
                v
            }
        })
    }

    /// Total mass: h * sum(density) or the atom mass.
    pub fn total_mass(&self, grid: &Grid) -> Result<f64> {
        Ok(match self {
            MeasureSpec::Dirac { mass, .. } => *mass,
            _ => grid.h * self.nodal(grid)?.sum(),
        })
    }

    /// <mu, phi> with the density summed on nodes and atoms evaluated by
    /// linear interpolation of the nodal vector (zero at the endpoints).
    pub fn pair(&self, grid: &Grid, phi: &DVector<f64>) -> Result<f64> {
        Ok(match self {
            MeasureSpec::Dirac { atom_location, mass } => mass * interpolate(grid, phi, *atom_location),
            _ => grid.h * self.nodal(grid)?.dot(phi),
        })
    }
}

fn nearest_node(grid: &Grid, x: f64) -> usize {
    let k = ((x - grid.a) / grid.h).round() as isize;
    (k.clamp(1, grid.len() as isize) - 1) as usize
}

fn interpolate(grid: &Grid, phi: &DVector<f64>, x: f64) -> f64 {
    let t = (x - grid.a) / grid.h;
    let k = (t.floor() as isize).clamp(0, grid.n_cells as isize - 1) as usize;
    let frac = t - k as f64;
    let at = |j: usize| if j == 0 || j == grid.n_cells { 0.0 } else { phi[j - 1] };
    at(k) * (1.0 - frac) + at(k + 1) * frac
}

/// How the measure is regularized at level n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSchedule {
    /// T_n of the density; nearest-node mass/h for atoms.
    #[default]
    Truncation,
    /// Raised-cosine mollifier of width width_cells * h / n.
    Mollifier { width_cells: f64 },
}

pub fn measure_approximant(spec: &MeasureSpec, n: usize, grid: &Grid) -> Result<DVector<f64>> {
    measure_scheduled(spec, MeasureSchedule::Truncation, n, grid)
}

pub fn measure_scheduled(
    spec: &MeasureSpec,
    schedule: MeasureSchedule,
    n: usize,
    grid: &Grid,
) -> Result<DVector<f64>> {
    if n == 0 {
        return Err(Error::Input("level n must be >= 1".into()));
    }
    let base = spec.nodal(grid)?;
    match schedule {
        MeasureSchedule::Truncation => Ok(match spec {
            MeasureSpec::L1Density { .. } => base.map(|v| v.min(n as f64)),
            MeasureSpec::Dirac { .. } => base,
        }),
        MeasureSchedule::Mollifier { width_cells } => {
            if !(width_cells > 0.0) {
                return Err(Error::Input("mollifier width must be > 0".into()));
            }
            Ok(mollify(spec, &base, grid, width_cells * grid.h / n as f64))
        }
    }
}

/// CDF of the raised-cosine kernel (1 + cos(pi z)) / 2 on [-1, 1].
fn kernel_cdf(z: f64) -> f64 {
    if z <= -1.0 {
        0.0
    } else if z >= 1.0 {
        1.0
    } else {
        0.5 * (z + 1.0) + (PI * z).sin() / (2.0 * PI)
    }
}

fn dual_cell(grid: &Grid, j: usize) -> (f64, f64) {
    let x = grid.nodes[j];
    let l = if j == 0 { grid.a } else { x - 0.5 * grid.h };
    let r = if j + 1 == grid.len() { grid.b } else { x + 0.5 * grid.h };
    (l, r)
}

fn mollify(spec: &MeasureSpec, base: &DVector<f64>, grid: &Grid, eps: f64) -> DVector<f64> {
    let m = grid.len();
    match spec {
        MeasureSpec::L1Density { .. } => DVector::from_iterator(
            m,
            (0..m).map(|i| {
                let x = grid.nodes[i];
                (0..m)
                    .map(|j| {
                        let (l, r) = dual_cell(grid, j);
                        base[j] * (kernel_cdf((x - l) / eps) - kernel_cdf((x - r) / eps))
                    })
                    .sum()
            }),
        ),
        MeasureSpec::Dirac { atom_location, mass } => DVector::from_iterator(
            m,
            (0..m).map(|i| {
                let (l, r) = dual_cell(grid, i);
                mass / grid.h * (kernel_cdf((r - atom_location) / eps) - kernel_cdf((l - atom_location) / eps))
            }),
        ),
    }
}
