#![allow(dead_code)]

use fraclap::grid::{build_grid, Grid};
use fraclap::nonlinearity::{Density, HSpec, MeasureSchedule, MeasureSpec, SourceSpec};
use fraclap::operator::{assemble_operator, OperatorMatrix};
use fraclap::solver::ProblemSpec;
use nalgebra::DVector;

// Frozen output of scripts/oracles.py (mpmath, 30 digits).
pub const C1S_0_1: f64 = 0.090313982871455613452;
pub const C1S_0_25: f64 = 0.19947114020071633897;
pub const C1S_0_3: f64 = 0.23009638168163210465;
pub const C1S_0_4: f64 = 0.28195845299999037907;
pub const C1S_0_5: f64 = 0.31830988618379067154;

/// Adaptive quadrature of the principal value applied to (1 - x^2)^s at x = 0.
pub const GETOOR_QUAD: [(f64, f64); 3] = [
    (0.1, 0.918168618886936934),
    (0.25, 0.886226925452758008),
    (0.4, 0.931383770980242699),
];

/// Smallest eigenvalue at s = 0.25 on (-1, 1): Aitken extrapolation of
/// n_cells = 1024, 2048, 4096 (0.970123837108, 0.970147985395, 0.970158196085).
pub const LAMBDA1_S025: f64 = 0.9701657;

pub fn canonical_l1(n_cells: usize) -> (ProblemSpec, OperatorMatrix) {
    let mu = MeasureSpec::L1Density {
        density: Density::Constant { value: 1.0 },
    };
    problem(n_cells, mu)
}

pub fn canonical_dirac(n_cells: usize) -> (ProblemSpec, OperatorMatrix) {
    let mu = MeasureSpec::Dirac {
        atom_location: 0.0,
        mass: 1.0,
    };
    problem(n_cells, mu)
}

pub fn problem(n_cells: usize, mu_spec: MeasureSpec) -> (ProblemSpec, OperatorMatrix) {
    let grid = build_grid(-1.0, 1.0, n_cells).unwrap();
    let op = assemble_operator(&grid, 0.25).unwrap();
    let p = ProblemSpec {
        q: 0.5,
        h_spec: HSpec::canonical(0.5, 2.0),
        f_spec: SourceSpec::constant(1.0),
        mu_spec,
        s: 0.25,
        grid,
        schedule: MeasureSchedule::Truncation,
    };
    (p, op)
}

pub fn profile(grid: &Grid, f: impl Fn(f64) -> f64) -> DVector<f64> {
    DVector::from_iterator(grid.len(), grid.nodes.iter().map(|&x| f(x)))
}

pub fn max_abs_diff(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax()
}
