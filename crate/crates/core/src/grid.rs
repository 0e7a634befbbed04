//! Uniform mesh on an interval (a, b) with zero exterior.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n_cells: usize,
    pub h: f64,
    pub nodes: Vec<f64>,
    /// Distance of each node to the nearer endpoint.
    pub delta: Vec<f64>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same interval with twice as many cells.
    pub fn refine(&self) -> Grid {
        build_grid(self.a, self.b, 2 * self.n_cells).expect("refinement of a valid grid")
    }
}

/// Interior nodes x_i = a + i h, i = 1..n_cells-1.
pub fn build_grid(a: f64, b: f64, n_cells: usize) -> Result<Grid> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::Input(format!("need a < b, got ({a}, {b})")));
    }
    if n_cells < 4 {
        return Err(Error::Input(format!("n_cells must be >= 4, got {n_cells}")));
    }
    let h = (b - a) / n_cells as f64;
    let nodes: Vec<f64> = (1..n_cells).map(|i| a + i as f64 * h).collect();
    // index arithmetic keeps delta exactly symmetric
    let delta = (1..n_cells)
        .map(|i| i.min(n_cells - i) as f64 * h)
        .collect();
    Ok(Grid {
        a,
        b,
        n_cells,
        h,
        nodes,
        delta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactSubset {
    pub margin: f64,
    pub indices: Vec<usize>,
}

pub fn compact_subset(grid: &Grid, margin: f64) -> Result<CompactSubset> {
    let half = 0.5 * (grid.b - grid.a);
    if !(margin > 0.0 && margin < half) {
        return Err(Error::Input(format!(
            "margin must lie in (0, {half}), got {margin}"
        )));
    }
    let indices: Vec<usize> = (0..grid.len())
        .filter(|&i| grid.delta[i] >= margin - 1e-12 * half)
        .collect();
    if indices.is_empty() {
        return Err(Error::Input(format!("no node has distance >= {margin}")));
    }
    Ok(CompactSubset { margin, indices })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cells() {
        let g = build_grid(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.nodes, vec![-0.5, 0.0, 0.5]);
        assert_eq!(g.h, 0.5);
        assert_eq!(g.delta, vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn midpoint_distance() {
        let g = build_grid(0.0, 2.0, 8).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.nodes[3], 1.0);
        assert_eq!(g.delta[3], 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_grid(1.0, 1.0, 8).is_err());
        assert!(build_grid(2.0, 1.0, 8).is_err());
        assert!(build_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn compact_subsets() {
        let g = build_grid(-1.0, 1.0, 4).unwrap();
        assert_eq!(compact_subset(&g, 0.75).unwrap().indices, vec![1]);
        assert_eq!(compact_subset(&g, 0.25).unwrap().indices, vec![0, 1, 2]);
        assert!(compact_subset(&g, 1.0).is_err());
        assert!(compact_subset(&g, 0.0).is_err());
    }
}
