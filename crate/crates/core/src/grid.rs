//! Discretized wave profiles on a truncated line.
//!
//! A profile lives on a uniform grid over `[-T, T]` and is extended by
//! constant asymptotic values outside that window, matching the boundary
//! behaviour of wave profiles that connect two equilibria. Evaluation
//! between nodes is piecewise linear, so delayed lookups stay inside any
//! box the node values satisfy.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// Uniform symmetric grid specification. `n_cells * h == 2 * t_extent`
/// exactly; `h` is adjusted from the requested spacing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub t_extent: f64,
    pub h: f64,
    pub n_cells: usize,
}

impl GridSpec {
    pub fn new(t_extent: f64, h_request: f64) -> Result<Self> {
        if !(t_extent > 0.0) {
            return Err(CoreError::parameter("t_extent", "must be positive"));
        }
        if !(h_request > 0.0) {
            return Err(CoreError::parameter("h", "must be positive"));
        }
        let n_cells = (2.0 * t_extent / h_request).round().max(1.0) as usize;
        let h = 2.0 * t_extent / n_cells as f64;
        Ok(GridSpec {
            t_extent,
            h,
            n_cells,
        })
    }

    pub fn t_min(&self) -> f64 {
        -self.t_extent
    }

    pub fn t_max(&self) -> f64 {
        self.t_extent
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn node(&self, j: usize) -> f64 {
        self.t_min() + j as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(move |j| self.node(j))
    }
}

/// An `n`-component profile sampled on a [`GridSpec`], with constant tails.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileGrid {
    pub grid: GridSpec,
    pub n_comp: usize,
    /// `values[j][i]` is component `i` at node `j`.
    pub values: Vec<Vec<f64>>,
    pub left_asym: Vec<f64>,
    pub right_asym: Vec<f64>,
}

impl ProfileGrid {
    pub fn new(
        grid: GridSpec,
        values: Vec<Vec<f64>>,
        left_asym: Vec<f64>,
        right_asym: Vec<f64>,
    ) -> Result<Self> {
        let n_comp = left_asym.len();
        if right_asym.len() != n_comp {
            return Err(CoreError::Structural(
                "asymptote vectors have different lengths".into(),
            ));
        }
        if values.len() != grid.n_nodes() {
            return Err(CoreError::Structural(format!(
                "expected {} nodes, got {}",
                grid.n_nodes(),
                values.len()
            )));
        }
        for row in &values {
            if row.len() != n_comp {
                return Err(CoreError::Structural(
                    "node row length does not match component count".into(),
                ));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(CoreError::Structural("non-finite profile value".into()));
            }
        }
        Ok(ProfileGrid {
            grid,
            n_comp,
            values,
            left_asym,
            right_asym,
        })
    }

    /// Builds a profile by sampling `f(component, t)` at the nodes.
    pub fn from_fn(
        grid: GridSpec,
        n_comp: usize,
        left_asym: Vec<f64>,
        right_asym: Vec<f64>,
        f: impl Fn(usize, f64) -> f64,
    ) -> Result<Self> {
        let values = (0..grid.n_nodes())
            .map(|j| {
                let t = grid.node(j);
                (0..n_comp).map(|i| f(i, t)).collect()
            })
            .collect();
        ProfileGrid::new(grid, values, left_asym, right_asym)
    }

    /// A profile that is constant in `t`.
    pub fn constant(grid: GridSpec, state: &[f64]) -> Self {
        ProfileGrid {
            grid,
            n_comp: state.len(),
            values: vec![state.to_vec(); grid.n_nodes()],
            left_asym: state.to_vec(),
            right_asym: state.to_vec(),
        }
    }

    fn check_component(&self, component: usize) -> Result<()> {
        if component >= self.n_comp {
            return Err(CoreError::Structural(format!(
                "component index {} out of range (n = {})",
                component, self.n_comp
            )));
        }
        Ok(())
    }

    /// Value of one component at arbitrary `t`: constant tails outside the
    /// window, exact node values, linear interpolation between nodes.
    pub fn eval(&self, component: usize, t: f64) -> f64 {
        debug_assert!(component < self.n_comp);
        if t < self.grid.t_min() {
            return self.left_asym[component];
        }
        if t > self.grid.t_max() {
            return self.right_asym[component];
        }
        let x = (t - self.grid.t_min()) / self.grid.h;
        let j = x.floor() as usize;
        if j >= self.grid.n_cells {
            return self.values[self.grid.n_cells][component];
        }
        let frac = x - j as f64;
        if frac == 0.0 {
            return self.values[j][component];
        }
        let a = self.values[j][component];
        let b = self.values[j + 1][component];
        a + frac * (b - a)
    }

    /// Checked variant of [`eval`](Self::eval) for external callers.
    pub fn eval_checked(&self, component: usize, t: f64) -> Result<f64> {
        self.check_component(component)?;
        Ok(self.eval(component, t))
    }

    /// `phi_i(t - tau)`.
    pub fn delayed_eval(&self, component: usize, t: f64, tau: f64) -> f64 {
        debug_assert!(tau >= 0.0);
        self.eval(component, t - tau)
    }

    /// Supremum over components of the box violation against `[0, k]`.
    pub fn box_violation(&self, k: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.values {
            for (i, &v) in row.iter().enumerate() {
                worst = worst.max(-v).max(v - k[i]);
            }
        }
        for (i, &v) in self.left_asym.iter().enumerate() {
            worst = worst.max(-v).max(v - k[i]);
        }
        for (i, &v) in self.right_asym.iter().enumerate() {
            worst = worst.max(-v).max(v - k[i]);
        }
        worst
    }

    /// Worst signed amount by which `self` exceeds `other` anywhere
    /// (positive means `self > other` at some node or asymptote).
    pub fn excess_over(&self, other: &ProfileGrid) -> f64 {
        debug_assert_eq!(self.grid.n_nodes(), other.grid.n_nodes());
        let mut worst = f64::NEG_INFINITY;
        for (row_s, row_o) in self.values.iter().zip(&other.values) {
            for (a, b) in row_s.iter().zip(row_o) {
                worst = worst.max(a - b);
            }
        }
        for (a, b) in self.left_asym.iter().zip(&other.left_asym) {
            worst = worst.max(a - b);
        }
        for (a, b) in self.right_asym.iter().zip(&other.right_asym) {
            worst = worst.max(a - b);
        }
        worst
    }

    /// Sup-norm distance over nodes and asymptotes.
    pub fn sup_distance(&self, other: &ProfileGrid) -> f64 {
        let mut worst: f64 = 0.0;
        for (row_s, row_o) in self.values.iter().zip(&other.values) {
            for (a, b) in row_s.iter().zip(row_o) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }

    /// Nodewise average of two profiles (asymptotes averaged as well).
    pub fn midpoint(&self, other: &ProfileGrid) -> ProfileGrid {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| 0.5 * (a + b)).collect())
            .collect();
        ProfileGrid {
            grid: self.grid,
            n_comp: self.n_comp,
            values,
            left_asym: self
                .left_asym
                .iter()
                .zip(&other.left_asym)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
            right_asym: self
                .right_asym
                .iter()
                .zip(&other.right_asym)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        }
    }

    /// Extracts one component as a single-component profile.
    pub fn component(&self, i: usize) -> ProfileGrid {
        ProfileGrid {
            grid: self.grid,
            n_comp: 1,
            values: self.values.iter().map(|row| vec![row[i]]).collect(),
            left_asym: vec![self.left_asym[i]],
            right_asym: vec![self.right_asym[i]],
        }
    }

    /// Worst negative forward difference per component; a profile is
    /// nondecreasing within `tol` when this is `>= -tol` for each component.
    pub fn monotonicity_defect(&self) -> Vec<f64> {
        let mut defect = vec![0.0f64; self.n_comp];
        for w in self.values.windows(2) {
            for i in 0..self.n_comp {
                defect[i] = defect[i].min(w[1][i] - w[0][i]);
            }
        }
        defect
    }

    /// Writes `t,phi_1,...,phi_n` rows to CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "t")?;
        for i in 0..self.n_comp {
            write!(out, ",phi_{}", i + 1)?;
        }
        writeln!(out)?;
        for (j, row) in self.values.iter().enumerate() {
            write!(out, "{:.17e}", self.grid.node(j))?;
            for v in row {
                write!(out, ",{:.17e}", v)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Writes the CSV profile plus a JSON sidecar carrying the grid and
    /// asymptote metadata needed to reconstruct tail behaviour.
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        let file = std::fs::File::create(csv_path)?;
        self.write_csv(std::io::BufWriter::new(file))?;
        let sidecar = csv_path.with_extension("meta.json");
        let meta = serde_json::json!({
            "t_extent": self.grid.t_extent,
            "h": self.grid.h,
            "n_cells": self.grid.n_cells,
            "n_comp": self.n_comp,
            "left_asym": self.left_asym,
            "right_asym": self.right_asym,
        });
        std::fs::write(sidecar, serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }
}

/// Decay rate for the weighted supremum norm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormConfig {
    pub rho: f64,
}

impl NormConfig {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(CoreError::parameter("rho", "must be positive"));
        }
        Ok(NormConfig { rho })
    }
}

/// Weighted supremum norm `sup_t |phi(t)| e^{-rho |t|}` over nodes and
/// constant tails. For a constant tail the weighted supremum is attained
/// at the window edge, so tails contribute `|asym| e^{-rho T}`.
pub fn norm_rho(profile: &ProfileGrid, cfg: NormConfig) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, row) in profile.values.iter().enumerate() {
        let w = (-cfg.rho * profile.grid.node(j).abs()).exp();
        for &v in row {
            worst = worst.max(v.abs() * w);
        }
    }
    let edge_w = (-cfg.rho * profile.grid.t_extent).exp();
    for &v in profile.left_asym.iter().chain(&profile.right_asym) {
        worst = worst.max(v.abs() * edge_w);
    }
    worst
}

/// Plain sup-norm over nodes and asymptotes.
pub fn norm_sup(profile: &ProfileGrid) -> f64 {
    let mut worst: f64 = 0.0;
    for row in &profile.values {
        for &v in row {
            worst = worst.max(v.abs());
        }
    }
    for &v in profile.left_asym.iter().chain(&profile.right_asym) {
        worst = worst.max(v.abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_profile() -> ProfileGrid {
        let grid = GridSpec::new(2.0, 0.5).unwrap();
        ProfileGrid::from_fn(grid, 1, vec![-2.0], vec![2.0], |_, t| t).unwrap()
    }

    #[test]
    fn grid_spacing_is_exact() {
        let grid = GridSpec::new(200.0, 0.05).unwrap();
        assert_eq!(grid.n_cells, 8000);
        assert_eq!(grid.n_cells as f64 * grid.h, 400.0);
        // An awkward request still tiles the window exactly.
        let grid = GridSpec::new(1.0, 0.3).unwrap();
        assert!((grid.n_cells as f64 * grid.h - 2.0).abs() < 1e-15);
    }

    #[test]
    fn eval_node_tail_and_midpoint() {
        let p = ramp_profile();
        // exact node lookup
        let t3 = p.grid.node(3);
        assert_eq!(p.eval(0, t3), p.values[3][0]);
        // tail convention
        assert_eq!(p.eval(0, p.grid.t_min() - 10.0), -2.0);
        assert_eq!(p.eval(0, p.grid.t_max() + 1e9), 2.0);
        // midpoint between nodes j and j+1
        let mid = 0.5 * (p.grid.node(3) + p.grid.node(4));
        let expect = 0.5 * (p.values[3][0] + p.values[4][0]);
        assert!((p.eval(0, mid) - expect).abs() < 1e-15);
    }

    #[test]
    fn delayed_eval_is_shifted_eval() {
        let p = ramp_profile();
        for &(t, tau) in &[(0.3, 0.0), (1.2, 0.7), (-1.9, 5.0), (2.0, 0.13)] {
            assert_eq!(p.delayed_eval(0, t, tau), p.eval(0, t - tau));
        }
        let k = ProfileGrid::constant(GridSpec::new(1.0, 0.1).unwrap(), &[3.5]);
        assert_eq!(k.delayed_eval(0, 0.4, 2.2), 3.5);
    }

    #[test]
    fn norm_rho_examples() {
        let grid = GridSpec::new(2.0, 0.5).unwrap();
        let ones = ProfileGrid::constant(grid, &[1.0, 1.0]);
        assert!((norm_rho(&ones, NormConfig::new(0.7).unwrap()) - 1.0).abs() < 1e-15);
        let zero = ProfileGrid::constant(grid, &[0.0]);
        assert_eq!(norm_rho(&zero, NormConfig::new(1.0).unwrap()), 0.0);

        // single nonzero node value 2 at t = 1, rho = 1
        let mut spike = ProfileGrid::constant(grid, &[0.0]);
        let j = ((1.0 - grid.t_min()) / grid.h).round() as usize;
        assert_eq!(grid.node(j), 1.0);
        spike.values[j][0] = 2.0;
        let got = norm_rho(&spike, NormConfig::new(1.0).unwrap());
        assert!((got - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((got - 0.735_758_882_342_884_6).abs() < 1e-12);
    }

    #[test]
    fn norm_rho_below_sup_norm() {
        let p = ramp_profile();
        let cfg = NormConfig::new(0.3).unwrap();
        assert!(norm_rho(&p, cfg) <= norm_sup(&p) + 1e-15);
    }

    #[test]
    fn component_extraction_keeps_tails() {
        let grid = GridSpec::new(1.0, 0.25).unwrap();
        let p = ProfileGrid::from_fn(grid, 2, vec![0.0, 5.0], vec![1.0, 7.0], |i, t| {
            t + i as f64
        })
        .unwrap();
        let c1 = p.component(1);
        assert_eq!(c1.left_asym, vec![5.0]);
        assert_eq!(c1.right_asym, vec![7.0]);
        assert_eq!(c1.eval(0, 0.25), p.eval(1, 0.25));
    }

    #[test]
    fn csv_roundtrip_header() {
        let p = ramp_profile();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,phi_1\n"));
        assert_eq!(text.lines().count(), 1 + p.grid.n_nodes());
    }
}
