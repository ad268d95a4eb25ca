//! Shot noise evaluation `X(t) = Σ_k h(t − S_k)` on grids, and the centered,
//! normalized prelimit process `X_t(u) = (X(ut) − center(t, u)) / scale(t)`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::renewal::{LimitCaseSpec, RenewalPath};
use crate::response::{Accumulation, Kernel};

/// Default number of points for path summaries.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Uniform grid `u_j = j·u_max/(n−1)`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub u_max: f64,
    pub n_points: usize,
}

impl UniformGrid {
    pub fn new(u_max: f64, n_points: usize) -> Result<Self> {
        if !(u_max > 0.0 && u_max.is_finite()) {
            return Err(Error::invalid(format!("grid needs u_max > 0, got {u_max}")));
        }
        if n_points < 2 {
            return Err(Error::invalid("grid needs at least two points"));
        }
        Ok(UniformGrid { u_max, n_points })
    }

    pub fn step(&self) -> f64 {
        self.u_max / (self.n_points - 1) as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        if j + 1 == self.n_points {
            self.u_max
        } else {
            j as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.point(j)).collect()
    }
}

impl Default for UniformGrid {
    fn default() -> Self {
        UniformGrid { u_max: 1.0, n_points: DEFAULT_GRID_POINTS }
    }
}

/// A function sampled on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessPath {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl ProcessPath {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::invalid(format!("path has {} values for a {}-point grid", values.len(), grid.n_points)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("path values must be finite"));
        }
        Ok(ProcessPath { grid, values })
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn u_max(&self) -> f64 {
        self.grid.u_max
    }

    pub fn n_points(&self) -> usize {
        self.grid.n_points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("paths have at least two points")
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `u,value` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "u,value")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", self.grid.point(j), v)?;
        }
        Ok(())
    }
}

/// `X(t)` at each of `times` (any order).
pub fn shot_noise_at<K: Kernel + ?Sized>(path: &RenewalPath, h: &K, times: &[f64]) -> Result<Vec<f64>> {
    let reach = h.left_reach();
    for &t in times {
        if !t.is_finite() {
            return Err(Error::invalid("evaluation time must be finite"));
        }
        if t + reach > path.horizon() {
            return Err(Error::BeyondHorizon { t: t + reach, horizon: path.horizon() });
        }
    }
    let jumps = path.jumps();
    let count = |t: f64| if t < 0.0 { 0 } else { jumps.partition_point(|&s| s <= t) };

    match h.accumulation() {
        Some(Accumulation::Counting(terms)) => {
            Ok(times.iter().map(|&t| terms.iter().map(|&(shift, w)| w * count(t - shift) as f64).sum()).collect())
        }
        Some(Accumulation::Exponential { limit, rate }) => {
            // E(t) = Σ_{S_k ≤ t} e^{−rate (t − S_k)}, advanced in increasing t
            let mut order: Vec<usize> = (0..times.len()).collect();
            order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
            let mut out = vec![0.0; times.len()];
            let (mut acc, mut last, mut k) = (0.0f64, 0.0f64, 0usize);
            for idx in order {
                let t = times[idx];
                if t < 0.0 {
                    continue;
                }
                acc *= (-rate * (t - last)).exp();
                while k < jumps.len() && jumps[k] <= t {
                    acc += (-rate * (t - jumps[k])).exp();
                    k += 1;
                }
                last = t;
                out[idx] = limit * (k as f64 - acc);
            }
            Ok(out)
        }
        None => Ok(times
            .iter()
            .map(|&t| {
                let n = count(t);
                let past: f64 = jumps[..n].iter().map(|&s| h.eval(t - s)).sum();
                if reach > 0.0 {
                    let future: f64 = jumps[n..].iter().take_while(|&&s| s <= t + reach).map(|&s| h.eval(t - s)).sum();
                    past + future
                } else {
                    past
                }
            })
            .collect()),
    }
}

/// `X(t_j)` on a uniform time grid.
pub fn evaluate_shot_noise<K: Kernel + ?Sized>(path: &RenewalPath, h: &K, grid: &UniformGrid) -> Result<ProcessPath> {
    let values = shot_noise_at(path, h, &grid.points())?;
    ProcessPath::new(*grid, values)
}

/// `X_t(u)` at each of `us`.
pub fn normalized_at(path: &RenewalPath, spec: &LimitCaseSpec, t: f64, us: &[f64]) -> Result<Vec<f64>> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("normalization needs t > 0, got {t}")));
    }
    let times: Vec<f64> = us.iter().map(|&u| u * t).collect();
    let raw = shot_noise_at(path, spec.response(), &times)?;
    let scale = spec.scale(t)?;
    raw.iter().zip(us).map(|(&x, &u)| Ok((x - spec.center(t, u)?) / scale)).collect()
}

/// `X_t(u_j)` on a uniform `u` grid.
pub fn normalized_process(path: &RenewalPath, spec: &LimitCaseSpec, t: f64, grid: &UniformGrid) -> Result<ProcessPath> {
    ProcessPath::new(*grid, normalized_at(path, spec, t, &grid.points())?)
}
