//! Samplers for the limit objects.
//!
//! - `W_α`, α ∈ (1, 2): spectrally negative stable Lévy process with
//!   `log E e^{izW_α(1)} = −|z|^α Γ(1−α)(cos(πα/2) + i sin(πα/2) sgn z)`.
//!   In the usual `S(α, skew, σ)` parameterization this is skew −1 and
//!   `σ^α = Γ(1−α) cos(πα/2)` (both factors are negative, the product is not).
//! - `W_2`: standard Brownian motion.
//! - `D_α`, α ∈ (0, 1): stable subordinator with `−log E e^{−sD_α(1)} = Γ(1−α) s^α`.
//! - `V_α(u) = inf{s ≥ 0 : D_α(s) > u}` and the fractional integrals
//!   `∫₀^u (u − y)^β dW(y)`, computed as left-endpoint Stieltjes sums.
//!
//! Stable variates come from the Chambers–Mallows–Stuck transform of one
//! uniform angle and one exponential.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shotnoise::{ProcessPath, UniformGrid};
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StableRole {
    SpectrallyNegative,
    PositiveSubordinator,
}

/// A stable law together with the constants of its sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableSpec {
    alpha: f64,
    role: StableRole,
    /// multiplier applied to the standardized CMS output
    scale: f64,
    skew: f64,
    // precomputed CMS constants
    shift: f64,
    factor: f64,
}

impl StableSpec {
    /// `W_α(1)`; α = 2 is the standard normal.
    pub fn spectrally_negative(alpha: f64) -> Result<Self> {
        if alpha == 1.0 {
            return Err(Error::Unsupported(
                "α = 1 spectrally negative sampling is not provided; use the CF oracle".into(),
            ));
        }
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("spectrally negative stable needs α ∈ (1, 2], got {alpha}")));
        }
        let scale = if alpha == 2.0 { 1.0 } else { (gamma(1.0 - alpha) * (PI * alpha / 2.0).cos()).powf(1.0 / alpha) };
        Ok(Self::with_constants(alpha, StableRole::SpectrallyNegative, scale, -1.0))
    }

    /// `D_α(1)` with Laplace exponent `Γ(1−α) s^α`.
    pub fn positive_subordinator(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid(format!("stable subordinator needs α ∈ (0, 1), got {alpha}")));
        }
        // σ = cos(πα/2)^{1/α} gives E e^{−sX} = e^{−s^α}; then rescale by Γ(1−α)^{1/α}
        let scale = ((PI * alpha / 2.0).cos() * gamma(1.0 - alpha)).powf(1.0 / alpha);
        Ok(Self::with_constants(alpha, StableRole::PositiveSubordinator, scale, 1.0))
    }

    fn with_constants(alpha: f64, role: StableRole, scale: f64, skew: f64) -> Self {
        let (shift, factor) = if alpha == 2.0 {
            (0.0, 1.0)
        } else {
            let tan = (PI * alpha / 2.0).tan();
            let shift = (skew * tan).atan() / alpha;
            let factor = (1.0 + skew * skew * tan * tan).powf(1.0 / (2.0 * alpha));
            (shift, factor)
        };
        StableSpec { alpha, role, scale, skew, shift, factor }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn role(&self) -> StableRole {
        self.role
    }

    /// σ in the `S(α, skew, σ)` parameterization.
    pub fn scale_sigma(&self) -> f64 {
        self.scale
    }

    pub fn skew(&self) -> f64 {
        self.skew
    }

    /// One draw of `W_α(1)` or `D_α(1)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.alpha == 2.0 {
            let z: f64 = StandardNormal.sample(rng);
            return z;
        }
        let a = self.alpha;
        let v = loop {
            let v = PI * (rng.random::<f64>() - 0.5);
            if v > -FRAC_PI_2 {
                break v;
            }
        };
        let w: f64 = loop {
            let w: f64 = Exp1.sample(rng);
            if w > 0.0 {
                break w;
            }
        };
        let arg = a * (v + self.shift);
        let x = self.factor * arg.sin() / v.cos().powf(1.0 / a) * ((v - arg).cos() / w).powf((1.0 - a) / a);
        self.scale * x
    }
}

/// One draw of `W_α(1)` or `D_α(1)`.
pub fn sample_stable_unit<R: Rng + ?Sized>(spec: &StableSpec, rng: &mut R) -> f64 {
    spec.sample(rng)
}

/// Lévy path on `[0, u_max]` with `n` grid points; `W(0) = 0` and stationary
/// independent increments `Δ^{1/α}·W(1)`.
pub fn sample_levy_path<R: Rng + ?Sized>(spec: &StableSpec, u_max: f64, n: usize, rng: &mut R) -> Result<ProcessPath> {
    let grid = UniformGrid::new(u_max, n)?;
    let inc = grid.step().powf(1.0 / spec.alpha);
    let mut values = Vec::with_capacity(n);
    let mut level = 0.0;
    values.push(0.0);
    for _ in 1..n {
        level += inc * spec.sample(rng);
        values.push(level);
    }
    ProcessPath::new(grid, values)
}

/// Resolution settings for the first-passage construction of `V_α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubordinatorGrid {
    /// subordinator steps per output grid point
    pub steps_per_point: usize,
    /// lower bound on the initial number of subordinator steps
    pub min_steps: usize,
    /// how many times the s-range may double before giving up
    pub max_extensions: usize,
}

impl Default for SubordinatorGrid {
    fn default() -> Self {
        SubordinatorGrid { steps_per_point: 64, min_steps: 2048, max_extensions: 4 }
    }
}

/// `E V_α(u) = u^α / (Γ(1−α) Γ(1+α))`.
fn mean_inverse_subordinator(alpha: f64, u: f64) -> f64 {
    u.powf(alpha) / (gamma(1.0 - alpha) * gamma(1.0 + alpha))
}

/// Inverse stable subordinator on a `u`-grid, default resolution.
pub fn sample_inverse_subordinator_path<R: Rng + ?Sized>(
    alpha: f64,
    u_max: f64,
    n: usize,
    rng: &mut R,
) -> Result<ProcessPath> {
    sample_inverse_subordinator_path_with(alpha, u_max, n, SubordinatorGrid::default(), rng)
}

/// Inverse stable subordinator on a `u`-grid.
///
/// `D_α` is simulated on an `s`-grid of step `δ` until it exceeds `u_max`;
/// each `V(u_j)` is the linear interpolation between the bracketing grid
/// times. The initial `s`-range is four times `E V_α(u_max)` and doubles on
/// demand. The step `δ` scales like `u_max^α`, so the discretized process is
/// self-similar with the same index as the exact one.
pub fn sample_inverse_subordinator_path_with<R: Rng + ?Sized>(
    alpha: f64,
    u_max: f64,
    n: usize,
    resolution: SubordinatorGrid,
    rng: &mut R,
) -> Result<ProcessPath> {
    let spec = StableSpec::positive_subordinator(alpha)?;
    let grid = UniformGrid::new(u_max, n)?;
    let initial_range = 4.0 * mean_inverse_subordinator(alpha, u_max);
    let steps = (resolution.steps_per_point * n).max(resolution.min_steps);
    let delta = initial_range / steps as f64;
    let inc = delta.powf(1.0 / alpha);

    let mut values = vec![0.0; n];
    let mut next = 1;
    let mut level = 0.0;
    let mut s = 0.0;
    let mut taken = 0usize;
    let mut budget = steps;
    let mut extensions = 0;
    while next < n {
        if taken == budget {
            if extensions == resolution.max_extensions {
                return Err(Error::GridExhausted { level: grid.point(next), s_range: s });
            }
            extensions += 1;
            budget *= 2;
        }
        let new_level = level + inc * spec.sample(rng);
        while next < n && new_level > grid.point(next) {
            let u = grid.point(next);
            values[next] = s + delta * (u - level) / (new_level - level);
            next += 1;
        }
        level = new_level;
        s += delta;
        taken += 1;
    }
    ProcessPath::new(grid, values)
}

/// Exact one-dimensional marginal: `V_α(u) =d (u / D_α(1))^α`.
pub fn sample_inverse_subordinator_marginal<R: Rng + ?Sized>(alpha: f64, u: f64, rng: &mut R) -> Result<f64> {
    let spec = StableSpec::positive_subordinator(alpha)?;
    Ok((u / spec.sample(rng)).powf(alpha))
}

/// Weights `k^β − (k−1)^β`, k = 1..n, shared by every grid point.
fn fractional_weights(beta: f64, n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    let mut prev = 0.0;
    for k in 1..=n {
        let cur = (k as f64).powf(beta);
        w.push(cur - prev);
        prev = cur;
    }
    w
}

/// `Y(u_j) = Σ_{i<j} w(u_i) [(u_j − u_i)^β − (u_j − u_{i+1})^β]`, the exact
/// Stieltjes sum of `∫ w(y) d(−(u−y)^β)` for piecewise-constant `w`.
/// β = 0 returns the input.
pub fn fractional_integral_path(w: &ProcessPath, beta: f64) -> Result<ProcessPath> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("fractional order must be >= 0, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(w.clone());
    }
    let n = w.n_points();
    let weights = fractional_weights(beta, n);
    let dpow = w.grid().step().powf(beta);
    let x = w.values();
    let values = (0..n).map(|j| dpow * (0..j).map(|i| x[i] * weights[j - i - 1]).sum::<f64>()).collect();
    ProcessPath::new(w.grid(), values)
}

/// The same sum at the last grid point only, in O(n).
pub fn fractional_integral_last(w: &ProcessPath, beta: f64) -> Result<f64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("fractional order must be >= 0, got {beta}")));
    }
    if beta == 0.0 {
        return Ok(w.last());
    }
    let n = w.n_points();
    let weights = fractional_weights(beta, n);
    let x = w.values();
    let j = n - 1;
    Ok(w.grid().step().powf(beta) * (0..j).map(|i| x[i] * weights[j - i - 1]).sum::<f64>())
}

/// `Y_{α,β}(u_max)` from a fresh Lévy path, without storing the path.
///
/// Uses `Y(u_n) = Σ_k ΔW_k (u_n − u_{k+1})^β` (summation by parts of the
/// left-endpoint sum), which needs only the increments.
pub fn sample_fractional_stable_last<R: Rng + ?Sized>(
    spec: &StableSpec,
    beta: f64,
    u_max: f64,
    n: usize,
    rng: &mut R,
) -> Result<f64> {
    let grid = UniformGrid::new(u_max, n)?;
    let dx = grid.step();
    let inc = dx.powf(1.0 / spec.alpha());
    let mut acc = 0.0;
    for k in 0..n - 1 {
        let lag = (n - 2 - k) as f64 * dx;
        let weight = if beta == 0.0 { 1.0 } else { lag.powf(beta) };
        acc += weight * inc * spec.sample(rng);
    }
    Ok(acc)
}

/// `Z_{α,β}(u) = ∫₀^u (u − y)^β dV_α(y)` for one fresh subordinator path.
///
/// Since `V_α` inverts `D_α`, the integral equals `∫₀^{V(u)} (u − D(s))^β ds`;
/// this evaluates it on the same `s`-grid the first-passage sampler uses,
/// without forming the `u`-grid path.
pub fn sample_fractional_inverse_last<R: Rng + ?Sized>(
    alpha: f64,
    beta: f64,
    u: f64,
    resolution: SubordinatorGrid,
    rng: &mut R,
) -> Result<f64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("fractional order must be >= 0, got {beta}")));
    }
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u must be positive, got {u}")));
    }
    let spec = StableSpec::positive_subordinator(alpha)?;
    let initial_range = 4.0 * mean_inverse_subordinator(alpha, u);
    let steps = (resolution.steps_per_point * 2).max(resolution.min_steps);
    let delta = initial_range / steps as f64;
    let inc = delta.powf(1.0 / alpha);

    let mut level = 0.0;
    let mut acc = 0.0;
    let mut taken = 0usize;
    let mut budget = steps;
    let mut extensions = 0;
    loop {
        if taken == budget {
            if extensions == resolution.max_extensions {
                return Err(Error::GridExhausted { level: u, s_range: taken as f64 * delta });
            }
            extensions += 1;
            budget *= 2;
        }
        let new_level = level + inc * spec.sample(rng);
        if new_level > u {
            // partial last step, same linear interpolation as the path sampler
            let frac = (u - level) / (new_level - level);
            acc += frac * delta * (u - level).powf(beta);
            return Ok(acc);
        }
        acc += delta * (u - level).powf(beta);
        level = new_level;
        taken += 1;
    }
}
