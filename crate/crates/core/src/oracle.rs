//! Closed-form reference values for the limit processes.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, trapezoid};
use crate::renewal::LimitCase;
use crate::special::{beta as beta_fn, factorial, gamma, ln_gamma};

/// A function sampled on a uniform grid over `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    a: f64,
    b: f64,
    values: Vec<f64>,
}

impl Tabulated {
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::invalid(format!("tabulation interval [{a}, {b}] is empty")));
        }
        if values.len() < 2 {
            return Err(Error::invalid("tabulation needs at least two points"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("tabulated values must be finite"));
        }
        Ok(Tabulated { a, b, values })
    }

    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("tabulation needs at least two points"));
        }
        let dx = (b - a) / (n - 1) as f64;
        Self::new(a, b, (0..n).map(|i| f(a + i as f64 * dx)).collect())
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / (self.values.len() - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `log E e^{izW_α(1)}`.
///
/// α ∈ (1, 2): `−|z|^α Γ(1−α)(cos(πα/2) + i sin(πα/2) sgn z)`;
/// α = 1: `−|z|(π/2 − i ln|z| sgn z)`; α = 2: `−z²/2` (standard Brownian motion).
pub fn stable_log_cf(alpha: f64, z: f64) -> Result<Complex64> {
    let valid = alpha == 1.0 || (alpha > 1.0 && alpha <= 2.0);
    if !valid {
        return Err(Error::invalid(format!("stable log-CF is defined here for α ∈ [1, 2], got {alpha}")));
    }
    if z == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let a = z.abs();
    let sgn = z.signum();
    Ok(if alpha == 2.0 {
        Complex64::new(-0.5 * z * z, 0.0)
    } else if alpha == 1.0 {
        Complex64::new(-a * FRAC_PI_2, a * a.ln() * sgn)
    } else {
        let half = std::f64::consts::PI * alpha / 2.0;
        let m = -a.powf(alpha) * gamma(1.0 - alpha);
        Complex64::new(m * half.cos(), m * half.sin() * sgn)
    })
}

/// `∫ log E exp(iz f(b − y) W_α(1)) dy` over `[a, b]` by the trapezoid rule.
///
/// The reflection `y ↦ a + b − y` maps the grid onto itself, so the
/// integrand is evaluated directly at the tabulated values.
pub fn integral_log_cf(f: &Tabulated, alpha: f64, z: f64) -> Result<Complex64> {
    let mut re = Vec::with_capacity(f.values.len());
    let mut im = Vec::with_capacity(f.values.len());
    for &v in &f.values {
        let c = stable_log_cf(alpha, z * v)?;
        re.push(c.re);
        im.push(c.im);
    }
    let dx = f.step();
    Ok(Complex64::new(trapezoid(&re, dx), trapezoid(&im, dx)))
}

fn check_subordinator_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("α must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// `E V_α(u)^k = k! u^{kα} / (Γ(1−α)^k Γ(kα+1))`, from the exact marginal
/// `V_α(u) =d (u / D_α(1))^α` and the negative moments of a positive stable law.
pub fn inverse_subordinator_moment(alpha: f64, u: f64, k: u32) -> Result<f64> {
    check_subordinator_alpha(alpha)?;
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u must be >= 0, got {u}")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let k_f = k as f64;
    Ok(factorial(k) * u.powf(k_f * alpha) / (gamma(1.0 - alpha).powi(k as i32) * gamma(k_f * alpha + 1.0)))
}

/// `E Z_{α,β}(u)^k = u^{k(α+β)} k!/Γ(1−α)^k ∏_{j=1}^k Γ(β+1+(j−1)(α+β)) / Γ(j(α+β)+1)`.
///
/// β = 0 is answered by [`inverse_subordinator_moment`].
pub fn z_moment(alpha: f64, beta: f64, u: f64, k: u32) -> Result<f64> {
    check_subordinator_alpha(alpha)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("β must be >= 0, got {beta}")));
    }
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u must be >= 0, got {u}")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    if beta == 0.0 {
        return inverse_subordinator_moment(alpha, u, k);
    }
    let s = alpha + beta;
    let k_f = k as f64;
    let mut log_prod = 0.0;
    for j in 1..=k {
        let j = j as f64;
        log_prod += ln_gamma(beta + 1.0 + (j - 1.0) * s) - ln_gamma(j * s + 1.0);
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    Ok((k_f * s * u.ln() + factorial(k).ln() - k_f * gamma(1.0 - alpha).ln() + log_prod).exp())
}

/// `Φ_α(x) = Γ(1−α)Γ(αx+1)/Γ(α(x−1)+1) − 1`.
pub fn phi_alpha(alpha: f64, x: f64) -> Result<f64> {
    check_subordinator_alpha(alpha)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::invalid(format!("x must be >= 0, got {x}")));
    }
    Ok(gamma(1.0 - alpha) * gamma(alpha * x + 1.0) / gamma(alpha * (x - 1.0) + 1.0) - 1.0)
}

/// `k! / ∏_{j=1}^k (Φ_α(cj) + 1)` with `c = (α+β)/α`; equals `z_moment(α, β, 1, k)`.
pub fn z_moment_product_form(alpha: f64, beta: f64, k: u32) -> Result<f64> {
    let c = (alpha + beta) / alpha;
    let mut denom = 1.0;
    for j in 1..=k {
        denom *= phi_alpha(alpha, c * j as f64)? + 1.0;
    }
    Ok(factorial(k) / denom)
}

/// `k! / ∏_{j=1}^k (1−α+j(α+β)) B(1−α, 1+j(α+β))`; equals `z_moment(α, β, 1, k)`
/// because each factor equals `Φ_α(cj) + 1`.
pub fn z_moment_beta_form(alpha: f64, beta: f64, k: u32) -> Result<f64> {
    check_subordinator_alpha(alpha)?;
    let s = alpha + beta;
    let denom: f64 = (1..=k)
        .map(|j| {
            let js = j as f64 * s;
            (1.0 - alpha + js) * beta_fn(1.0 - alpha, 1.0 + js)
        })
        .product();
    Ok(factorial(k) / denom)
}

/// Scale in `Y_{α,β}(u) =d (u^{αβ+1}/(αβ+1))^{1/α} W_α(1)`.
pub fn p3_scale(alpha: f64, beta: f64, u: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::invalid(format!("α must lie in (1, 2], got {alpha}")));
    }
    if !(beta >= 0.0 && u > 0.0) {
        return Err(Error::invalid(format!("need β >= 0 and u > 0, got β={beta}, u={u}")));
    }
    let e = alpha * beta + 1.0;
    Ok((u.powf(e) / e).powf(1.0 / alpha))
}

/// Second and fourth moments of `∫ f dW₂`: `(∫f², 3(∫f²)²)`.
pub fn gaussian_moments(f: &Tabulated) -> (f64, f64) {
    let sq: Vec<f64> = f.values.iter().map(|v| v * v).collect();
    let m2 = trapezoid(&sq, f.step());
    (m2, 3.0 * m2 * m2)
}

/// `Cov(Y_{2,β}(v), Y_{2,β}(u)) = ∫₀^v (u−y)^β (v−y)^β dy`, `0 < v ≤ u`.
pub fn gaussian_cov(beta: f64, u: f64, v: f64) -> Result<f64> {
    if !(beta >= 0.0 && v > 0.0 && v <= u && u.is_finite()) {
        return Err(Error::invalid(format!("gaussian_cov needs β >= 0 and 0 < v <= u, got β={beta}, u={u}, v={v}")));
    }
    if beta == 0.0 {
        return Ok(v);
    }
    // y = v − w² removes the endpoint singularity of the derivative
    let gap = u - v;
    let g = |w: f64| {
        let w2 = w * w;
        2.0 * w * (gap + w2).powf(beta) * w2.powf(beta)
    };
    adaptive_simpson(g, 0.0, v.sqrt(), 1e-10, &[])
}

/// Self-similarity index of the limit: `β + 1/α` (stable-driven), `β + α` (A4).
pub fn hurst_exponent(case: LimitCase, alpha: f64, beta: f64) -> f64 {
    match case {
        LimitCase::A4 => beta + alpha,
        LimitCase::A1 | LimitCase::A2 | LimitCase::A3 | LimitCase::A5 => beta + 1.0 / alpha,
    }
}

/// `E Z_{α,β}(u)^k` for `k = 1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub alpha: f64,
    pub beta: f64,
    pub u: f64,
    pub moments: Vec<f64>,
}

impl MomentTable {
    pub fn new(alpha: f64, beta: f64, u: f64, max_k: u32) -> Result<Self> {
        if max_k == 0 {
            return Err(Error::invalid("moment table needs k >= 1"));
        }
        if !(u > 0.0) {
            return Err(Error::invalid(format!("moment table needs u > 0, got {u}")));
        }
        let moments = (1..=max_k).map(|k| z_moment(alpha, beta, u, k)).collect::<Result<Vec<_>>>()?;
        Ok(MomentTable { alpha, beta, u, moments })
    }
}
