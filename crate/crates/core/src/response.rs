//! Response functions `h`, their centering integrals and the exponential
//! smoothing `h*(t) = E h((t − θ)⁺)` with `θ ~ Exp(1)`.
//!
//! Every built-in family is nondecreasing on `[0, ∞)` and regularly varying
//! at infinity, `h(x) ~ x^β ℓ*(x)`, with `ℓ*` either constant or a power of a
//! logarithm. Two-sided functions carry a nonincreasing, integrable left tail
//! `h(−x) = h̃(x)`, truncated where its remaining mass drops below `1e-12` of
//! the total.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Relative mass of the left tail that may be discarded.
pub const LEFT_TAIL_TRUNCATION: f64 = 1e-12;

/// Largest left reach accepted for a two-sided response. Power tails decaying
/// slower than `x^{-3}` would need renewal paths simulated absurdly far ahead.
pub const MAX_LEFT_REACH: f64 = 1e6;

/// Beyond this lag the smoothing weight `e^{-s}` is below `1e-26`.
const SMOOTHING_WINDOW: f64 = 60.0;

const CENTERING_REL_TOL: f64 = 1e-10;
const SMOOTHING_REL_TOL: f64 = 1e-13;

/// Anything that can be used as an impulse response in a shot noise sum.
pub trait Kernel: Sync {
    fn eval(&self, x: f64) -> f64;

    /// How far past the evaluation time future arrivals still contribute.
    fn left_reach(&self) -> f64 {
        0.0
    }

    /// Structure that allows evaluating the shot noise without touching
    /// every past arrival at every grid point.
    fn accumulation(&self) -> Option<Accumulation> {
        None
    }
}

/// Incrementally summable response shapes (one-sided only).
#[derive(Debug, Clone, PartialEq)]
pub enum Accumulation {
    /// `h(x) = Σ weight_i 1{x ≥ shift_i}`, so `X(t) = Σ weight_i N(t − shift_i)`.
    Counting(Vec<(f64, f64)>),
    /// `h(x) = limit (1 − e^{−rate x})`.
    Exponential { limit: f64, rate: f64 },
}

/// Slowly varying factor `ℓ*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlowlyVarying {
    /// `ℓ*(x) = c`
    Constant { c: f64 },
    /// `ℓ*(x) = c (1 + ln(1 + x))^p`
    LogPower { c: f64, p: f64 },
}

impl Default for SlowlyVarying {
    fn default() -> Self {
        SlowlyVarying::Constant { c: 1.0 }
    }
}

impl SlowlyVarying {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SlowlyVarying::Constant { c } => c,
            SlowlyVarying::LogPower { c, p } => c * (1.0 + x.max(0.0).ln_1p()).powf(p),
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            SlowlyVarying::Constant { c } | SlowlyVarying::LogPower { c, .. } => c,
        }
    }
}

/// Left tail `h̃(x) = h(−x)`, `x > 0`, of a two-sided response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LeftTail {
    /// `scale · e^{−rate·x}`
    Exponential { scale: f64, rate: f64 },
    /// `scale · (1 + x)^{−exponent}`, exponent > 1
    Power { scale: f64, exponent: f64 },
}

impl LeftTail {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            LeftTail::Exponential { scale, rate } => scale * (-rate * x).exp(),
            LeftTail::Power { scale, exponent } => scale * (1.0 + x).powf(-exponent),
        }
    }

    /// `∫₀^∞ h̃(y) dy`
    pub fn total_mass(&self) -> f64 {
        match *self {
            LeftTail::Exponential { scale, rate } => scale / rate,
            LeftTail::Power { scale, exponent } => scale / (exponent - 1.0),
        }
    }

    /// Point `L` with `∫_L^∞ h̃ = LEFT_TAIL_TRUNCATION · ∫₀^∞ h̃`.
    pub fn truncation_point(&self) -> f64 {
        match *self {
            LeftTail::Exponential { rate, .. } => -LEFT_TAIL_TRUNCATION.ln() / rate,
            LeftTail::Power { exponent, .. } => LEFT_TAIL_TRUNCATION.powf(1.0 / (1.0 - exponent)) - 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            LeftTail::Exponential { scale, rate } => {
                if !(scale >= 0.0 && scale.is_finite() && rate > 0.0 && rate.is_finite()) {
                    return Err(Error::invalid("exponential left tail needs scale >= 0, rate > 0"));
                }
            }
            LeftTail::Power { scale, exponent } => {
                if !(scale >= 0.0 && scale.is_finite() && exponent > 1.0) {
                    return Err(Error::invalid("power left tail needs scale >= 0, exponent > 1"));
                }
            }
        }
        let reach = self.truncation_point();
        if reach > MAX_LEFT_REACH {
            return Err(Error::Unsupported(format!(
                "left tail decays too slowly: truncation point {reach:e} exceeds {MAX_LEFT_REACH:e}"
            )));
        }
        Ok(())
    }
}

/// One atom of a step response: mass `mass` placed at `at`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub at: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Power { beta: f64, slowly_varying: SlowlyVarying },
    BoundedLimit { limit: f64, rate: f64 },
    StepCdf { limit: f64, steps: Vec<Step> },
    Smoothed { base: Box<ResponseFunction> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseKind {
    Power,
    BoundedLimit,
    StepCdf,
    TwoSided,
    Smoothed,
}

/// A response function with its regular-variation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseFunction {
    shape: Shape,
    left_tail: Option<LeftTail>,
    /// Eventual-monotonicity threshold: nondecreasing on `[cutoff, ∞)`.
    cutoff: f64,
}

impl ResponseFunction {
    /// `h(x) = x^β ℓ*(x)` for `x ≥ 0`.
    pub fn power(beta: f64, slowly_varying: SlowlyVarying) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::invalid(format!("beta must be finite and >= 0, got {beta}")));
        }
        let c = slowly_varying.scale();
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("slowly varying factor needs c > 0"));
        }
        if let SlowlyVarying::LogPower { p, .. } = slowly_varying {
            if !p.is_finite() {
                return Err(Error::invalid("log power must be finite"));
            }
            // β ≥ |p| keeps x^β (1 + ln(1+x))^p nondecreasing on [0, ∞)
            if p < 0.0 && beta < -p {
                return Err(Error::Unsupported(format!("log power {p} with beta {beta} is not nondecreasing from 0")));
            }
        }
        Ok(ResponseFunction { shape: Shape::Power { beta, slowly_varying }, left_tail: None, cutoff: 0.0 })
    }

    /// `h ≡ c` on `[0, ∞)`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::power(0.0, SlowlyVarying::Constant { c })
    }

    /// `h(x) = limit · (1 − e^{−rate·x})`, nondecreasing from 0 to `limit`.
    pub fn bounded_limit(limit: f64, rate: f64) -> Result<Self> {
        if !(limit > 0.0 && limit.is_finite() && rate > 0.0 && rate.is_finite()) {
            return Err(Error::invalid("bounded limit needs limit > 0 and rate > 0"));
        }
        Ok(ResponseFunction { shape: Shape::BoundedLimit { limit, rate }, left_tail: None, cutoff: 0.0 })
    }

    /// Right-continuous step function `limit · Σ mass_i 1{x ≥ at_i}`; masses sum to one.
    pub fn step_cdf(limit: f64, mut steps: Vec<Step>) -> Result<Self> {
        if !(limit > 0.0 && limit.is_finite()) {
            return Err(Error::invalid("step response needs limit > 0"));
        }
        if steps.is_empty() {
            return Err(Error::invalid("step response needs at least one step"));
        }
        if steps.iter().any(|s| !(s.at >= 0.0 && s.at.is_finite() && s.mass >= 0.0)) {
            return Err(Error::invalid("steps need at >= 0 and mass >= 0"));
        }
        let total: f64 = steps.iter().map(|s| s.mass).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("step masses must sum to 1, got {total}")));
        }
        steps.sort_by(|a, b| a.at.total_cmp(&b.at));
        Ok(ResponseFunction { shape: Shape::StepCdf { limit, steps }, left_tail: None, cutoff: 0.0 })
    }

    /// The indicator `1_{[0,∞)}`, for which the shot noise is `N(t)`.
    pub fn indicator() -> Self {
        Self::step_cdf(1.0, vec![Step { at: 0.0, mass: 1.0 }]).expect("valid indicator")
    }

    /// Attach a left tail, producing a two-sided response.
    pub fn with_left_tail(mut self, tail: LeftTail) -> Result<Self> {
        if matches!(self.shape, Shape::Smoothed { .. }) {
            return Err(Error::Unsupported("smoothed responses are one-sided".into()));
        }
        tail.validate()?;
        self.left_tail = Some(tail);
        Ok(self)
    }

    pub fn kind(&self) -> ResponseKind {
        if self.left_tail.is_some() {
            return ResponseKind::TwoSided;
        }
        match self.shape {
            Shape::Power { .. } => ResponseKind::Power,
            Shape::BoundedLimit { .. } => ResponseKind::BoundedLimit,
            Shape::StepCdf { .. } => ResponseKind::StepCdf,
            Shape::Smoothed { .. } => ResponseKind::Smoothed,
        }
    }

    pub fn left_tail(&self) -> Option<&LeftTail> {
        self.left_tail.as_ref()
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Regular-variation index β.
    pub fn beta(&self) -> f64 {
        match &self.shape {
            Shape::Power { beta, .. } => *beta,
            Shape::BoundedLimit { .. } | Shape::StepCdf { .. } => 0.0,
            Shape::Smoothed { base } => base.beta(),
        }
    }

    /// Asymptotic slowly varying factor ℓ*.
    pub fn slowly_varying(&self) -> SlowlyVarying {
        match &self.shape {
            Shape::Power { slowly_varying, .. } => *slowly_varying,
            Shape::BoundedLimit { limit, .. } | Shape::StepCdf { limit, .. } => SlowlyVarying::Constant { c: *limit },
            Shape::Smoothed { base } => base.slowly_varying(),
        }
    }

    /// The regularly varying envelope `x^β ℓ*(x)`.
    pub fn asymptotic(&self, x: f64) -> f64 {
        x.powf(self.beta()) * self.slowly_varying().eval(x)
    }

    /// Jump locations of `h` on `[0, ∞)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.shape {
            Shape::StepCdf { steps, .. } => steps.iter().map(|s| s.at).collect(),
            _ => Vec::new(),
        }
    }

    /// `h(x)`. One-sided responses vanish for `x < 0`.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return match &self.left_tail {
                Some(tail) if -x <= tail.truncation_point() => tail.eval(-x),
                _ => 0.0,
            };
        }
        match &self.shape {
            Shape::Power { beta, slowly_varying } => x.powf(*beta) * slowly_varying.eval(x),
            Shape::BoundedLimit { limit, rate } => -limit * (-rate * x).exp_m1(),
            Shape::StepCdf { limit, steps } => {
                let mass: f64 = steps.iter().take_while(|s| s.at <= x).map(|s| s.mass).sum();
                limit * mass
            }
            Shape::Smoothed { base } => smoothed_eval(base, x),
        }
    }

    /// `h*(t) = E h((t − θ)⁺)`, θ standard exponential.
    ///
    /// Evaluated through `h*(t) = e^{−t} h(0) + ∫₀^t h(t − s) e^{−s} ds`, which
    /// never forms `e^{y}` for large `y`.
    pub fn smooth(&self) -> Result<ResponseFunction> {
        self.check_smoothable()?;
        Ok(ResponseFunction { shape: Shape::Smoothed { base: Box::new(self.clone()) }, left_tail: None, cutoff: 0.0 })
    }

    /// `∫₀^t (h − h*)(y) dy`.
    ///
    /// Since `h*′ = h − h*`, this equals `h*(t) − h(0)`.
    pub fn smoothing_deficit(&self, t: f64) -> Result<f64> {
        self.check_smoothable()?;
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(smoothed_eval(self, t) - self.eval(0.0))
    }

    fn check_smoothable(&self) -> Result<()> {
        if self.left_tail.is_some() {
            return Err(Error::Unsupported("smoothing requires a one-sided response".into()));
        }
        let h0 = self.eval(0.0);
        if !h0.is_finite() {
            return Err(Error::invalid("smoothing requires finite h(0)"));
        }
        Ok(())
    }

    /// `∫₀^T h(y) dy`. Closed form where available, adaptive Simpson otherwise.
    pub fn centering_integral(&self, upper: f64) -> Result<f64> {
        if upper < 0.0 {
            return Err(Error::invalid(format!("centering integral needs T >= 0, got {upper}")));
        }
        if upper == 0.0 {
            return Ok(0.0);
        }
        match &self.shape {
            Shape::Power { beta, slowly_varying: SlowlyVarying::Constant { c } } => {
                Ok(c * upper.powf(beta + 1.0) / (beta + 1.0))
            }
            Shape::Power { .. } => adaptive_simpson(|y| self.eval(y), 0.0, upper, CENTERING_REL_TOL, &[]),
            Shape::BoundedLimit { limit, rate } => {
                // limit · (T − (1 − e^{−rT})/r)
                Ok(limit * (upper + (-rate * upper).exp_m1() / rate))
            }
            Shape::StepCdf { limit, steps } => {
                Ok(limit * steps.iter().map(|s| s.mass * (upper - s.at).max(0.0)).sum::<f64>())
            }
            Shape::Smoothed { base } => Ok(base.centering_integral(upper)? - base.smoothing_deficit(upper)?),
        }
    }
}

fn smoothed_eval(base: &ResponseFunction, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let h0 = base.eval(0.0);
    let window = t.min(SMOOTHING_WINDOW);
    // jumps of h at y = loc sit at lag s = t − loc
    let cuts: Vec<f64> = base.breakpoints().iter().map(|&loc| t - loc).collect();
    let integrand = |s: f64| base.eval(t - s) * (-s).exp();
    let body = adaptive_simpson(integrand, 0.0, window, SMOOTHING_REL_TOL, &cuts)
        .expect("smoothing integrand is bounded on a finite window");
    h0 * (-t).exp() + body
}

impl Kernel for ResponseFunction {
    fn eval(&self, x: f64) -> f64 {
        ResponseFunction::eval(self, x)
    }

    fn left_reach(&self) -> f64 {
        self.left_tail.map_or(0.0, |t| t.truncation_point())
    }

    fn accumulation(&self) -> Option<Accumulation> {
        if self.left_tail.is_some() {
            return None;
        }
        match &self.shape {
            Shape::Power { beta, slowly_varying: SlowlyVarying::Constant { c } } if *beta == 0.0 => {
                Some(Accumulation::Counting(vec![(0.0, *c)]))
            }
            Shape::StepCdf { limit, steps } => {
                Some(Accumulation::Counting(steps.iter().map(|s| (s.at, limit * s.mass)).collect()))
            }
            Shape::BoundedLimit { limit, rate } => Some(Accumulation::Exponential { limit: *limit, rate: *rate }),
            _ => None,
        }
    }
}

/// Parameter form of a response function, as written in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ResponseSpec {
    Power {
        beta: f64,
        #[serde(default)]
        slowly_varying: SlowlyVarying,
        #[serde(default)]
        left_tail: Option<LeftTail>,
    },
    Constant {
        c: f64,
        #[serde(default)]
        left_tail: Option<LeftTail>,
    },
    BoundedLimit {
        limit: f64,
        rate: f64,
        #[serde(default)]
        left_tail: Option<LeftTail>,
    },
    StepCdf {
        limit: f64,
        steps: Vec<Step>,
        #[serde(default)]
        left_tail: Option<LeftTail>,
    },
    Indicator,
}

impl ResponseSpec {
    pub fn build(&self) -> Result<ResponseFunction> {
        let (h, tail) = match self {
            ResponseSpec::Power { beta, slowly_varying, left_tail } => {
                (ResponseFunction::power(*beta, *slowly_varying)?, *left_tail)
            }
            ResponseSpec::Constant { c, left_tail } => (ResponseFunction::constant(*c)?, *left_tail),
            ResponseSpec::BoundedLimit { limit, rate, left_tail } => {
                (ResponseFunction::bounded_limit(*limit, *rate)?, *left_tail)
            }
            ResponseSpec::StepCdf { limit, steps, left_tail } => {
                (ResponseFunction::step_cdf(*limit, steps.clone())?, *left_tail)
            }
            ResponseSpec::Indicator => (ResponseFunction::indicator(), None),
        };
        match tail {
            Some(t) => h.with_left_tail(t),
            None => Ok(h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn identity() -> ResponseFunction {
        ResponseFunction::power(1.0, SlowlyVarying::Constant { c: 1.0 }).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(identity().eval(2.0), 2.0);
        for h in [identity(), ResponseFunction::constant(2.0).unwrap(), ResponseFunction::indicator()] {
            assert_eq!(h.eval(-1.0), 0.0);
        }
        let bounded = ResponseFunction::bounded_limit(3.0, 0.5).unwrap();
        assert!((bounded.eval(200.0) - 3.0).abs() < 1e-12);
        assert_eq!(bounded.beta(), 0.0);
        assert_eq!(bounded.slowly_varying(), SlowlyVarying::Constant { c: 3.0 });
    }

    #[test]
    fn step_cdf_is_right_continuous() {
        let h =
            ResponseFunction::step_cdf(2.0, vec![Step { at: 1.0, mass: 0.25 }, Step { at: 0.0, mass: 0.75 }]).unwrap();
        assert_eq!(h.eval(0.0), 1.5);
        assert_eq!(h.eval(0.999), 1.5);
        assert_eq!(h.eval(1.0), 2.0);
        assert!(ResponseFunction::step_cdf(1.0, vec![Step { at: 0.0, mass: 0.5 }]).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ResponseFunction::power(-0.1, SlowlyVarying::default()).is_err());
        assert!(ResponseFunction::power(0.2, SlowlyVarying::LogPower { c: 1.0, p: -1.0 }).is_err());
        assert!(ResponseFunction::bounded_limit(0.0, 1.0).is_err());
        let slow = LeftTail::Power { scale: 1.0, exponent: 2.0 };
        assert!(identity().with_left_tail(slow).is_err());
    }

    #[test]
    fn smoothing_of_identity_matches_closed_form() {
        let hs = identity().smooth().unwrap();
        for &t in &[0.0_f64, 0.1, 1.0, 10.0, 100.0, 1e3] {
            // E (t − θ)⁺ = t − 1 + e^{−t}
            let exact = t - 1.0 + (-t).exp();
            assert!((hs.eval(t) - exact).abs() < 1e-9, "t = {t}: {} vs {exact}", hs.eval(t));
        }
        let ratio = hs.eval(1e6) / 1e6;
        assert!((1.0 - 1e-5..=1.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn smoothing_vanishes_at_zero_and_is_dominated() {
        let cases = [
            identity(),
            ResponseFunction::power(0.5, SlowlyVarying::LogPower { c: 2.0, p: 1.0 }).unwrap(),
            ResponseFunction::bounded_limit(1.0, 2.0).unwrap(),
            ResponseFunction::step_cdf(1.0, vec![Step { at: 0.5, mass: 0.5 }, Step { at: 2.0, mass: 0.5 }]).unwrap(),
        ];
        for h in cases {
            let hs = h.smooth().unwrap();
            assert_eq!(hs.eval(0.0), 0.0);
            let mut t = 0.0;
            while t < 50.0 {
                assert!(hs.eval(t) <= h.eval(t) + 1e-12, "{:?} at {t}", h.kind());
                t += 0.37;
            }
        }
    }

    #[test]
    fn smoothing_keeps_constant_fixed() {
        // h ≡ 1 including h(0) = 1 reproduces itself
        let hs = ResponseFunction::constant(1.0).unwrap().smooth().unwrap();
        for &t in &[0.0, 0.5, 3.0, 80.0] {
            assert!((hs.eval(t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn smoothing_rejects_two_sided() {
        let h = identity().with_left_tail(LeftTail::Exponential { scale: 1.0, rate: 1.0 }).unwrap();
        assert!(h.smooth().is_err());
        assert!(h.smoothing_deficit(1.0).is_err());
    }

    /// Brute-force ∫₀^t (h − h*) by composite Simpson on a fine grid.
    fn deficit_brute_force(h: &ResponseFunction, t: f64, panels: usize) -> f64 {
        let hs = h.smooth().unwrap();
        let dx = t / panels as f64;
        let g = |y: f64| h.eval(y) - hs.eval(y);
        let mut acc = g(0.0) + g(t);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * g(i as f64 * dx);
        }
        acc * dx / 3.0
    }

    #[test]
    fn smoothing_deficit_matches_brute_force() {
        let h = ResponseFunction::power(0.5, SlowlyVarying::Constant { c: 1.0 }).unwrap();
        let direct = deficit_brute_force(&h, 40.0, 4000);
        let identity_route = h.smoothing_deficit(40.0).unwrap();
        assert!((direct - identity_route).abs() < 1e-4, "{direct} vs {identity_route}");
    }

    #[test]
    fn smoothing_deficit_is_asymptotic_to_h() {
        let cases = [
            ResponseFunction::bounded_limit(1.0, 1.0).unwrap(),
            ResponseFunction::power(0.5, SlowlyVarying::default()).unwrap(),
            identity(),
            ResponseFunction::power(2.0, SlowlyVarying::default()).unwrap(),
        ];
        for h in cases {
            let t = 1e4;
            let ratio = h.smoothing_deficit(t).unwrap() / h.eval(t);
            assert!((ratio - 1.0).abs() < 0.05, "beta {}: ratio {ratio}", h.beta());
        }
    }

    #[test]
    fn centering_examples() {
        assert_eq!(ResponseFunction::constant(1.0).unwrap().centering_integral(5.0).unwrap(), 5.0);
        let sq = ResponseFunction::power(2.0, SlowlyVarying::default()).unwrap();
        assert!((sq.centering_integral(3.0).unwrap() - 9.0).abs() < 1e-12);
        let step = ResponseFunction::indicator();
        assert_eq!(step.centering_integral(2.5).unwrap(), 2.5);
        let bounded = ResponseFunction::bounded_limit(2.0, 1.0).unwrap();
        let expect = 2.0 * (4.0 - (1.0 - (-4f64).exp()));
        assert!((bounded.centering_integral(4.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn centering_log_power_matches_midpoint_sum() {
        let h = ResponseFunction::power(0.5, SlowlyVarying::LogPower { c: 1.0, p: 1.0 }).unwrap();
        let t = 10.0;
        let panels = 1_000_000;
        let dx = t / panels as f64;
        let mid: f64 = (0..panels).map(|i| h.eval((i as f64 + 0.5) * dx)).sum::<f64>() * dx;
        let q = h.centering_integral(t).unwrap();
        assert!(((q - mid) / mid).abs() < 1e-6, "{q} vs {mid}");
    }

    #[test]
    fn centering_of_smoothed_uses_deficit() {
        let h = identity();
        let hs = h.smooth().unwrap();
        let t = 7.0;
        let direct = adaptive_simpson(|y| hs.eval(y), 0.0, t, 1e-11, &[]).unwrap();
        assert!((hs.centering_integral(t).unwrap() - direct).abs() < 1e-8);
    }

    #[test]
    fn regular_variation_ratio() {
        for beta in [0.0, 0.5, 1.0, 2.0] {
            let h = ResponseFunction::power(beta, SlowlyVarying::Constant { c: 1.7 }).unwrap();
            for lambda in [2.0, 10.0] {
                let r = h.eval(lambda * 1e6) / h.eval(1e6);
                assert!((r / f64::powf(lambda, beta) - 1.0).abs() < 0.01);
            }
        }
        let h = ResponseFunction::power(1.0, SlowlyVarying::LogPower { c: 1.0, p: 2.0 }).unwrap();
        let mut x = 1e2;
        while x < 1e12 {
            assert!((h.eval(x) / h.asymptotic(x) - 1.0).abs() < 1e-12);
            x *= 10.0;
        }
    }

    #[test]
    fn left_tail_truncation_mass() {
        let tail = LeftTail::Exponential { scale: 1.0, rate: 1.0 };
        let l = tail.truncation_point();
        assert!(((-l).exp() - 1e-12).abs() < 1e-20);
        let h = identity().with_left_tail(tail).unwrap();
        assert_eq!(h.kind(), ResponseKind::TwoSided);
        assert!((h.eval(-1.0) - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(h.eval(-(l + 1.0)), 0.0);
        assert_eq!(Kernel::left_reach(&h), l);
        let pow = LeftTail::Power { scale: 2.0, exponent: 5.0 };
        let l = pow.truncation_point();
        let remaining = 2.0 * (1.0 + l).powf(-4.0) / 4.0;
        assert!((remaining / pow.total_mass() - 1e-12).abs() < 1e-18);
    }

    proptest! {
        #[test]
        fn eventually_nondecreasing(beta in 0.0f64..3.0, p in 0.0f64..2.0, x in 0.0f64..1e4, dx in 0.0f64..10.0) {
            let h = ResponseFunction::power(beta, SlowlyVarying::LogPower { c: 1.0, p }).unwrap();
            prop_assert!(h.eval(x + dx) >= h.eval(x));
        }
    }
}
