//! Empirical characteristic function against a log-CF oracle.

use num_complex::Complex64;
use serde::Serialize;

use super::summary::NeumaierSum;

const EXACT_MATCH: f64 = 1e-12;

/// Componentwise comparison at one argument `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcfDeviation {
    pub z: f64,
    pub empirical: Complex64,
    pub oracle: Complex64,
    pub se_re: f64,
    pub se_im: f64,
    /// larger of the two componentwise gaps, in standard errors
    pub deviation: f64,
}

fn in_se_units(diff: f64, se: f64) -> f64 {
    let diff = diff.abs();
    if diff <= EXACT_MATCH {
        0.0
    } else if se > 0.0 {
        diff / se
    } else {
        f64::INFINITY
    }
}

/// Mean of `e^{izX}` with componentwise standard errors.
fn empirical_cf(sample: &[f64], z: f64) -> (Complex64, f64, f64) {
    let n = sample.len() as f64;
    let (mut c, mut s, mut c2, mut s2) =
        (NeumaierSum::default(), NeumaierSum::default(), NeumaierSum::default(), NeumaierSum::default());
    for &x in sample {
        let (si, co) = (z * x).sin_cos();
        c.add(co);
        s.add(si);
        c2.add(co * co);
        s2.add(si * si);
    }
    let (mc, ms) = (c.value() / n, s.value() / n);
    let var_c = (c2.value() / n - mc * mc).max(0.0);
    let var_s = (s2.value() / n - ms * ms).max(0.0);
    (Complex64::new(mc, ms), (var_c / n).sqrt(), (var_s / n).sqrt())
}

/// Per-`z` deviations of the empirical CF from `exp(log_cf(z))`.
pub fn ecf_deviations(sample: &[f64], log_cf: impl Fn(f64) -> Complex64, z_grid: &[f64]) -> Vec<EcfDeviation> {
    assert!(!sample.is_empty(), "ECF needs a nonempty sample");
    z_grid
        .iter()
        .map(|&z| {
            let (empirical, se_re, se_im) = empirical_cf(sample, z);
            let oracle = log_cf(z).exp();
            let deviation =
                in_se_units(empirical.re - oracle.re, se_re).max(in_se_units(empirical.im - oracle.im, se_im));
            EcfDeviation { z, empirical, oracle, se_re, se_im, deviation }
        })
        .collect()
}

/// Largest componentwise deviation over `z_grid`, in standard errors.
pub fn ecf_test(sample: &[f64], log_cf: impl Fn(f64) -> Complex64, z_grid: &[f64]) -> f64 {
    ecf_deviations(sample, log_cf, z_grid).iter().map(|d| d.deviation).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::stable_log_cf;
    use crate::rng::StreamSeed;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(seed: u64, index: u64, n: usize) -> Vec<f64> {
        let mut rng = StreamSeed::new(seed).stream(index);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn degenerate_sample_matches_trivial_cf() {
        let zeros = vec![0.0; 1000];
        assert_eq!(ecf_test(&zeros, |_| Complex64::new(0.0, 0.0), &[0.5, 1.0, 2.0]), 0.0);
        assert_eq!(ecf_test(&zeros, |_| Complex64::new(-1.0, 0.0), &[1.0]), f64::INFINITY);
    }

    #[test]
    fn calibrated_under_the_null() {
        let gauss = |z: f64| stable_log_cf(2.0, z).unwrap();
        let reps = 100;
        let exceed = (0..reps).filter(|&r| ecf_test(&gaussian(21, r, 10_000), gauss, &[0.5, 1.0, 2.0]) >= 4.0).count();
        assert!(exceed <= 1, "{exceed} of {reps}");
    }

    #[test]
    fn detects_the_wrong_law() {
        let sample = gaussian(22, 0, 100_000);
        let stable = |z: f64| stable_log_cf(1.5, z).unwrap();
        assert!(ecf_test(&sample, stable, &[1.0]) > 10.0);
    }
}
