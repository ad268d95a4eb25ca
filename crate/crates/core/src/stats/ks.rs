//! Kolmogorov–Smirnov statistics with asymptotic p-values.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub distance: f64,
    pub p_value: f64,
}

/// `Q(λ) = P{sup|B°| > λ} = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
///
/// For small λ the alternating series converges slowly, so the Jacobi
/// theta form `1 − √(2π)/λ Σ_{k≥1} e^{−(2k−1)²π²/(8λ²)}` is used instead.
pub fn kolmogorov_p_value(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 0.2 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        let pi2 = std::f64::consts::PI.powi(2);
        let s: f64 = (1..=8)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * pi2 / (8.0 * lambda * lambda)).exp()
            })
            .sum();
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let mut s = 0.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            s += if k % 2 == 1 { term } else { -term };
            if term < 1e-17 {
                break;
            }
        }
        2.0 * s
    };
    p.clamp(0.0, 1.0)
}

/// Two-sample statistic for sorted samples; ties are stepped over together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs nonempty samples");
    debug_assert!(a.windows(2).all(|w| w[0] <= w[1]) && b.windows(2).all(|w| w[0] <= w[1]));
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    KsResult { distance: d, p_value: kolmogorov_p_value(ne.sqrt() * d) }
}

/// One-sample statistic of a sorted sample against a continuous CDF.
pub fn ks_one_sample(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    assert!(!sorted.is_empty(), "KS needs a nonempty sample");
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max((j as f64 / n - f).abs()).max((f - i as f64 / n).abs());
        i = j;
    }
    KsResult { distance: d, p_value: kolmogorov_p_value(n.sqrt() * d) }
}

/// CDF of `N(0, sd²)`.
pub fn normal_cdf(x: f64, sd: f64) -> f64 {
    0.5 * libm::erfc(-x / (sd * std::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamSeed;
    use rand_distr::{Distribution, StandardNormal};

    fn normal_sample(seed: &StreamSeed, index: u64, n: usize) -> Vec<f64> {
        let mut rng = seed.stream(index);
        let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn kolmogorov_tail_values() {
        // standard table: Q(1.36) ≈ 0.049, Q(1.63) ≈ 0.010, Q(0.5) ≈ 0.964
        assert!((kolmogorov_p_value(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_p_value(1.628) - 0.01).abs() < 1e-3);
        assert!((kolmogorov_p_value(0.5) - 0.9639).abs() < 1e-3);
        assert_eq!(kolmogorov_p_value(0.0), 1.0);
        // the two series meet continuously
        let (lo, hi) = (kolmogorov_p_value(1.18 - 1e-9), kolmogorov_p_value(1.18 + 1e-9));
        assert!((lo - hi).abs() < 1e-8);
    }

    #[test]
    fn identical_and_disjoint_samples() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let r = ks_two_sample(&a, &a);
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.p_value, 1.0);
        let zeros = vec![0.0; 1000];
        let ones = vec![1.0; 1000];
        assert_eq!(ks_two_sample(&zeros, &ones).distance, 1.0);
    }

    #[test]
    fn null_calibration() {
        let seed = StreamSeed::new(11);
        let reps = 200;
        let rejections = (0..reps)
            .filter(|&r| {
                let a = normal_sample(&seed, 2 * r, 10_000);
                let b = normal_sample(&seed, 2 * r + 1, 10_000);
                ks_two_sample(&a, &b).p_value < 0.05
            })
            .count();
        let frac = rejections as f64 / reps as f64;
        assert!((0.02..=0.09).contains(&frac), "{frac}");
    }

    #[test]
    fn one_sample_against_normal_cdf() {
        let seed = StreamSeed::new(12);
        let a = normal_sample(&seed, 0, 20_000);
        let r = ks_one_sample(&a, |x| normal_cdf(x, 1.0));
        assert!(r.p_value > 0.001, "{r:?}");
        let shifted: Vec<f64> = a.iter().map(|x| x + 0.1).collect();
        assert!(ks_one_sample(&shifted, |x| normal_cdf(x, 1.0)).p_value < 1e-6);
        assert!((normal_cdf(1.0, 1.0) - 0.841_344_746_068_543).abs() < 1e-14);
    }
}
