//! Moment summaries with compensated summation.

use serde::Serialize;

/// Neumaier's compensated sum; the result depends only on the input order.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn compensated_mean(xs: impl Iterator<Item = f64>, n: usize) -> f64 {
    let mut s = NeumaierSum::default();
    xs.for_each(|x| s.add(x));
    s.value() / n as f64
}

/// Mean, spread and sorted copy of a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    /// `Σ(x − mean)² / (n − 1)`
    pub variance: f64,
    /// third standardized central moment
    pub skew_proxy: f64,
    pub standard_error_mean: f64,
    #[serde(skip)]
    pub sorted: Vec<f64>,
}

impl SampleSummary {
    /// Summarizes a nonempty, NaN-free sample.
    pub fn new(sample: &[f64]) -> Self {
        let n = sample.len();
        assert!(n > 0, "empty sample");
        let mean = compensated_mean(sample.iter().copied(), n);
        let variance = if n > 1 {
            compensated_mean(sample.iter().map(|x| (x - mean).powi(2)), n) * n as f64 / (n - 1) as f64
        } else {
            0.0
        };
        let m3 = compensated_mean(sample.iter().map(|x| (x - mean).powi(3)), n);
        let skew_proxy = if variance > 0.0 { m3 / variance.powf(1.5) } else { 0.0 };
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        SampleSummary { n, mean, variance, skew_proxy, standard_error_mean: (variance / n as f64).sqrt(), sorted }
    }
}

/// Estimate of `E X^k` with its Monte Carlo standard error.
pub fn moment_estimate(sample: &[f64], k: i32) -> (f64, f64) {
    let powers: Vec<f64> = sample.iter().map(|x| x.powi(k)).collect();
    let s = SampleSummary::new(&powers);
    (s.mean, s.standard_error_mean)
}

/// Sample covariance of paired draws with the standard error of the
/// product-moment estimator.
pub fn sample_covariance(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len(), "paired samples differ in length");
    let n = x.len();
    let mx = compensated_mean(x.iter().copied(), n);
    let my = compensated_mean(y.iter().copied(), n);
    let products: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let s = SampleSummary::new(&products);
    (s.mean * n as f64 / (n as f64 - 1.0).max(1.0), s.standard_error_mean)
}
