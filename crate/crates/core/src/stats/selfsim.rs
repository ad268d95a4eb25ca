//! Self-similarity checks `X(cu) =d c^H X(u)` for the fractionally integrated
//! limit processes, by repeated two-sample KS tests.

use serde::Serialize;

use super::ks::ks_two_sample;
use super::parallel_map;
use crate::config::{SelfSimConfig, SelfSimProcess};
use crate::error::{Error, Result};
use crate::limits::{sample_fractional_inverse_last, sample_fractional_stable_last, StableSpec, SubordinatorGrid};
use crate::rng::StreamSeed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfSimRepetition {
    pub repetition: usize,
    pub distance: f64,
    pub p_value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfSimReport {
    pub process: SelfSimProcess,
    pub alpha: f64,
    pub beta: f64,
    pub hurst: f64,
    pub dilation: f64,
    pub p_threshold: f64,
    pub repetitions: Vec<SelfSimRepetition>,
    pub passes: usize,
    pub passed: bool,
}

enum Sampler {
    Y(StableSpec),
    Z(SubordinatorGrid),
}

impl Sampler {
    fn draw(&self, cfg: &SelfSimConfig, u: f64, seed: &StreamSeed, index: u64) -> Result<f64> {
        let mut rng = seed.stream(index);
        match self {
            Sampler::Y(spec) => sample_fractional_stable_last(spec, cfg.beta, u, cfg.grid_points, &mut rng),
            Sampler::Z(grid) => sample_fractional_inverse_last(cfg.alpha, cfg.beta, u, *grid, &mut rng),
        }
    }
}

/// Runs `cfg.repetitions` independent KS comparisons of `X(c·u)` against
/// `c^H·X(u)`, each on `cfg.paths` draws per side.
pub fn run(cfg: &SelfSimConfig, seed: u64, p_threshold: f64, threads: usize) -> Result<SelfSimReport> {
    let (sampler, hurst) = match cfg.process {
        SelfSimProcess::Y => {
            let spec = StableSpec::spectrally_negative(cfg.alpha)?;
            (Sampler::Y(spec), cfg.beta + 1.0 / cfg.alpha)
        }
        SelfSimProcess::Z => {
            if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
                return Err(Error::invalid(format!("Z needs α ∈ (0, 1), got {}", cfg.alpha)));
            }
            let grid = SubordinatorGrid { steps_per_point: 1, min_steps: cfg.subordinator_steps, max_extensions: 4 };
            (Sampler::Z(grid), cfg.beta + cfg.alpha)
        }
    };
    let factor = cfg.dilation.powf(hurst);
    let root = StreamSeed::new(seed).derive("selfsim");
    let mut repetitions = Vec::with_capacity(cfg.repetitions);
    for rep in 0..cfg.repetitions {
        let s = root.derive_index(rep as u64);
        let n = cfg.paths;
        let mut dilated = parallel_map(threads, n, |i| sampler.draw(cfg, cfg.dilation * cfg.u, &s, i as u64))?;
        let mut scaled = parallel_map(threads, n, |i| Ok(factor * sampler.draw(cfg, cfg.u, &s, (n + i) as u64)?))?;
        dilated.sort_by(f64::total_cmp);
        scaled.sort_by(f64::total_cmp);
        let ks = ks_two_sample(&dilated, &scaled);
        repetitions.push(SelfSimRepetition {
            repetition: rep,
            distance: ks.distance,
            p_value: ks.p_value,
            passed: ks.p_value > p_threshold,
        });
    }
    let passes = repetitions.iter().filter(|r| r.passed).count();
    Ok(SelfSimReport {
        process: cfg.process,
        alpha: cfg.alpha,
        beta: cfg.beta,
        hurst,
        dilation: cfg.dilation,
        p_threshold,
        passed: passes >= cfg.min_passes,
        repetitions,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brownian_and_inverse_subordinator_cases() {
        let y = SelfSimConfig {
            process: SelfSimProcess::Y,
            alpha: 2.0,
            beta: 0.0,
            paths: 20_000,
            repetitions: 2,
            min_passes: 1,
            grid_points: 17,
            ..SelfSimConfig::default()
        };
        let r = run(&y, 5, 0.01, 1).unwrap();
        assert_eq!(r.hurst, 0.5);
        assert_eq!(r.repetitions.len(), 2);
        assert!(r.passed);
        let z = SelfSimConfig { process: SelfSimProcess::Z, alpha: 0.5, beta: 1.0, subordinator_steps: 128, ..y };
        let r = run(&z, 6, 0.01, 1).unwrap();
        assert_eq!(r.hurst, 1.5);
        assert!(r.passed);
        assert!(run(&SelfSimConfig { alpha: 1.5, ..z }, 6, 0.01, 1).is_err());
    }
}
