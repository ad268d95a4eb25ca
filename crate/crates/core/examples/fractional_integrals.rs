// Fractionally integrated limit processes and their self-similarity.
//
// `Y` integrates a stable Lévy process, `Z` an inverse subordinator; both
// satisfy `X(c u) =d c^H X(u)`, checked here with two-sample KS tests.

use shotnoise_lab::config::{SelfSimConfig, SelfSimProcess};
use shotnoise_lab::limits::{fractional_integral_path, sample_levy_path};
use shotnoise_lab::stats::selfsim;
use shotnoise_lab::{StableSpec, StreamSeed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = StableSpec::spectrally_negative(1.5)?;
    let w = sample_levy_path(&spec, 1.0, 6, &mut StreamSeed::new(3).stream(0))?;
    let y = fractional_integral_path(&w, 1.0)?;
    for (wv, yv) in w.values().iter().zip(y.values()) {
        println!("W = {wv:>9.4}   Y = {yv:>9.4}");
    }

    for (process, alpha) in [(SelfSimProcess::Y, 1.5), (SelfSimProcess::Z, 0.5)] {
        let cfg = SelfSimConfig {
            process,
            alpha,
            beta: 1.0,
            paths: 5000,
            repetitions: 3,
            min_passes: 2,
            grid_points: 129,
            subordinator_steps: 256,
            ..SelfSimConfig::default()
        };
        let report = selfsim::run(&cfg, 17, 0.01, 0)?;
        let ps: Vec<String> = report.repetitions.iter().map(|r| format!("{:.3}", r.p_value)).collect();
        println!(
            "{:?}: H = {:.3}, KS p-values [{}], {}/{} passes",
            report.process,
            report.hurst,
            ps.join(", "),
            report.passes,
            report.repetitions.len()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
