// Renewal counts `N(t)` under light and heavy tailed inter-arrival laws.
//
// With a finite mean the count grows like `t/μ`; with tail index `α < 1`
// it grows like `t^α` and stays random after normalization.

use shotnoise_lab::stats::SampleSummary;
use shotnoise_lab::{InterArrivalLaw, StreamSeed};

fn counts(law: &InterArrivalLaw, t: f64, n: usize, seed: &StreamSeed) -> Result<Vec<f64>, shotnoise_lab::Error> {
    let sampler = law.sampler()?;
    (0..n as u64)
        .map(|i| {
            let mut rng = seed.stream(i);
            let path = sampler.sample_path(t, &mut rng)?;
            path.count_at(t).map(|c| c as f64)
        })
        .collect()
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seed = StreamSeed::new(7);
    let laws = [
        ("exponential(1)", InterArrivalLaw::Exponential { rate: 1.0 }),
        ("gamma(2, 2)", InterArrivalLaw::Gamma { shape: 2.0, rate: 2.0 }),
        ("pareto(1.5)", InterArrivalLaw::Pareto { alpha: 1.5, xm: 1.0 }),
        ("pareto(0.7)", InterArrivalLaw::Pareto { alpha: 0.7, xm: 1.0 }),
    ];
    println!("{:<16} {:>8} {:>12} {:>12} {:>10}", "law", "t", "mean N(t)", "sd N(t)", "mean N/t");
    for (name, law) in &laws {
        for t in [1e2, 1e3] {
            let sample = counts(law, t, 2000, &seed.derive(name))?;
            let s = SampleSummary::new(&sample);
            println!("{name:<16} {t:>8} {:>12.3} {:>12.3} {:>10.4}", s.mean, s.variance.sqrt(), s.mean / t);
        }
    }

    // one path, printed as its first few arrival epochs
    let mut rng = seed.derive("path").stream(0);
    let path = InterArrivalLaw::Pareto { alpha: 0.7, xm: 1.0 }.sample_path(50.0, &mut rng)?;
    let shown: Vec<String> = path.jumps().iter().take(8).map(|s| format!("{s:.2}")).collect();
    println!("pareto(0.7) epochs: {} ... ({} in [0, 50])", shown.join(" "), path.count_at(50.0)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
