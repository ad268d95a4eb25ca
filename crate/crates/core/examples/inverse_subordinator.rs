// Inverse stable subordinator: one path on a grid, and marginal moments
// against the Mittag-Leffler closed form.

use shotnoise_lab::limits::{sample_inverse_subordinator_marginal, sample_inverse_subordinator_path};
use shotnoise_lab::oracle::inverse_subordinator_moment;
use shotnoise_lab::stats::moment_estimate;
use shotnoise_lab::StreamSeed;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 0.6;
    let seed = StreamSeed::new(99);

    let path = sample_inverse_subordinator_path(alpha, 2.0, 11, &mut seed.derive("path").stream(0))?;
    let grid = path.grid();
    for (j, v) in path.values().iter().enumerate() {
        println!("V({:.1}) = {v:.4}", grid.point(j));
    }

    let draws = seed.derive("marginal");
    let sample = (0..100_000u64)
        .map(|i| sample_inverse_subordinator_marginal(alpha, 1.0, &mut draws.stream(i)))
        .collect::<Result<Vec<f64>, _>>()?;
    println!("{:>3} {:>12} {:>12} {:>8}", "k", "E V(1)^k", "exact", "dev/se");
    for k in 1..=3 {
        let (m, se) = moment_estimate(&sample, k);
        let exact = inverse_subordinator_moment(alpha, 1.0, k as u32)?;
        println!("{k:>3} {m:>12.5} {exact:>12.5} {:>8.2}", (m - exact) / se);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
