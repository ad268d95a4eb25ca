// Draws spectrally negative stable variables and compares their empirical
// characteristic function with the closed form.
//
// `cargo run --release --example stable_cf`

use shotnoise_lab::oracle::stable_log_cf;
use shotnoise_lab::stats::ecf_deviations;
use shotnoise_lab::stats::stable_check::stable_sample;
use shotnoise_lab::{StableSpec, StreamSeed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seed = StreamSeed::new(2024);
    println!("alpha      z    Re(emp)    Re(cf)     Im(emp)    Im(cf)    dev/se");
    for alpha in [1.2, 1.5, 1.8, 2.0] {
        let spec = StableSpec::spectrally_negative(alpha)?;
        let sample = stable_sample(&spec, 100_000, &seed.derive_index(alpha.to_bits()), 1)?;
        let devs = ecf_deviations(&sample, |z| stable_log_cf(alpha, z).expect("alpha in range"), &[0.5, 1.0, 2.0]);
        for d in devs {
            let cf = d.oracle;
            println!(
                "{alpha:5.2} {:6.2} {:10.5} {:10.5} {:10.5} {:10.5} {:8.2}",
                d.z, d.empirical.re, cf.re, d.empirical.im, cf.im, d.deviation
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
