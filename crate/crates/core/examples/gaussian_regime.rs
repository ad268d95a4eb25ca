// Finite-variance inter-arrival times: the normalized shot noise at `u = 1`
// against its Gaussian limit, for a growing time horizon.

use shotnoise_lab::oracle::p3_scale;
use shotnoise_lab::shotnoise::normalized_at;
use shotnoise_lab::stats::{ks_one_sample, normal_cdf, SampleSummary};
use shotnoise_lab::{InterArrivalLaw, LimitCaseSpec, ResponseFunction, SlowlyVarying, StreamSeed};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let beta = 0.5;
    let law = InterArrivalLaw::Gamma { shape: 2.0, rate: 2.0 };
    let h = ResponseFunction::power(beta, SlowlyVarying::Constant { c: 1.0 })?;
    let spec = LimitCaseSpec::build(&law, &h)?;
    let sampler = law.sampler()?;
    let sd = p3_scale(2.0, beta, 1.0)?;
    println!("regime {}, limit sd {sd:.5}", spec.case().label());

    let seed = StreamSeed::new(31);
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "t", "mean", "sd", "KS D", "p");
    for (i, t) in [1e2, 1e3, 1e4].into_iter().enumerate() {
        let paths = seed.derive_index(i as u64);
        let sample = (0..4000u64)
            .map(|r| {
                let mut rng = paths.stream(r);
                let path = sampler.sample_path(t + spec.lookahead(), &mut rng)?;
                Ok(normalized_at(&path, &spec, t, &[1.0])?[0])
            })
            .collect::<Result<Vec<f64>, shotnoise_lab::Error>>()?;
        let s = SampleSummary::new(&sample);
        let ks = ks_one_sample(&s.sorted, |x| normal_cdf(x, sd));
        println!("{t:>8} {:>10.4} {:>10.4} {:>10.4} {:>10.4}", s.mean, s.variance.sqrt(), ks.distance, ks.p_value);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
