// A two-sided response: shots contribute before their arrival through an
// exponentially decaying left tail. Writes one raw path as CSV to stdout.

use shotnoise_lab::shotnoise::evaluate_shot_noise;
use shotnoise_lab::{InterArrivalLaw, LeftTail, ResponseFunction, SlowlyVarying, StreamSeed, UniformGrid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let h = ResponseFunction::power(0.3, SlowlyVarying::LogPower { c: 1.0, p: 0.5 })?
        .with_left_tail(LeftTail::Exponential { scale: 0.5, rate: 3.0 })?;
    println!("# h(-1) = {:.5}, h(0) = {:.5}, h(1) = {:.5}", h.eval(-1.0), h.eval(0.0), h.eval(1.0));

    let law = InterArrivalLaw::Exponential { rate: 2.0 };
    let grid = UniformGrid::new(20.0, 41)?;
    let mut rng = StreamSeed::new(8).stream(0);
    // arrivals after the last grid point still reach back into it
    let path = law.sample_path(grid.u_max + h.left_tail().map_or(0.0, |t| t.truncation_point()), &mut rng)?;
    let x = evaluate_shot_noise(&path, &h, &grid)?;
    let mut csv = Vec::new();
    x.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
