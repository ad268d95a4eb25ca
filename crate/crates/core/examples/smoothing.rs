// Exponential smoothing `h*(t) = E h((t − θ)⁺)` and its integrated deficit.

use shotnoise_lab::response::Step;
use shotnoise_lab::{ResponseFunction, SlowlyVarying};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let responses = [
        ("indicator", ResponseFunction::indicator()),
        ("1 - e^{-2x}", ResponseFunction::bounded_limit(1.0, 2.0)?),
        (
            "two steps",
            ResponseFunction::step_cdf(1.0, vec![Step { at: 0.0, mass: 0.25 }, Step { at: 1.0, mass: 0.75 }])?,
        ),
        ("x^0.5", ResponseFunction::power(0.5, SlowlyVarying::Constant { c: 1.0 })?),
    ];
    for (name, h) in &responses {
        let smooth = h.smooth()?;
        println!("{name}");
        for t in [0.0, 0.5, 1.0, 2.0, 10.0] {
            println!(
                "  t = {t:>4}: h = {:.5}  h* = {:.5}  deficit = {:.5}",
                h.eval(t),
                smooth.eval(t),
                h.smoothing_deficit(t)?
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
