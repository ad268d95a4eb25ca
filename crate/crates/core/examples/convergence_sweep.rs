// Config-driven convergence sweep, the library form of `verify-limit`.
//
// Pass a TOML file to run it instead of the built-in heavy-tailed setup:
// `cargo run --release --example convergence_sweep -- examples/configs/a4_counting.toml`

use shotnoise_lab::config::ExperimentConfig;
use shotnoise_lab::output::fmt_opt;
use shotnoise_lab::stats::convergence_sweep;

const DEFAULT: &str = r#"
seed = 42
replicates = 2000
t_ladder = [100.0, 1000.0]
u_points = [0.5, 1.0]

[law]
family = "pareto"
alpha = 0.5
xm = 1.0

[response]
kind = "power"
beta = 0.5
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    run_config(&ExperimentConfig::from_toml_str(DEFAULT)?)
}

fn run_config(config: &ExperimentConfig) -> Result<(), Box<dyn std::error::Error>> {
    let report = convergence_sweep(config)?;
    println!("regime {} (alpha = {}, beta = {})", report.case, report.alpha, report.beta);
    for entry in &report.entries {
        for c in &entry.checks {
            println!(
                "t = {:>7} u = {:<4} {:<18} stat = {:<12.5} threshold = {:<8} p = {:<10} {}",
                entry.t,
                c.u,
                c.check,
                c.statistic,
                fmt_opt(c.threshold),
                c.p_value.map(|p| format!("{p:.4}")).unwrap_or_default(),
                c.verdict.label()
            );
        }
    }
    println!("overall: {}", if report.passed { "pass" } else { "fail" });
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    match std::env::args().nth(1) {
        Some(path) => run_config(&ExperimentConfig::load(path.as_ref())?),
        None => run_example(),
    }
}
