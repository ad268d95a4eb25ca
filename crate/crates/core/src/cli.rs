//! `shotnoise-lab <subcommand> [--config PATH] [--seed N] [--out DIR] [--threads K] [--format csv,json,svg]`
//!
//! Exit status: 0 when every enforced verdict passes, 1 when a verdict fails
//! or a run aborts, 2 on configuration errors. Errors are reported as one
//! JSON object on standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{Error, Result};
use crate::oracle::{z_moment_product_form, MomentTable};
use crate::output::{ecdf_plot, fmt_f64, fmt_opt, json_document, line_plot, write_outputs, CsvTable, Outputs, Series};
use crate::rng::StreamSeed;
use crate::shotnoise::{shot_noise_at, UniformGrid};
use crate::stats::{convergence_sweep, selfsim, stable_check, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "shotnoise-lab", version, about = "Renewal shot noise limit theorems, checked by simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write sample paths of the raw and normalized process
    Simulate(CommonArgs),
    /// Compare prelimit marginals with the limit along the t-ladder
    VerifyLimit(CommonArgs),
    /// Tabulate moments of the fractionally integrated inverse subordinator
    Moments(MomentArgs),
    /// Self-similarity KS checks of the limit processes
    Selfsim(CommonArgs),
    /// Stable sampler against its characteristic function
    StableCheck(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML experiment file; built-in defaults when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// worker threads (0: available parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// comma-separated subset of csv,json,svg
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct MomentArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    /// highest moment order
    #[arg(long)]
    k: Option<u32>,
}

fn resolve(args: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(threads) = args.threads {
        cfg.threads = threads;
    }
    if let Some(formats) = &args.format {
        let mut parsed = formats.iter().map(|f| f.parse()).collect::<Result<Vec<OutputFormat>>>()?;
        parsed.sort();
        parsed.dedup();
        cfg.formats = parsed;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

fn report_error(kind: &str, message: String) {
    let doc = serde_json::to_string(&ErrorReport { error: kind, message }).expect("plain strings serialize");
    let _ = writeln!(std::io::stderr(), "{doc}");
}

fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::InvalidParameter(_) | Error::Unsupported(_))
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_PASS;
            }
            report_error("usage_error", e.to_string().trim().to_string());
            return EXIT_CONFIG;
        }
    };
    match dispatch(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            report_error("verdict_failed", "one or more enforced checks failed".into());
            EXIT_FAIL
        }
        Err(e) if is_config_error(&e) => {
            report_error("config_error", e.to_string());
            EXIT_CONFIG
        }
        Err(e) => {
            report_error("runtime_error", e.to_string());
            EXIT_FAIL
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Simulate(a) => simulate(&checked(&a)?),
        Command::VerifyLimit(a) => verify_limit(&checked(&a)?),
        Command::Moments(a) => {
            let mut cfg = resolve(&a.common)?;
            let m = &mut cfg.moments;
            m.alpha = a.alpha.unwrap_or(m.alpha);
            m.beta = a.beta.unwrap_or(m.beta);
            m.u = a.u.unwrap_or(m.u);
            m.k = a.k.unwrap_or(m.k);
            cfg.validate()?;
            moments(&cfg)
        }
        Command::Selfsim(a) => run_selfsim(&checked(&a)?),
        Command::StableCheck(a) => run_stable_check(&checked(&a)?),
    }
}

fn checked(args: &CommonArgs) -> Result<ExperimentConfig> {
    let cfg = resolve(args)?;
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cfg: &ExperimentConfig, stem: &str, outputs: &Outputs) -> Result<()> {
    for path in write_outputs(&cfg.out_dir, stem, &cfg.formats, outputs)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn wants(cfg: &ExperimentConfig, f: OutputFormat) -> bool {
    cfg.formats.contains(&f)
}

#[derive(Serialize)]
struct SimulatedPath {
    t: f64,
    path: usize,
    u: Vec<f64>,
    raw: Vec<f64>,
    normalized: Vec<f64>,
}

fn simulate(cfg: &ExperimentConfig) -> Result<bool> {
    let spec = cfg.limit_spec()?;
    let sampler = spec.law().sampler()?;
    let u_max = *cfg.u_points.last().expect("validated");
    let us = UniformGrid::new(u_max, cfg.grid_points)?.points();
    let root = StreamSeed::new(cfg.seed).derive("simulate");
    let mut paths = Vec::new();
    for (ti, &t) in cfg.t_ladder.iter().enumerate() {
        let seed = root.derive_index(ti as u64);
        let scale = spec.scale(t)?;
        let times: Vec<f64> = us.iter().map(|u| u * t).collect();
        let sims = crate::stats::parallel_map(cfg.threads, cfg.simulate_paths, |p| {
            let path = sampler.sample_path(u_max * t + spec.lookahead(), &mut seed.stream(p as u64))?;
            let raw = shot_noise_at(&path, spec.response(), &times)?;
            let normalized = raw
                .iter()
                .zip(&us)
                .map(|(x, &u)| Ok((x - spec.center(t, u)?) / scale))
                .collect::<Result<Vec<f64>>>()?;
            Ok(SimulatedPath { t, path: p, u: us.clone(), raw, normalized })
        })?;
        paths.extend(sims);
    }

    let prov = cfg.provenance()?;
    let mut out = Outputs::default();
    if wants(cfg, OutputFormat::Csv) {
        let mut table = CsvTable::new(&["t", "path", "u", "raw", "normalized"]);
        for p in &paths {
            for j in 0..p.u.len() {
                table.push(vec![
                    fmt_f64(p.t),
                    p.path.to_string(),
                    fmt_f64(p.u[j]),
                    fmt_f64(p.raw[j]),
                    fmt_f64(p.normalized[j]),
                ]);
            }
        }
        out.csv = Some(table.render(&prov, cfg.seed));
    }
    if wants(cfg, OutputFormat::Json) {
        out.json = Some(json_document(&paths, &prov, cfg.seed)?);
    }
    if wants(cfg, OutputFormat::Svg) {
        let t_last = *cfg.t_ladder.last().expect("validated");
        let series: Vec<Series> = paths
            .iter()
            .filter(|p| p.t == t_last)
            .map(|p| Series {
                label: format!("path {}", p.path),
                points: p.u.iter().copied().zip(p.normalized.iter().copied()).collect(),
            })
            .collect();
        out.svg = Some(line_plot(&format!("normalized paths, t = {}", fmt_f64(t_last)), "u", &series, &prov, cfg.seed));
    }
    emit(cfg, "simulate", &out)?;
    Ok(true)
}

fn verify_limit(cfg: &ExperimentConfig) -> Result<bool> {
    let report = convergence_sweep(cfg)?;
    let prov = &report.config;
    let mut out = Outputs::default();
    if wants(cfg, OutputFormat::Csv) {
        let mut table =
            CsvTable::new(&["case", "t", "u", "u2", "check", "statistic", "threshold", "p_value", "verdict"]);
        for e in &report.entries {
            for c in &e.checks {
                table.push(vec![
                    report.case.clone(),
                    fmt_f64(e.t),
                    fmt_f64(c.u),
                    fmt_opt(c.u2),
                    c.check.clone(),
                    fmt_f64(c.statistic),
                    fmt_opt(c.threshold),
                    fmt_opt(c.p_value),
                    c.verdict.label().to_string(),
                ]);
            }
        }
        out.csv = Some(table.render(prov, cfg.seed));
    }
    if wants(cfg, OutputFormat::Json) {
        out.json = Some(json_document(&report, prov, cfg.seed)?);
    }
    if wants(cfg, OutputFormat::Svg) {
        // one line per (check, u): statistic against log10 t
        let mut series: Vec<Series> = Vec::new();
        for e in &report.entries {
            for c in &e.checks {
                let label = format!("{} u={}", c.check, fmt_f64(c.u));
                let point = (e.t.log10(), c.statistic);
                match series.iter_mut().find(|s| s.label == label) {
                    Some(s) => s.points.push(point),
                    None => series.push(Series { label, points: vec![point] }),
                }
            }
        }
        out.svg = Some(line_plot(&format!("case {} convergence", report.case), "log10 t", &series, prov, cfg.seed));
    }
    emit(cfg, "verify_limit", &out)?;
    let failed = report.entries.iter().flat_map(|e| &e.checks).any(|c| c.verdict == Verdict::Fail);
    Ok(!failed)
}

fn moments(cfg: &ExperimentConfig) -> Result<bool> {
    let m = cfg.moments;
    let table = MomentTable::new(m.alpha, m.beta, m.u, m.k)?;
    let prov = cfg.provenance()?;
    let mut out = Outputs::default();
    if wants(cfg, OutputFormat::Csv) {
        let mut csv = CsvTable::new(&["alpha", "beta", "u", "k", "moment", "product_form"]);
        for (i, &moment) in table.moments.iter().enumerate() {
            let k = i as u32 + 1;
            let product = z_moment_product_form(m.alpha, m.beta, k)? * m.u.powf(k as f64 * (m.alpha + m.beta));
            csv.push(vec![
                fmt_f64(m.alpha),
                fmt_f64(m.beta),
                fmt_f64(m.u),
                k.to_string(),
                fmt_f64(moment),
                fmt_f64(product),
            ]);
        }
        out.csv = Some(csv.render(&prov, cfg.seed));
    }
    if wants(cfg, OutputFormat::Json) {
        out.json = Some(json_document(&table, &prov, cfg.seed)?);
    }
    if wants(cfg, OutputFormat::Svg) {
        let points = table.moments.iter().enumerate().map(|(i, v)| ((i + 1) as f64, v.ln())).collect();
        let series = [Series { label: "log E Z^k".into(), points }];
        out.svg = Some(line_plot("moments", "k", &series, &prov, cfg.seed));
    }
    emit(cfg, "moments", &out)?;
    Ok(true)
}

fn run_selfsim(cfg: &ExperimentConfig) -> Result<bool> {
    let report = selfsim::run(&cfg.selfsim, cfg.seed, cfg.thresholds.ks_p_value, cfg.threads)?;
    let prov = cfg.provenance()?;
    let mut out = Outputs::default();
    if wants(cfg, OutputFormat::Csv) {
        let mut csv = CsvTable::new(&["repetition", "hurst", "distance", "p_value", "passed"]);
        for r in &report.repetitions {
            csv.push(vec![
                r.repetition.to_string(),
                fmt_f64(report.hurst),
                fmt_f64(r.distance),
                fmt_f64(r.p_value),
                r.passed.to_string(),
            ]);
        }
        out.csv = Some(csv.render(&prov, cfg.seed));
    }
    if wants(cfg, OutputFormat::Json) {
        out.json = Some(json_document(&report, &prov, cfg.seed)?);
    }
    if wants(cfg, OutputFormat::Svg) {
        let pts = report.repetitions.iter().map(|r| (r.repetition as f64, r.p_value)).collect();
        let floor = vec![(0.0, report.p_threshold), ((report.repetitions.len() - 1) as f64, report.p_threshold)];
        let series =
            [Series { label: "p-value".into(), points: pts }, Series { label: "threshold".into(), points: floor }];
        out.svg = Some(line_plot("self-similarity KS p-values", "repetition", &series, &prov, cfg.seed));
    }
    emit(cfg, "selfsim", &out)?;
    Ok(report.passed)
}

fn run_stable_check(cfg: &ExperimentConfig) -> Result<bool> {
    let report = stable_check::run(&cfg.stable_check, cfg.seed, cfg.threads)?;
    let prov = cfg.provenance()?;
    let mut out = Outputs::default();
    if wants(cfg, OutputFormat::Csv) {
        let mut csv = CsvTable::new(&[
            "alpha",
            "z",
            "re_empirical",
            "im_empirical",
            "re_oracle",
            "im_oracle",
            "dev_re_se",
            "dev_im_se",
            "passed",
        ]);
        for r in &report.rows {
            csv.push(vec![
                fmt_f64(r.alpha),
                fmt_f64(r.z),
                fmt_f64(r.empirical.re),
                fmt_f64(r.empirical.im),
                fmt_f64(r.oracle.re),
                fmt_f64(r.oracle.im),
                fmt_f64(r.dev_re),
                fmt_f64(r.dev_im),
                r.passed.to_string(),
            ]);
        }
        out.csv = Some(csv.render(&prov, cfg.seed));
    }
    if wants(cfg, OutputFormat::Json) {
        out.json = Some(json_document(&report, &prov, cfg.seed)?);
    }
    if wants(cfg, OutputFormat::Svg) {
        let mut samples = Vec::new();
        let root = StreamSeed::new(cfg.seed).derive("stable-check-plot");
        for (i, &alpha) in cfg.stable_check.alphas.iter().enumerate() {
            let spec = crate::limits::StableSpec::spectrally_negative(alpha)?;
            let xs = stable_check::stable_sample(&spec, 4096, &root.derive_index(i as u64), cfg.threads)?;
            samples.push((format!("alpha={}", fmt_f64(alpha)), xs.into_iter().filter(|x| x.abs() < 20.0).collect()));
        }
        out.svg = Some(ecdf_plot("stable samples (|x| < 20)", &samples, &prov, cfg.seed));
    }
    emit(cfg, "stable_check", &out)?;
    Ok(report.passed)
}
