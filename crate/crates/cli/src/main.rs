//! `helmlab`: configuration-driven runner for the step-potential resolvent
//! and annulus multiplier experiments.
//!
//! Exit status: 0 success, 2 configuration error, 3 accuracy error,
//! 4 I/O error, 1 anything else. Errors are reported as one line on stderr:
//! `helmlab: error[<kind>]: <message>`.

mod config;
mod pipelines;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

use config::{ConfigError, RegionOverrides, RunConfig};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(name = "helmlab", version, about = "Step-potential resolvent and annulus multiplier experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "helmlab-out")]
    out: PathBuf,

    /// Worker threads. Affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized test families (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the perturbed or limiting problem and report the PDE residual.
    Solve,
    /// Split the interface correction into lateral frequency blocks.
    Decompose,
    /// Tabulate the annulus kernel K_λ and fit its envelope.
    Kernel,
    /// Sweep λ and fit the growth of operator norm lower bounds.
    Scaling,
    /// Build an unboundedness example and evaluate its image.
    Counterexample,
    /// Scan an exponent region on a rational grid.
    Regions(RegionArgs),
    /// Evaluate mountain-pass certificates for band-limited profiles.
    MpCheck,
}

#[derive(Args, Debug)]
struct RegionArgs {
    /// D, D_tilde, D_alpha, cal_D_alpha, largefreq, smallfreq, annulus_d1.
    #[arg(long)]
    region: Option<String>,
    /// Dimension (n for resolvent regions, d for annulus regions).
    #[arg(long)]
    n: Option<u32>,
    /// α, e.g. `1/4` or `0.25`.
    #[arg(long)]
    alpha: Option<String>,
    /// Largest denominator of the rational grid.
    #[arg(long)]
    max_den: Option<i64>,
    /// Only pairs with 1/p + 1/q = 1.
    #[arg(long)]
    selfdual: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Decompose => "decompose",
            Command::Kernel => "kernel",
            Command::Scaling => "scaling",
            Command::Counterexample => "counterexample",
            Command::Regions(_) => "regions",
            Command::MpCheck => "mp-check",
        }
    }
}

/// Marks an error as an I/O failure for the exit status.
#[derive(Debug)]
struct IoFailure(String);

impl std::fmt::Display for IoFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IoFailure {}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return ("config", 2);
        }
        if cause.is::<IoFailure>() || cause.is::<std::io::Error>() || cause.is::<csv::Error>() {
            return ("io", 4);
        }
        if let Some(e) = cause.downcast_ref::<helmlab::Error>() {
            return match e {
                helmlab::Error::InvalidInput(_) => ("config", 2),
                helmlab::Error::Accuracy { .. } => ("accuracy", 3),
                helmlab::Error::Io(_) | helmlab::Error::Format(_) => ("io", 4),
                helmlab::Error::Singularity(_) => ("singularity", 1),
            };
        }
    }
    ("internal", 1)
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    let Some(path) = path else { return Ok(RunConfig::default()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    Ok(config::parse(&text, path)?)
}

fn write_outputs(out: &Path, output: &pipelines::Output, manifest: serde_json::Value) -> Result<()> {
    let io = |what: String| move |e: std::io::Error| IoFailure(format!("{what}: {e}"));
    std::fs::create_dir_all(out).map_err(io(format!("creating {}", out.display())))?;
    let mut listed = Vec::new();
    for a in &output.artifacts {
        let path = out.join(&a.name);
        std::fs::write(&path, &a.bytes).map_err(io(format!("writing {}", path.display())))?;
        listed.push(json!({ "file": a.name, "bytes": a.bytes.len(), "sha256": hex(&Sha256::digest(&a.bytes)) }));
    }
    let mut manifest = manifest;
    manifest["outputs"] = json!(listed);
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    let path = out.join("manifest.json");
    std::fs::write(&path, bytes).map_err(io(format!("writing {}", path.display())))?;
    Ok(())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn run(cli: &Cli) -> Result<()> {
    let start = Instant::now();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(ConfigError("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting the worker pool")?;
    }
    let cfg = load_config(cli.config.as_deref())?;
    let seed = cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let overrides = match &cli.command {
        Command::Regions(r) => RegionOverrides {
            region: r.region.clone(),
            n: r.n,
            alpha: r.alpha.clone(),
            max_den: r.max_den,
            selfdual: r.selfdual,
        },
        _ => RegionOverrides::default(),
    };
    let command = cli.command.name();
    let plan = cfg.plan(command, seed, &overrides)?;
    let output = pipelines::run(&plan).with_context(|| format!("{command} failed"))?;
    let manifest = json!({
        "tool": "helmlab",
        "version": env!("CARGO_PKG_VERSION"),
        "library_version": helmlab::VERSION,
        "command": command,
        "config_path": cli.config,
        "config": cfg,
        "overrides": format!("{overrides:?}"),
        "seed": seed,
        "rng": "ChaCha20 (stream = member index)",
        "threads": rayon::current_num_threads(),
        "wall_time_seconds": start.elapsed().as_secs_f64(),
        "diagnostics": output.diagnostics,
    });
    write_outputs(&cli.out, &output, manifest)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            let msg: Vec<String> = e.chain().map(|c| c.to_string().replace('\n', " ")).collect();
            eprintln!("helmlab: error[{kind}]: {}", msg.join(": "));
            ExitCode::from(code)
        }
    }
}
