//! `roe`: batch front end over `roe_core`.
//!
//! Every subcommand reads JSON files, writes one report to `-o` (or stdout)
//! and exits 0. Failures print `{"error": code, "detail": ...}` to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use roe_core::Dist;
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "roe", version, about = "Finite-scale coarse geometry experiments")]
struct Cli {
    /// Worker threads for internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Entries at or below this magnitude count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a space.
    GenSpace(GenSpaceArgs),
    /// Propagation plus quasi-locality and approximability profiles.
    Analyze(AnalyzeArgs),
    /// Covering isometry (or unitary) of a map between modules.
    Cover(CoverArgs),
    /// Approximating relation of an operator and the map extracted from it.
    Phi(PhiArgs),
    /// Map to covering unitary to recovered map.
    Roundtrip(RoundtripArgs),
    /// Search for a concentration witness.
    Concentration(ConcentrationArgs),
    /// Uniformization profile of a unitary, as CSV.
    ProbeUniformization(ProbeArgs),
}

#[derive(Debug, Args)]
struct GenSpaceArgs {
    #[arg(long)]
    kind: String,
    /// Comma-separated integers.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    params: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    op: PathBuf,
    /// Comma-separated radii; defaults to the realized distances.
    #[arg(long, value_delimiter = ',', value_parser = parse_dist)]
    radii: Vec<Dist>,
    #[arg(long)]
    exact_ql: bool,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CoverArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    src_mult: PathBuf,
    #[arg(long)]
    tgt_mult: PathBuf,
    #[arg(long, default_value = "0", value_parser = parse_dist)]
    spill: Dist,
    #[arg(long)]
    auto_spill: bool,
    #[arg(long)]
    unitary: bool,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PhiParams {
    #[arg(long)]
    delta: f64,
    #[arg(long, value_parser = parse_dist)]
    r: Dist,
    #[arg(long = "R", value_parser = parse_dist)]
    big_r: Dist,
    #[arg(long, default_value = "maximal_cliques")]
    mode: String,
}

#[derive(Debug, Args)]
struct PhiArgs {
    #[arg(long)]
    op: PathBuf,
    #[command(flatten)]
    params: PhiParams,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RoundtripArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    src_mult: PathBuf,
    #[arg(long)]
    tgt_mult: PathBuf,
    #[arg(long, default_value = "0", value_parser = parse_dist)]
    spill: Dist,
    #[command(flatten)]
    params: PhiParams,
    /// Success also requires every gap to stay within this radius.
    #[arg(long, value_parser = parse_dist)]
    tolerance: Option<Dist>,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConcentrationArgs {
    #[arg(long)]
    op: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long = "B", value_delimiter = ',', required = true)]
    b: Vec<usize>,
    #[arg(long = "C", value_delimiter = ',', required = true)]
    c: Vec<usize>,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(short)]
    o: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long)]
    op: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Comma-separated radii; defaults to the realized distances.
    #[arg(long, value_delimiter = ',', value_parser = parse_dist)]
    r: Vec<Dist>,
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short)]
    o: Option<PathBuf>,
}

fn parse_dist(s: &str) -> Result<Dist, String> {
    if s.trim() == "inf" {
        return Ok(Dist::INF);
    }
    let v: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    Dist::try_new(v).ok_or_else(|| format!("{s:?} is not a distance"))
}

/// A failure with its machine-readable code.
#[derive(Debug)]
pub struct Failure {
    code: String,
    detail: String,
}

impl Failure {
    pub fn new(code: &str, detail: impl Into<String>) -> Self {
        Failure {
            code: code.to_string(),
            detail: detail.into(),
        }
    }
}

impl From<roe_core::Error> for Failure {
    fn from(e: roe_core::Error) -> Self {
        Failure::new(e.code(), e.to_string())
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", json!({ "error": f.code, "detail": f.detail }));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::new("usage", e.to_string().trim_end())),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return fail(&Failure::new("usage", "--threads must be positive"));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(&Failure::new("threads", e.to_string()));
        }
    }
    match commands::run(cli.command, cli.tol) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(&f),
    }
}
