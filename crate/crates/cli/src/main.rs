mod manifest;

use cccs_core::graph::{build_cccs, build_rtcs};
use cccs_core::lattice::{build_color_code_lattice, BoundaryKind};
use cccs_core::region::CodeFamily;
use cccs_core::resources::{overheads, OverheadReport};
use cccs_core::threshold::{estimate_threshold_with, from_csv, run_experiment_with, to_csv, ExperimentConfig, LayerModel};
use cccs_core::verify::{run_suite, SuiteConfig};
use cccs_core::Error;
use clap::{Args, Parser, Subcommand};
use manifest::Recorder;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable holding the worker-thread count.
const WORKERS_ENV: &str = "CCCS_WORKERS";

#[derive(Parser)]
#[command(name = "cccs", version, about = "Cluster-state construction, verification, simulation and resource estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a periodic cluster-state graph as JSON.
    Lattice(LatticeArgs),
    /// Run the stabilizer and chain-complex property suite.
    Verify(VerifyArgs),
    /// Monte Carlo logical error rates; writes CSV.
    Simulate(SimulateArgs),
    /// Threshold crossings from a simulate CSV; writes JSON.
    Threshold(ThresholdArgs),
    /// Resource overheads per logical qubit.
    Resources(ResourcesArgs),
}

#[derive(Args)]
struct LatticeArgs {
    #[arg(long)]
    code: CodeFamily,
    /// LxxLy for CCCS, LxxLyxLz for RTCS.
    #[arg(long)]
    size: String,
    /// Number of layers (CCCS only).
    #[arg(long, default_value_t = 3)]
    layers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    layers: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, hide = true)]
    corrupt_boundary: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    code: CodeFamily,
    #[arg(long, value_delimiter = ',', required = true)]
    distances: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pphys: Vec<f64>,
    #[arg(long)]
    cycles: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Half time span T for every distance; defaults to 4d + 1.
    #[arg(long)]
    half_span: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// independent (stored p_log), parity, or cycle.
    #[arg(long, default_value = "independent")]
    layer_model: LayerModel,
    /// T used when recomputing per-layer rates; defaults to 4d + 1.
    #[arg(long)]
    half_span: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResourcesArgs {
    /// Print JSON instead of the aligned table.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Unsupported(_) | Error::ColoringInfeasible { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Usage(format!("{}: {e}", path.display()))
}

fn parse_size(s: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let parts: Result<Vec<usize>, _> = s.split('x').map(str::parse).collect();
    match parts {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(Failure::Usage(format!("--size '{s}' must have {n} 'x'-separated integers"))),
    }
}

/// Writes to `out` with a manifest, or to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str, rec: Recorder) -> Result<(), Failure> {
    match out {
        Some(p) => rec.write(p, text).map_err(io_err(p)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_lattice(a: LatticeArgs) -> Result<(), Failure> {
    let graph = match a.code.lattice_family() {
        None => {
            let s = parse_size(&a.size, 3)?;
            build_rtcs((s[0], s[1], s[2]))?
        }
        Some(family) => {
            let s = parse_size(&a.size, 2)?;
            build_cccs(&build_color_code_lattice(family, (s[0], s[1]), BoundaryKind::Torus)?, a.layers)?
        }
    };
    let config = json!({ "code": a.code, "size": a.size, "layers": a.layers });
    emit(a.out.as_deref(), &(graph.to_json() + "\n"), Recorder::start("lattice", config, vec![]))
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let cfg = SuiteConfig { seed: a.seed, layers: a.layers, surface_samples: a.samples, corrupt_boundary: a.corrupt_boundary };
    let report = run_suite(&cfg)?;
    for r in &report.results {
        let mark = if r.passed { "pass" } else { "FAIL" };
        eprintln!("{mark}  {:<32} {:<22} {:>7} cases", r.property, r.target, r.cases);
        for f in &r.failures {
            eprintln!("      {f}");
        }
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let config = json!({ "seed": a.seed, "layers": a.layers, "samples": a.samples });
    emit(a.out.as_deref(), &text, Recorder::start("verify", config, vec![a.seed]))?;
    if report.passed {
        Ok(())
    } else {
        let names: Vec<String> = report.failed().map(|r| format!("{} ({})", r.property, r.target)).collect();
        Err(Failure::Runtime(format!("violated: {}", names.join(", "))))
    }
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), Failure> {
    let config = ExperimentConfig {
        code: a.code,
        distances: a.distances,
        p_phys: a.pphys,
        cycles: a.cycles,
        seed: a.seed,
        half_span: a.half_span,
    };
    let rec = Recorder::start("simulate", serde_json::to_value(&config).expect("config serializes"), vec![a.seed]);
    let quiet = a.quiet;
    let points = run_experiment_with(&config, |p| {
        if !quiet {
            eprintln!("{} d={} p={} failures={}/{} p_log={:.4e}", p.code, p.d, p.p_phys, p.failures, p.cycles, p.p_log);
        }
    })?;
    rec.write(&a.out, &to_csv(&points)).map_err(io_err(&a.out))
}

fn cmd_threshold(a: ThresholdArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.input).map_err(io_err(&a.input))?;
    let points = from_csv(&text)?;
    let half_span = a.half_span;
    let report = estimate_threshold_with(&points, a.layer_model, |d| half_span.unwrap_or(4 * d + 1))?;
    eprintln!("{} threshold {:.4} (spread {:.4}, {} pairs)", report.code, report.p_thrs, report.spread, report.pairs.len());
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let config = json!({ "input": a.input, "layer_model": a.layer_model, "half_span": a.half_span });
    emit(a.out.as_deref(), &json, Recorder::start("threshold", config, vec![]))
}

fn table(rows: &[OverheadReport]) -> String {
    let mut s = format!("{:<10} {:>8} {:>8} {:>8}  {}\n", "code", "S/d^2", "n/k", "N_CZ/k", "intervals (a, b, g, dl, e)/d");
    for r in rows {
        let iv = r.intervals.map_or("-".to_string(), |iv| {
            let v: Vec<String> = iv.as_array().iter().map(|x| format!("{x:.3}")).collect();
            format!("({})", v.join(", "))
        });
        s += &format!("{:<10} {:>8.4} {:>8.4} {:>8.4}  {}\n", r.code.name(), r.area, r.qubits_per_logical, r.cz_per_logical, iv);
    }
    s
}

fn cmd_resources(a: ResourcesArgs) -> Result<(), Failure> {
    let rows: Vec<OverheadReport> = CodeFamily::ALL.into_iter().map(overheads).collect::<Result<_, _>>()?;
    let json = serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n";
    print!("{}", if a.json { json.clone() } else { table(&rows) });
    if let Some(p) = &a.out {
        Recorder::start("resources", json!({}), vec![]).write(p, &json).map_err(io_err(p))?;
    }
    Ok(())
}

fn configure_workers() -> Result<(), Failure> {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Usage(format!("{WORKERS_ENV}='{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(format!("worker pool: {e}")))
}

fn run() -> Result<(), Failure> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    configure_workers()?;
    match cli.command {
        Command::Lattice(a) => cmd_lattice(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Resources(a) => cmd_resources(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("{}", m.trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
