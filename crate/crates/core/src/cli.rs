//! Command-line front end. Exit codes: 0 success, 2 input error,
//! 3 verification failure, 4 solver-process error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::encode::{encode, Formulation};
use crate::format::{parse_instance, parse_solution_file, serialize_instance, serialize_solution};
use crate::harness::{
    bench, oracle, read_csv, render_markdown, solve, write_csv, BenchConfig, Dialect,
    HarnessError, OracleLimits, OracleOptions, ReportLabel, Semantics, SolverAdapter,
    DEFAULT_TIME_LIMIT_S, SOLVER_ENV,
};
use crate::instgen::{generate_family, parse_tsplib, GenerationOptions, SortMode, TsplibSample};
use crate::mipir::{census, emit_lp};
use crate::model::{DeliveryRoutingSolution, Instance};
use crate::validate::{validate_solution, LoadRule};

#[derive(Debug, Parser)]
#[command(name = "ppdsp", version, about = "Pickup-and-delivery selection workbench")]
pub struct Cli {
    /// Log level filter (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "info")]
    pub log: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one instance file per k from a TSPLIB sample.
    Gen(GenArgs),
    /// Encode an instance and write the LP file.
    Build(BuildArgs),
    /// Encode, solve externally, decode, validate and rescore.
    Solve(SolveArgs),
    /// Check a solution file against an instance.
    Validate(ValidateArgs),
    /// Exact enumeration for small instances.
    Oracle(OracleArgs),
    /// Run a benchmark grid and write CSV (and optionally markdown).
    Bench(BenchArgs),
    /// Render a bench CSV as markdown tables.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub tsplib: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<f64>,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = crate::instgen::DEFAULT_AVG_VOLUME)]
    pub avg_volume: u32,
    /// Pair sorting: `corrected` or `verbatim`.
    #[arg(long, default_value = "corrected")]
    pub sort_mode: String,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub formulation: Formulation,
    #[arg(long)]
    pub lp: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct SolverArgs {
    /// `cbc`, `highs` or `env`; defaults to the first one available.
    #[arg(long)]
    pub solver: Option<String>,
    /// Explicit command template; overrides --solver.
    #[arg(long)]
    pub solver_cmd: Option<String>,
    /// Output dialect for --solver-cmd: plain, cbc or xml.
    #[arg(long, default_value = "plain")]
    pub dialect: Dialect,
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT_S)]
    pub time_limit: u64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub formulation: Formulation,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the decoded solution here.
    #[arg(long)]
    pub solution_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, default_value = "pickup-first")]
    pub load_rule: LoadRule,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value = "loc")]
    pub semantics: Semantics,
    #[arg(long, default_value = "pickup-first")]
    pub load_rule: LoadRule,
    /// Also try location routes through transit nodes.
    #[arg(long)]
    pub transit_probe: bool,
    #[arg(long)]
    pub solution_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub tsplib: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "req,loc")]
    pub formulations: Vec<Formulation>,
    #[arg(long)]
    pub seed: u64,
    /// `none` (encode-only), `cbc`, `highs` or `env`.
    #[arg(long, default_value = "none")]
    pub solver: String,
    #[arg(long)]
    pub solver_cmd: Option<String>,
    #[arg(long, default_value = "plain")]
    pub dialect: Dialect,
    #[arg(long, default_value_t = DEFAULT_TIME_LIMIT_S)]
    pub time_limit: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub markdown: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub csv: PathBuf,
    /// Solver that produced the objectives in the CSV.
    #[arg(long)]
    pub solver: Option<String>,
    #[arg(long)]
    pub time_limit: Option<u64>,
    /// Markdown destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        Self { code: e.exit_code(), message: e.to_string() }
    }
}

type CliResult = Result<String, CliError>;

fn absolute(path: &Path) -> PathBuf {
    std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", absolute(path).display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", absolute(path).display())))
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", absolute(path).display())))
}

fn load_sample(path: &Path) -> Result<TsplibSample, CliError> {
    parse_tsplib(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", absolute(path).display())))
}

fn pick_adapter(args: &SolverArgs) -> Result<SolverAdapter, CliError> {
    if let Some(template) = &args.solver_cmd {
        return Ok(SolverAdapter::new("custom", template, args.dialect)?);
    }
    match &args.solver {
        Some(name) => Ok(SolverAdapter::by_name(name)?),
        None => SolverAdapter::detect().ok_or_else(|| {
            CliError::input(format!("no solver found; pass --solver, --solver-cmd or set {SOLVER_ENV}"))
        }),
    }
}

/// Human-readable listing of a solution, one truck per line.
pub fn describe_solution(solution: &DeliveryRoutingSolution) -> String {
    let mut out = String::new();
    for plan in &solution.plans {
        let delivery: Vec<String> = plan.delivery.iter().map(|r| format!("r{r}")).collect();
        let route: Vec<String> = plan.route.iter().map(usize::to_string).collect();
        let route = if route.is_empty() { "idle".to_string() } else { route.join(" -> ") };
        writeln!(out, "t{}: {{{}}} {route}", plan.truck, delivery.join(", ")).unwrap();
    }
    out
}

/// Parses arguments, sets up logging, runs the command and returns the
/// process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    env_logger::Builder::new().parse_filters(&cli.log).format_timestamp(None).init();
    match run(&cli.command) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(command: &Command) -> CliResult {
    log::info!("configuration: {command:?}");
    match command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Report(a) => cmd_report(a),
    }
}

pub fn cmd_gen(a: &GenArgs) -> CliResult {
    let sort_mode = match a.sort_mode.as_str() {
        "corrected" => SortMode::Corrected,
        "verbatim" => SortMode::Verbatim,
        other => return Err(CliError::input(format!("unknown sort mode {other:?}"))),
    };
    log::info!("tsplib {} -> {}", absolute(&a.tsplib).display(), absolute(&a.out).display());
    let sample = load_sample(&a.tsplib)?;
    let options = GenerationOptions { avg_volume: a.avg_volume, sort_mode, ..Default::default() };
    let family = generate_family(&sample, &a.k, a.m, a.seed, &options)
        .map_err(|e| CliError::input(e.to_string()))?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::input(format!("{}: {e}", absolute(&a.out).display())))?;
    let mut out = String::new();
    for member in &family.members {
        let name = format!("{}_k{}_m{}_s{}.instance", sample.name, member.k, a.m, a.seed);
        let path = a.out.join(name);
        write(&path, &serialize_instance(&member.instance))?;
        if !member.uncovered.is_empty() {
            log::warn!("k={}: nodes {:?} appear in no request", member.k, member.uncovered);
        }
        writeln!(out, "k={} n={} {}", member.k, member.instance.requests().len(), path.display()).unwrap();
    }
    Ok(out)
}

pub fn cmd_build(a: &BuildArgs) -> CliResult {
    log::info!("instance {} -> {}", absolute(&a.instance).display(), absolute(&a.lp).display());
    let instance = load_instance(&a.instance)?;
    let encoding = encode(&instance, a.formulation);
    let lp = emit_lp(encoding.model()).map_err(|e| CliError::input(e.to_string()))?;
    write(&a.lp, &lp)?;
    Ok(format!("{}\n", census(encoding.model())))
}

pub fn cmd_solve(a: &SolveArgs) -> CliResult {
    log::info!("instance {}", absolute(&a.instance).display());
    let instance = load_instance(&a.instance)?;
    let adapter = pick_adapter(&a.solver)?;
    log::info!("solver {adapter}: {}", adapter.template);
    let outcome = solve(&instance, a.formulation, &adapter, a.solver.time_limit)?;
    let mut out = format!("status {}\n", outcome.status);
    match outcome.objective {
        Some(obj) => writeln!(out, "objective {obj}").unwrap(),
        None => out.push_str("objective none\n"),
    }
    writeln!(out, "wall_time_s {:.3}", outcome.wall_time_s).unwrap();
    if let Some(solution) = &outcome.solution {
        out.push_str(&describe_solution(solution));
        if let Some(path) = &a.solution_out {
            write(path, &serialize_solution(solution))?;
        }
    }
    Ok(out)
}

pub fn cmd_validate(a: &ValidateArgs) -> CliResult {
    let instance = load_instance(&a.instance)?;
    let text = read(&a.solution)?;
    let solution = parse_solution_file(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", absolute(&a.solution).display())))?;
    let report = validate_solution(&solution, &instance, a.load_rule);
    if report.is_clean() {
        let value = crate::model::xi(&solution, &instance).map_err(|e| CliError::input(e.to_string()))?;
        Ok(format!("valid\nxi {value}\n"))
    } else {
        Err(CliError { code: 3, message: format!("invalid solution\n{report}") })
    }
}

pub fn cmd_oracle(a: &OracleArgs) -> CliResult {
    let instance = load_instance(&a.instance)?;
    let options = OracleOptions {
        limits: OracleLimits::default(),
        load_rule: a.load_rule,
        transit_probe: a.transit_probe,
    };
    let result = oracle(&instance, a.semantics, &options).map_err(|e| CliError::input(e.to_string()))?;
    if let Some(path) = &a.solution_out {
        write(path, &serialize_solution(&result.solution))?;
    }
    Ok(format!("value {}\n{}", result.value, describe_solution(&result.solution)))
}

pub fn cmd_bench(a: &BenchArgs) -> CliResult {
    let samples = a.tsplib.iter().map(|p| {
        log::info!("sample {}", absolute(p).display());
        load_sample(p)
    });
    let samples = samples.collect::<Result<Vec<_>, _>>()?;
    let adapter = match (&a.solver_cmd, a.solver.as_str()) {
        (Some(t), _) => Some(SolverAdapter::new("custom", t, a.dialect)?),
        (None, "none") => None,
        (None, name) => Some(SolverAdapter::by_name(name)?),
    };
    let config = BenchConfig {
        samples,
        k_list: a.k.clone(),
        m_list: a.m.clone(),
        formulations: a.formulations.clone(),
        adapter: adapter.clone(),
        time_limit_s: a.time_limit,
        seed: a.seed,
        workers: a.workers,
        generation: GenerationOptions::default(),
    };
    let records = bench(&config)?;
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).map_err(|e| CliError::input(e.to_string()))?;
    fs::write(&a.csv, &buf).map_err(|e| CliError::input(format!("{}: {e}", absolute(&a.csv).display())))?;
    if let Some(path) = &a.markdown {
        let label = ReportLabel {
            solver: adapter.as_ref().map(|ad| ad.name.clone()),
            time_limit_s: adapter.as_ref().map(|_| a.time_limit),
        };
        write(path, &render_markdown(&records, &label)?)?;
    }
    let failed = records.iter().filter(|r| r.status == "Error" || r.status == "CountMismatch").count();
    let text = format!("{} cells, {failed} failed, csv {}\n", records.len(), absolute(&a.csv).display());
    if failed > 0 {
        return Err(CliError { code: 3, message: text });
    }
    Ok(text)
}

pub fn cmd_report(a: &ReportArgs) -> CliResult {
    let file = fs::File::open(&a.csv).map_err(|e| CliError::input(format!("{}: {e}", absolute(&a.csv).display())))?;
    let records = read_csv(file)?;
    let label = ReportLabel { solver: a.solver.clone(), time_limit_s: a.time_limit };
    let md = render_markdown(&records, &label)?;
    match &a.out {
        Some(path) => {
            write(path, &md)?;
            Ok(String::new())
        }
        None => Ok(md),
    }
}
