//! `qae`: command-line driver for the amplitude-estimation experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qae_core::cqae::{run_cqae, run_cqae_exact, CQAEConfig};
use qae_core::mci::{hit_or_miss, IntegrandPair};
use qae_core::mlqae::{
    build_schedule, load_records, mle_estimate, relative_error, run_mlqae, MLEResult, Schedule,
    ScheduleKind, ShotRecord, DEFAULT_GRID_POINTS,
};
use qae_core::noise::{noisy_mlqae, NoiseModel};
use qae_core::qaa::{amplified_circuit, build_a, build_q, ProblemSpec};
use qae_core::report::{emit, Format, Tabular};
use qae_core::repro::{paper_repro, ReproOptions};
use qae_core::statevec::{parse_circuit, to_text, Circuit};
use qae_core::transpile::{
    decompose_mcx, depth, transpile, BasisGateSet, CouplingMap, McxMode, TranspileSummary,
};
use qae_core::{Error, Result};

/// Default output directory when `--out` is not given.
const OUTPUT_DIR_ENV: &str = "QAE_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "qae",
    version,
    about = "Amplitude-estimation experiments on a statevector simulator"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,

    /// Output file. Without it, results go to $QAE_OUTPUT_DIR/<command>.<format>
    /// when that variable is set, otherwise to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical hit-or-miss integration.
    Mci(MciArgs),
    /// Phase-estimation amplitude estimation.
    Cqae(CqaeArgs),
    /// Maximum-likelihood amplitude estimation; `mlqae fit` post-processes counts.
    Mlqae(MlqaeArgs),
    /// Same as `mlqae fit`.
    #[command(name = "mlqae-fit")]
    MlqaeFit(FitArgs),
    /// Lower to {u1, u2, u3, cx} and route onto a coupling map.
    Transpile(TranspileArgs),
    /// Run the full reproduction suite; exits nonzero on any failure.
    #[command(name = "paper-repro")]
    PaperRepro(ReproArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Domain qubits.
    #[arg(long, default_value_t = 2)]
    qubits: usize,
    /// Comma-separated good states, most significant qubit first (e.g. `01,11`).
    #[arg(long, default_value = "01", allow_hyphen_values = true)]
    good: String,
}

impl ProblemArgs {
    fn spec(&self) -> Result<ProblemSpec> {
        ProblemSpec::parse(self.qubits, &self.good)
    }
}

#[derive(Args)]
struct MciArgs {
    /// Integrand: sinpi, one or x.
    #[arg(long = "fn", default_value = "sinpi")]
    function: String,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct CqaeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 3)]
    ancillae: usize,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// Required unless `--exact` is given.
    #[arg(long, required_unless_present = "exact")]
    seed: Option<u64>,
    /// Report the exact ancilla distribution instead of sampling.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct MlqaeArgs {
    #[command(subcommand)]
    fit: Option<MlqaeSub>,
    #[command(flatten)]
    problem: ProblemArgs,
    /// Number of circuits in the schedule.
    #[arg(long, default_value_t = 4)]
    circuits: usize,
    #[arg(long, default_value = "eis")]
    kind: ScheduleKind,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    #[arg(long, required = true)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Gate noise as `preset[:scale]`, e.g. `ibmqx2-2020-03-28:2`. Circuits are
    /// lowered to basis gates first.
    #[arg(long)]
    noise: Option<NoiseModel>,
}

#[derive(Subcommand)]
enum MlqaeSub {
    /// Fit externally supplied counts.
    Fit(FitArgs),
}

#[derive(Args)]
struct FitArgs {
    /// JSON array of {power, shots, hits}.
    #[arg(long)]
    records: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    /// True amplitude; adds relative errors to the output.
    #[arg(long)]
    truth: Option<f64>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["circuit", "mcx", "mlqae_power"]))]
struct TranspileArgs {
    /// Circuit in the text format (`QUBITS n`, one gate per line).
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Decomposed multi-controlled NOT with this many controls.
    #[arg(long)]
    mcx: Option<usize>,
    #[arg(long, default_value = "advanced")]
    mode: McxMode,
    /// The circuit `Q^m·A` of the problem below.
    #[arg(long)]
    mlqae_power: Option<usize>,
    #[command(flatten)]
    problem: ProblemArgs,
    /// `ibmqx2`, `vigo`, `line:N`, `full:N` or a JSON file.
    #[arg(long, default_value = "ibmqx2")]
    coupling: String,
    /// `identity`, `preset` (the map's named layout) or a list like `1,0,2`.
    #[arg(long, default_value = "identity")]
    layout: String,
    #[arg(long, default_value = "u1,u2,u3,cx")]
    basis: BasisGateSet,
    /// Also write the routed circuit in text form here.
    #[arg(long)]
    emit_circuit: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    #[arg(long)]
    seed: u64,
    /// `statistical` skips every seed-dependent check.
    #[arg(long)]
    skip: Option<SkipKind>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SkipKind {
    Statistical,
}

#[derive(Serialize)]
struct MlqaeOutput {
    problem: String,
    true_amplitude: f64,
    schedule: Schedule,
    shots_per_circuit: u64,
    seed: u64,
    noise: Option<NoiseModel>,
    records: Vec<ShotRecord>,
    fit: MLEResult,
    amplitude_relative_error: f64,
}

#[derive(Serialize)]
struct FitOutput {
    records: Vec<ShotRecord>,
    fit: MLEResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_relative_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitude_relative_error: Option<f64>,
}

#[derive(Serialize)]
struct TranspileOutput {
    input: String,
    logical_depth: usize,
    #[serde(flatten)]
    summary: TranspileSummary,
}

fn record_rows(records: &[ShotRecord], fit: &MLEResult) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.power.to_string(),
                r.shots.to_string(),
                r.hits.to_string(),
                fit.theta_hat.to_string(),
                fit.amplitude_hat.to_string(),
            ]
        })
        .collect()
}

fn record_header() -> Vec<String> {
    ["power", "shots", "hits", "theta_hat", "amplitude_hat"]
        .map(String::from)
        .to_vec()
}

impl Tabular for MlqaeOutput {
    fn header(&self) -> Vec<String> {
        record_header()
    }
    fn rows(&self) -> Vec<Vec<String>> {
        record_rows(&self.records, &self.fit)
    }
}

impl Tabular for FitOutput {
    fn header(&self) -> Vec<String> {
        record_header()
    }
    fn rows(&self) -> Vec<Vec<String>> {
        record_rows(&self.records, &self.fit)
    }
}

impl Tabular for TranspileOutput {
    fn header(&self) -> Vec<String> {
        self.summary.header()
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = vec![
            vec!["input".to_string(), self.input.clone()],
            vec!["logical_depth".to_string(), self.logical_depth.to_string()],
        ];
        rows.extend(self.summary.rows());
        rows
    }
}

fn parse_coupling(s: &str) -> Result<CouplingMap> {
    let sized = |rest: &str| {
        rest.parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad coupling size {rest:?}")))
    };
    if let Some(n) = s.strip_prefix("line:") {
        Ok(CouplingMap::line(sized(n)?))
    } else if let Some(n) = s.strip_prefix("full:") {
        Ok(CouplingMap::full(sized(n)?))
    } else if s.ends_with(".json") {
        CouplingMap::from_json(&std::fs::read_to_string(s)?)
    } else {
        CouplingMap::preset(s)
    }
}

fn parse_layout(s: &str, map: &CouplingMap) -> Result<Option<Vec<usize>>> {
    match s {
        "identity" => Ok(None),
        "preset" => map.layout.clone().map(Some).ok_or_else(|| {
            Error::InvalidLayout(format!("coupling map {} has no named layout", map.name))
        }),
        list => list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::InvalidLayout(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<usize>>>()
            .map(Some),
    }
}

struct Output {
    format: Format,
    path: Option<PathBuf>,
}

impl Output {
    fn new(cli: &Cli, name: &str) -> Self {
        let path = cli.out.clone().or_else(|| {
            std::env::var_os(OUTPUT_DIR_ENV)
                .map(|dir| PathBuf::from(dir).join(format!("{name}.{}", cli.format)))
        });
        Output {
            format: cli.format,
            path,
        }
    }

    fn write<T: Serialize + Tabular>(&self, value: &T) -> Result<()> {
        emit(value, self.format, self.path.as_deref())
    }
}

fn fit_records(args: &FitArgs) -> Result<FitOutput> {
    let records = load_records(&args.records)?;
    let fit = mle_estimate(&records, args.grid)?;
    let (theta_err, amp_err) = match args.truth {
        Some(a) => {
            let theta = a.sqrt().asin();
            (
                Some(relative_error(fit.theta_hat, theta)),
                Some(relative_error(fit.amplitude_hat, a)),
            )
        }
        None => (None, None),
    };
    Ok(FitOutput {
        records,
        fit,
        theta_relative_error: theta_err,
        amplitude_relative_error: amp_err,
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Mci(args) => {
            let pair = IntegrandPair::preset(&args.function)?;
            Output::new(cli, "mci").write(&hit_or_miss(&pair, args.samples, args.seed)?)?;
        }
        Command::Cqae(args) => {
            let spec = args.problem.spec()?;
            let config = CQAEConfig::new(spec, args.ancillae, args.shots, args.seed.unwrap_or(0));
            let result = if args.exact {
                run_cqae_exact(&config)?
            } else {
                run_cqae(&config)?
            };
            Output::new(cli, "cqae").write(&result)?;
        }
        Command::Mlqae(args) => {
            if let Some(MlqaeSub::Fit(fit)) = &args.fit {
                Output::new(cli, "mlqae-fit").write(&fit_records(fit)?)?;
                return Ok(ExitCode::SUCCESS);
            }
            let spec = args.problem.spec()?;
            let seed = args.seed.expect("required by the parser");
            let schedule = build_schedule(args.kind, args.circuits)?;
            let records = match &args.noise {
                Some(model) => noisy_mlqae(&spec, &schedule, args.shots, seed, model)?,
                None => run_mlqae(&spec, &schedule, args.shots, seed)?,
            };
            let fit = mle_estimate(&records, args.grid)?;
            let out = MlqaeOutput {
                problem: spec.to_string(),
                true_amplitude: spec.amplitude(),
                amplitude_relative_error: if spec.amplitude() > 0.0 {
                    relative_error(fit.amplitude_hat, spec.amplitude())
                } else {
                    fit.amplitude_hat
                },
                schedule,
                shots_per_circuit: args.shots,
                seed,
                noise: args.noise,
                records,
                fit,
            };
            Output::new(cli, "mlqae").write(&out)?;
        }
        Command::MlqaeFit(fit) => {
            Output::new(cli, "mlqae-fit").write(&fit_records(fit)?)?;
        }
        Command::Transpile(args) => {
            let (input, circuit): (String, Circuit) = if let Some(path) = &args.circuit {
                (
                    path.display().to_string(),
                    parse_circuit(&std::fs::read_to_string(path)?)?,
                )
            } else if let Some(k) = args.mcx {
                let mode = args.mode;
                (
                    format!("mcx k={k} mode={mode:?}").to_lowercase(),
                    decompose_mcx(k, mode)?,
                )
            } else {
                let m = args
                    .mlqae_power
                    .expect("argument group guarantees one input");
                let spec = args.problem.spec()?;
                let a = build_a(&spec);
                let q = build_q(&a);
                (format!("Q^{m}·A for {spec}"), amplified_circuit(&a, &q, m))
            };
            let map = parse_coupling(&args.coupling)?;
            let layout = parse_layout(&args.layout, &map)?;
            let routed = transpile(&circuit, &args.basis, &map, layout.as_deref())?;
            if let Some(path) = &args.emit_circuit {
                std::fs::write(path, to_text(&routed.circuit))?;
            }
            let out = TranspileOutput {
                input,
                logical_depth: depth(&circuit),
                summary: routed.summary(&map),
            };
            Output::new(cli, "transpile").write(&out)?;
        }
        Command::PaperRepro(args) => {
            let opts = ReproOptions {
                seed: args.seed,
                skip_statistical: matches!(args.skip, Some(SkipKind::Statistical)),
            };
            let report = paper_repro(&opts)?;
            Output::new(cli, "paper-repro").write(&report)?;
            for e in report.entries.iter().filter(|e| !e.pass) {
                eprintln!("FAIL [{}] {}: {}", e.criterion, e.name, e.detail);
            }
            if !report.all_passed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
