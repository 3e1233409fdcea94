//! `coupled`: solve single instances, run Monte Carlo experiments, and
//! audit constraint families from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use coupled_cli::config::{ExperimentConfig, Method, SolveMode};
use coupled_cli::experiment::{render_csv, run_experiment, write_outputs};
use coupled_cli::generate::generate_instance;
use coupled_cli::trial::run_trial;
use coupled_cli::HarnessError;
use coupled_core::constraints::AxiomReport;

#[derive(Parser)]
#[command(
    name = "coupled",
    about = "Greedy and exact solving for coupled two-phase subset selection",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the second-phase evaluation order (set | sequence).
    #[arg(long)]
    mode: Option<SolveMode>,
    /// Override the method list (comma-separated).
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the first generated instance and print the results.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Output format (json | csv).
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
    /// Run the Monte Carlo experiment and write trials.csv + summary.json.
    Experiment {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Audit the constraint families of the first generated instance.
    CheckAxioms {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

impl CommonArgs {
    fn load(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut config = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if let Some(methods) = &self.methods {
            config.methods = methods.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

/// Deterministic view of one solver outcome (wall time deliberately
/// omitted so output bytes depend only on config and seed).
#[derive(Serialize)]
struct MethodView {
    total: f64,
    g_value: f64,
    h_value: f64,
    evaluations: u64,
}

#[derive(Serialize)]
struct SolveView {
    s1: usize,
    s2: usize,
    size_product: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal: Option<MethodView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    greedy: Option<MethodView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    heuristic: Option<MethodView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    random: Option<MethodView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_greedy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_heur: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_rand: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are successes, everything else is a
            // usage problem
            use clap::error::ErrorKind;
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Solve { common, format } => {
            let config = common.load()?;
            let instance = generate_instance(config.seed, 0, &config)?;
            let record = run_trial(&instance, &config, 0)?;
            match format {
                OutputFormat::Json => {
                    let to_view = |m: &Option<coupled_cli::trial::MethodOutcome>| {
                        m.as_ref().map(|m| MethodView {
                            total: m.total,
                            g_value: m.g_value,
                            h_value: m.h_value,
                            evaluations: m.evaluations,
                        })
                    };
                    let view = SolveView {
                        s1: record.s1,
                        s2: record.s2,
                        size_product: record.size_product,
                        optimal: to_view(&record.optimal),
                        greedy: to_view(&record.greedy),
                        heuristic: to_view(&record.heuristic),
                        random: to_view(&record.random),
                        ratio_greedy: record.ratio_greedy,
                        ratio_heur: record.ratio_heur,
                        ratio_rand: record.ratio_rand,
                    };
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&view).expect("view serializes")
                    );
                }
                OutputFormat::Csv => {
                    print!("{}", render_csv(std::slice::from_ref(&record)));
                }
            }
            Ok(())
        }
        Command::Experiment { common, out } => {
            let config = common.load()?;
            let output = run_experiment(&config)?;
            write_outputs(&output, &out)?;
            eprintln!("wrote {} trials to {}", output.records.len(), out.display());
            Ok(())
        }
        Command::CheckAxioms { common } => {
            let config = common.load()?;
            let instance = generate_instance(config.seed, 0, &config)?;
            let families = [
                (
                    "allocation-capacity",
                    instance.allocation.independence_constraint(),
                ),
                (
                    "task-uniqueness",
                    instance.allocation.uniqueness_constraint(),
                ),
                (
                    "per-time-capacity",
                    instance.deployment.per_time_capacity_constraint(),
                ),
                (
                    "active-times",
                    instance.deployment.active_times_constraint(),
                ),
                ("selection", instance.deployment.selection_constraint()),
            ];
            for (name, family) in families {
                let report = family.verify_axioms().map_err(HarnessError::Core)?;
                print_report(name, &report);
            }
            Ok(())
        }
    }
}

fn print_report(name: &str, report: &AxiomReport) {
    print!(
        "{name}: downward_closed={} exchange={} sets_checked={}",
        report.downward_closed, report.exchange_holds, report.sets_checked
    );
    if let Some((s, t)) = &report.downward_witness {
        print!(" downward_witness=({s:?}, {t:?})");
    }
    if let Some((x, y)) = &report.exchange_witness {
        print!(" exchange_witness=({x:?}, {y:?})");
    }
    println!();
}
