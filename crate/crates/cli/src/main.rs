use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use mopso_ca::agents::{MopsoCa, TraceRecord};
use mopso_ca::experiment::{
    emit_plot_data, run_experiment, summarize, ExperimentConfig, ExperimentReport, PlotKind,
};
use mopso_ca::metrics::{self, Indicators};
use mopso_ca::{front_file, Algorithm, Problem, ProblemId};

#[derive(Parser)]
#[command(name = "mopso-ca", version, about = "Cooperative-agent MOPSO experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one algorithm on one problem and print its final front.
    Single {
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        problem: ProblemId,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Parameter blocks are taken from this config when given.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the front here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Negotiation trace file (mopso-ca only).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Agent threads (mopso-ca only).
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Compute SP, IGD and HV of an approximation front.
    Metrics {
        #[arg(long)]
        approx: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Comma-separated HV reference point; defaults to 1.1 x the
        /// reference front's nadir.
        #[arg(long)]
        ref_point: Option<String>,
        #[arg(long, default_value = "-")]
        problem: String,
        #[arg(long, default_value = "-")]
        algorithm: String,
        #[arg(long, default_value_t = 0)]
        run: usize,
    },
    /// Print the mean table of a finished experiment directory.
    Summarize {
        #[arg(long)]
        report: PathBuf,
    },
    /// Export a reference front sample.
    Reference {
        #[arg(long)]
        problem: ProblemId,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad reference point component `{t}`"))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, output } => {
            let mut config = ExperimentConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            if let Some(dir) = output {
                config.output_dir = dir;
            }
            let report = run_experiment(&config)?;
            emit_plot_data(&report, PlotKind::FrontScatter)?;
            emit_plot_data(&report, PlotKind::HvBars)?;
            print!("{}", summarize(&report));
            eprintln!("results written to {}", report.output_dir.display());
        }
        Command::Single {
            algo,
            problem,
            seed,
            config,
            output,
            trace,
            threads,
        } => {
            let config = match config {
                Some(path) => ExperimentConfig::load(&path)
                    .with_context(|| format!("loading {}", path.display()))?,
                None => ExperimentConfig::default(),
            };
            if trace.is_some() && algo != Algorithm::MopsoCa {
                bail!("--trace is only available for mopso-ca");
            }
            let result = if algo == Algorithm::MopsoCa {
                let mut run = MopsoCa::new(Problem::new(problem), config.mopso_ca.clone(), seed)?
                    .with_parallelism(threads)?;
                if trace.is_some() {
                    run = run.with_trace();
                }
                while run.iteration() < config.mopso_ca.iterations {
                    run.step();
                }
                if let (Some(path), Some(records)) = (&trace, run.trace()) {
                    let mut text = String::from(TraceRecord::HEADER);
                    text.push('\n');
                    for r in records {
                        text.push_str(&r.to_line());
                        text.push('\n');
                    }
                    fs::write(path, text)?;
                }
                run.into_result()
            } else {
                config.run_single(algo, problem, seed)?
            };
            let comment = format!(
                "{algo} on {problem} seed {seed}, {} evaluations",
                result.evaluations_used
            );
            emit(&front_file::format(&result.objectives(), Some(&comment)), output.as_ref())?;
        }
        Command::Metrics {
            approx,
            reference,
            ref_point,
            problem,
            algorithm,
            run,
        } => {
            let approx = front_file::read(&approx)?;
            let reference = front_file::read(&reference)?;
            let ref_point = match ref_point {
                Some(text) => parse_point(&text)?,
                None => metrics::reference_point(&reference)?,
            };
            let values = Indicators::compute(&approx, &reference, &ref_point)?;
            println!("problem,algorithm,run,SP,IGD,HV");
            println!(
                "{problem},{algorithm},{run},{},{},{}",
                values.sp, values.igd, values.hv
            );
        }
        Command::Summarize { report } => {
            let report = ExperimentReport::load(&report)
                .with_context(|| format!("loading report from {}", report.display()))?;
            print!("{}", summarize(&report));
        }
        Command::Reference {
            problem,
            points,
            output,
        } => {
            let m = points.unwrap_or_else(|| problem.default_reference_size());
            let front = Problem::new(problem).true_front_sample(m)?;
            let comment = format!("{problem} reference front, {m} points");
            emit(&front_file::format(&front, Some(&comment)), output.as_ref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
