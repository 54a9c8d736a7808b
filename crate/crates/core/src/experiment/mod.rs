//! Seeded batch experiments over algorithms × problems × runs.
//!
//! Every cell uses `seed = base_seed + run`. Cells run in parallel; their
//! results are collected and aggregated in a fixed order, so the report does
//! not depend on the thread count.
//!
//! Output directory layout:
//!
//! ```text
//! <out>/config.json              effective configuration
//! <out>/reference/<PROBLEM>.dat  reference front samples
//! <out>/fronts/<algo>_<PROBLEM>_seed<seed>.dat
//! <out>/runs.csv                 algorithm,problem,seed,evaluations,SP,IGD,HV
//! <out>/summary.csv              algorithm,problem,metric,mean,std
//! ```

mod report;

pub use report::{emit_plot_data, summarize, PlotKind};

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{run_mopso_ca, CaParams};
use crate::error::{Error, Result};
use crate::front_file;
use crate::metrics::{self, Indicators};
use crate::optimizers::{run_nsga2, run_omopso, Algorithm, GaParams, PsoParams, RunResult};
use crate::problems::{Problem, ProblemId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub problems: Vec<ProblemId>,
    pub runs: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    /// Reference front size; `None` picks 1000 points for two objectives and
    /// 2500 for three.
    pub reference_size: Option<usize>,
    pub nsga2: GaParams,
    pub omopso: PsoParams,
    pub mopso_ca: CaParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            problems: ProblemId::ALL.to_vec(),
            runs: 30,
            base_seed: 1,
            output_dir: PathBuf::from("results"),
            threads: 0,
            reference_size: None,
            nsga2: GaParams::default(),
            omopso: PsoParams::default(),
            mopso_ca: CaParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Empty("algorithm list"));
        }
        if self.problems.is_empty() {
            return Err(Error::Empty("problem list"));
        }
        if matches!(self.reference_size, Some(m) if m < 2) {
            return Err(Error::InvalidParameter("reference_size must be at least 2".into()));
        }
        for a in &self.algorithms {
            match a {
                Algorithm::Nsga2 => self.nsga2.validate()?,
                Algorithm::Omopso => self.omopso.validate()?,
                Algorithm::MopsoCa => self.mopso_ca.validate()?,
            }
        }
        Ok(())
    }

    pub fn reference_front(&self, problem: ProblemId) -> Vec<Vec<f64>> {
        let m = self
            .reference_size
            .unwrap_or_else(|| problem.default_reference_size());
        Problem::new(problem)
            .true_front_sample(m)
            .expect("reference size validated")
    }

    /// Runs one cell with this configuration's parameter blocks.
    pub fn run_single(&self, algorithm: Algorithm, problem: ProblemId, seed: u64) -> Result<RunResult> {
        let problem = Problem::new(problem);
        match algorithm {
            Algorithm::Nsga2 => run_nsga2(&problem, &self.nsga2, seed),
            Algorithm::Omopso => run_omopso(&problem, &self.omopso, seed),
            Algorithm::MopsoCa => run_mopso_ca(&problem, &self.mopso_ca, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub problem: ProblemId,
    pub seed: u64,
    pub evaluations: usize,
    pub indicators: Indicators,
    pub front_file: PathBuf,
}

impl RunRecord {
    pub const CSV_HEADER: &'static str = "algorithm,problem,seed,evaluations,SP,IGD,HV";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.algorithm,
            self.problem,
            self.seed,
            self.evaluations,
            self.indicators.sp,
            self.indicators.igd,
            self.indicators.hv
        )
    }
}

/// Mean and sample standard deviation (0 for a single value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Sp,
    Igd,
    Hv,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Sp, Metric::Igd, Metric::Hv];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Sp => "SP",
            Metric::Igd => "IGD",
            Metric::Hv => "HV",
        }
    }

    pub fn higher_is_better(self) -> bool {
        self == Metric::Hv
    }

    fn of(self, i: &Indicators) -> f64 {
        match self {
            Metric::Sp => i.sp,
            Metric::Igd => i.igd,
            Metric::Hv => i.hv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub algorithm: Algorithm,
    pub problem: ProblemId,
    pub runs: usize,
    pub sp: Stat,
    pub igd: Stat,
    pub hv: Stat,
}

impl CellSummary {
    pub fn stat(&self, metric: Metric) -> Stat {
        match metric {
            Metric::Sp => self.sp,
            Metric::Igd => self.igd,
            Metric::Hv => self.hv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub output_dir: PathBuf,
    pub records: Vec<RunRecord>,
    pub cells: Vec<CellSummary>,
}

impl ExperimentReport {
    fn from_records(output_dir: PathBuf, records: Vec<RunRecord>) -> Self {
        let mut grouped: BTreeMap<(ProblemId, Algorithm), Vec<&RunRecord>> = BTreeMap::new();
        for r in &records {
            grouped.entry((r.problem, r.algorithm)).or_default().push(r);
        }
        let cells = grouped
            .into_iter()
            .map(|((problem, algorithm), rs)| {
                let stat = |m: Metric| {
                    Stat::of(&rs.iter().map(|r| m.of(&r.indicators)).collect::<Vec<_>>())
                };
                CellSummary {
                    algorithm,
                    problem,
                    runs: rs.len(),
                    sp: stat(Metric::Sp),
                    igd: stat(Metric::Igd),
                    hv: stat(Metric::Hv),
                }
            })
            .collect();
        Self {
            output_dir,
            records,
            cells,
        }
    }

    /// Rebuilds a report from the `runs.csv` of a finished experiment.
    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("runs.csv");
        let text = fs::read_to_string(&path)?;
        let origin = path.display().to_string();
        let mut records = Vec::new();
        for (idx, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: origin.clone(),
                line: idx + 1,
                message,
            };
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 7 {
                return Err(err(format!("expected 7 columns, found {}", cols.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| err(format!("`{s}`: {e}")));
            let algorithm: Algorithm = cols[0].parse()?;
            let problem: ProblemId = cols[1].parse()?;
            let seed: u64 = cols[2].parse().map_err(|e| err(format!("seed: {e}")))?;
            records.push(RunRecord {
                algorithm,
                problem,
                seed,
                evaluations: cols[3].parse().map_err(|e| err(format!("evaluations: {e}")))?,
                indicators: Indicators {
                    sp: num(cols[4])?,
                    igd: num(cols[5])?,
                    hv: num(cols[6])?,
                },
                front_file: front_path(dir, algorithm, problem, seed),
            });
        }
        if records.is_empty() {
            return Err(Error::Empty("runs.csv"));
        }
        Ok(Self::from_records(dir.to_path_buf(), records))
    }

    pub fn cell(&self, algorithm: Algorithm, problem: ProblemId) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.problem == problem)
    }

    pub fn algorithms(&self) -> Vec<Algorithm> {
        let mut v: Vec<Algorithm> = self.cells.iter().map(|c| c.algorithm).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn problems(&self) -> Vec<ProblemId> {
        let mut v: Vec<ProblemId> = self.cells.iter().map(|c| c.problem).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn reference_file(&self, problem: ProblemId) -> PathBuf {
        reference_path(&self.output_dir, problem)
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("algorithm,problem,metric,mean,std\n");
        for c in &self.cells {
            for m in Metric::ALL {
                let s = c.stat(m);
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.algorithm,
                    c.problem,
                    m.as_str(),
                    s.mean,
                    s.std
                ));
            }
        }
        out
    }
}

pub fn front_path(dir: &Path, algorithm: Algorithm, problem: ProblemId, seed: u64) -> PathBuf {
    dir.join("fronts")
        .join(format!("{algorithm}_{problem}_seed{seed}.dat"))
}

pub fn reference_path(dir: &Path, problem: ProblemId) -> PathBuf {
    dir.join("reference").join(format!("{problem}.dat"))
}

fn prepare_output(config: &ExperimentConfig) -> Result<()> {
    let dir = &config.output_dir;
    let wrap = |source| Error::OutputDir {
        path: dir.clone(),
        source,
    };
    fs::create_dir_all(dir.join("fronts")).map_err(wrap)?;
    fs::create_dir_all(dir.join("reference")).map_err(wrap)?;
    let json = serde_json::to_string_pretty(config)?;
    fs::write(dir.join("config.json"), json).map_err(wrap)?;
    Ok(())
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

struct Cell {
    algorithm: Algorithm,
    problem: ProblemId,
    run: usize,
    seed: u64,
}

/// Executes every (algorithm, problem, run) cell and writes all artifacts.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(config, |a, p, seed| config.run_single(a, p, seed))
}

/// Like [`run_experiment`] with an injectable cell runner.
pub fn run_experiment_with<F>(config: &ExperimentConfig, runner: F) -> Result<ExperimentReport>
where
    F: Fn(Algorithm, ProblemId, u64) -> Result<RunResult> + Sync,
{
    config.validate()?;
    prepare_output(config)?;
    let dir = config.output_dir.clone();

    let mut references = BTreeMap::new();
    for &p in &config.problems {
        let front = config.reference_front(p);
        let ref_point = metrics::reference_point(&front)?;
        front_file::write(
            &reference_path(&dir, p),
            &front,
            Some(&format!("{p} reference front, {} points", front.len())),
        )?;
        references.insert(p, (front, ref_point));
    }

    let cells: Vec<Cell> = config
        .problems
        .iter()
        .flat_map(|&problem| {
            config.algorithms.iter().flat_map(move |&algorithm| {
                (0..config.runs).map(move |run| Cell {
                    algorithm,
                    problem,
                    run,
                    seed: config.base_seed + run as u64,
                })
            })
        })
        .collect();

    let execute = |cell: &Cell| -> Result<(RunResult, Indicators)> {
        let failed = |message: String| Error::CellFailed {
            algorithm: cell.algorithm.to_string(),
            problem: cell.problem.to_string(),
            run: cell.run,
            message,
        };
        let result = catch_unwind(AssertUnwindSafe(|| {
            runner(cell.algorithm, cell.problem, cell.seed)
        }))
        .map_err(|p| failed(panic_message(p)))?
        .map_err(|e| failed(e.to_string()))?;
        let (reference, ref_point) = &references[&cell.problem];
        let objectives = result.objectives();
        let indicators = Indicators::compute(&objectives, reference, ref_point)
            .map_err(|e| failed(e.to_string()))?;
        Ok((result, indicators))
    };

    let outcomes: Vec<Result<(RunResult, Indicators)>> = if config.threads == 1 {
        cells.iter().map(&execute).collect()
    } else if config.threads == 0 {
        cells.par_iter().map(&execute).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(|| cells.par_iter().map(&execute).collect())
    };

    let mut records = Vec::with_capacity(cells.len());
    for (cell, outcome) in cells.iter().zip(outcomes) {
        let (result, indicators) = outcome?;
        let path = front_path(&dir, cell.algorithm, cell.problem, cell.seed);
        front_file::write(
            &path,
            &result.objectives(),
            Some(&format!(
                "{} on {} seed {}, {} evaluations",
                cell.algorithm, cell.problem, cell.seed, result.evaluations_used
            )),
        )?;
        records.push(RunRecord {
            algorithm: cell.algorithm,
            problem: cell.problem,
            seed: cell.seed,
            evaluations: result.evaluations_used,
            indicators,
            front_file: path,
        });
    }

    let mut runs_csv = String::from(RunRecord::CSV_HEADER);
    runs_csv.push('\n');
    for r in &records {
        runs_csv.push_str(&r.csv_row());
        runs_csv.push('\n');
    }
    fs::write(dir.join("runs.csv"), runs_csv)?;

    let report = ExperimentReport::from_records(dir.clone(), records);
    fs::write(dir.join("summary.csv"), report.summary_csv())?;
    Ok(report)
}
