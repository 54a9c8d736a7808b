use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::error::Result;
use crate::front_file;
use crate::optimizers::Algorithm;
use crate::problems::ProblemId;

use super::{ExperimentReport, Metric, RunRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Per-algorithm front files plus the reference front, per problem.
    FrontScatter,
    /// `problem,algorithm,mean_hv,std_hv`.
    HvBars,
}

/// Mean-value table: one row per problem and metric, one column per
/// algorithm. The best value of a row is flagged with `*` (largest HV,
/// smallest SP and IGD) when more than one algorithm is present.
pub fn summarize(report: &ExperimentReport) -> String {
    let algorithms = report.algorithms();
    let problems = report.problems();
    let flag = algorithms.len() > 1;

    let mut out = String::new();
    let _ = write!(out, "{:<8}{:<8}", "Problem", "Metric");
    for a in &algorithms {
        let _ = write!(out, "{:>14}", a.label());
    }
    out.push('\n');

    for &p in &problems {
        for m in Metric::ALL {
            let means: Vec<Option<f64>> = algorithms
                .iter()
                .map(|&a| report.cell(a, p).map(|c| c.stat(m).mean))
                .collect();
            let best = means
                .iter()
                .flatten()
                .copied()
                .reduce(|x, y| if m.higher_is_better() { x.max(y) } else { x.min(y) });
            let _ = write!(out, "{:<8}{:<8}", p.as_str(), m.as_str());
            for v in &means {
                let cell = match v {
                    Some(v) => {
                        let star = if flag && Some(*v) == best { "*" } else { " " };
                        format!("{v:.4e}{star}")
                    }
                    None => "-".to_string(),
                };
                let _ = write!(out, "{cell:>14}");
            }
            out.push('\n');
        }
    }
    out
}

/// Run whose hypervolume is the lower median of its cell.
fn median_run(report: &ExperimentReport, algorithm: Algorithm, problem: ProblemId) -> Option<&RunRecord> {
    let mut runs: Vec<&RunRecord> = report
        .records
        .iter()
        .filter(|r| r.algorithm == algorithm && r.problem == problem)
        .collect();
    runs.sort_by(|a, b| {
        a.indicators
            .hv
            .total_cmp(&b.indicators.hv)
            .then(a.seed.cmp(&b.seed))
    });
    runs.get(runs.len().checked_sub(1)? / 2).copied()
}

/// Writes plot data under `<output_dir>/plots` and returns the written paths.
pub fn emit_plot_data(report: &ExperimentReport, kind: PlotKind) -> Result<Vec<PathBuf>> {
    let dir = report.output_dir.join("plots");
    fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    match kind {
        PlotKind::FrontScatter => {
            for p in report.problems() {
                for a in report.algorithms() {
                    let Some(run) = median_run(report, a, p) else { continue };
                    let front = front_file::read(&run.front_file)?;
                    let path = dir.join(format!("front_{p}_{a}.dat"));
                    front_file::write(
                        &path,
                        &front,
                        Some(&format!("{} on {p}, seed {} (median HV run)", a.label(), run.seed)),
                    )?;
                    written.push(path);
                }
                let reference = front_file::read(&report.reference_file(p))?;
                let path = dir.join(format!("front_{p}_reference.dat"));
                front_file::write(&path, &reference, Some(&format!("{p} reference front")))?;
                written.push(path);
            }
        }
        PlotKind::HvBars => {
            let mut csv = String::from("problem,algorithm,mean_hv,std_hv\n");
            for p in report.problems() {
                for a in report.algorithms() {
                    if let Some(c) = report.cell(a, p) {
                        let _ = writeln!(csv, "{p},{a},{},{}", c.hv.mean, c.hv.std);
                    }
                }
            }
            let path = dir.join("hv_bars.csv");
            fs::write(&path, csv)?;
            written.push(path);
        }
    }
    Ok(written)
}
