use std::fs;
use std::path::Path;

use mopso_ca::experiment::{
    emit_plot_data, front_path, run_experiment, run_experiment_with, summarize, ExperimentConfig,
    ExperimentReport, Metric, PlotKind,
};
use mopso_ca::metrics::{hypervolume, reference_point};
use mopso_ca::{front_file, Algorithm, CaParams, Error, GaParams, ProblemId, PsoParams};

fn tiny(dir: &Path, runs: usize) -> ExperimentConfig {
    ExperimentConfig {
        algorithms: Algorithm::ALL.to_vec(),
        problems: vec![ProblemId::Uf1, ProblemId::Dtlz5],
        runs,
        base_seed: 3,
        output_dir: dir.to_path_buf(),
        threads: 2,
        reference_size: Some(60),
        nsga2: GaParams {
            population: 20,
            max_evaluations: 200,
            ..GaParams::default()
        },
        omopso: PsoParams {
            population: 20,
            archive_capacity: 10,
            iterations: 8,
            ..PsoParams::default()
        },
        mopso_ca: CaParams {
            population: 20,
            archive_capacity: 10,
            local_archive_capacity: 10,
            iterations: 8,
            ..CaParams::default()
        },
    }
}

#[test]
fn single_run_cells_have_zero_spread() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&tiny(dir.path(), 1)).unwrap();
    assert_eq!(report.cells.len(), 6);
    for cell in &report.cells {
        for m in Metric::ALL {
            assert_eq!(cell.stat(m).std, 0.0);
        }
    }
}

#[test]
fn identical_configs_give_identical_summaries() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_experiment(&tiny(a.path(), 2)).unwrap();
    let mut cfg = tiny(b.path(), 2);
    cfg.threads = 1;
    let rb = run_experiment(&cfg).unwrap();
    assert_eq!(ra.summary_csv(), rb.summary_csv());
    assert_eq!(
        fs::read_to_string(a.path().join("summary.csv")).unwrap(),
        fs::read_to_string(b.path().join("summary.csv")).unwrap()
    );
}

#[test]
fn summary_means_are_means_of_the_run_rows() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&tiny(dir.path(), 3)).unwrap();
    let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().next(), Some("algorithm,problem,metric,mean,std"));
    for line in summary.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let column = match f[2] {
            "SP" => 4,
            "IGD" => 5,
            "HV" => 6,
            other => panic!("unexpected metric {other}"),
        };
        let values: Vec<f64> = runs
            .lines()
            .skip(1)
            .map(|r| r.split(',').collect::<Vec<_>>())
            .filter(|r| r[0] == f[0] && r[1] == f[1])
            .map(|r| r[column].parse().unwrap())
            .collect();
        assert_eq!(values.len(), 3);
        let mean = values.iter().sum::<f64>() / 3.0;
        let reported: f64 = f[3].parse().unwrap();
        assert!((reported - mean).abs() <= 1e-12 * mean.abs().max(1.0), "{line}");
    }
}

#[test]
fn report_reloads_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&tiny(dir.path(), 2)).unwrap();
    let loaded = ExperimentReport::load(dir.path()).unwrap();
    assert_eq!(loaded.summary_csv(), report.summary_csv());
    assert_eq!(summarize(&loaded), summarize(&report));
}

#[test]
fn front_files_reproduce_the_reported_hypervolume() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&tiny(dir.path(), 2)).unwrap();
    for r in &report.records {
        assert_eq!(r.front_file, front_path(dir.path(), r.algorithm, r.problem, r.seed));
        let front = front_file::read(&r.front_file).unwrap();
        let reference = front_file::read(&report.reference_file(r.problem)).unwrap();
        let hv = hypervolume(&front, &reference_point(&reference).unwrap()).unwrap();
        assert_eq!(hv, r.indicators.hv);
    }
}

#[test]
fn plot_data_covers_every_cell() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&tiny(dir.path(), 2)).unwrap();
    let scatter = emit_plot_data(&report, PlotKind::FrontScatter).unwrap();
    assert_eq!(scatter.len(), 2 * (3 + 1));
    assert!(scatter.iter().all(|p| p.exists()));
    let bars = emit_plot_data(&report, PlotKind::HvBars).unwrap();
    let text = fs::read_to_string(&bars[0]).unwrap();
    assert_eq!(text.lines().next(), Some("problem,algorithm,mean_hv,std_hv"));
    assert_eq!(text.lines().count(), 1 + 3 * 2);
}

#[test]
fn summary_table_flags_one_best_value_per_row() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_experiment(&tiny(dir.path(), 1)).unwrap();
    let table = summarize(&report);
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 3);
    for row in rows {
        assert!(row.matches('*').count() >= 1, "{row}");
    }

    let mut cfg = tiny(dir.path(), 1);
    cfg.algorithms = vec![Algorithm::MopsoCa];
    let single = run_experiment(&cfg).unwrap();
    assert!(!summarize(&single).contains('*'));
}

#[test]
fn unwritable_output_fails_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let cfg = tiny(&blocker.join("out"), 1);
    let calls = std::sync::atomic::AtomicUsize::new(0);
    let err = run_experiment_with(&cfg, |a, p, s| {
        calls.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
        cfg.run_single(a, p, s)
    })
    .unwrap_err();
    assert!(matches!(err, Error::OutputDir { .. }), "{err}");
    assert_eq!(calls.into_inner(), 0);
}

#[test]
fn a_crashing_cell_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tiny(dir.path(), 2);
    let err = run_experiment_with(&cfg, |a, p, s| {
        if a == Algorithm::Omopso && p == ProblemId::Dtlz5 && s == 4 {
            panic!("boom");
        }
        cfg.run_single(a, p, s)
    })
    .unwrap_err();
    match err {
        Error::CellFailed {
            algorithm,
            problem,
            run,
            message,
        } => {
            assert_eq!((algorithm.as_str(), problem.as_str(), run), ("omopso", "DTLZ5", 1));
            assert!(message.contains("boom"));
        }
        other => panic!("unexpected error {other}"),
    }
}
