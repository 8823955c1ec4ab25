use std::path::Path;

use tubercle_core::sweep::{
    convergence_study, run_sweep, ConvergenceAxis, ConvergenceOptions, Metric, SweepConfig, MARKED_ALPHAS,
};
use tubercle_core::Execution;

fn small(cache: &Path) -> SweepConfig {
    SweepConfig {
        pars: vec![0.0, 3.0, 9.0],
        alphas: tubercle_core::sweep::with_marked_alphas(vec![0.0, 4.0, 8.0]),
        cache_dir: cache.to_path_buf(),
        ..SweepConfig::default()
    }
}

#[test]
fn every_cell_is_present() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    let res = run_sweep(&cfg, &Execution::Parallel(2)).unwrap();
    assert_eq!(res.cells.len(), cfg.pars.len() * cfg.alphas.len());
    let rows = res.points_csv().lines().count() - 1;
    assert_eq!(rows, cfg.pars.len() * cfg.alphas.len());
    for (k, cell) in res.cells.iter().enumerate() {
        assert_eq!(cell.par, cfg.pars[k / cfg.alphas.len()]);
        assert_eq!(cell.alpha, cfg.alphas[k % cfg.alphas.len()]);
    }
}

#[test]
fn baseline_is_unaffected_by_other_cases() {
    let dir = tempfile::tempdir().unwrap();
    let full = small(dir.path());
    let alone = SweepConfig {
        pars: vec![0.0],
        ..full.clone()
    };
    let a = run_sweep(&full, &Execution::Parallel(3)).unwrap();
    let b = run_sweep(&alone, &Execution::Sequential).unwrap();
    let n = full.alphas.len();
    for i in 0..n {
        let (x, y) = (a.cells[i].point.unwrap(), b.cells[i].point.unwrap());
        assert_eq!(x.cl.to_bits(), y.cl.to_bits());
        assert_eq!(x.cd_total.to_bits(), y.cd_total.to_bits());
    }
}

#[test]
fn baseline_only_sweep_has_zero_percent_change() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig {
        pars: vec![0.0],
        ..small(dir.path())
    };
    let res = run_sweep(&cfg, &Execution::Sequential).unwrap();
    let table = res.cl_vs_par_table();
    let header: Vec<&str> = table.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 2, "{table}");
    let pct = res.percent_table(Metric::Cd).unwrap();
    for line in pct.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1].parse::<f64>().unwrap(), 0.0, "{line}");
    }
}

#[test]
fn one_best_par_row_per_marked_angle() {
    let dir = tempfile::tempdir().unwrap();
    let res = run_sweep(&small(dir.path()), &Execution::Parallel(2)).unwrap();
    let rows = res.best_par_rows();
    assert_eq!(rows.len(), MARKED_ALPHAS.len());
    for ((alpha, _, _), m) in rows.iter().zip(MARKED_ALPHAS) {
        assert_eq!(*alpha, m);
    }
}

#[test]
fn output_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    let out1 = tempfile::tempdir().unwrap();
    let out2 = tempfile::tempdir().unwrap();
    run_sweep(&cfg, &Execution::Sequential)
        .unwrap()
        .write(out1.path())
        .unwrap();
    run_sweep(&cfg, &Execution::Parallel(4))
        .unwrap()
        .write(out2.path())
        .unwrap();
    let mut files: Vec<_> = walk(out1.path());
    files.sort();
    assert!(files.len() >= 10);
    for rel in files {
        let a = std::fs::read(out1.path().join(&rel)).unwrap();
        let b = std::fs::read(out2.path().join(&rel)).unwrap();
        assert_eq!(a, b, "{}", rel.display());
    }
}

fn walk(root: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out
}

#[test]
fn missing_cache_dir_is_created() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("a/b/c");
    let cfg = SweepConfig {
        pars: vec![0.0],
        alphas: vec![9.3, 11.4, 13.6],
        ..small(&cache)
    };
    run_sweep(&cfg, &Execution::Sequential).unwrap();
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
}

#[test]
fn panel_study_converges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    let rep = convergence_study(
        &cfg,
        &ConvergenceOptions::new(ConvergenceAxis::Panels),
        &Execution::Parallel(3),
    )
    .unwrap();
    assert_eq!(rep.levels.iter().map(|l| l.0).collect::<Vec<_>>(), vec![50, 100, 200]);
    assert!(rep.final_change() < 0.005, "{}", rep.to_csv());
}

#[test]
fn station_study_converges_before_stall() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    let opts = ConvergenceOptions {
        alpha: 4.0,
        ..ConvergenceOptions::new(ConvergenceAxis::Stations)
    };
    let rep = convergence_study(&cfg, &opts, &Execution::Parallel(3)).unwrap();
    assert_eq!(rep.levels.iter().map(|l| l.0).collect::<Vec<_>>(), vec![16, 32, 64]);
    assert!(rep.final_change() < 0.005, "{}", rep.to_csv());
}

#[test]
fn unknown_axis_is_rejected() {
    assert!(ConvergenceAxis::parse("invalid").is_none());
}

#[test]
fn finite_mode_sweep_converges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig {
        mode: tubercle_core::sweep::WingMode::Finite,
        pars: vec![0.0, 6.0],
        alphas: vec![2.0, 9.3, 11.4, 13.6],
        ..small(dir.path())
    };
    let res = run_sweep(&cfg, &Execution::Parallel(2)).unwrap();
    assert_eq!(res.unconverged(), 0, "{}", res.points_csv());
    // finite wing carries induced drag, periodic baseline does not
    assert!(res.cells.iter().all(|c| c.point.unwrap().cd_induced > 0.0));
}
