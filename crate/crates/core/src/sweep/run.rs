use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::{SweepConfig, WingMode, MARKED_ALPHAS};
use crate::error::{Error, Result};
use crate::geometry::{
    build_tubercled_wing, make_case_spec, naca4_coordinates, AirfoilProfile, CaseSpec, ProtuberanceSpec, WingGeometry,
};
use crate::liftline3d::{solve_nonlinear_llt, LiftingLineProblem, PolarSet, WingPolarPoint, WING_POLAR_HEADER};
use crate::panel2d::{alpha_grid, viterna_extend_with, PolarCache, SectionPolar, ViscousSection};
use crate::postproc::{best_par_select, percent_change};
use crate::Execution;

/// One (PAR, alpha) result. `point` is `None` when the case failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub par: f64,
    pub alpha: f64,
    pub point: Option<WingPolarPoint>,
    pub status: String,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub case: CaseSpec,
    /// Par-major, in config order: `cells[p·n_alpha + a]`.
    pub cells: Vec<SweepCell>,
    pub par_failures: Vec<(f64, String)>,
    /// Extended section polars used by the wing solves, ascending in Re.
    pub section_polars: Vec<SectionPolar>,
}

fn fmt(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        String::new()
    }
}

fn par_label(par: f64) -> String {
    if par == 0.0 {
        "PAR0".into()
    } else {
        format!("PAR{par}")
    }
}

impl SweepResult {
    pub fn n_alpha(&self) -> usize {
        self.config.alphas.len()
    }

    pub fn cell(&self, par_idx: usize, alpha_idx: usize) -> &SweepCell {
        &self.cells[par_idx * self.n_alpha() + alpha_idx]
    }

    /// Metric of one cell, NaN when the case failed.
    pub fn value(&self, par_idx: usize, alpha_idx: usize, metric: Metric) -> f64 {
        self.cell(par_idx, alpha_idx).point.map_or(f64::NAN, |p| metric.of(&p))
    }

    pub fn par_index(&self, par: f64) -> Option<usize> {
        self.config.pars.iter().position(|&p| p == par)
    }

    pub fn alpha_index(&self, alpha: f64) -> Option<usize> {
        self.config.alphas.iter().position(|&a| a == alpha)
    }

    pub fn unconverged(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.point.is_none_or(|p| !p.converged))
            .count()
    }

    fn header(&self) -> String {
        let mut h = String::from("alpha_deg");
        for &p in &self.config.pars {
            h.push(',');
            h.push_str(&par_label(p));
        }
        h
    }

    /// Rows = angles, columns = PARs.
    pub fn metric_table(&self, metric: Metric) -> String {
        let mut out = self.header();
        out.push('\n');
        for (a, alpha) in self.config.alphas.iter().enumerate() {
            out.push_str(&fmt(*alpha));
            for p in 0..self.config.pars.len() {
                out.push(',');
                out.push_str(&fmt(self.value(p, a, metric)));
            }
            out.push('\n');
        }
        out
    }

    /// Lift at the marked angles; one column per PAR.
    pub fn cl_vs_par_table(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for m in MARKED_ALPHAS {
            let Some(a) = self.alpha_index(m) else { continue };
            out.push_str(&fmt(m));
            for p in 0..self.config.pars.len() {
                out.push(',');
                out.push_str(&fmt(self.value(p, a, Metric::Cl)));
            }
            out.push('\n');
        }
        out
    }

    /// Percent change against PAR0, or `None` without a baseline.
    pub fn percent_table(&self, metric: Metric) -> Option<String> {
        let b = self.par_index(0.0)?;
        let mut out = self.header();
        out.push('\n');
        for (a, alpha) in self.config.alphas.iter().enumerate() {
            out.push_str(&fmt(*alpha));
            let base = self.value(b, a, metric);
            for p in 0..self.config.pars.len() {
                out.push(',');
                let v = if p == b {
                    0.0
                } else if base.abs() < 1e-9 {
                    f64::NAN
                } else {
                    percent_change(self.value(p, a, metric), base).unwrap_or(f64::NAN)
                };
                out.push_str(&fmt(v));
            }
            out.push('\n');
        }
        Some(out)
    }

    /// Best PAR by lift and by efficiency at each marked angle.
    pub fn best_par_rows(&self) -> Vec<(f64, Option<f64>, Option<f64>)> {
        MARKED_ALPHAS
            .iter()
            .filter_map(|&m| {
                let a = self.alpha_index(m)?;
                let table = |metric: Metric| -> Vec<(f64, f64)> {
                    self.config
                        .pars
                        .iter()
                        .enumerate()
                        .map(|(p, &par)| (par, self.value(p, a, metric)))
                        .filter(|(_, v)| v.is_finite())
                        .collect()
                };
                Some((
                    m,
                    best_par_select(&table(Metric::Cl)).ok(),
                    best_par_select(&table(Metric::LOverD)).ok(),
                ))
            })
            .collect()
    }

    pub fn points_csv(&self) -> String {
        let mut out = String::from(
            "par,alpha_deg,cl,cd_induced,cd_profile,cd_total,l_over_d,converged,residual,iterations,status\n",
        );
        for c in &self.cells {
            match c.point {
                Some(p) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        fmt(c.par),
                        fmt(c.alpha),
                        fmt(p.cl),
                        fmt(p.cd_induced),
                        fmt(p.cd_profile),
                        fmt(p.cd_total),
                        fmt(p.efficiency),
                        p.converged,
                        fmt(p.residual),
                        p.iterations,
                        c.status
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{},{},,,,,,false,,0,{}",
                        fmt(c.par),
                        fmt(c.alpha),
                        c.status.replace(',', ";")
                    );
                }
            }
        }
        out
    }

    pub fn wing_polar_csv(&self, par_idx: usize) -> String {
        let mut out = format!("{WING_POLAR_HEADER}\n");
        for a in 0..self.n_alpha() {
            let c = self.cell(par_idx, a);
            match c.point {
                Some(p) => out.push_str(&p.csv_row()),
                None => out.push_str(&format!("{},,,,,,false", fmt(c.alpha))),
            }
            out.push('\n');
        }
        out
    }

    pub fn section_polars_csv(&self) -> String {
        let mut out = String::from("reynolds,alpha_deg,cl,cd,flag\n");
        for p in &self.section_polars {
            for i in 0..p.alphas.len() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt(p.reynolds),
                    fmt(p.alphas[i]),
                    fmt(p.cl[i]),
                    fmt(p.cd[i]),
                    p.flags[i].as_str()
                );
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(s, "sweep summary");
        let _ = writeln!(
            s,
            "profile: NACA {} ({} points, closed TE: {})",
            c.profile, c.profile_points, c.closed_te
        );
        let _ = writeln!(
            s,
            "chord: {} m, pitch: {} c, mode: {}",
            c.chord,
            c.pitch,
            c.mode.as_str()
        );
        let _ = writeln!(
            s,
            "case: U = {} m/s, rho = {} kg/m^3, mu = {} Pa s, Re = {}",
            self.case.u_inf, self.case.rho, self.case.mu, self.case.re
        );
        for w in &self.case.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "PARs: {:?}", c.pars);
        let _ = writeln!(
            s,
            "alphas: {} from {} to {} deg",
            c.alphas.len(),
            c.alphas[0],
            c.alphas[c.alphas.len() - 1]
        );
        let _ = writeln!(
            s,
            "cells: {} ({} not converged or failed)",
            self.cells.len(),
            self.unconverged()
        );
        for (par, why) in &self.par_failures {
            let _ = writeln!(s, "{} failed: {why}", par_label(*par));
        }
        for p in &self.section_polars {
            let stall = p.stall_alpha.map_or("none".to_string(), |a| format!("{a} deg"));
            let _ = writeln!(s, "section polar Re = {:.1}: stall {stall}", p.reynolds);
        }
        for (m, by_cl, by_ld) in self.best_par_rows() {
            let lab = |v: Option<f64>| v.map_or("n/a".into(), par_label);
            let _ = writeln!(s, "alpha {m}: best lift {}, best L/D {}", lab(by_cl), lab(by_ld));
        }
        s
    }

    /// Write every table under `dir`; returns the files written, sorted.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut files: Vec<(PathBuf, String)> = vec![
            (dir.join("sweep_points.csv"), self.points_csv()),
            (dir.join("cl_vs_aoa.csv"), self.metric_table(Metric::Cl)),
            (dir.join("cd_vs_aoa.csv"), self.metric_table(Metric::Cd)),
            (dir.join("ld_vs_aoa.csv"), self.metric_table(Metric::LOverD)),
            (dir.join("cl_vs_par.csv"), self.cl_vs_par_table()),
            (dir.join("section_polars.csv"), self.section_polars_csv()),
            (dir.join("summary.txt"), self.summary()),
        ];
        for (metric, name) in [(Metric::Cl, "cl"), (Metric::Cd, "cd"), (Metric::LOverD, "ld")] {
            if let Some(t) = self.percent_table(metric) {
                files.push((dir.join(format!("percent_change_{name}.csv")), t));
            }
        }
        let mut best = String::from("alpha_deg,best_par_cl,best_par_ld\n");
        for (m, a, b) in self.best_par_rows() {
            let _ = writeln!(
                best,
                "{},{},{}",
                fmt(m),
                a.map_or(String::new(), fmt),
                b.map_or(String::new(), fmt)
            );
        }
        files.push((dir.join("best_par.csv"), best));
        for (p, &par) in self.config.pars.iter().enumerate() {
            files.push((
                dir.join("wing_polars").join(format!("{}.csv", par_label(par))),
                self.wing_polar_csv(p),
            ));
        }
        let mut written = Vec::new();
        for (path, text) in files {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        written.sort();
        Ok(written)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cl,
    Cd,
    LOverD,
}

impl Metric {
    pub fn of(&self, p: &WingPolarPoint) -> f64 {
        match self {
            Metric::Cl => p.cl,
            Metric::Cd => p.cd_total,
            Metric::LOverD => p.efficiency,
        }
    }
}

/// Unit-chord profile of the sweep.
pub fn sweep_profile(config: &SweepConfig) -> Result<AirfoilProfile> {
    naca4_coordinates(&config.profile, config.profile_points, config.closed_te)
}

/// Wing for one PAR (0 = baseline) in the configured mode.
pub fn sweep_wing(config: &SweepConfig, profile: &AirfoilProfile, par: f64) -> Result<WingGeometry> {
    let spec = if par == 0.0 {
        None
    } else {
        Some(ProtuberanceSpec::from_par(par, config.pitch)?)
    };
    let (span, n) = match config.mode {
        WingMode::Periodic => (
            config.wavelengths as f64 * config.pitch * config.chord,
            config.wavelengths * config.stations_per_wavelength + 1,
        ),
        WingMode::Finite => {
            let span = config.finite_span * config.chord;
            let waves = (config.finite_span / config.pitch).ceil() as usize;
            (span, waves * config.stations_per_wavelength + 1)
        }
    };
    build_tubercled_wing(profile, spec, config.chord, span, n)
}

/// Reynolds numbers at the minimum, mean and maximum chord of each wing.
fn required_reynolds(case: &CaseSpec, wings: &[&WingGeometry]) -> Vec<f64> {
    let mut res: Vec<f64> = Vec::new();
    for w in wings {
        let a = w.amplitude_m() / w.mean_chord;
        res.push(case.re * (1.0 - 0.5 * a));
        res.push(case.re);
        res.push(case.re * (1.0 + 0.5 * a));
    }
    res.sort_by(f64::total_cmp);
    res.dedup();
    res
}

/// Viterna-extended section polars at each Reynolds number, through the cache.
pub fn section_polars(
    config: &SweepConfig,
    profile: &AirfoilProfile,
    case: &CaseSpec,
    reynolds: &[f64],
    exec: &Execution,
) -> Result<Vec<SectionPolar>> {
    let cache = PolarCache::new(&config.cache_dir)?;
    let grid = alpha_grid(config.polar_alpha_min, config.polar_alpha_max, config.polar_alpha_step);
    let settings = config.polar_settings();
    let results = exec.map(reynolds, |&re| {
        let mut c = case.clone();
        c.re = re;
        let polar = cache.get_or_compute(profile, &c, &grid, &settings)?;
        viterna_extend_with(&polar, config.cd_max)
    });
    results.into_iter().collect()
}

/// Full PAR × alpha sweep. Output is independent of the worker count.
pub fn run_sweep(config: &SweepConfig, exec: &Execution) -> Result<SweepResult> {
    config.validate()?;
    let profile = sweep_profile(config)?;
    let case = make_case_spec(None, &config.case_overrides())?;
    let wings: Vec<Result<WingGeometry>> = config.pars.iter().map(|&p| sweep_wing(config, &profile, p)).collect();
    let ok_wings: Vec<&WingGeometry> = wings.iter().filter_map(|w| w.as_ref().ok()).collect();
    let reynolds = required_reynolds(&case, &ok_wings);
    let polars = section_polars(config, &profile, &case, &reynolds, exec)?;
    let set = PolarSet::new(polars.clone())?;
    let llt = config.llt_settings();
    let mut par_failures = Vec::new();
    let templates: Vec<Option<LiftingLineProblem>> = config
        .pars
        .iter()
        .zip(&wings)
        .map(|(&par, w)| {
            let built = w
                .as_ref()
                .map_err(|e| Error::Geometry(e.to_string()))
                .and_then(|w| match config.mode {
                    WingMode::Periodic => LiftingLineProblem::periodic_from_wing(w, &case, &set, 0.0, llt),
                    WingMode::Finite => {
                        LiftingLineProblem::finite_from_wing(w, &case, &set, config.finite_stations, 0.0, llt)
                    }
                });
            match built {
                Ok(t) => Some(t),
                Err(e) => {
                    par_failures.push((par, e.to_string()));
                    None
                }
            }
        })
        .collect();
    let jobs: Vec<(usize, f64)> = (0..config.pars.len())
        .flat_map(|p| config.alphas.iter().map(move |&a| (p, a)))
        .collect();
    let cells = exec.map(&jobs, |&(p, alpha)| {
        let par = config.pars[p];
        let Some(t) = &templates[p] else {
            return SweepCell {
                par,
                alpha,
                point: None,
                status: "geometry failed".into(),
            };
        };
        match solve_nonlinear_llt(&t.with_alpha(alpha)) {
            Ok((_, point)) => SweepCell {
                par,
                alpha,
                point: Some(point),
                status: if point.converged {
                    "ok".into()
                } else {
                    "not converged".into()
                },
            },
            Err(e) => SweepCell {
                par,
                alpha,
                point: None,
                status: format!("solver failed: {e}"),
            },
        }
    });
    Ok(SweepResult {
        config: config.clone(),
        case,
        cells,
        par_failures,
        section_polars: polars,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceAxis {
    Panels,
    Stations,
}

impl ConvergenceAxis {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "panels" => Some(ConvergenceAxis::Panels),
            "stations" => Some(ConvergenceAxis::Stations),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ConvergenceAxis::Panels => "panels",
            ConvergenceAxis::Stations => "stations",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOptions {
    pub axis: ConvergenceAxis,
    /// Starting resolution; 50 panels or 16 stations per wavelength if unset.
    pub base: Option<usize>,
    pub alpha: f64,
    /// PAR of the wing used for the station study.
    pub par: f64,
}

impl ConvergenceOptions {
    pub fn new(axis: ConvergenceAxis) -> Self {
        ConvergenceOptions {
            axis,
            base: None,
            alpha: 6.3,
            par: 6.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub axis: ConvergenceAxis,
    pub alpha: f64,
    /// `(resolution, cl)` for base, 2·base, 4·base.
    pub levels: Vec<(usize, f64)>,
}

impl ConvergenceReport {
    /// Relative change between consecutive levels.
    pub fn relative_changes(&self) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / w[1].1).abs())
            .collect()
    }

    pub fn final_change(&self) -> f64 {
        *self.relative_changes().last().unwrap()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},cl,relative_change\n", self.axis.as_str());
        let ch = self.relative_changes();
        for (i, (n, cl)) in self.levels.iter().enumerate() {
            let rc = if i == 0 { String::new() } else { fmt(ch[i - 1]) };
            let _ = writeln!(out, "{n},{},{rc}", fmt(*cl));
        }
        out
    }
}

/// Lift at three doubling resolutions. Panels: viscous section lift.
/// Stations: wing lift of the configured mode.
pub fn convergence_study(
    config: &SweepConfig,
    opts: &ConvergenceOptions,
    exec: &Execution,
) -> Result<ConvergenceReport> {
    let profile = sweep_profile(config)?;
    let case = make_case_spec(None, &config.case_overrides())?;
    let base = opts.base.unwrap_or(match opts.axis {
        ConvergenceAxis::Panels => 50,
        ConvergenceAxis::Stations => 16,
    });
    let levels_n = [base, 2 * base, 4 * base];
    let levels: Vec<Result<(usize, f64)>> = match opts.axis {
        ConvergenceAxis::Panels => exec.map(&levels_n, |&n| {
            let mut s = config.polar_settings();
            s.n_panels = n;
            let sec = ViscousSection::new(&profile, &case, &s)?;
            Ok((n, sec.evaluate(opts.alpha)?.cl))
        }),
        ConvergenceAxis::Stations => {
            let mut probe = config.clone();
            probe.stations_per_wavelength = base;
            let w = sweep_wing(&probe, &profile, opts.par)?;
            let polars = section_polars(config, &profile, &case, &required_reynolds(&case, &[&w]), exec)?;
            let set = PolarSet::new(polars)?;
            exec.map(&levels_n, |&n| {
                let mut c = config.clone();
                c.stations_per_wavelength = n;
                let wing = sweep_wing(&c, &profile, opts.par)?;
                let prob = match c.mode {
                    WingMode::Periodic => {
                        LiftingLineProblem::periodic_from_wing(&wing, &case, &set, opts.alpha, c.llt_settings())?
                    }
                    WingMode::Finite => LiftingLineProblem::finite_from_wing(
                        &wing,
                        &case,
                        &set,
                        c.finite_stations.max(n),
                        opts.alpha,
                        c.llt_settings(),
                    )?,
                };
                Ok((n, solve_nonlinear_llt(&prob)?.1.cl))
            })
        }
    };
    Ok(ConvergenceReport {
        axis: opts.axis,
        alpha: opts.alpha,
        levels: levels.into_iter().collect::<Result<_>>()?,
    })
}
