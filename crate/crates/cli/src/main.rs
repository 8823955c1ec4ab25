use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tubercle_core::geometry::{export_surface, make_case_spec, SurfaceFormat};
use tubercle_core::liftline3d::{solve_nonlinear_llt, wing_polar, wing_polar_csv, LiftingLineProblem, PolarSet};
use tubercle_core::panel2d::{
    alpha_grid, discretize_panels, viscous_polar, viterna_extend_with, CpDistribution, InviscidSolver,
};
use tubercle_core::postproc::{
    blt_along_chord, chord_weighted_average, ingest_field_slice, vorticity_slice, BltMode, BltSettings, VortexSettings,
    DEFAULT_BLT_THRESHOLD,
};
use tubercle_core::sweep::{
    convergence_study, run_sweep, section_polars, sweep_profile, sweep_wing, ConvergenceAxis, ConvergenceOptions,
    SweepConfig, WingMode,
};
use tubercle_core::validation::validate;
use tubercle_core::{Error, Execution};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tubercle", version, about = "Leading-edge tubercle blade analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out_dir`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Periodic,
    Finite,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SurfaceArg {
    StlAscii,
    StlBinary,
    CsvSections,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum BltModeArg {
    Mass,
    Area,
    Pointwise,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile coordinates, wing surface and case spec for one PAR
    Geom {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0)]
        par: f64,
        #[arg(long, value_enum, default_value_t = SurfaceArg::StlAscii)]
        surface: SurfaceArg,
    },
    /// Viscous section polar, raw and post-stall extended
    Polar2d {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        re: Option<f64>,
        /// Also dump the inviscid Cp at these angles
        #[arg(long = "cp-alpha")]
        cp_alpha: Vec<f64>,
    },
    /// Lifting-line polar of one wing
    Wing {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0)]
        par: f64,
        /// Angles (deg); the configured list when omitted
        #[arg(long = "alpha")]
        alpha: Vec<f64>,
    },
    /// Full PAR x alpha sweep
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Post-processing of external or internal data
    Post {
        #[command(subcommand)]
        op: PostOp,
    },
    /// Run the validation suite
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Resolution-doubling study
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        axis: String,
        #[arg(long)]
        base: Option<usize>,
        #[arg(long, default_value_t = 6.3)]
        alpha: f64,
        #[arg(long, default_value_t = 6.0)]
        par: f64,
    },
}

#[derive(Subcommand, Debug)]
enum PostOp {
    /// Boundary-layer thickness every 10 % of chord
    Blt {
        #[command(flatten)]
        common: Common,
        #[arg(long = "field", required = true)]
        fields: Vec<PathBuf>,
        #[arg(long = "u-ref")]
        u_ref: f64,
        #[arg(long, default_value_t = DEFAULT_BLT_THRESHOLD)]
        threshold: f64,
        #[arg(long = "average", value_enum, default_value_t = BltModeArg::Mass)]
        average: BltModeArg,
        #[arg(long, default_value_t = 1.0)]
        chord: f64,
        #[arg(long = "x-le", default_value_t = 0.0)]
        x_le: f64,
        #[arg(long = "wall-y", default_value_t = 0.0)]
        wall_y: f64,
    },
    /// x-vorticity statistics of chordwise slices
    Vorticity {
        #[command(flatten)]
        common: Common,
        #[arg(long = "field", required = true)]
        fields: Vec<PathBuf>,
        #[arg(long = "u-ref")]
        u_ref: f64,
        /// Protuberance wavelength (m) setting the pairing radius
        #[arg(long)]
        pitch: f64,
        #[arg(long = "core-fraction")]
        core_fraction: Option<f64>,
    },
    /// Chord-weighted lift from per-section Cp files
    Cp {
        #[command(flatten)]
        common: Common,
        /// FILE:CHORD, one per section
        #[arg(long = "section", required = true)]
        sections: Vec<String>,
        #[arg(long)]
        alpha: f64,
    },
}

fn load_config(common: &Common) -> Result<SweepConfig> {
    let mut cfg = match &common.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            SweepConfig::parse(&text)?
        }
        None => SweepConfig::default(),
    };
    if let Some(o) = &common.out {
        cfg.out_dir = o.clone();
    }
    if let Some(m) = common.mode {
        cfg.mode = match m {
            ModeArg::Periodic => WingMode::Periodic,
            ModeArg::Finite => WingMode::Finite,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execution(common: &Common) -> Execution {
    let n = common
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Execution::from_workers(n)
}

fn out_dir(common: &Common, cfg: &SweepConfig) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| cfg.out_dir.clone());
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn geom(common: &Common, par: f64, surface: SurfaceArg) -> Result<()> {
    let cfg = load_config(common)?;
    let dir = out_dir(common, &cfg)?;
    let profile = sweep_profile(&cfg)?;
    let wing = sweep_wing(&cfg, &profile, par)?;
    let case = make_case_spec(Some(&wing), &cfg.case_overrides())?;
    for w in &case.warnings {
        eprintln!("warning: {w}");
    }
    let mut coords = String::from("x_c,y_c\n");
    for p in &profile.points {
        coords.push_str(&format!("{:.8e},{:.8e}\n", p[0], p[1]));
    }
    write(&dir.join(format!("profile_{}.csv", cfg.profile)), &coords)?;
    let (fmt, ext) = match surface {
        SurfaceArg::StlAscii => (SurfaceFormat::StlAscii, "stl"),
        SurfaceArg::StlBinary => (SurfaceFormat::StlBinary, "stl"),
        SurfaceArg::CsvSections => (SurfaceFormat::CsvSections, "csv"),
    };
    let path = dir.join(format!("wing_PAR{par}.{ext}"));
    export_surface(&wing, fmt, &path)?;
    println!("wrote {}", path.display());
    let case_path = dir.join("case.txt");
    case.write(&case_path)?;
    println!("wrote {}", case_path.display());
    Ok(())
}

fn polar2d(common: &Common, re: Option<f64>, cp_alpha: &[f64]) -> Result<()> {
    let mut cfg = load_config(common)?;
    if re.is_some() {
        cfg.re = re;
    }
    let dir = out_dir(common, &cfg)?;
    let profile = sweep_profile(&cfg)?;
    let case = make_case_spec(None, &cfg.case_overrides())?;
    let grid = alpha_grid(cfg.polar_alpha_min, cfg.polar_alpha_max, cfg.polar_alpha_step);
    let polar = viscous_polar(&profile, &case, &grid, &cfg.polar_settings())?;
    write(&dir.join("polar_raw.csv"), &polar.to_csv())?;
    match polar.stall_alpha {
        Some(a) => println!("stall angle {a} deg, Re {:.0}", case.re),
        None => println!("no lift maximum in the computed range, Re {:.0}", case.re),
    }
    match viterna_extend_with(&polar, cfg.cd_max) {
        Ok(ext) => write(&dir.join("polar_extended.csv"), &ext.to_csv())?,
        Err(e) => eprintln!("warning: no post-stall extension: {e}"),
    }
    if !cp_alpha.is_empty() {
        let solver = InviscidSolver::new(&discretize_panels(&profile, cfg.n_panels)?)?;
        for &a in cp_alpha {
            let cp = solver.solve(a)?.cp;
            write(&dir.join(format!("cp_alpha{a}.csv")), &cp.to_csv())?;
        }
    }
    Ok(())
}

fn wing(common: &Common, par: f64, alphas: &[f64]) -> Result<()> {
    let cfg = load_config(common)?;
    let exec = execution(common);
    let dir = out_dir(common, &cfg)?;
    let profile = sweep_profile(&cfg)?;
    let w = sweep_wing(&cfg, &profile, par)?;
    let case = make_case_spec(None, &cfg.case_overrides())?;
    let a = w.amplitude_m() / w.mean_chord;
    let res: Vec<f64> = if a > 0.0 {
        vec![case.re * (1.0 - 0.5 * a), case.re, case.re * (1.0 + 0.5 * a)]
    } else {
        vec![case.re]
    };
    let set = PolarSet::new(section_polars(&cfg, &profile, &case, &res, &exec)?)?;
    let template = match cfg.mode {
        WingMode::Periodic => LiftingLineProblem::periodic_from_wing(&w, &case, &set, 0.0, cfg.llt_settings())?,
        WingMode::Finite => {
            LiftingLineProblem::finite_from_wing(&w, &case, &set, cfg.finite_stations, 0.0, cfg.llt_settings())?
        }
    };
    let alphas = if alphas.is_empty() {
        cfg.alphas.clone()
    } else {
        alphas.to_vec()
    };
    let points = wing_polar(&template, &alphas, &exec)?;
    write(&dir.join(format!("wing_polar_PAR{par}.csv")), &wing_polar_csv(&points))?;
    for &alpha in &alphas {
        let (dist, _) = solve_nonlinear_llt(&template.with_alpha(alpha))?;
        write(
            &dir.join(format!("circulation_PAR{par}_alpha{alpha}.csv")),
            &dist.to_csv(),
        )?;
    }
    let bad = points.iter().filter(|p| !p.converged).count();
    if bad > 0 {
        eprintln!("warning: {bad} of {} angles did not converge", points.len());
    }
    Ok(())
}

fn sweep(common: &Common) -> Result<()> {
    let cfg = load_config(common)?;
    let exec = execution(common);
    let dir = out_dir(common, &cfg)?;
    let start = std::time::Instant::now();
    let result = run_sweep(&cfg, &exec)?;
    for p in result.write(&dir)? {
        println!("wrote {}", p.display());
    }
    write(&dir.join("config.txt"), &cfg.to_text())?;
    print!("{}", result.summary());
    println!(
        "elapsed {:.2} s on {} worker(s)",
        start.elapsed().as_secs_f64(),
        exec.workers()
    );
    Ok(())
}

fn post(op: &PostOp) -> Result<()> {
    match op {
        PostOp::Blt {
            common,
            fields,
            u_ref,
            threshold,
            average,
            chord,
            x_le,
            wall_y,
        } => {
            let slices = fields
                .iter()
                .map(|f| ingest_field_slice(f, *u_ref))
                .collect::<tubercle_core::Result<Vec<_>>>()?;
            let settings = BltSettings {
                threshold: *threshold,
                mode: match average {
                    BltModeArg::Mass => BltMode::MassWeighted,
                    BltModeArg::Area => BltMode::AreaWeighted,
                    BltModeArg::Pointwise => BltMode::Pointwise,
                },
                ..Default::default()
            };
            let wy = *wall_y;
            let report = blt_along_chord(&slices, *x_le, *chord, &move |_| wy, &settings)?;
            let dir = post_dir(common)?;
            write(&dir.join("blt.csv"), &report.to_csv())?;
            let mut summary = format!(
                "mode {} (requested {}), threshold {}\n",
                report.mode.as_str(),
                report.requested_mode.as_str(),
                report.threshold
            );
            summary.push_str("note: a 0.9999 threshold is the stricter reading; pass --threshold to use it\n");
            if !report.uncovered.is_empty() {
                summary.push_str(&format!("stations without data: {:?}\n", report.uncovered));
            }
            print!("{summary}");
            write(&dir.join("blt_summary.txt"), &summary)?;
        }
        PostOp::Vorticity {
            common,
            fields,
            u_ref,
            pitch,
            core_fraction,
        } => {
            let mut settings = VortexSettings::for_pitch(*pitch);
            if let Some(f) = core_fraction {
                settings.core_fraction = *f;
            }
            let slices = fields
                .iter()
                .map(|f| ingest_field_slice(f, *u_ref))
                .collect::<tubercle_core::Result<Vec<_>>>()?;
            let reports = execution(common).map(&slices, |s| vorticity_slice(s, &settings));
            let dir = post_dir(common)?;
            let mut cores = String::new();
            let mut summary = String::from("x_m,omega_min,omega_max,cores,pairs\n");
            for (i, r) in reports.into_iter().enumerate() {
                let r = r?;
                let csv = r.to_csv();
                if i == 0 {
                    cores.push_str(&csv);
                } else {
                    cores.push_str(csv.split_once('\n').map_or("", |(_, rest)| rest));
                }
                summary.push_str(&format!(
                    "{:.8e},{:.8e},{:.8e},{},{}\n",
                    r.x,
                    r.omega_min,
                    r.omega_max,
                    r.cores.len(),
                    r.pair_count()
                ));
            }
            write(&dir.join("vortex_cores.csv"), &cores)?;
            write(&dir.join("vortex_slices.csv"), &summary)?;
        }
        PostOp::Cp {
            common,
            sections,
            alpha,
        } => {
            let mut chords = Vec::new();
            let mut cls = Vec::new();
            let mut table = String::from("file,chord_m,cl\n");
            for s in sections {
                let (file, chord) = s.rsplit_once(':').with_context(|| format!("`{s}` is not FILE:CHORD"))?;
                let chord: f64 = chord.parse().with_context(|| format!("bad chord in `{s}`"))?;
                let text = fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
                let cp = CpDistribution::from_csv(&text, *alpha)?;
                let (cl, _) = tubercle_core::panel2d::integrate_cp_loads(&cp)?;
                table.push_str(&format!("{file},{chord:.8e},{cl:.8e}\n"));
                chords.push(chord);
                cls.push(cl);
            }
            let avg = chord_weighted_average(&cls, &chords)?;
            table.push_str(&format!("chord_weighted,,{avg:.8e}\n"));
            let dir = post_dir(common)?;
            write(&dir.join("cp_lift.csv"), &table)?;
            println!("chord-weighted cl {avg:.8e}");
        }
    }
    Ok(())
}

fn post_dir(common: &Common) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("post_out"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

/// Returns `false` when any check fails.
fn run_validate(common: &Common) -> Result<bool> {
    let cfg = load_config(common)?;
    let report = validate(&cfg, &execution(common));
    let text = report.to_text();
    print!("{text}");
    if let Some(o) = &common.out {
        fs::create_dir_all(o)?;
        write(&o.join("validation.txt"), &text)?;
    }
    Ok(report.passed())
}

fn converge(common: &Common, axis: &str, base: Option<usize>, alpha: f64, par: f64) -> Result<()> {
    let Some(axis) = ConvergenceAxis::parse(axis) else {
        return Err(UsageError(format!("unknown axis `{axis}` (expected panels or stations)")).into());
    };
    let cfg = load_config(common)?;
    let opts = ConvergenceOptions { axis, base, alpha, par };
    let report = convergence_study(&cfg, &opts, &execution(common))?;
    let csv = report.to_csv();
    print!("{csv}");
    println!("final relative change {:.4}%", 100.0 * report.final_change());
    if let Some(o) = &common.out {
        fs::create_dir_all(o)?;
        write(&o.join(format!("convergence_{}.csv", axis.as_str())), &csv)?;
    }
    Ok(())
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Solver(_)) | Some(Error::Geometry(_)) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Geom { common, par, surface } => geom(&common, par, surface)?,
        Command::Polar2d { common, re, cp_alpha } => polar2d(&common, re, &cp_alpha)?,
        Command::Wing { common, par, alpha } => wing(&common, par, &alpha)?,
        Command::Sweep { common } => sweep(&common)?,
        Command::Post { op } => post(&op)?,
        Command::Validate { common } => return run_validate(&common),
        Command::Converge {
            common,
            axis,
            base,
            alpha,
            par,
        } => converge(&common, &axis, base, alpha, par)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VALIDATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
