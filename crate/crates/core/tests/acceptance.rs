//! Acceptance criteria, one status line each.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails on any FAIL that is not listed in `KNOWN_FAILURES`.

mod common;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use tubercle_core::geometry::{
    build_tubercled_wing, make_case_spec, naca4_coordinates, par_to_amplitude, CaseOverrides, ProtuberanceSpec,
};
use tubercle_core::liftline3d::{
    cosine_stations, downwash_periodic, solve_nonlinear_llt, LiftingLineProblem, LltSettings, LltStation, SectionModel,
    SpanMode,
};
use tubercle_core::panel2d::{
    alpha_grid, discretize_panels, integrate_cp_loads, march_surface, viscous_polar, viterna_extend, ClosureConfig,
    InviscidSolver, LaminarSeparationPolicy, MarchStation, PolarSettings, Surface,
};
use tubercle_core::postproc::{
    blt_along_chord, chord_weighted_average, omega_x, percent_change, vorticity_slice, BltMode, BltSettings,
    FieldSlice, Plane, VortexSettings,
};
use tubercle_core::sweep::{run_sweep, Metric, SweepConfig};
use tubercle_core::Execution;

/// Criteria whose literal target cannot be met; see the decisions ledger.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    7,
    "the quoted chord-weighted example 1.99733 disagrees with its own formula (5.96/3 = 1.986667)",
)];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Status {
    Pass,
    Fail,
    Warn,
}

struct Outcome {
    status: Status,
    detail: String,
    /// Sub-checks that failed and are not documented as unattainable.
    unexpected: Vec<String>,
}

/// Collects sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    notes: Vec<String>,
    hard: Vec<String>,
    literal_fail: bool,
    soft_fail: bool,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.notes
            .push(format!("{name} {} ({detail})", if ok { "ok" } else { "MISS" }));
        if !ok {
            self.hard.push(name.to_string());
        }
    }

    /// Literal target known to be unattainable: reported, never hidden.
    fn literal(&mut self, name: &str, ok: bool, detail: String) {
        self.notes
            .push(format!("{name} {} ({detail})", if ok { "ok" } else { "MISS" }));
        self.literal_fail |= !ok;
    }

    fn soft(&mut self, name: &str, ok: bool, detail: String) {
        self.notes
            .push(format!("{name} {} ({detail})", if ok { "ok" } else { "MISS" }));
        self.soft_fail |= !ok;
    }

    fn timed(&mut self, name: &str, elapsed: Duration, limit: Duration) {
        self.check(
            name,
            elapsed < limit,
            format!("{:.2} s < {} s", elapsed.as_secs_f64(), limit.as_secs()),
        );
    }

    fn finish(self) -> Outcome {
        let status = if !self.hard.is_empty() || self.literal_fail {
            Status::Fail
        } else if self.soft_fail {
            Status::Warn
        } else {
            Status::Pass
        };
        Outcome {
            status,
            detail: self.notes.join("; "),
            unexpected: self.hard,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn truncate(v: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (v * s + 1e-9).floor() / s
}

fn geometry_table() -> Outcome {
    let t0 = Instant::now();
    let mut c = Checks::default();
    // amplitude column as printed, in chords
    let table = [
        (1.0, "0.25"),
        (3.0, "0.083"),
        (6.0, "0.041"),
        (9.0, "0.027"),
        (12.0, "0.020"),
        (18.0, "0.013"),
        (21.0, "0.011"),
        (27.0, "0.0092"),
    ];
    let profile = naca4_coordinates("0009", 101, true).unwrap();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (par, printed) in table {
        let decimals = printed.split('.').nth(1).unwrap().len() as i32;
        let a = par_to_amplitude(par, 0.25).unwrap();
        if (truncate(a, decimals) - printed.parse::<f64>().unwrap()).abs() > 1e-12 {
            bad.push(par);
        }
        let wing = build_tubercled_wing(
            &profile,
            Some(ProtuberanceSpec::from_par(par, 0.25).unwrap()),
            1.0,
            0.25,
            33,
        )
        .unwrap();
        let swing = wing
            .stations
            .iter()
            .map(|s| s.local_chord)
            .fold(f64::NEG_INFINITY, f64::max)
            - wing
                .stations
                .iter()
                .map(|s| s.local_chord)
                .fold(f64::INFINITY, f64::min);
        worst = worst.max((swing - 0.25 / par).abs());
    }
    c.check(
        "table",
        bad.is_empty(),
        format!("{} of 8 rows differ {bad:?}", bad.len()),
    );
    c.check("peak-to-trough", worst <= 1e-9, format!("max |dc - A| = {worst:.1e}"));
    c.timed("runtime", t0.elapsed(), Duration::from_secs(1));
    c.finish()
}

fn naca_shape() -> Outcome {
    let mut c = Checks::default();
    let profile = naca4_coordinates("0009", 401, true).unwrap();
    let (mut xmax, mut ymax) = (0.0, 0.0);
    let mut dev: f64 = 0.0;
    for p in &profile.points {
        if p[1] > ymax {
            (xmax, ymax) = (p[0], p[1]);
        }
        dev = dev.max((p[1].abs() - common::naca_half_thickness(0.09, p[0])).abs());
    }
    // dense evaluation of the reference polynomial
    let (mut ox, mut oy) = (0.0, 0.0);
    for i in 0..=200_000 {
        let x = i as f64 / 200_000.0;
        let y = common::naca_half_thickness(0.09, x);
        if y > oy {
            (ox, oy) = (x, y);
        }
    }
    c.check(
        "max thickness",
        (ymax - 0.04494).abs() <= 0.0005,
        format!("{ymax:.5} at x/c {xmax:.3}; oracle {oy:.5} at {ox:.3}"),
    );
    c.check("location", (xmax - 0.30).abs() <= 0.02, format!("x/c {xmax:.3}"));
    c.check("matches polynomial", dev <= 1e-12, format!("{dev:.1e}"));
    let mut sym: f64 = 0.0;
    let n = profile.points.len();
    for i in 0..n {
        let (a, b) = (profile.points[i], profile.points[n - 1 - i]);
        sym = sym.max((a[0] - b[0]).abs()).max((a[1] + b[1]).abs());
    }
    c.check("symmetry", sym < 1e-9, format!("{sym:.1e}"));
    c.finish()
}

fn inviscid() -> Outcome {
    let t0 = Instant::now();
    let mut c = Checks::default();
    let profile = naca4_coordinates("0009", 201, true).unwrap();
    let solve = |n: usize, a: f64| {
        InviscidSolver::new(&discretize_panels(&profile, n).unwrap())
            .unwrap()
            .solve(a)
            .unwrap()
    };
    let s0 = solve(160, 0.0);
    let cl0 = integrate_cp_loads(&s0.cp).unwrap().0;
    c.check("Cl(0)", cl0.abs() <= 1e-6, format!("{cl0:.1e}"));
    let s5 = solve(160, 5.0);
    let cl5 = integrate_cp_loads(&s5.cp).unwrap().0;
    let slope = cl5 / 5f64.to_radians();
    c.check(
        "slope",
        (2.0 * PI..=1.15 * 2.0 * PI).contains(&slope),
        format!("{slope:.4} /rad"),
    );
    let cpmax = s5.cp.samples.iter().map(|s| s.cp).fold(f64::NEG_INFINITY, f64::max);
    c.check("stagnation Cp", (cpmax - 1.0).abs() <= 0.01, format!("{cpmax:.4}"));
    let up = s5.cp.samples.first().unwrap().cp;
    let lo = s5.cp.samples.last().unwrap().cp;
    c.check("Kutta", (up - lo).abs() < 0.02, format!("{:.1e}", (up - lo).abs()));
    let a = integrate_cp_loads(&solve(100, 5.0).cp).unwrap().0;
    let b = integrate_cp_loads(&solve(200, 5.0).cp).unwrap().0;
    c.check(
        "panel doubling",
        rel(a, b) < 0.005,
        format!("{:.3}%", 100.0 * rel(a, b)),
    );
    c.timed("runtime", t0.elapsed(), Duration::from_secs(10));
    c.finish()
}

fn plate(n: usize, len: f64, ue: impl Fn(f64) -> f64) -> Vec<MarchStation> {
    (0..n)
        .map(|i| {
            let s = len * i as f64 / (n - 1) as f64;
            MarchStation {
                s,
                x_c: s / len,
                ue: ue(s),
            }
        })
        .collect()
}

fn boundary_layer() -> Outcome {
    let mut c = Checks::default();
    let re = 5e4;
    let closure = ClosureConfig::default();
    let bl = march_surface(Surface::Upper, &plate(801, 1.0, |_| 1.0), 1.0 / re, &closure).unwrap();
    let theta = *bl.theta.last().unwrap();
    c.check(
        "plate theta",
        rel(theta, 0.00300) <= 0.02,
        format!("{theta:.6} vs 0.00300; Blasius {:.6}", 0.664 / re.sqrt()),
    );
    let lam = ClosureConfig {
        laminar_separation: LaminarSeparationPolicy::Separate,
        ..closure
    };
    // Howarth: ue = 1 - x/L, L = 1
    let how = march_surface(Surface::Upper, &plate(2001, 0.5, |s| 1.0 - s), 1e-5, &lam).unwrap();
    let xs = how.laminar_separation.map(|x| x * 0.5).unwrap_or(f64::NAN);
    c.check("Howarth separation", (xs - 0.12).abs() <= 0.01, format!("x/L {xs:.4}"));
    let cd = bl.squire_young_cd(1.0, 1.0);
    let oracle = 1.328 / re.sqrt();
    c.check(
        "laminar plate Cd",
        rel(cd, oracle) <= 0.2,
        format!("{cd:.6} vs {oracle:.6}"),
    );
    c.finish()
}

fn stall_anchor() -> Outcome {
    let mut c = Checks::default();
    let profile = naca4_coordinates("0009", 201, true).unwrap();
    let case = make_case_spec(None, &CaseOverrides::default()).unwrap();
    let polar = viscous_polar(
        &profile,
        &case,
        &alpha_grid(-4.0, 20.0, 0.25),
        &PolarSettings::default(),
    )
    .unwrap();
    match polar.stall_alpha {
        Some(a) => c.soft(
            "peak lift angle",
            (a - 9.3).abs() <= 2.0,
            format!("{a} deg vs 9.3 +/- 2"),
        ),
        None => c.soft("peak lift angle", false, "no maximum below 20 deg".into()),
    }
    c.finish()
}

fn lifting_line() -> Outcome {
    let t0 = Instant::now();
    let mut c = Checks::default();
    let ar = 6.0;
    let b = ar * PI / 4.0;
    let stations = cosine_stations(41, b)
        .into_iter()
        .map(|z| LltStation {
            z,
            chord: (1.0 - (2.0 * z / b).powi(2)).sqrt(),
            section: SectionModel::Linear {
                a0_per_rad: 2.0 * PI,
                cd0: 0.0,
            },
        })
        .collect();
    let elliptic = LiftingLineProblem {
        stations,
        mode: SpanMode::Finite { span: b },
        u_inf: 1.0,
        alpha_deg: 5.0,
        settings: LltSettings::default(),
    };
    let (_, p) = solve_nonlinear_llt(&elliptic).unwrap();
    c.check("elliptic CL", rel(p.cl, 0.411) <= 0.01, format!("{:.5} vs 0.411", p.cl));
    c.check(
        "elliptic CDi",
        rel(p.cd_induced, 0.00897) <= 0.02,
        format!("{:.6} vs 0.00897", p.cd_induced),
    );

    let lambda = 0.25;
    let n = 64;
    let k = 2.0 * PI / lambda;
    let g = |z: f64| 1.0 + 0.3 * (k * z).cos() + 0.1 * (3.0 * k * z).sin() + 0.05 * (5.0 * k * z).cos();
    let dg = |z: f64| -0.3 * k * (k * z).sin() + 0.3 * k * (3.0 * k * z).cos() - 0.25 * k * (5.0 * k * z).sin();
    let z: Vec<f64> = (0..n).map(|i| lambda * i as f64 / n as f64).collect();
    let gamma: Vec<f64> = z.iter().map(|&z| g(z)).collect();
    let w = downwash_periodic(&gamma, &z, lambda).unwrap();
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = z
        .iter()
        .zip(&w)
        .map(|(&zi, wi)| (wi - common::pv_downwash(&dg, lambda, zi, 2000)).abs())
        .fold(0.0, f64::max)
        / scale;
    c.check("periodic downwash vs PV", err < 0.005, format!("{:.1e} of peak", err));

    let profile = naca4_coordinates("0009", 201, true).unwrap();
    let case = make_case_spec(None, &CaseOverrides::default()).unwrap();
    let polar = viscous_polar(
        &profile,
        &case,
        &alpha_grid(-8.0, 20.0, 0.25),
        &PolarSettings::default(),
    )
    .unwrap();
    let polar = std::sync::Arc::new(viterna_extend(&polar, None).unwrap());
    let mut worst: f64 = 0.0;
    for alpha in [2.0, 6.3, 9.3, 13.6] {
        let stations = (0..32)
            .map(|i| LltStation {
                z: lambda * i as f64 / 32.0,
                chord: 1.0,
                section: SectionModel::Polar(polar.clone()),
            })
            .collect();
        let prob = LiftingLineProblem {
            stations,
            mode: SpanMode::Periodic { pitch: lambda },
            u_inf: 0.81,
            alpha_deg: alpha,
            settings: LltSettings::default(),
        };
        let (_, p) = solve_nonlinear_llt(&prob).unwrap();
        worst = worst
            .max((p.cl - polar.cl_at(alpha)).abs())
            .max((p.cd_total - polar.cd_at(alpha)).abs())
            .max(if p.converged { 0.0 } else { 1.0 });
    }
    c.check(
        "constant chord = 2D",
        worst <= 1e-12,
        format!("max deviation {worst:.1e}"),
    );
    c.timed("runtime", t0.elapsed(), Duration::from_secs(30));
    c.finish()
}

fn postprocessing() -> Outcome {
    let mut c = Checks::default();
    // Blasius field with the test-side similarity solution
    let (u, nu) = (1.0, 2e-5);
    let prof = common::blasius_profile();
    let fp = |eta: f64| -> f64 {
        let k = prof.partition_point(|p| p.0 <= eta);
        if k >= prof.len() {
            return 1.0;
        }
        let (a, b) = (prof[k.max(1) - 1], prof[k.max(1)]);
        a.1 + (eta - a.0) / (b.0 - a.0) * (b.1 - a.1)
    };
    let xs: Vec<f64> = (1..=40).map(|i| i as f64 / 40.0).collect();
    let ys: Vec<f64> = (0..=1000).map(|j| 0.1 * j as f64 / 1000.0).collect();
    let field = FieldSlice::from_fn(Plane::SectionZ(0.0), xs, ys, u, |x, y| {
        [fp(y * (u / (nu * x)).sqrt()), 0.0, 0.0]
    })
    .unwrap();
    let rep = blt_along_chord(
        &[field],
        0.0,
        1.0,
        &|_| 0.0,
        &BltSettings {
            mode: BltMode::Pointwise,
            ..Default::default()
        },
    )
    .unwrap();
    let eta99 = common::blasius_eta(0.99);
    let worst = rep
        .rows
        .iter()
        .map(|r| {
            rel(
                r.outcome.delta().unwrap_or(f64::NAN),
                eta99 * r.x_c / (u * r.x_c / nu).sqrt(),
            )
        })
        .fold(0.0, f64::max);
    c.check("Blasius delta99", worst <= 0.05, format!("worst {:.2}%", 100.0 * worst));

    let om = 1.7;
    let ax: Vec<f64> = (0..25).map(|i| -0.6 + 0.05 * i as f64).collect();
    let rot = FieldSlice::from_fn(Plane::ChordwiseX(0.2), ax.clone(), ax, 1.0, |y, z| {
        [1.0, -om * (z + 0.1), om * (y - 0.05)]
    })
    .unwrap();
    let w = omega_x(&rot).unwrap();
    let mut dev: f64 = 0.0;
    for i in 1..rot.n1() - 1 {
        for j in 1..rot.n2() - 1 {
            dev = dev.max((w[rot.idx(i, j)] - 2.0 * om).abs());
        }
    }
    c.check("rigid rotation", dev <= 1e-9, format!("{dev:.1e}"));

    let g0 = 0.06;
    let pair = common::lamb_oseen_pair_slice(g0, 0.01, 0.06, 0.15, 241);
    let vr = vorticity_slice(&pair, &VortexSettings::for_pitch(0.25)).unwrap();
    let circ: Vec<f64> = vr.cores.iter().map(|c| c.circulation).collect();
    let ok = vr.pair_count() == 1 && circ.len() == 2 && circ.iter().all(|g| rel(g.abs(), g0) <= 0.05);
    c.check(
        "Lamb-Oseen pair",
        ok,
        format!(
            "{} pair(s), {:?}",
            vr.pair_count(),
            circ.iter().map(|g| format!("{g:.5}")).collect::<Vec<_>>()
        ),
    );

    let avg = chord_weighted_average(&[1.0, 2.0, 3.0], &[1.02, 1.0, 0.98]).unwrap();
    c.check(
        "chord average = formula",
        (avg - 5.96 / 3.0).abs() <= 1e-9,
        format!("{avg:.6}"),
    );
    c.literal(
        "chord average = 1.99733",
        (avg - 1.99733).abs() <= 1e-9,
        format!("{avg:.6}"),
    );

    let base = 0.4;
    let ok = percent_change(base, base).unwrap() == 0.0
        && (percent_change(1.27 * base, base).unwrap() - 27.0).abs() <= 1e-9
        && (base * (1.0 + percent_change(0.833 * base, base).unwrap() / 100.0) - 0.833 * base).abs() <= 1e-12;
    c.check("percent identities", ok, "0 %, +27 %, inverse".into());
    c.finish()
}

fn trend(cache: &Path) -> Outcome {
    let mut c = Checks::default();
    let cfg = SweepConfig {
        pars: vec![0.0, 3.0, 6.0, 9.0],
        alphas: vec![9.3, 11.4, 13.6],
        cache_dir: cache.to_path_buf(),
        ..SweepConfig::default()
    };
    let res = run_sweep(&cfg, &Execution::Parallel(4)).unwrap();
    let cl = |par: f64, a: f64| res.value(res.par_index(par).unwrap(), res.alpha_index(a).unwrap(), Metric::Cl);
    let stall: Vec<String> = [3.0, 6.0, 9.0]
        .iter()
        .map(|&p| format!("PAR{p} {:.4}", cl(p, 9.3)))
        .collect();
    c.soft(
        "baseline best at 9.3",
        [3.0, 6.0, 9.0].iter().all(|&p| cl(0.0, 9.3) >= cl(p, 9.3)),
        format!("PAR0 {:.4}, {}", cl(0.0, 9.3), stall.join(", ")),
    );
    let deep: Vec<String> = [3.0, 6.0, 9.0]
        .iter()
        .map(|&p| format!("PAR{p} {:.4}", cl(p, 13.6)))
        .collect();
    c.soft(
        "modified above baseline at 13.6",
        [3.0, 6.0, 9.0].iter().any(|&p| cl(p, 13.6) > cl(0.0, 13.6)),
        format!("PAR0 {:.4}, {}", cl(0.0, 13.6), deep.join(", ")),
    );
    c.finish()
}

fn files(root: &Path) -> Vec<PathBuf> {
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
    out.sort();
    out
}

fn determinism(tmp: &Path) -> Outcome {
    let mut c = Checks::default();
    let mut trees = Vec::new();
    let mut slowest = Duration::ZERO;
    for run in 0..2 {
        let cfg = SweepConfig {
            cache_dir: tmp.join(format!("cache{run}")),
            out_dir: tmp.join(format!("out{run}")),
            ..SweepConfig::default()
        };
        let t0 = Instant::now();
        let exec = Execution::from_workers(4);
        run_sweep(&cfg, &exec).unwrap().write(&cfg.out_dir).unwrap();
        slowest = slowest.max(t0.elapsed());
        trees.push(cfg.out_dir);
    }
    let (a, b) = (files(&trees[0]), files(&trees[1]));
    let same = a == b
        && a.iter()
            .all(|f| std::fs::read(trees[0].join(f)).unwrap() == std::fs::read(trees[1].join(f)).unwrap());
    c.check("bit-identical trees", same, format!("{} files", a.len()));
    c.timed("full sweep", slowest, Duration::from_secs(600));
    c.finish()
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "geometry table fidelity", Box::new(geometry_table)),
        (2, "NACA 0009 shape", Box::new(naca_shape)),
        (3, "inviscid solver", Box::new(inviscid)),
        (4, "boundary layer", Box::new(boundary_layer)),
        (5, "2D stall anchor", Box::new(stall_anchor)),
        (6, "lifting line", Box::new(lifting_line)),
        (7, "post-processing", Box::new(postprocessing)),
        (8, "trend report", Box::new(|| trend(&tmp.path().join("trend-cache")))),
        (9, "determinism", Box::new(|| determinism(tmp.path()))),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in &criteria {
        let out = run();
        let tag = match out.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
        };
        println!("{tag} criterion {id} {name}: {}", out.detail);
        if out.status == Status::Fail {
            if let Some((_, why)) = KNOWN_FAILURES.iter().find(|(k, _)| k == id) {
                println!("     known failure: {why}");
            }
        }
        if !out.unexpected.is_empty() {
            unexpected.push(format!("criterion {id}: {}", out.unexpected.join(", ")));
        }
        if out.status == Status::Fail && out.unexpected.is_empty() && !KNOWN_FAILURES.iter().any(|(k, _)| k == id) {
            unexpected.push(format!("criterion {id}"));
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {}", unexpected.join("; "));
        std::process::exit(1);
    }
}
