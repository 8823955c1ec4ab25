use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::geometry::{CaseOverrides, STUDY_PARS};
use crate::liftline3d::LltSettings;
use crate::panel2d::{ClosureConfig, LaminarSeparationPolicy, PolarSettings};

/// Angles always present in a sweep: stall, post-stall and deep stall.
pub const MARKED_ALPHAS: [f64; 3] = [9.3, 11.4, 13.6];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WingMode {
    Periodic,
    Finite,
}

impl WingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            WingMode::Periodic => "periodic",
            WingMode::Finite => "finite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "periodic" => Some(WingMode::Periodic),
            "finite" => Some(WingMode::Finite),
            _ => None,
        }
    }
}

/// Everything a sweep needs. Plain `key = value` text; repeated `par` and
/// `alpha` keys form lists.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub profile: String,
    pub profile_points: usize,
    pub closed_te: bool,
    pub chord: f64,
    /// Protuberance wavelength as a fraction of chord.
    pub pitch: f64,
    /// PAR list; 0 is the baseline.
    pub pars: Vec<f64>,
    /// Wing angles (deg), ascending; marked angles are always included.
    pub alphas: Vec<f64>,
    pub u_inf: Option<f64>,
    pub rho: Option<f64>,
    pub mu: Option<f64>,
    pub re: Option<f64>,
    pub re_tolerance: Option<f64>,
    pub n_panels: usize,
    pub polar_alpha_min: f64,
    pub polar_alpha_max: f64,
    pub polar_alpha_step: f64,
    pub lambda_sep: f64,
    pub h_sep: f64,
    pub cd_max: f64,
    pub laminar_separation: LaminarSeparationPolicy,
    pub mode: WingMode,
    pub wavelengths: usize,
    pub stations_per_wavelength: usize,
    /// Finite mode only: span in chords and station count.
    pub finite_span: f64,
    pub finite_stations: usize,
    pub relaxation_pre_stall: f64,
    pub relaxation_post_stall: f64,
    pub max_iters: usize,
    pub tolerance: f64,
    pub out_dir: PathBuf,
    pub cache_dir: PathBuf,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let llt = LltSettings::default();
        let closure = ClosureConfig::default();
        let mut pars = vec![0.0];
        pars.extend(STUDY_PARS.iter().map(|&p| p as f64));
        SweepConfig {
            profile: "0009".into(),
            profile_points: 201,
            closed_te: true,
            chord: 1.0,
            pitch: 0.25,
            pars,
            alphas: with_marked_alphas((0..=32).map(|i| i as f64 * 0.5).collect()),
            u_inf: None,
            rho: None,
            mu: None,
            re: None,
            re_tolerance: None,
            n_panels: PolarSettings::default().n_panels,
            polar_alpha_min: -8.0,
            polar_alpha_max: 20.0,
            polar_alpha_step: 0.25,
            lambda_sep: closure.lambda_sep,
            h_sep: closure.h_sep,
            cd_max: closure.cd_max,
            laminar_separation: closure.laminar_separation,
            mode: WingMode::Periodic,
            wavelengths: 1,
            stations_per_wavelength: 32,
            finite_span: 6.0,
            finite_stations: 41,
            relaxation_pre_stall: llt.relaxation_pre_stall,
            relaxation_post_stall: llt.relaxation_post_stall,
            max_iters: llt.max_iters,
            tolerance: llt.tolerance,
            out_dir: PathBuf::from("sweep_out"),
            cache_dir: PathBuf::from(".tubercle-cache"),
        }
    }
}

/// Add the marked angles, sort, drop exact duplicates.
pub fn with_marked_alphas(mut alphas: Vec<f64>) -> Vec<f64> {
    alphas.extend(MARKED_ALPHAS);
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    alphas
}

fn policy_str(p: LaminarSeparationPolicy) -> &'static str {
    match p {
        LaminarSeparationPolicy::Trip => "trip",
        LaminarSeparationPolicy::Separate => "separate",
    }
}

impl SweepConfig {
    pub fn case_overrides(&self) -> CaseOverrides {
        CaseOverrides {
            u_inf: self.u_inf,
            rho: self.rho,
            mu: self.mu,
            re: self.re,
            chord: Some(self.chord),
            chord_from_reynolds: false,
            re_tolerance: self.re_tolerance,
        }
    }

    pub fn closure(&self) -> ClosureConfig {
        ClosureConfig {
            lambda_sep: self.lambda_sep,
            h_sep: self.h_sep,
            cd_max: self.cd_max,
            laminar_separation: self.laminar_separation,
            ..ClosureConfig::default()
        }
    }

    pub fn polar_settings(&self) -> PolarSettings {
        PolarSettings {
            n_panels: self.n_panels,
            closure: self.closure(),
        }
    }

    pub fn llt_settings(&self) -> LltSettings {
        LltSettings {
            relaxation_pre_stall: self.relaxation_pre_stall,
            relaxation_post_stall: self.relaxation_post_stall,
            max_iters: self.max_iters,
            tolerance: self.tolerance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config { line: 0, message: m });
        if self.pars.is_empty() {
            return bad("PAR list is empty".into());
        }
        if let Some(p) = self.pars.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return bad(format!("PAR {p} must be positive (or 0 for the baseline)"));
        }
        if self.alphas.is_empty() || self.alphas.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("alpha list must be non-empty and strictly ascending".into());
        }
        if !(self.chord > 0.0 && self.pitch > 0.0) {
            return bad("chord and pitch must be positive".into());
        }
        if self.wavelengths == 0 || self.stations_per_wavelength < 5 {
            return bad("need >= 1 wavelength and >= 5 stations per wavelength".into());
        }
        if !(self.polar_alpha_step > 0.0 && self.polar_alpha_max > self.polar_alpha_min) {
            return bad("polar angle range is empty".into());
        }
        Ok(())
    }

    /// Serialize; `parse(to_text())` reproduces the config exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |s: &mut String, k: &str, v: Option<f64>| {
            if let Some(v) = v {
                let _ = writeln!(s, "{k} = {v:?}");
            }
        };
        let _ = writeln!(s, "profile = {}", self.profile);
        let _ = writeln!(s, "profile_points = {}", self.profile_points);
        let _ = writeln!(s, "closed_te = {}", self.closed_te);
        let _ = writeln!(s, "chord = {:?}", self.chord);
        let _ = writeln!(s, "pitch = {:?}", self.pitch);
        for p in &self.pars {
            let _ = writeln!(s, "par = {p:?}");
        }
        for a in &self.alphas {
            let _ = writeln!(s, "alpha = {a:?}");
        }
        opt(&mut s, "u_inf", self.u_inf);
        opt(&mut s, "rho", self.rho);
        opt(&mut s, "mu", self.mu);
        opt(&mut s, "re", self.re);
        opt(&mut s, "re_tolerance", self.re_tolerance);
        let _ = writeln!(s, "n_panels = {}", self.n_panels);
        let _ = writeln!(s, "polar_alpha_min = {:?}", self.polar_alpha_min);
        let _ = writeln!(s, "polar_alpha_max = {:?}", self.polar_alpha_max);
        let _ = writeln!(s, "polar_alpha_step = {:?}", self.polar_alpha_step);
        let _ = writeln!(s, "lambda_sep = {:?}", self.lambda_sep);
        let _ = writeln!(s, "h_sep = {:?}", self.h_sep);
        let _ = writeln!(s, "cd_max = {:?}", self.cd_max);
        let _ = writeln!(s, "laminar_separation = {}", policy_str(self.laminar_separation));
        let _ = writeln!(s, "mode = {}", self.mode.as_str());
        let _ = writeln!(s, "wavelengths = {}", self.wavelengths);
        let _ = writeln!(s, "stations_per_wavelength = {}", self.stations_per_wavelength);
        let _ = writeln!(s, "finite_span = {:?}", self.finite_span);
        let _ = writeln!(s, "finite_stations = {}", self.finite_stations);
        let _ = writeln!(s, "relaxation_pre_stall = {:?}", self.relaxation_pre_stall);
        let _ = writeln!(s, "relaxation_post_stall = {:?}", self.relaxation_post_stall);
        let _ = writeln!(s, "max_iters = {}", self.max_iters);
        let _ = writeln!(s, "tolerance = {:?}", self.tolerance);
        let _ = writeln!(s, "out_dir = {}", self.out_dir.display());
        let _ = writeln!(s, "cache_dir = {}", self.cache_dir.display());
        s
    }

    /// Parse `key = value` lines over the defaults. `#` starts a comment.
    /// A `par` or `alpha` key replaces the default list on first use.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut pars: Option<Vec<f64>> = None;
        let mut alphas: Option<Vec<f64>> = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Config {
                line: line_no,
                message: m,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let f = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("{key}: not a finite number: {value:?}")))
            };
            let u = || -> Result<usize> { value.parse().map_err(|_| err(format!("{key}: not a count: {value:?}"))) };
            match key {
                "profile" => cfg.profile = value.to_string(),
                "profile_points" => cfg.profile_points = u()?,
                "closed_te" => {
                    cfg.closed_te = value
                        .parse()
                        .map_err(|_| err("closed_te: expected true/false".to_string()))?
                }
                "chord" => cfg.chord = f()?,
                "pitch" => cfg.pitch = f()?,
                "par" => pars.get_or_insert_with(Vec::new).push(f()?),
                "alpha" => alphas.get_or_insert_with(Vec::new).push(f()?),
                "u_inf" => cfg.u_inf = Some(f()?),
                "rho" => cfg.rho = Some(f()?),
                "mu" => cfg.mu = Some(f()?),
                "re" => cfg.re = Some(f()?),
                "re_tolerance" => cfg.re_tolerance = Some(f()?),
                "n_panels" => cfg.n_panels = u()?,
                "polar_alpha_min" => cfg.polar_alpha_min = f()?,
                "polar_alpha_max" => cfg.polar_alpha_max = f()?,
                "polar_alpha_step" => cfg.polar_alpha_step = f()?,
                "lambda_sep" => cfg.lambda_sep = f()?,
                "h_sep" => cfg.h_sep = f()?,
                "cd_max" => cfg.cd_max = f()?,
                "laminar_separation" => {
                    cfg.laminar_separation = match value {
                        "trip" => LaminarSeparationPolicy::Trip,
                        "separate" => LaminarSeparationPolicy::Separate,
                        _ => return Err(err("laminar_separation: expected trip or separate".to_string())),
                    }
                }
                "mode" => {
                    cfg.mode = WingMode::parse(value).ok_or_else(|| err("mode: expected periodic or finite".into()))?
                }
                "wavelengths" => cfg.wavelengths = u()?,
                "stations_per_wavelength" => cfg.stations_per_wavelength = u()?,
                "finite_span" => cfg.finite_span = f()?,
                "finite_stations" => cfg.finite_stations = u()?,
                "relaxation_pre_stall" => cfg.relaxation_pre_stall = f()?,
                "relaxation_post_stall" => cfg.relaxation_post_stall = f()?,
                "max_iters" => cfg.max_iters = u()?,
                "tolerance" => cfg.tolerance = f()?,
                "out_dir" => cfg.out_dir = PathBuf::from(value),
                "cache_dir" => cfg.cache_dir = PathBuf::from(value),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        if let Some(p) = pars {
            cfg.pars = p;
        }
        if let Some(mut a) = alphas {
            if a.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Config {
                    line: 0,
                    message: "alpha entries must be strictly ascending".into(),
                });
            }
            a = with_marked_alphas(a);
            cfg.alphas = a;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
