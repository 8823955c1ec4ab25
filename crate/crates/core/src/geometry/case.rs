//! Flow case description exported alongside the geometry.

use std::path::Path;

use super::wing::WingGeometry;
use crate::error::{Error, Result};

pub const DEFAULT_U_INF: f64 = 0.81;
pub const DEFAULT_RHO: f64 = 1.1649;
pub const DEFAULT_MU: f64 = 1.858e-5;
pub const DEFAULT_RE: f64 = 50_000.0;
/// Relative mismatch between nominal and implied Reynolds number above which
/// a consistency warning is attached to the case.
pub const RE_CONSISTENCY_TOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    pub u_inf: f64,
    pub rho: f64,
    pub mu: f64,
    /// Nominal Reynolds number; the solvers use this value.
    pub re: f64,
    pub chord: f64,
    pub upstream_c: f64,
    pub downstream_c: f64,
    pub lateral_c: f64,
    pub warnings: Vec<String>,
}

impl Default for CaseSpec {
    fn default() -> Self {
        CaseSpec {
            u_inf: DEFAULT_U_INF,
            rho: DEFAULT_RHO,
            mu: DEFAULT_MU,
            re: DEFAULT_RE,
            chord: 1.0,
            upstream_c: 10.0,
            downstream_c: 15.0,
            lateral_c: 10.0,
            warnings: Vec::new(),
        }
    }
}

/// Optional replacements for the default case constants.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseOverrides {
    pub u_inf: Option<f64>,
    pub rho: Option<f64>,
    pub mu: Option<f64>,
    pub re: Option<f64>,
    pub chord: Option<f64>,
    /// Derive the chord from `Re·μ/(ρ·U)` instead of taking the wing chord.
    pub chord_from_reynolds: bool,
    /// Replaces [`RE_CONSISTENCY_TOL`].
    pub re_tolerance: Option<f64>,
}

impl CaseSpec {
    /// `ρ·U·c/μ` from the physical constants.
    pub fn implied_reynolds(&self) -> f64 {
        self.rho * self.u_inf * self.chord / self.mu
    }

    /// Chord that makes the physical constants reproduce the nominal `Re`.
    pub fn implied_chord(&self) -> f64 {
        self.re * self.mu / (self.rho * self.u_inf)
    }

    /// Kinematic viscosity consistent with the nominal Reynolds number at
    /// the case chord, so solver Reynolds numbers equal `re` exactly.
    pub fn solver_nu(&self) -> f64 {
        self.u_inf * self.chord / self.re
    }

    pub fn reynolds_mismatch(&self) -> f64 {
        (self.implied_reynolds() - self.re).abs() / self.re
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("u_inf", self.u_inf),
            ("rho", self.rho),
            ("mu", self.mu),
            ("re", self.re),
            ("chord", self.chord),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    fn refresh_warnings(&mut self, tolerance: f64) {
        self.warnings.clear();
        let mismatch = self.reynolds_mismatch();
        if mismatch > tolerance {
            self.warnings.push(format!(
                "rho*U*c/mu = {:.0} differs from nominal Re = {:.0} by {:.2}%",
                self.implied_reynolds(),
                self.re,
                100.0 * mismatch
            ));
        }
    }

    pub fn to_key_value(&self) -> String {
        format!(
            "u_inf={}\nrho={}\nmu={}\nre={}\nchord={}\nupstream_c={}\ndownstream_c={}\nlateral_c={}\n",
            self.u_inf, self.rho, self.mu, self.re, self.chord, self.upstream_c, self.downstream_c, self.lateral_c
        )
    }

    pub fn parse_key_value(text: &str) -> Result<Self> {
        let mut case = CaseSpec::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                line: n + 1,
                message: format!("expected key=value, got `{line}`"),
            })?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Config {
                line: n + 1,
                message: format!("`{}` is not a number", v.trim()),
            })?;
            let slot = match k.trim() {
                "u_inf" => &mut case.u_inf,
                "rho" => &mut case.rho,
                "mu" => &mut case.mu,
                "re" => &mut case.re,
                "chord" => &mut case.chord,
                "upstream_c" => &mut case.upstream_c,
                "downstream_c" => &mut case.downstream_c,
                "lateral_c" => &mut case.lateral_c,
                other => {
                    return Err(Error::Config {
                        line: n + 1,
                        message: format!("unknown key `{other}`"),
                    })
                }
            };
            *slot = v;
        }
        case.validate()?;
        case.refresh_warnings(RE_CONSISTENCY_TOL);
        Ok(case)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(path, self.to_key_value()).map_err(|e| Error::io(path, e))
    }
}

/// Case for a wing: defaults, then overrides, then the Reynolds check.
pub fn make_case_spec(wing: Option<&WingGeometry>, overrides: &CaseOverrides) -> Result<CaseSpec> {
    let mut case = CaseSpec::default();
    if let Some(w) = wing {
        case.chord = w.mean_chord;
    }
    if let Some(v) = overrides.u_inf {
        case.u_inf = v;
    }
    if let Some(v) = overrides.rho {
        case.rho = v;
    }
    if let Some(v) = overrides.mu {
        case.mu = v;
    }
    if let Some(v) = overrides.re {
        case.re = v;
    }
    if let Some(v) = overrides.chord {
        case.chord = v;
    }
    case.validate()?;
    if overrides.chord_from_reynolds {
        case.chord = case.implied_chord();
    }
    case.refresh_warnings(overrides.re_tolerance.unwrap_or(RE_CONSISTENCY_TOL));
    Ok(case)
}
