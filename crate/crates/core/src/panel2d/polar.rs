use super::boundary_layer::{boundary_layer_march, ClosureConfig, LiftCorrection};
use super::inviscid::{InviscidSolver, Surface};
use super::loads::integrate_cp_loads;
use super::panels::discretize_panels;
use crate::error::{Error, Result};
use crate::geometry::{AirfoilProfile, CaseSpec};

pub const RE_MIN: f64 = 1e4;
pub const RE_MAX: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    ViternaExtended,
    Cached,
}

/// Per-point status of a polar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFlag {
    Ok,
    /// Boundary-layer march failed; values interpolated from neighbours.
    Interpolated,
    /// Point produced by the post-stall extrapolation.
    Extrapolated,
}

impl PointFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::Interpolated => "interpolated",
            PointFlag::Extrapolated => "extrapolated",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "ok" => Some(PointFlag::Ok),
            "interpolated" => Some(PointFlag::Interpolated),
            "extrapolated" => Some(PointFlag::Extrapolated),
            _ => None,
        }
    }
}

/// Tabulated section coefficients at one Reynolds number.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionPolar {
    pub reynolds: f64,
    /// Degrees, strictly increasing.
    pub alphas: Vec<f64>,
    pub cl: Vec<f64>,
    pub cd: Vec<f64>,
    pub flags: Vec<PointFlag>,
    pub provenance: Provenance,
    /// Angle of maximum lift over the computed (non-extrapolated) range.
    pub stall_alpha: Option<f64>,
}

impl SectionPolar {
    pub fn new(
        reynolds: f64,
        alphas: Vec<f64>,
        cl: Vec<f64>,
        cd: Vec<f64>,
        flags: Vec<PointFlag>,
        provenance: Provenance,
    ) -> Result<Self> {
        let n = alphas.len();
        if n < 2 || cl.len() != n || cd.len() != n || flags.len() != n {
            return Err(Error::invalid("polar columns must have equal length >= 2"));
        }
        if alphas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("polar angles must be strictly increasing"));
        }
        let mut polar = SectionPolar {
            reynolds,
            alphas,
            cl,
            cd,
            flags,
            provenance,
            stall_alpha: None,
        };
        polar.stall_alpha = polar.detect_stall();
        Ok(polar)
    }

    fn detect_stall(&self) -> Option<f64> {
        let idx: Vec<usize> = (0..self.alphas.len())
            .filter(|&i| self.flags[i] != PointFlag::Extrapolated && self.alphas[i] >= 0.0)
            .collect();
        let best = idx.iter().copied().max_by(|&a, &b| self.cl[a].total_cmp(&self.cl[b]))?;
        if Some(&best) == idx.last() {
            None
        } else {
            Some(self.alphas[best])
        }
    }

    fn lookup(&self, values: &[f64], alpha: f64) -> f64 {
        let a = &self.alphas;
        let n = a.len();
        if alpha <= a[0] {
            return values[0];
        }
        if alpha >= a[n - 1] {
            return values[n - 1];
        }
        let k = a.partition_point(|&x| x <= alpha) - 1;
        let t = (alpha - a[k]) / (a[k + 1] - a[k]);
        values[k] + t * (values[k + 1] - values[k])
    }

    /// Linear interpolation in angle (degrees), clamped at the table ends.
    pub fn cl_at(&self, alpha_deg: f64) -> f64 {
        self.lookup(&self.cl, alpha_deg)
    }

    pub fn cd_at(&self, alpha_deg: f64) -> f64 {
        self.lookup(&self.cd, alpha_deg)
    }

    /// Angle and value of the maximum lift over the computed range.
    pub fn max_lift(&self) -> Option<(f64, f64)> {
        (0..self.alphas.len())
            .filter(|&i| self.flags[i] != PointFlag::Extrapolated)
            .max_by(|&a, &b| self.cl[a].total_cmp(&self.cl[b]))
            .map(|i| (self.alphas[i], self.cl[i]))
    }

    /// CSV with columns `alpha_deg, cl, cd, flag`; floats round-trip exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha_deg,cl,cd,flag\n");
        for i in 0..self.alphas.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.alphas[i],
                self.cl[i],
                self.cd[i],
                self.flags[i].as_str()
            ));
        }
        out
    }

    pub fn from_csv(text: &str, reynolds: f64, provenance: Provenance) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["alpha_deg", "cl", "cd", "flag"] {
            return Err(Error::Schema {
                path: "<polar csv>".into(),
                message: format!("unexpected header {:?}", headers),
            });
        }
        let (mut a, mut cl, mut cd, mut fl) = (vec![], vec![], vec![], vec![]);
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let bad = |what: &str| Error::Schema {
                path: "<polar csv>".into(),
                message: format!("row {}: bad {what}", row + 2),
            };
            a.push(rec[0].parse::<f64>().map_err(|_| bad("alpha_deg"))?);
            cl.push(rec[1].parse::<f64>().map_err(|_| bad("cl"))?);
            cd.push(rec[2].parse::<f64>().map_err(|_| bad("cd"))?);
            fl.push(PointFlag::parse(&rec[3]).ok_or_else(|| bad("flag"))?);
        }
        SectionPolar::new(reynolds, a, cl, cd, fl, provenance)
    }
}

/// Numerical settings of the viscous section model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarSettings {
    pub n_panels: usize,
    pub closure: ClosureConfig,
}

impl Default for PolarSettings {
    fn default() -> Self {
        PolarSettings {
            n_panels: 160,
            closure: ClosureConfig::default(),
        }
    }
}

/// Full viscous evaluation of one angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ViscousPoint {
    pub alpha_deg: f64,
    pub cl_inviscid: f64,
    pub cl: f64,
    pub cd: f64,
    pub cd_friction: f64,
    pub cd_separated: f64,
    /// Attached fraction of the suction surface.
    pub attached_fraction: f64,
    pub x_tr: [f64; 2],
    pub x_sep: [f64; 2],
}

/// Viscous section model bound to one profile and Reynolds number.
pub struct ViscousSection {
    solver: InviscidSolver,
    case: CaseSpec,
    settings: PolarSettings,
}

impl ViscousSection {
    pub fn new(profile: &AirfoilProfile, case: &CaseSpec, settings: &PolarSettings) -> Result<Self> {
        if !(RE_MIN..=RE_MAX).contains(&case.re) {
            return Err(Error::invalid(format!(
                "Reynolds number {} outside the closure envelope [{RE_MIN}, {RE_MAX}]",
                case.re
            )));
        }
        let panels = discretize_panels(profile, settings.n_panels)?;
        Ok(ViscousSection {
            solver: InviscidSolver::new(&panels)?,
            case: case.clone(),
            settings: *settings,
        })
    }

    pub fn evaluate(&self, alpha_deg: f64) -> Result<ViscousPoint> {
        let inv = self.solver.solve(alpha_deg)?;
        let (cl_inv, _) = integrate_cp_loads(&inv.cp)?;
        let closure = &self.settings.closure;
        let bl = boundary_layer_march(&inv.cp, &self.case, closure)?;
        let suction = if alpha_deg >= 0.0 {
            Surface::Upper
        } else {
            Surface::Lower
        };
        let f = bl.surface(suction).x_sep.clamp(0.0, 1.0);
        let cl = match closure.lift_correction {
            LiftCorrection::Kirchhoff => cl_inv * (0.5 * (1.0 + f.sqrt())).powi(2),
            LiftCorrection::None => cl_inv,
        };
        let cd_friction = bl.upper.squire_young_cd(self.case.u_inf, self.case.chord)
            + bl.lower.squire_young_cd(self.case.u_inf, self.case.chord);
        let sin_a = alpha_deg.to_radians().sin();
        let cd_separated = closure.cd_max * sin_a * sin_a * (1.0 - f);
        Ok(ViscousPoint {
            alpha_deg,
            cl_inviscid: cl_inv,
            cl,
            cd: cd_friction + cd_separated,
            cd_friction,
            cd_separated,
            attached_fraction: f,
            x_tr: [bl.upper.x_tr, bl.lower.x_tr],
            x_sep: [bl.upper.x_sep, bl.lower.x_sep],
        })
    }
}

/// Viscous polar of a profile over ascending `alphas` (degrees).
///
/// A failed boundary-layer march flags the point and fills it by linear
/// interpolation from the nearest good neighbours.
pub fn viscous_polar(
    profile: &AirfoilProfile,
    case: &CaseSpec,
    alphas: &[f64],
    settings: &PolarSettings,
) -> Result<SectionPolar> {
    if alphas.len() < 2 || alphas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("polar angles must be strictly ascending (>= 2)"));
    }
    let section = ViscousSection::new(profile, case, settings)?;
    let points: Vec<Option<(f64, f64)>> = alphas
        .iter()
        .map(|&a| section.evaluate(a).ok().map(|p| (p.cl, p.cd)))
        .collect();
    let good: Vec<usize> = (0..points.len()).filter(|&i| points[i].is_some()).collect();
    if good.is_empty() {
        return Err(Error::Solver(format!(
            "boundary-layer march failed at every angle for {}",
            profile.name
        )));
    }
    let mut cl = Vec::with_capacity(alphas.len());
    let mut cd = Vec::with_capacity(alphas.len());
    let mut flags = Vec::with_capacity(alphas.len());
    for (i, p) in points.iter().enumerate() {
        if let Some((l, d)) = *p {
            cl.push(l);
            cd.push(d);
            flags.push(PointFlag::Ok);
            continue;
        }
        let lo = good.iter().rev().find(|&&g| g < i).copied();
        let hi = good.iter().find(|&&g| g > i).copied();
        let (l, d) = match (lo, hi) {
            (Some(a), Some(b)) => {
                let t = (alphas[i] - alphas[a]) / (alphas[b] - alphas[a]);
                let (pa, pb) = (points[a].unwrap(), points[b].unwrap());
                (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
            }
            (Some(a), None) => points[a].unwrap(),
            (None, Some(b)) => points[b].unwrap(),
            (None, None) => unreachable!(),
        };
        cl.push(l);
        cd.push(d);
        flags.push(PointFlag::Interpolated);
    }
    SectionPolar::new(case.re, alphas.to_vec(), cl, cd, flags, Provenance::Computed)
}

/// `start, start + step, …` up to and including `end` (within rounding).
pub fn alpha_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
