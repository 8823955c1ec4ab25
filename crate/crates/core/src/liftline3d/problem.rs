use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Dyn, LU};

use super::downwash::{cosine_stations, downwash_finite, downwash_periodic, periodic_wavelengths};
use crate::error::{Error, Result};
use crate::geometry::{CaseSpec, WingGeometry};
use crate::panel2d::SectionPolar;

/// Sectional aerodynamic model used at one spanwise station.
#[derive(Debug, Clone)]
pub enum SectionModel {
    Polar(Arc<SectionPolar>),
    /// Linear blend `(1 − w)·lo + w·hi` of two polars bracketing the local Reynolds number.
    Blend {
        lo: Arc<SectionPolar>,
        hi: Arc<SectionPolar>,
        weight: f64,
    },
    /// `cl = a0·α`, constant `cd`; never stalls.
    Linear {
        a0_per_rad: f64,
        cd0: f64,
    },
}

impl SectionModel {
    pub fn cl(&self, alpha_deg: f64) -> f64 {
        match self {
            SectionModel::Polar(p) => p.cl_at(alpha_deg),
            SectionModel::Blend { lo, hi, weight } => {
                (1.0 - weight) * lo.cl_at(alpha_deg) + weight * hi.cl_at(alpha_deg)
            }
            SectionModel::Linear { a0_per_rad, .. } => a0_per_rad * alpha_deg.to_radians(),
        }
    }

    pub fn cd(&self, alpha_deg: f64) -> f64 {
        match self {
            SectionModel::Polar(p) => p.cd_at(alpha_deg),
            SectionModel::Blend { lo, hi, weight } => {
                (1.0 - weight) * lo.cd_at(alpha_deg) + weight * hi.cd_at(alpha_deg)
            }
            SectionModel::Linear { cd0, .. } => *cd0,
        }
    }

    pub fn stall_alpha(&self) -> Option<f64> {
        match self {
            SectionModel::Polar(p) => p.stall_alpha,
            SectionModel::Blend { lo, hi, weight } => match (lo.stall_alpha, hi.stall_alpha) {
                (Some(a), Some(b)) => Some((1.0 - weight) * a + weight * b),
                (a, b) => a.or(b),
            },
            SectionModel::Linear { .. } => None,
        }
    }
}

/// Polars of one profile at several Reynolds numbers.
#[derive(Debug, Clone, Default)]
pub struct PolarSet {
    polars: Vec<Arc<SectionPolar>>,
}

impl PolarSet {
    pub fn new(mut polars: Vec<SectionPolar>) -> Result<Self> {
        if polars.is_empty() {
            return Err(Error::invalid("polar set is empty"));
        }
        polars.sort_by(|a, b| a.reynolds.total_cmp(&b.reynolds));
        polars.dedup_by(|a, b| a.reynolds == b.reynolds);
        Ok(PolarSet {
            polars: polars.into_iter().map(Arc::new).collect(),
        })
    }

    pub fn polars(&self) -> &[Arc<SectionPolar>] {
        &self.polars
    }

    /// Section model at Reynolds number `re`, clamped to the tabulated range.
    pub fn section_at(&self, re: f64) -> SectionModel {
        let p = &self.polars;
        if p.len() == 1 || re <= p[0].reynolds {
            return SectionModel::Polar(p[0].clone());
        }
        let last = p.len() - 1;
        if re >= p[last].reynolds {
            return SectionModel::Polar(p[last].clone());
        }
        let k = p.partition_point(|q| q.reynolds <= re) - 1;
        let weight = (re - p[k].reynolds) / (p[k + 1].reynolds - p[k].reynolds);
        if weight == 0.0 {
            return SectionModel::Polar(p[k].clone());
        }
        SectionModel::Blend {
            lo: p[k].clone(),
            hi: p[k + 1].clone(),
            weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpanMode {
    /// Stations cover whole wavelengths of a spanwise-periodic wing.
    Periodic { pitch: f64 },
    /// Cosine stations on a finite wing of span `span`, centred at zero.
    Finite { span: f64 },
}

#[derive(Debug, Clone)]
pub struct LltStation {
    pub z: f64,
    pub chord: f64,
    pub section: SectionModel,
}

/// Under-relaxation factors and stopping rule of the fixed-point solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LltSettings {
    pub relaxation_pre_stall: f64,
    pub relaxation_post_stall: f64,
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for LltSettings {
    fn default() -> Self {
        LltSettings {
            relaxation_pre_stall: 0.3,
            relaxation_post_stall: 0.05,
            max_iters: 3000,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LiftingLineProblem {
    pub stations: Vec<LltStation>,
    pub mode: SpanMode,
    pub u_inf: f64,
    pub alpha_deg: f64,
    pub settings: LltSettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirculationDistribution {
    pub z: Vec<f64>,
    pub gamma: Vec<f64>,
    pub alpha_eff: Vec<f64>,
    pub cl_sec: Vec<f64>,
    pub cd_sec: Vec<f64>,
    pub downwash: Vec<f64>,
    pub converged: bool,
    pub residual_history: Vec<f64>,
}

impl CirculationDistribution {
    pub fn residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::INFINITY)
    }

    /// CSV with columns `z_m, gamma, alpha_eff_deg, cl_sec, cd_sec`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z_m,gamma,alpha_eff_deg,cl_sec,cd_sec\n");
        for i in 0..self.z.len() {
            out.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}\n",
                self.z[i], self.gamma[i], self.alpha_eff[i], self.cl_sec[i], self.cd_sec[i]
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WingPolarPoint {
    pub alpha: f64,
    pub cl: f64,
    pub cd_induced: f64,
    pub cd_profile: f64,
    pub cd_total: f64,
    pub efficiency: f64,
    pub converged: bool,
    pub residual: f64,
    pub iterations: usize,
}

pub const WING_POLAR_HEADER: &str = "alpha_deg,cl,cd_induced,cd_profile,cd_total,l_over_d,converged";

impl WingPolarPoint {
    pub fn csv_row(&self) -> String {
        format!(
            "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{}",
            self.alpha, self.cl, self.cd_induced, self.cd_profile, self.cd_total, self.efficiency, self.converged
        )
    }
}

pub fn wing_polar_csv(points: &[WingPolarPoint]) -> String {
    let mut out = format!("{WING_POLAR_HEADER}\n");
    for p in points {
        out.push_str(&p.csv_row());
        out.push('\n');
    }
    out
}

impl LiftingLineProblem {
    fn validate(&self) -> Result<()> {
        if self.stations.iter().any(|s| !(s.chord > 0.0)) {
            return Err(Error::invalid("every station needs a positive chord"));
        }
        if !(self.u_inf > 0.0) {
            return Err(Error::invalid("freestream speed must be positive"));
        }
        let s = &self.settings;
        for w in [s.relaxation_pre_stall, s.relaxation_post_stall] {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::invalid(format!("relaxation {w} outside (0, 1]")));
            }
        }
        let z: Vec<f64> = self.stations.iter().map(|s| s.z).collect();
        match self.mode {
            SpanMode::Periodic { pitch } => {
                periodic_wavelengths(&z, pitch)?;
            }
            SpanMode::Finite { span } => {
                downwash_finite(&vec![0.0; z.len()], &z, span)?;
            }
        }
        Ok(())
    }

    /// Periodic problem on the wing's own stations (the closing station,
    /// one period after the first, is dropped).
    pub fn periodic_from_wing(
        wing: &WingGeometry,
        case: &CaseSpec,
        polars: &PolarSet,
        alpha_deg: f64,
        settings: LltSettings,
    ) -> Result<Self> {
        let n = wing.n_stations();
        let stations = wing.stations[..n - 1]
            .iter()
            .map(|s| LltStation {
                z: s.z,
                chord: s.local_chord,
                section: polars.section_at(case.re * s.local_chord / wing.mean_chord),
            })
            .collect();
        let problem = LiftingLineProblem {
            stations,
            mode: SpanMode::Periodic {
                pitch: wing.pitch_m().unwrap_or(wing.span),
            },
            u_inf: case.u_inf,
            alpha_deg,
            settings,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// Finite-span problem on `n` cosine stations of the wing's planform.
    pub fn finite_from_wing(
        wing: &WingGeometry,
        case: &CaseSpec,
        polars: &PolarSet,
        n: usize,
        alpha_deg: f64,
        settings: LltSettings,
    ) -> Result<Self> {
        let span = wing.span;
        let stations = cosine_stations(n, span)
            .into_iter()
            .map(|z| {
                let chord = wing.chord_at(z + 0.5 * span);
                LltStation {
                    z,
                    chord,
                    section: polars.section_at(case.re * chord / wing.mean_chord),
                }
            })
            .collect();
        let problem = LiftingLineProblem {
            stations,
            mode: SpanMode::Finite { span },
            u_inf: case.u_inf,
            alpha_deg,
            settings,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_alpha(&self, alpha_deg: f64) -> Self {
        LiftingLineProblem {
            alpha_deg,
            ..self.clone()
        }
    }

    fn downwash(&self, z: &[f64], gamma: &[f64]) -> Result<Vec<f64>> {
        match self.mode {
            SpanMode::Periodic { pitch } => downwash_periodic(gamma, z, pitch),
            SpanMode::Finite { span } => downwash_finite(gamma, z, span),
        }
    }

    /// Quadrature weights `dz` of the spanwise integrals.
    fn weights(&self) -> Vec<f64> {
        let n = self.stations.len();
        match self.mode {
            SpanMode::Periodic { .. } => {
                let h = (self.stations[n - 1].z - self.stations[0].z) / (n - 1) as f64;
                vec![h; n]
            }
            SpanMode::Finite { span } => {
                let dt = PI / (n + 1) as f64;
                (1..=n).map(|i| 0.5 * span * (i as f64 * dt).sin() * dt).collect()
            }
        }
    }

    fn initial_gamma(&self) -> Vec<f64> {
        let u = self.u_inf;
        match self.mode {
            SpanMode::Periodic { .. } => self
                .stations
                .iter()
                .map(|s| 0.5 * u * s.chord * s.section.cl(self.alpha_deg))
                .collect(),
            SpanMode::Finite { span } => {
                let n = self.stations.len();
                let w = self.weights();
                let lift: f64 = self
                    .stations
                    .iter()
                    .zip(&w)
                    .map(|(s, w)| 0.5 * u * s.chord * s.section.cl(self.alpha_deg) * w)
                    .sum();
                // elliptic shape carrying the same total circulation
                let g0 = lift * 4.0 / (PI * span);
                (1..=n).map(|i| g0 * (i as f64 * PI / (n + 1) as f64).sin()).collect()
            }
        }
    }
}

/// Reference lift slope of the update preconditioner (thin-airfoil value).
const PRECONDITIONER_SLOPE: f64 = 2.0 * PI;

impl LiftingLineProblem {
    /// LU factors of `I + ½·a·diag(c)·D`, the Jacobian of the fixed-point
    /// map for a reference section of slope `a`, where `D` is the discrete
    /// downwash operator per unit `U`. Applying its inverse to the update
    /// leaves the fixed point unchanged and stops short-wavelength and tip
    /// modes from overshooting.
    fn preconditioner(&self, z: &[f64]) -> Result<LU<f64, Dyn, Dyn>> {
        let n = z.len();
        let mut m = DMatrix::<f64>::identity(n, n);
        let mut unit = vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            let col = self.downwash(z, &unit)?;
            unit[j] = 0.0;
            for i in 0..n {
                m[(i, j)] += 0.5 * PRECONDITIONER_SLOPE * self.stations[i].chord * col[i];
            }
        }
        Ok(m.lu())
    }
}

/// Fixed-point lifting-line solve with under-relaxation.
///
/// Returns the best iterate (smallest residual) flagged `converged = false`
/// when the tolerance is not met within `max_iters`.
pub fn solve_nonlinear_llt(problem: &LiftingLineProblem) -> Result<(CirculationDistribution, WingPolarPoint)> {
    problem.validate()?;
    let st = &problem.stations;
    let n = st.len();
    let u = problem.u_inf;
    let z: Vec<f64> = st.iter().map(|s| s.z).collect();
    let stall: Vec<Option<f64>> = st.iter().map(|s| s.section.stall_alpha()).collect();
    let settings = &problem.settings;

    let precond = problem.preconditioner(&z)?;
    let mut gamma = problem.initial_gamma();
    let mut history = Vec::new();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut converged = false;
    let mut alpha_eff = vec![0.0; n];
    let mut cl = vec![0.0; n];
    for _ in 0..settings.max_iters.max(1) {
        let w = problem.downwash(&z, &gamma)?;
        let mut residual: f64 = 0.0;
        let mut post_stall = false;
        let mut gamma_new = vec![0.0; n];
        for i in 0..n {
            alpha_eff[i] = problem.alpha_deg - (w[i] / u).atan().to_degrees();
            cl[i] = st[i].section.cl(alpha_eff[i]);
            gamma_new[i] = 0.5 * u * st[i].chord * cl[i];
            residual = residual.max((gamma_new[i] - gamma[i]).abs() / (0.5 * u * st[i].chord));
            if let Some(s) = stall[i] {
                post_stall |= alpha_eff[i].abs() > s;
            }
        }
        if !residual.is_finite() {
            return Err(Error::Solver(
                "lifting-line iteration produced a non-finite residual".into(),
            ));
        }
        history.push(residual);
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, gamma.clone()));
        }
        if residual < settings.tolerance {
            converged = true;
            break;
        }
        let omega = if post_stall {
            settings.relaxation_post_stall
        } else {
            settings.relaxation_pre_stall
        };
        let delta = DVector::from_iterator(n, (0..n).map(|i| gamma_new[i] - gamma[i]));
        let delta = precond
            .solve(&delta)
            .ok_or_else(|| Error::Solver("singular lifting-line preconditioner".into()))?;
        for i in 0..n {
            gamma[i] += omega * delta[i];
        }
    }
    if !converged {
        gamma = best.expect("at least one iteration").1;
    }
    let w = problem.downwash(&z, &gamma)?;
    for i in 0..n {
        alpha_eff[i] = problem.alpha_deg - (w[i] / u).atan().to_degrees();
        cl[i] = st[i].section.cl(alpha_eff[i]);
    }
    let cd: Vec<f64> = (0..n).map(|i| st[i].section.cd(alpha_eff[i])).collect();
    let dz = problem.weights();
    let area: f64 = (0..n).map(|i| st[i].chord * dz[i]).sum();
    let cl_wing = (0..n).map(|i| st[i].chord * cl[i] * dz[i]).sum::<f64>() / area;
    let cd_profile = (0..n).map(|i| st[i].chord * cd[i] * dz[i]).sum::<f64>() / area;
    let cd_induced = 2.0 * (0..n).map(|i| gamma[i] * w[i] * dz[i]).sum::<f64>() / (u * u * area);
    let cd_total = cd_induced + cd_profile;
    let point = WingPolarPoint {
        alpha: problem.alpha_deg,
        cl: cl_wing,
        cd_induced,
        cd_profile,
        cd_total,
        efficiency: cl_wing / cd_total,
        converged,
        residual: *history.last().unwrap(),
        iterations: history.len(),
    };
    let dist = CirculationDistribution {
        z,
        gamma,
        alpha_eff,
        cl_sec: cl,
        cd_sec: cd,
        downwash: w,
        converged,
        residual_history: history,
    };
    Ok((dist, point))
}

/// One lifting-line solve per angle; order follows `alphas`.
pub fn wing_polar(
    template: &LiftingLineProblem,
    alphas: &[f64],
    exec: &crate::Execution,
) -> Result<Vec<WingPolarPoint>> {
    let results = exec.map(alphas, |&a| solve_nonlinear_llt(&template.with_alpha(a)).map(|r| r.1));
    results.into_iter().collect()
}
