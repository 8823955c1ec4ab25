//! Integral boundary-layer march along each surface from the stagnation
//! point: Thwaites laminar method, Michel transition, Head's entrainment
//! method for the turbulent part, Squire–Young for the wake drag.

use super::inviscid::{CpDistribution, Surface};
use crate::error::{Error, Result};
use crate::geometry::CaseSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransitionModel {
    /// Michel's Re_θ–Re_x criterion.
    Michel,
    /// Transition forced at a chord fraction, measured along x.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaminarSeparationPolicy {
    /// Laminar separation trips the layer; the turbulent march continues
    /// from the separation point.
    Trip,
    /// Laminar separation ends the march and counts as flow separation.
    Separate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftCorrection {
    /// `Cl = Cl_inv · ((1 + √f) / 2)²` with `f` the suction-side attached fraction.
    Kirchhoff,
    /// Inviscid lift, unmodified.
    None,
}

/// Closure constants and model switches for the viscous section model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureConfig {
    /// Thwaites laminar separation threshold on λ.
    pub lambda_sep: f64,
    /// Turbulent separation shape factor.
    pub h_sep: f64,
    /// Shape factor assigned at the start of the turbulent march.
    pub h_turbulent_start: f64,
    pub transition: TransitionModel,
    pub laminar_separation: LaminarSeparationPolicy,
    pub lift_correction: LiftCorrection,
    /// Drag coefficient of a flat plate normal to the flow.
    pub cd_max: f64,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            lambda_sep: -0.09,
            h_sep: 2.4,
            h_turbulent_start: 1.4,
            transition: TransitionModel::Michel,
            laminar_separation: LaminarSeparationPolicy::Trip,
            lift_correction: LiftCorrection::Kirchhoff,
            cd_max: 1.8,
        }
    }
}

impl ClosureConfig {
    /// Stable text form, used in cache keys and reports.
    pub fn fingerprint(&self) -> String {
        let transition = match self.transition {
            TransitionModel::Michel => "michel".to_string(),
            TransitionModel::Fixed(x) => format!("fixed:{x}"),
        };
        let lsep = match self.laminar_separation {
            LaminarSeparationPolicy::Trip => "trip",
            LaminarSeparationPolicy::Separate => "separate",
        };
        let lift = match self.lift_correction {
            LiftCorrection::Kirchhoff => "kirchhoff",
            LiftCorrection::None => "none",
        };
        format!(
            "lambda_sep={};h_sep={};h_turb0={};transition={transition};laminar_separation={lsep};lift={lift};cd_max={}",
            self.lambda_sep, self.h_sep, self.h_turbulent_start, self.cd_max
        )
    }
}

/// One marching station: arc length from the origin of the march (m),
/// chord fraction for reporting, and edge speed (m/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchStation {
    pub s: f64,
    pub x_c: f64,
    pub ue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceBoundaryLayer {
    pub surface: Surface,
    pub s: Vec<f64>,
    pub x_c: Vec<f64>,
    pub ue: Vec<f64>,
    pub theta: Vec<f64>,
    pub delta_star: Vec<f64>,
    pub shape_factor: Vec<f64>,
    pub turbulent: Vec<bool>,
    /// Transition chord fraction (1.0 when laminar to the trailing edge).
    pub x_tr: f64,
    /// Separation chord fraction (1.0 when attached to the trailing edge).
    pub x_sep: f64,
    /// Where the laminar layer separated, if it did.
    pub laminar_separation: Option<f64>,
    /// Momentum thickness, shape factor and edge speed at the end of the
    /// march (trailing edge or separation).
    pub end_theta: f64,
    pub end_shape_factor: f64,
    pub end_ue: f64,
}

impl SurfaceBoundaryLayer {
    pub fn separated(&self) -> bool {
        self.x_sep < 1.0
    }

    /// Squire–Young drag contribution of this surface, normalised by `chord`.
    pub fn squire_young_cd(&self, u_inf: f64, chord: f64) -> f64 {
        squire_young(self.end_theta / chord, self.end_shape_factor, self.end_ue / u_inf)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLayerState {
    pub upper: SurfaceBoundaryLayer,
    pub lower: SurfaceBoundaryLayer,
}

impl BoundaryLayerState {
    pub fn surface(&self, s: Surface) -> &SurfaceBoundaryLayer {
        match s {
            Surface::Upper => &self.upper,
            Surface::Lower => &self.lower,
        }
    }
}

/// `Cd = 2 θ/c · (Ue/U∞)^((H + 5)/2)`.
pub fn squire_young(theta_c: f64, h: f64, ue_ratio: f64) -> f64 {
    2.0 * theta_c * ue_ratio.powf(0.5 * (h + 5.0))
}

/// Thwaites shear and shape correlations, `(l(λ), H(λ))`.
pub fn thwaites_closure(lambda: f64) -> (f64, f64) {
    let lam = lambda.clamp(-0.1, 0.25);
    if lam >= 0.0 {
        (
            0.22 + 1.57 * lam - 1.8 * lam * lam,
            2.61 - 3.75 * lam + 5.24 * lam * lam,
        )
    } else {
        (
            0.22 + 1.402 * lam + 0.018 * lam / (lam + 0.107),
            2.088 + 0.0731 / (lam + 0.14),
        )
    }
}

/// Michel's critical momentum-thickness Reynolds number.
pub fn michel_critical(re_s: f64) -> f64 {
    1.174 * (1.0 + 22_400.0 / re_s) * re_s.powf(0.46)
}

/// Head's mass-flow shape factor `H1(H)`.
pub fn head_h1(h: f64) -> f64 {
    if h <= 1.6 {
        3.3 + 0.8234 * (h - 1.1).max(1e-6).powf(-1.287)
    } else {
        3.3 + 1.5501 * (h - 0.6778).powf(-3.064)
    }
}

/// Inverse of [`head_h1`]; infinite once `H1` reaches its asymptote.
pub fn head_h(h1: f64) -> f64 {
    if h1 <= 3.3 {
        f64::INFINITY
    } else if h1 >= 5.3 {
        1.1 + ((h1 - 3.3) / 0.8234).powf(-1.0 / 1.287)
    } else {
        0.6778 + ((h1 - 3.3) / 1.5501).powf(-1.0 / 3.064)
    }
}

/// Ludwieg–Tillmann skin friction.
pub fn ludwieg_tillmann(h: f64, re_theta: f64) -> f64 {
    0.246 * 10f64.powf(-0.678 * h) * re_theta.max(1.0).powf(-0.268)
}

fn entrainment(h1: f64) -> f64 {
    0.0306 * (h1 - 3.0).max(1e-6).powf(-0.6169)
}

/// Head's equations for the state `(θ, Ue·θ·H1)` at edge speed `ue` with
/// gradient `due`.
fn head_rhs(theta: f64, flux: f64, ue: f64, due: f64, nu: f64) -> (f64, f64) {
    let h1 = flux / (ue * theta);
    let h = head_h(h1).min(10.0);
    let cf = ludwieg_tillmann(h, ue * theta / nu);
    (0.5 * cf - (h + 2.0) * theta / ue * due, ue * entrainment(h1))
}

fn interp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// March one surface. `stations[0]` is the origin of the layer: a
/// stagnation point (`ue = 0`) or the sharp leading edge of a plate.
pub fn march_surface(
    surface: Surface,
    stations: &[MarchStation],
    nu: f64,
    config: &ClosureConfig,
) -> Result<SurfaceBoundaryLayer> {
    let n = stations.len();
    if n < 3 {
        return Err(Error::Solver(format!(
            "{} surface has {n} stations; need at least 3",
            surface.as_str()
        )));
    }
    if let Some(st) = stations.iter().find(|st| st.ue < 0.0 || !st.ue.is_finite()) {
        return Err(Error::Solver(format!(
            "negative edge velocity {} at x/c = {:.4} on the {} surface",
            st.ue,
            st.x_c,
            surface.as_str()
        )));
    }
    if let Some(k) = (1..n).find(|&k| !(stations[k].s > stations[k - 1].s)) {
        return Err(Error::Solver(format!(
            "march step underflow at station {k} on the {} surface",
            surface.as_str()
        )));
    }
    if stations[1..].iter().any(|st| st.ue == 0.0) {
        return Err(Error::Solver(format!(
            "edge velocity vanishes downstream of the origin on the {} surface",
            surface.as_str()
        )));
    }

    let s: Vec<f64> = stations.iter().map(|st| st.s).collect();
    let ue: Vec<f64> = stations.iter().map(|st| st.ue).collect();
    let x_c: Vec<f64> = stations.iter().map(|st| st.x_c).collect();
    let due: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                (ue[1] - ue[0]) / (s[1] - s[0])
            } else if k == n - 1 {
                (ue[k] - ue[k - 1]) / (s[k] - s[k - 1])
            } else {
                let (h0, h1) = (s[k] - s[k - 1], s[k + 1] - s[k]);
                (ue[k + 1] * h0 * h0 - ue[k - 1] * h1 * h1 + ue[k] * (h1 * h1 - h0 * h0)) / (h0 * h1 * (h0 + h1))
            }
        })
        .collect();

    let mut theta = vec![0.0; n];
    let mut shape = vec![0.0; n];
    let mut turbulent = vec![false; n];
    let mut x_tr = 1.0;
    let mut x_sep = 1.0;
    let mut laminar_separation = None;

    // laminar: θ² Ue⁶ = 0.45 ν ∫ Ue⁵ ds
    let mut integral = 0.0;
    let mut lam_lambda = vec![0.0; n];
    let mut transition: Option<(usize, f64)> = None; // (interval end index, fraction)
    let mut stopped: Option<(usize, f64)> = None;
    for k in 0..n {
        if k > 0 {
            integral += 0.5 * (ue[k].powi(5) + ue[k - 1].powi(5)) * (s[k] - s[k - 1]);
        }
        let th2 = if ue[k] == 0.0 {
            if due[k] > 0.0 {
                0.075 * nu / due[k]
            } else {
                0.0
            }
        } else {
            0.45 * nu * integral / ue[k].powi(6)
        };
        theta[k] = th2.sqrt();
        let lambda = th2 / nu * due[k];
        lam_lambda[k] = lambda;
        shape[k] = thwaites_closure(lambda).1;
        if k == 0 {
            continue;
        }

        let re_theta = ue[k] * theta[k] / nu;
        let re_s = ue[k] * s[k] / nu;
        let g = |j: usize| -> f64 {
            let re_t = ue[j] * theta[j] / nu;
            let re_x = (ue[j] * s[j] / nu).max(1e-12);
            re_t - michel_critical(re_x)
        };
        let tripped = match config.transition {
            TransitionModel::Michel => re_s > 0.0 && re_theta >= michel_critical(re_s),
            TransitionModel::Fixed(x) => x_c[k] >= x && s[k] > 0.0 && k > 1,
        };
        let lam_sep = lambda < config.lambda_sep;

        if lam_sep {
            let (l0, l1) = (lam_lambda[k - 1], lambda);
            let t = if (l0 - l1).abs() > 0.0 {
                ((l0 - config.lambda_sep) / (l0 - l1)).clamp(0.0, 1.0)
            } else {
                1.0
            };
            let t_tr = if tripped {
                match config.transition {
                    TransitionModel::Michel => {
                        let (g0, g1) = (g(k - 1), g(k));
                        if g1 != g0 {
                            (-g0 / (g1 - g0)).clamp(0.0, 1.0)
                        } else {
                            1.0
                        }
                    }
                    TransitionModel::Fixed(x) => {
                        if x_c[k] != x_c[k - 1] {
                            ((x - x_c[k - 1]) / (x_c[k] - x_c[k - 1])).clamp(0.0, 1.0)
                        } else {
                            1.0
                        }
                    }
                }
            } else {
                f64::INFINITY
            };
            if t_tr <= t {
                transition = Some((k, t_tr));
            } else {
                laminar_separation = Some(interp(x_c[k - 1], x_c[k], t));
                match config.laminar_separation {
                    LaminarSeparationPolicy::Trip => transition = Some((k, t)),
                    LaminarSeparationPolicy::Separate => stopped = Some((k, t)),
                }
            }
            break;
        }
        if tripped {
            let t = match config.transition {
                TransitionModel::Michel => {
                    let (g0, g1) = (g(k - 1), g(k));
                    if g1 != g0 {
                        (-g0 / (g1 - g0)).clamp(0.0, 1.0)
                    } else {
                        1.0
                    }
                }
                TransitionModel::Fixed(x) => {
                    if x_c[k] != x_c[k - 1] {
                        ((x - x_c[k - 1]) / (x_c[k] - x_c[k - 1])).clamp(0.0, 1.0)
                    } else {
                        1.0
                    }
                }
            };
            transition = Some((k, t));
            break;
        }
    }

    let mut last = n - 1;
    let (mut end_theta, mut end_h, mut end_ue) = (theta[n - 1], shape[n - 1], ue[n - 1]);

    if let Some((k, t)) = stopped {
        let xs = interp(x_c[k - 1], x_c[k], t);
        x_sep = xs;
        x_tr = xs;
        end_theta = interp(theta[k - 1], theta[k], t);
        end_h = interp(shape[k - 1], shape[k], t);
        end_ue = interp(ue[k - 1], ue[k], t);
        last = k - 1;
    } else if let Some((k, t)) = transition {
        x_tr = interp(x_c[k - 1], x_c[k], t);
        let s0 = interp(s[k - 1], s[k], t);
        let mut th = interp(theta[k - 1], theta[k], t);
        let mut h = config.h_turbulent_start;
        let slope = (ue[k] - ue[k - 1]) / (s[k] - s[k - 1]);
        let u0 = interp(ue[k - 1], ue[k], t);
        let mut flux = u0 * th * head_h1(h);
        let mut seg_start = s0;
        let mut separated = false;
        'march: for j in k..n {
            let (sa, ua) = if j == k { (seg_start, u0) } else { (s[j - 1], ue[j - 1]) };
            let sb = s[j];
            let grad = if j == k {
                slope
            } else {
                (ue[j] - ue[j - 1]) / (s[j] - s[j - 1])
            };
            let steps = 4;
            let ds = (sb - sa) / steps as f64;
            for m in 0..steps {
                let s_a = sa + m as f64 * ds;
                let u_at = |sv: f64| ua + grad * (sv - sa);
                let (th0, h_before) = (th, h);
                let f = |thv: f64, flv: f64, sv: f64| head_rhs(thv.max(1e-12), flv, u_at(sv), grad, nu);
                let k1 = f(th, flux, s_a);
                let k2 = f(th + 0.5 * ds * k1.0, flux + 0.5 * ds * k1.1, s_a + 0.5 * ds);
                let k3 = f(th + 0.5 * ds * k2.0, flux + 0.5 * ds * k2.1, s_a + 0.5 * ds);
                let k4 = f(th + ds * k3.0, flux + ds * k3.1, s_a + ds);
                th += ds / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                flux += ds / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
                let u_end = u_at(s_a + ds);
                h = head_h(flux / (u_end * th.max(1e-12)));
                if !(th > 0.0) || !h.is_finite() || h >= config.h_sep {
                    // locate H = h_sep linearly inside the substep
                    let frac = if h.is_finite() && h > h_before {
                        ((config.h_sep - h_before) / (h - h_before)).clamp(0.0, 1.0)
                    } else {
                        1.0
                    };
                    let s_sep = s_a + frac * ds;
                    let tx = ((s_sep - s[j - 1]) / (s[j] - s[j - 1])).clamp(0.0, 1.0);
                    x_sep = interp(x_c[j - 1], x_c[j], tx);
                    end_theta = interp(th0, th.max(th0), frac);
                    end_h = config.h_sep;
                    end_ue = u_at(s_sep);
                    last = j - 1;
                    separated = true;
                    break 'march;
                }
            }
            seg_start = sb;
            theta[j] = th;
            shape[j] = h;
            turbulent[j] = true;
        }
        if !separated {
            end_theta = th;
            end_h = h;
            end_ue = ue[n - 1];
        }
    }

    let keep = last + 1;
    let delta_star = (0..keep).map(|k| theta[k] * shape[k]).collect();
    Ok(SurfaceBoundaryLayer {
        surface,
        s: s[..keep].to_vec(),
        x_c: x_c[..keep].to_vec(),
        ue: ue[..keep].to_vec(),
        theta: theta[..keep].to_vec(),
        delta_star,
        shape_factor: shape[..keep].to_vec(),
        turbulent: turbulent[..keep].to_vec(),
        x_tr: x_tr.min(x_sep),
        x_sep,
        laminar_separation,
        end_theta,
        end_shape_factor: end_h,
        end_ue,
    })
}

/// Split a Cp distribution at its stagnation point and march both surfaces.
pub fn boundary_layer_march(
    cp: &CpDistribution,
    case: &CaseSpec,
    config: &ClosureConfig,
) -> Result<BoundaryLayerState> {
    let samples = &cp.samples;
    if samples.len() < 6 {
        return Err(Error::invalid(format!(
            "boundary-layer march needs a Cp distribution, got {} samples",
            samples.len()
        )));
    }
    let mut arc = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    arc.push(0.0);
    for w in samples.windows(2) {
        acc += (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
        arc.push(acc);
    }
    let k = (0..samples.len() - 1)
        .find(|&k| samples[k].tangential < 0.0 && samples[k + 1].tangential >= 0.0)
        .ok_or_else(|| Error::Solver("no stagnation point found".into()))?;
    let (t0, t1) = (samples[k].tangential, samples[k + 1].tangential);
    let s_stag = arc[k] + (arc[k + 1] - arc[k]) * (-t0) / (t1 - t0);
    let x_stag = samples[k].x + (samples[k + 1].x - samples[k].x) * (-t0) / (t1 - t0);

    let chord = case.chord;
    let u = case.u_inf;
    let nu = case.solver_nu();
    let origin = MarchStation {
        s: 0.0,
        x_c: x_stag,
        ue: 0.0,
    };

    let upper_st: Vec<MarchStation> = std::iter::once(origin)
        .chain((0..=k).rev().map(|i| MarchStation {
            s: (s_stag - arc[i]) * chord,
            x_c: samples[i].x,
            ue: -samples[i].tangential * u,
        }))
        .collect();
    let lower_st: Vec<MarchStation> = std::iter::once(origin)
        .chain((k + 1..samples.len()).map(|i| MarchStation {
            s: (arc[i] - s_stag) * chord,
            x_c: samples[i].x,
            ue: samples[i].tangential * u,
        }))
        .collect();
    Ok(BoundaryLayerState {
        upper: march_surface(Surface::Upper, &upper_st, nu, config)?,
        lower: march_surface(Surface::Lower, &lower_st, nu, config)?,
    })
}
