//! Hess–Smith panel method: constant-strength source on every panel plus one
//! uniform vortex strength shared by all panels, closed by a Kutta condition
//! on the two trailing-edge panels.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::panels::PanelDiscretization;
use crate::error::{Error, Result};

pub const MAX_ALPHA_DEG: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Surface {
    Upper,
    Lower,
}

impl Surface {
    pub fn as_str(&self) -> &'static str {
        match self {
            Surface::Upper => "upper",
            Surface::Lower => "lower",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "upper" => Some(Surface::Upper),
            "lower" => Some(Surface::Lower),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpSample {
    pub x: f64,
    pub y: f64,
    pub surface: Surface,
    pub cp: f64,
    /// `|Ue| / U∞`.
    pub ue_ratio: f64,
    /// Signed tangential velocity along the loop direction, `/ U∞`.
    pub tangential: f64,
}

/// Surface pressure distribution, samples in loop order (upper surface from
/// the trailing edge to the leading edge, then lower surface back).
#[derive(Debug, Clone, PartialEq)]
pub struct CpDistribution {
    pub alpha_deg: f64,
    pub samples: Vec<CpSample>,
}

impl CpDistribution {
    pub fn surface(&self, surface: Surface) -> impl Iterator<Item = &CpSample> {
        self.samples.iter().filter(move |s| s.surface == surface)
    }

    pub fn max_cp(&self) -> f64 {
        self.samples.iter().map(|s| s.cp).fold(f64::MIN, f64::max)
    }

    /// `|Cp_upper(TE) - Cp_lower(TE)|` from the two trailing-edge samples.
    pub fn kutta_residual(&self) -> f64 {
        let first = self.samples.first().map_or(0.0, |s| s.cp);
        let last = self.samples.last().map_or(0.0, |s| s.cp);
        (first - last).abs()
    }

    /// Dump as CSV with columns `x_c, surface, cp, ue_ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_c,y_c,surface,cp,ue_ratio\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.x,
                s.y,
                s.surface.as_str(),
                s.cp,
                s.ue_ratio
            ));
        }
        out
    }

    /// Parse the CSV dump; rows may come in any order and are put back into
    /// loop order. Samples without a `y` get `y = 0`.
    pub fn from_csv(text: &str, alpha_deg: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| Error::Schema {
                path: "<cp csv>".into(),
                message: format!("missing column `{name}`"),
            })
        };
        let (ix, is, icp, iue) = (col("x_c")?, col("surface")?, col("cp")?, col("ue_ratio")?);
        let iy = headers.iter().position(|h| h == "y_c");
        let mut samples = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                let v: f64 = rec.get(i).unwrap_or("").parse().map_err(|_| Error::Schema {
                    path: "<cp csv>".into(),
                    message: format!("row {}: `{}` is not a number", row + 2, rec.get(i).unwrap_or("")),
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Schema {
                        path: "<cp csv>".into(),
                        message: format!("row {}: non-finite value", row + 2),
                    })
                }
            };
            let surface = Surface::parse(rec.get(is).unwrap_or("")).ok_or_else(|| Error::Schema {
                path: "<cp csv>".into(),
                message: format!("row {}: surface must be upper or lower", row + 2),
            })?;
            let ue = num(iue)?;
            samples.push(CpSample {
                x: num(ix)?,
                y: match iy {
                    Some(i) => num(i)?,
                    None => 0.0,
                },
                surface,
                cp: num(icp)?,
                ue_ratio: ue.abs(),
                tangential: match surface {
                    Surface::Upper => -ue.abs(),
                    Surface::Lower => ue.abs(),
                },
            });
        }
        let mut upper: Vec<CpSample> = samples
            .iter()
            .copied()
            .filter(|s| s.surface == Surface::Upper)
            .collect();
        let mut lower: Vec<CpSample> = samples.into_iter().filter(|s| s.surface == Surface::Lower).collect();
        upper.sort_by(|a, b| b.x.total_cmp(&a.x));
        lower.sort_by(|a, b| a.x.total_cmp(&b.x));
        upper.extend(lower);
        Ok(CpDistribution {
            alpha_deg,
            samples: upper,
        })
    }
}

/// Velocity at `p` induced by a unit-strength source sheet on panel `j`,
/// and by a unit counter-clockwise vortex sheet on the same panel.
fn panel_influence(panels: &PanelDiscretization, j: usize, p: [f64; 2], own: bool) -> ([f64; 2], [f64; 2]) {
    let a = panels.nodes[j];
    let b = panels.nodes[j + 1];
    let t = panels.tangent(j);
    let nl = [-t[1], t[0]];
    let (u_xi, u_eta) = if own {
        // collocation point approached from outside the body (right side)
        (0.0, -0.5)
    } else {
        let r1 = [a[0] - p[0], a[1] - p[1]];
        let r2 = [b[0] - p[0], b[1] - p[1]];
        let cross = r1[0] * r2[1] - r1[1] * r2[0];
        let dot = r1[0] * r2[0] + r1[1] * r2[1];
        let beta = cross.atan2(dot);
        let ln = 0.5 * ((r1[0] * r1[0] + r1[1] * r1[1]) / (r2[0] * r2[0] + r2[1] * r2[1])).ln();
        (ln / (2.0 * PI), beta / (2.0 * PI))
    };
    let src = [u_xi * t[0] + u_eta * nl[0], u_xi * t[1] + u_eta * nl[1]];
    let (v_xi, v_eta) = (-u_eta, u_xi);
    let vor = [v_xi * t[0] + v_eta * nl[0], v_xi * t[1] + v_eta * nl[1]];
    (src, vor)
}

/// Factorised influence system for one panelling; reusable across angles.
#[derive(Debug, Clone)]
pub struct InviscidSolver {
    panels: PanelDiscretization,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    /// Tangential velocity per unit strength, `N × (N + 1)`.
    tangential: DMatrix<f64>,
}

/// Converged panel strengths and the resulting pressure distribution.
#[derive(Debug, Clone)]
pub struct InviscidSolution {
    pub sources: Vec<f64>,
    pub gamma: f64,
    pub cp: CpDistribution,
}

impl InviscidSolution {
    /// Lift from the total circulation (Kutta–Joukowski), per unit chord.
    pub fn circulation_cl(&self, perimeter: f64) -> f64 {
        -2.0 * self.gamma * perimeter
    }
}

impl InviscidSolver {
    pub fn new(panels: &PanelDiscretization) -> Result<Self> {
        let n = panels.n_panels();
        let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
        let mut tangential = DMatrix::<f64>::zeros(n, n + 1);
        for i in 0..n {
            let p = panels.collocation[i];
            let nrm = panels.normal(i);
            let tan = panels.tangent(i);
            for j in 0..n {
                let (s, v) = panel_influence(panels, j, p, i == j);
                a[(i, j)] = s[0] * nrm[0] + s[1] * nrm[1];
                a[(i, n)] += v[0] * nrm[0] + v[1] * nrm[1];
                tangential[(i, j)] = s[0] * tan[0] + s[1] * tan[1];
                tangential[(i, n)] += v[0] * tan[0] + v[1] * tan[1];
            }
        }
        for j in 0..=n {
            a[(n, j)] = tangential[(0, j)] + tangential[(n - 1, j)];
        }
        let lu = a.clone().lu();
        let det_scale = a.abs().max();
        let singular = (0..=n).any(|k| lu.u()[(k, k)].abs() <= 1e-12 * det_scale);
        if singular || !lu.is_invertible() {
            return Err(Error::Solver("singular influence matrix".into()));
        }
        Ok(InviscidSolver {
            panels: panels.clone(),
            lu,
            tangential,
        })
    }

    pub fn panels(&self) -> &PanelDiscretization {
        &self.panels
    }

    pub fn solve(&self, alpha_deg: f64) -> Result<InviscidSolution> {
        if !(alpha_deg.abs() <= MAX_ALPHA_DEG) {
            return Err(Error::invalid(format!(
                "|alpha| must be at most {MAX_ALPHA_DEG} deg, got {alpha_deg}"
            )));
        }
        let n = self.panels.n_panels();
        let alpha = alpha_deg.to_radians();
        let vinf = [alpha.cos(), alpha.sin()];
        let mut rhs = DVector::<f64>::zeros(n + 1);
        for i in 0..n {
            let nrm = self.panels.normal(i);
            rhs[i] = -(vinf[0] * nrm[0] + vinf[1] * nrm[1]);
        }
        let t0 = self.panels.tangent(0);
        let tn = self.panels.tangent(n - 1);
        rhs[n] = -(vinf[0] * (t0[0] + tn[0]) + vinf[1] * (t0[1] + tn[1]));
        let sol = self
            .lu
            .solve(&rhs)
            .ok_or_else(|| Error::Solver("influence system could not be solved".into()))?;
        let vt = &self.tangential * &sol;
        let samples = (0..n)
            .map(|i| {
                let tan = self.panels.tangent(i);
                let v = vt[i] + vinf[0] * tan[0] + vinf[1] * tan[1];
                let c = self.panels.collocation[i];
                CpSample {
                    x: c[0],
                    y: c[1],
                    surface: if self.panels.is_upper(i) {
                        Surface::Upper
                    } else {
                        Surface::Lower
                    },
                    cp: 1.0 - v * v,
                    ue_ratio: v.abs(),
                    tangential: v,
                }
            })
            .collect();
        Ok(InviscidSolution {
            sources: sol.iter().take(n).copied().collect(),
            gamma: sol[n],
            cp: CpDistribution { alpha_deg, samples },
        })
    }
}

/// One-shot inviscid solve.
pub fn solve_inviscid(panels: &PanelDiscretization, alpha_deg: f64) -> Result<CpDistribution> {
    Ok(InviscidSolver::new(panels)?.solve(alpha_deg)?.cp)
}
