use super::field::{trapezoid_weights, FieldSlice, Plane};
use crate::error::{Error, Result};

pub const DEFAULT_BLT_THRESHOLD: f64 = 0.99;
/// Sampling window above the surface, in chords.
pub const BLT_WINDOW_CHORDS: f64 = 2.0;
pub const MIN_BLT_SAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BltOutcome {
    Attained(f64),
    /// Threshold not reached inside the window; carries the largest
    /// velocity seen there.
    NotAttained {
        window_max: f64,
    },
}

impl BltOutcome {
    pub fn delta(&self) -> Option<f64> {
        match self {
            BltOutcome::Attained(d) => Some(*d),
            BltOutcome::NotAttained { .. } => None,
        }
    }
}

/// Wall distance where `u` first reaches `threshold·u_ref`, linearly
/// interpolated, searching only samples within `window` of the wall.
pub fn blt_extract(distance: &[f64], u: &[f64], u_ref: f64, threshold: f64, window: f64) -> Result<BltOutcome> {
    let n = distance.len();
    if n < MIN_BLT_SAMPLES || u.len() != n {
        return Err(Error::invalid(format!(
            "profile needs >= {MIN_BLT_SAMPLES} paired samples, got {n}/{}",
            u.len()
        )));
    }
    if distance[0] != 0.0 {
        return Err(Error::invalid("first sample must lie on the wall (distance 0)"));
    }
    if distance.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("wall distances must be strictly increasing"));
    }
    if !(u_ref > 0.0) || !(threshold > 0.0) {
        return Err(Error::invalid("reference velocity and threshold must be positive"));
    }
    let target = threshold * u_ref;
    let mut window_max = f64::NEG_INFINITY;
    for i in 0..n {
        if distance[i] > window {
            break;
        }
        window_max = window_max.max(u[i]);
        if u[i] >= target {
            if i == 0 {
                return Ok(BltOutcome::Attained(0.0));
            }
            let t = (target - u[i - 1]) / (u[i] - u[i - 1]);
            return Ok(BltOutcome::Attained(
                distance[i - 1] + t * (distance[i] - distance[i - 1]),
            ));
        }
    }
    Ok(BltOutcome::NotAttained { window_max })
}

/// How a chordwise slice is collapsed into a single wall-normal profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BltMode {
    /// Flux-weighted spanwise mean `Σρu·u·dA / Σρu·dA` (needs density).
    MassWeighted,
    /// Spanwise mean `Σu·dA / ΣdA`.
    AreaWeighted,
    /// Profile at the spanwise centre of the slice.
    Pointwise,
}

impl BltMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BltMode::MassWeighted => "mass_weighted",
            BltMode::AreaWeighted => "area_weighted",
            BltMode::Pointwise => "pointwise",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mass" | "mass_weighted" => Some(BltMode::MassWeighted),
            "area" | "area_weighted" => Some(BltMode::AreaWeighted),
            "pointwise" => Some(BltMode::Pointwise),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BltSettings {
    pub threshold: f64,
    pub mode: BltMode,
    /// Chordwise stations as fractions of chord.
    pub station_step: f64,
}

impl Default for BltSettings {
    fn default() -> Self {
        BltSettings {
            threshold: DEFAULT_BLT_THRESHOLD,
            mode: BltMode::MassWeighted,
            station_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BltRow {
    pub x_c: f64,
    pub outcome: BltOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BltReport {
    pub requested_mode: BltMode,
    /// Mode actually applied (mass weighting falls back to area weighting
    /// without density).
    pub mode: BltMode,
    pub threshold: f64,
    pub rows: Vec<BltRow>,
    /// Stations with no data.
    pub uncovered: Vec<f64>,
}

impl BltReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_c,delta_m,attained,window_max_mps,mode,threshold\n");
        for r in &self.rows {
            let (d, ok, wm) = match r.outcome {
                BltOutcome::Attained(d) => (format!("{d:.8e}"), true, String::new()),
                BltOutcome::NotAttained { window_max } => (String::new(), false, format!("{window_max:.8e}")),
            };
            out.push_str(&format!(
                "{:.8e},{d},{ok},{wm},{},{:.8e}\n",
                r.x_c,
                self.mode.as_str(),
                self.threshold
            ));
        }
        out
    }
}

/// Wall-normal profile `(distance, u)` at chordwise position `x` from the
/// slices, or `None` when no slice covers `x`.
fn profile_at(slices: &[FieldSlice], x: f64, tol: f64, wall_y: f64, mode: BltMode) -> Option<(Vec<f64>, Vec<f64>)> {
    for s in slices {
        match s.plane {
            Plane::ChordwiseX(xs) if (xs - x).abs() <= tol => {
                // axes (y, z): collapse z
                let wz = trapezoid_weights(&s.axis2);
                let jc = s.axis2.len() / 2;
                let mut d = Vec::new();
                let mut u = Vec::new();
                for i in 0..s.n1() {
                    if s.axis1[i] < wall_y - 1e-12 {
                        continue;
                    }
                    let row = (0..s.n2()).map(|j| (s.u[s.idx(i, j)], wz[j]));
                    let val = match mode {
                        BltMode::Pointwise => s.u[s.idx(i, jc)],
                        BltMode::AreaWeighted => row.map(|(v, w)| v * w).sum::<f64>() / wz.iter().sum::<f64>(),
                        BltMode::MassWeighted => {
                            let rho = s.rho.unwrap_or(1.0);
                            let (num, den) =
                                row.fold((0.0, 0.0), |(a, b), (v, w)| (a + rho * v * v * w, b + rho * v * w));
                            if den.abs() > 0.0 {
                                num / den
                            } else {
                                0.0
                            }
                        }
                    };
                    d.push((s.axis1[i] - wall_y).max(0.0));
                    u.push(val);
                }
                return Some((d, u));
            }
            Plane::SectionZ(_) if x >= s.axis1[0] - tol && x <= s.axis1[s.n1() - 1] + tol => {
                // axes (x, y): interpolate a column
                let xc = x.clamp(s.axis1[0], s.axis1[s.n1() - 1]);
                let k = (s.axis1.partition_point(|&a| a <= xc)).clamp(1, s.n1() - 1) - 1;
                let t = (xc - s.axis1[k]) / (s.axis1[k + 1] - s.axis1[k]);
                let mut d = Vec::new();
                let mut u = Vec::new();
                for j in 0..s.n2() {
                    if s.axis2[j] < wall_y - 1e-12 {
                        continue;
                    }
                    let a = s.u[s.idx(k, j)];
                    let b = s.u[s.idx(k + 1, j)];
                    d.push((s.axis2[j] - wall_y).max(0.0));
                    u.push(a + t * (b - a));
                }
                return Some((d, u));
            }
            _ => {}
        }
    }
    None
}

/// δ at every `station_step` of chord (10 %, 20 %, …, 100 %).
///
/// `x_le` is the leading-edge position and `wall_y(x)` the surface height
/// the wall distance is measured from.
pub fn blt_along_chord(
    slices: &[FieldSlice],
    x_le: f64,
    chord: f64,
    wall_y: &dyn Fn(f64) -> f64,
    settings: &BltSettings,
) -> Result<BltReport> {
    if slices.is_empty() {
        return Err(Error::invalid("no slices supplied"));
    }
    if !(chord > 0.0) || !(settings.station_step > 0.0 && settings.station_step <= 1.0) {
        return Err(Error::invalid("chord and station step must be positive"));
    }
    let any_density = slices.iter().all(|s| s.rho.is_some());
    let mode = match settings.mode {
        BltMode::MassWeighted if !any_density => BltMode::AreaWeighted,
        m => m,
    };
    let n = (1.0 / settings.station_step + 1e-9).floor() as usize;
    let tol = 5e-3 * chord;
    let mut rows = Vec::new();
    let mut uncovered = Vec::new();
    for k in 1..=n {
        let x_c = k as f64 * settings.station_step;
        let x = x_le + x_c * chord;
        let wy = wall_y(x);
        match profile_at(slices, x, tol, wy, mode) {
            Some((d, u)) if d.len() >= MIN_BLT_SAMPLES && d[0] == 0.0 => {
                let outcome = blt_extract(&d, &u, slices[0].u_ref, settings.threshold, BLT_WINDOW_CHORDS * chord)?;
                rows.push(BltRow { x_c, outcome });
            }
            _ => uncovered.push(x_c),
        }
    }
    if rows.len() < 2 {
        return Err(Error::invalid(format!(
            "slices cover {} of the chordwise stations; need at least 2",
            rows.len()
        )));
    }
    Ok(BltReport {
        requested_mode: settings.mode,
        mode,
        threshold: settings.threshold,
        rows,
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_profile_at_wall() {
        let d = [0.0, 0.1, 0.2, 0.3, 0.4];
        let r = blt_extract(&d, &[2.0; 5], 2.0, 0.99, 1.0).unwrap();
        assert_eq!(r, BltOutcome::Attained(0.0));
    }

    #[test]
    fn linear_profile() {
        let h = 0.02;
        let d: Vec<f64> = (0..=20).map(|i| i as f64 * h / 10.0).collect();
        let u: Vec<f64> = d.iter().map(|y| (y / h).min(1.0) * 3.0).collect();
        let r = blt_extract(&d, &u, 3.0, 0.99, 1.0).unwrap().delta().unwrap();
        assert!((r - 0.99 * h).abs() < 1e-12);
        let lower = blt_extract(&d, &u, 3.0, 0.95, 1.0).unwrap().delta().unwrap();
        assert!(lower <= r);
    }

    #[test]
    fn not_attained_reports_window_max() {
        let d = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let u = [0.0, 0.5, 0.6, 0.7, 0.8, 1.0];
        assert_eq!(
            blt_extract(&d, &u, 1.0, 0.99, 2.5).unwrap(),
            BltOutcome::NotAttained { window_max: 0.6 }
        );
    }

    #[test]
    fn bad_profiles() {
        assert!(blt_extract(&[0.0, 1.0, 2.0], &[0.0, 1.0, 1.0], 1.0, 0.99, 9.0).is_err());
        assert!(blt_extract(&[0.1, 1.0, 2.0, 3.0, 4.0], &[0.0; 5], 1.0, 0.99, 9.0).is_err());
        assert!(blt_extract(&[0.0, 1.0, 1.0, 3.0, 4.0], &[0.0; 5], 1.0, 0.99, 9.0).is_err());
    }

    #[test]
    fn too_few_stations() {
        let xs = vec![0.0, 0.05];
        let ys: Vec<f64> = (0..10).map(|i| i as f64 * 0.01).collect();
        let s = FieldSlice::from_fn(Plane::SectionZ(0.0), xs, ys, 1.0, |_, _| [1.0, 0.0, 0.0]).unwrap();
        assert!(blt_along_chord(&[s], 0.0, 1.0, &|_| 0.0, &BltSettings::default()).is_err());
    }
}
