//! NACA 4-digit section generator and the closed coordinate loop every
//! solver in the crate consumes.

use crate::error::{Error, Result};

/// Closed 2D coordinate loop in chord fractions.
///
/// Points run trailing edge → upper surface → leading edge → lower surface →
/// trailing edge (counter-clockwise in the x-y plane).
#[derive(Debug, Clone, PartialEq)]
pub struct AirfoilProfile {
    pub name: String,
    pub points: Vec<[f64; 2]>,
    pub closed_te: bool,
}

/// Parsed digits of a NACA 4-digit designation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Naca4 {
    /// Maximum camber, chord fraction.
    pub camber: f64,
    /// Chordwise position of maximum camber, chord fraction.
    pub camber_pos: f64,
    /// Maximum thickness, chord fraction.
    pub thickness: f64,
}

impl Naca4 {
    pub fn parse(code: &str) -> Result<Self> {
        let code = code.trim();
        let code = code
            .strip_prefix("NACA")
            .or_else(|| code.strip_prefix("naca"))
            .unwrap_or(code)
            .trim();
        if code.len() != 4 || !code.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::invalid(format!("NACA code `{code}` is not four digits")));
        }
        let d: Vec<u32> = code.chars().filter_map(|c| c.to_digit(10)).collect();
        let camber = f64::from(d[0]) / 100.0;
        let camber_pos = f64::from(d[1]) / 10.0;
        let thickness = f64::from(d[2] * 10 + d[3]) / 100.0;
        if thickness == 0.0 {
            return Err(Error::invalid(format!("NACA code `{code}` has zero thickness")));
        }
        if camber > 0.0 && (camber_pos <= 0.0 || camber_pos >= 1.0) {
            return Err(Error::invalid(format!(
                "NACA code `{code}` has camber but no valid camber position"
            )));
        }
        Ok(Naca4 {
            camber,
            camber_pos,
            thickness,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.camber == 0.0
    }

    pub fn camber_line(&self, x: f64) -> f64 {
        let (m, p) = (self.camber, self.camber_pos);
        if m == 0.0 {
            0.0
        } else if x < p {
            m / (p * p) * (2.0 * p * x - x * x)
        } else {
            m / ((1.0 - p) * (1.0 - p)) * ((1.0 - 2.0 * p) + 2.0 * p * x - x * x)
        }
    }
}

/// Half-thickness of the 4-digit thickness polynomial at chord fraction `x`.
pub fn naca4_half_thickness(thickness: f64, x: f64, closed_te: bool) -> f64 {
    let k4 = if closed_te { 0.1036 } else { 0.1015 };
    5.0 * thickness * (0.2969 * x.sqrt() - 0.1260 * x - 0.3516 * x * x + 0.2843 * x.powi(3) - k4 * x.powi(4))
}

/// Cosine-spaced NACA 4-digit loop with `n_points` points.
///
/// Thickness is added normal to the chord line so every abscissa stays in
/// `[0, 1]`. Upper and lower points are generated in mirrored pairs, so a
/// symmetric code is exactly symmetric. An odd `n_points` places a node on the
/// leading edge.
pub fn naca4_coordinates(code: &str, n_points: usize, closed_te: bool) -> Result<AirfoilProfile> {
    let naca = Naca4::parse(code)?;
    if n_points < 20 {
        return Err(Error::invalid(format!("n_points must be at least 20, got {n_points}")));
    }
    let last = n_points - 1;
    let mut points = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let j = i.min(last - i);
        let beta = 2.0 * std::f64::consts::PI * j as f64 / last as f64;
        let x = if 2 * j == last { 0.0 } else { 0.5 * (1.0 + beta.cos()) };
        let yt = naca4_half_thickness(naca.thickness, x, closed_te);
        let yc = naca.camber_line(x);
        let y = if 2 * i == last {
            yc
        } else if 2 * i < last {
            yc + yt
        } else {
            yc - yt
        };
        points.push([x, y]);
    }
    if closed_te {
        let te = [1.0, naca.camber_line(1.0)];
        points[0] = te;
        points[last] = te;
    }
    Ok(AirfoilProfile {
        name: format!("NACA {}", code.trim()),
        points,
        closed_te,
    })
}

impl AirfoilProfile {
    /// Validating constructor for externally supplied loops.
    pub fn from_points(name: impl Into<String>, points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::Geometry("profile needs at least 4 points".into()));
        }
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::Geometry("profile has non-finite coordinates".into()));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        let closed_te = (first[0] - last[0]).abs() < 1e-12 && (first[1] - last[1]).abs() < 1e-12;
        let profile = AirfoilProfile {
            name: name.into(),
            points,
            closed_te,
        };
        if profile.self_intersects() {
            return Err(Error::Geometry("profile loop self-intersects".into()));
        }
        Ok(profile)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point with the smallest abscissa.
    pub fn leading_edge_index(&self) -> usize {
        self.points
            .iter()
            .enumerate()
            .min_by(|a, b| a.1[0].total_cmp(&b.1[0]))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Polyline length of the loop, including the trailing-edge gap when open.
    pub fn perimeter(&self) -> f64 {
        let mut len: f64 = self
            .points
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
            .sum();
        if !self.closed_te {
            let (a, b) = (self.points[0], self.points[self.points.len() - 1]);
            len += (a[0] - b[0]).hypot(a[1] - b[1]);
        }
        len
    }

    /// Largest `|y_u(x) + y_l(x)|` over mirrored point pairs.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.points.len();
        (0..n / 2)
            .map(|i| {
                let (u, l) = (self.points[i], self.points[n - 1 - i]);
                if (u[0] - l[0]).abs() > 1e-12 {
                    f64::INFINITY
                } else {
                    (u[1] + l[1]).abs()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Signed polygon area (positive for counter-clockwise loops).
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| {
                let a = self.points[i];
                let b = self.points[(i + 1) % n];
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            * 0.5
    }

    /// True when any two non-adjacent segments of the loop cross.
    pub fn self_intersects(&self) -> bool {
        let pts = self.unique_loop();
        let n = pts.len();
        if n < 4 {
            return false;
        }
        for i in 0..n {
            let (a1, a2) = (pts[i], pts[(i + 1) % n]);
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (b1, b2) = (pts[j], pts[(j + 1) % n]);
                if segments_cross(a1, a2, b1, b2) {
                    return true;
                }
            }
        }
        false
    }

    /// Loop without the duplicated closing point.
    pub fn unique_loop(&self) -> &[[f64; 2]] {
        if self.closed_te && self.points.len() > 1 {
            &self.points[..self.points.len() - 1]
        } else {
            &self.points
        }
    }
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(a1: [f64; 2], a2: [f64; 2], b1: [f64; 2], b2: [f64; 2]) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}
