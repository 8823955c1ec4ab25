use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::AirfoilProfile;

pub const MIN_PANELS: usize = 40;

/// Straight-panel approximation of a profile loop.
///
/// Nodes follow the profile orientation (TE → upper → LE → lower → TE), so
/// panels `0..le_node` lie on the upper surface and the rest on the lower.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDiscretization {
    pub nodes: Vec<[f64; 2]>,
    pub collocation: Vec<[f64; 2]>,
    pub lengths: Vec<f64>,
    /// Tangent angle of each panel, radians.
    pub angles: Vec<f64>,
    /// Index of the leading-edge node.
    pub le_node: usize,
}

impl PanelDiscretization {
    pub fn n_panels(&self) -> usize {
        self.lengths.len()
    }

    pub fn tangent(&self, j: usize) -> [f64; 2] {
        [self.angles[j].cos(), self.angles[j].sin()]
    }

    /// Outward unit normal (right of the counter-clockwise tangent).
    pub fn normal(&self, j: usize) -> [f64; 2] {
        let t = self.tangent(j);
        [t[1], -t[0]]
    }

    pub fn perimeter(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Sum of signed turning angles between consecutive panels, wrapping
    /// through the trailing edge.
    pub fn total_turning(&self) -> f64 {
        let n = self.angles.len();
        (0..n)
            .map(|j| {
                let mut d = self.angles[(j + 1) % n] - self.angles[j];
                while d > PI {
                    d -= 2.0 * PI;
                }
                while d <= -PI {
                    d += 2.0 * PI;
                }
                d
            })
            .sum()
    }

    pub fn is_upper(&self, j: usize) -> bool {
        j < self.le_node
    }
}

/// Natural cubic spline through `(t_i, v_i)`.
struct Spline {
    t: Vec<f64>,
    v: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    fn new(t: Vec<f64>, v: Vec<f64>) -> Self {
        let n = t.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior second derivatives
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = t[i] - t[i - 1];
                let h1 = t[i + 1] - t[i];
                let a = h0 / 6.0;
                let b = (h0 + h1) / 3.0;
                let cc = h1 / 6.0;
                let rhs = (v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0;
                let denom = b - a * c[i - 1];
                c[i] = cc / denom;
                d[i] = (rhs - a * d[i - 1]) / denom;
            }
            for i in (1..n - 1).rev() {
                m[i] = d[i] - c[i] * m[i + 1];
            }
        }
        Spline { t, v, m }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        let k = match self.t.partition_point(|&ti| ti <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.t[k + 1] - self.t[k];
        let a = (self.t[k + 1] - x) / h;
        let b = (x - self.t[k]) / h;
        a * self.v[k]
            + b * self.v[k + 1]
            + ((a * a * a - a) * self.m[k] + (b * b * b - b) * self.m[k + 1]) * h * h / 6.0
    }
}

/// Resample one surface, given from the leading edge to the trailing edge,
/// at `m + 1` cosine-clustered arc-length stations.
fn resample_surface(pts: &[[f64; 2]], m: usize) -> Vec<[f64; 2]> {
    let mut s = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    s.push(0.0);
    for w in pts.windows(2) {
        acc += (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        s.push(acc);
    }
    let sx = Spline::new(s.clone(), pts.iter().map(|p| p[0]).collect());
    let sy = Spline::new(s, pts.iter().map(|p| p[1]).collect());
    (0..=m)
        .map(|k| {
            if k == 0 {
                return pts[0];
            }
            if k == m {
                return pts[pts.len() - 1];
            }
            let u = 0.5 * (1.0 - (PI * k as f64 / m as f64).cos()) * acc;
            [sx.eval(u), sy.eval(u)]
        })
        .collect()
}

/// Make sure the loop has a node at its minimum abscissa, inserting one from
/// a loop spline when the leading edge falls between two input points.
fn with_leading_edge_node(points: &[[f64; 2]]) -> Result<(Vec<[f64; 2]>, usize)> {
    let le = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1[0].total_cmp(&b.1[0]))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if le == 0 || le == points.len() - 1 {
        return Err(Error::Geometry("leading edge at loop end".into()));
    }
    let mut s = vec![0.0];
    for w in points.windows(2) {
        let last = s[s.len() - 1];
        s.push(last + (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]));
    }
    let sx = Spline::new(s.clone(), points.iter().map(|p| p[0]).collect());
    let sy = Spline::new(s.clone(), points.iter().map(|p| p[1]).collect());
    // golden-section search for min x(s) around the lowest node
    let (mut a, mut b) = (s[le - 1], s[le + 1]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if sx.eval(c) < sx.eval(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let s_le = 0.5 * (a + b);
    let x_le = sx.eval(s_le);
    let mut out = points.to_vec();
    if x_le < points[le][0] - 1e-12 {
        let at = if s_le < s[le] { le } else { le + 1 };
        out.insert(at, [x_le, sy.eval(s_le)]);
        Ok((out, at))
    } else {
        Ok((out, le))
    }
}

/// Cosine-clustered panelling of a profile with `n_panels` panels
/// (`n_panels / 2` per surface). Trailing-edge nodes coincide with the
/// profile trailing edge.
pub fn discretize_panels(profile: &AirfoilProfile, n_panels: usize) -> Result<PanelDiscretization> {
    if n_panels < MIN_PANELS || !n_panels.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "n_panels must be even and at least {MIN_PANELS}, got {n_panels}"
        )));
    }
    if profile.len() < 5 {
        return Err(Error::Geometry("profile has too few points".into()));
    }
    if profile.self_intersects() {
        return Err(Error::Geometry(format!("profile `{}` self-intersects", profile.name)));
    }
    let (points, le) = with_leading_edge_node(&profile.points)?;
    let m = n_panels / 2;
    let mut upper: Vec<[f64; 2]> = points[..=le].to_vec();
    upper.reverse();
    let lower: Vec<[f64; 2]> = points[le..].to_vec();
    let mut up = resample_surface(&upper, m);
    let lo = resample_surface(&lower, m);
    up.reverse();
    let mut nodes = up;
    nodes.extend_from_slice(&lo[1..]);

    let n = nodes.len() - 1;
    let mut collocation = Vec::with_capacity(n);
    let mut lengths = Vec::with_capacity(n);
    let mut angles = Vec::with_capacity(n);
    for w in nodes.windows(2) {
        let (dx, dy) = (w[1][0] - w[0][0], w[1][1] - w[0][1]);
        let len = dx.hypot(dy);
        if !(len > 0.0) {
            return Err(Error::Geometry("zero-length panel".into()));
        }
        collocation.push([0.5 * (w[0][0] + w[1][0]), 0.5 * (w[0][1] + w[1][1])]);
        lengths.push(len);
        angles.push(dy.atan2(dx));
    }
    Ok(PanelDiscretization {
        nodes,
        collocation,
        lengths,
        angles,
        le_node: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::naca4_coordinates;

    #[test]
    fn counts_and_turning() {
        let p = naca4_coordinates("0009", 161, true).unwrap();
        let d = discretize_panels(&p, 100).unwrap();
        assert_eq!(d.n_panels(), 100);
        assert_eq!(d.nodes[0], d.nodes[100]);
        assert!((d.total_turning() - 2.0 * PI).abs() < 1e-6);
        assert!(d.lengths.iter().all(|&l| l > 0.0));
        assert_eq!(d.nodes[50], [0.0, 0.0]);
    }

    #[test]
    fn perimeter_close_to_dense_polyline() {
        let fine = naca4_coordinates("0009", 4001, true).unwrap();
        let d = discretize_panels(&naca4_coordinates("0009", 161, true).unwrap(), 100).unwrap();
        let rel = (d.perimeter() - fine.perimeter()).abs() / fine.perimeter();
        assert!(rel < 0.005, "rel = {rel}");
    }

    #[test]
    fn too_few_panels() {
        let p = naca4_coordinates("0009", 161, true).unwrap();
        assert!(discretize_panels(&p, 10).is_err());
        assert!(discretize_panels(&p, 41).is_err());
    }

    #[test]
    fn symmetric_nodes_mirror() {
        let p = naca4_coordinates("0009", 161, true).unwrap();
        let d = discretize_panels(&p, 80).unwrap();
        let n = d.nodes.len() - 1;
        for i in 0..=n {
            let (a, b) = (d.nodes[i], d.nodes[n - i]);
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] + b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn leading_edge_inserted_between_nodes() {
        let p = naca4_coordinates("0009", 160, true).unwrap();
        let d = discretize_panels(&p, 80).unwrap();
        let le = d.nodes[d.le_node];
        assert!(le[0] < p.points[79][0]);
        assert!(le[1].abs() < 1e-4, "{le:?}");
    }

    #[test]
    fn spline_reproduces_cubic() {
        let t: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let v: Vec<f64> = t.iter().map(|x| 2.0 * x + 1.0).collect();
        let s = Spline::new(t, v);
        assert!((s.eval(0.55) - 2.1).abs() < 1e-12);
    }
}
