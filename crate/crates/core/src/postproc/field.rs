use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

pub const FIELD_HEADER: [&str; 6] = ["x_m", "y_m", "z_m", "u_mps", "v_mps", "w_mps"];

/// Orientation of a planar slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plane {
    /// `x = const`; grid axes are (y, z).
    ChordwiseX(f64),
    /// `z = const`; grid axes are (x, y).
    SectionZ(f64),
}

/// Velocity (and optionally pressure) on a structured rectilinear slice.
///
/// Node `(i, j)` sits at `(axis1[i], axis2[j])` and is stored at `i·n2 + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSlice {
    pub plane: Plane,
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub p: Option<Vec<f64>>,
    /// Freestream speed used to normalise thresholds.
    pub u_ref: f64,
    /// Fluid density; enables flux weighting when present.
    pub rho: Option<f64>,
}

impl FieldSlice {
    pub fn n1(&self) -> usize {
        self.axis1.len()
    }

    pub fn n2(&self) -> usize {
        self.axis2.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.u.len()
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.axis2.len() + j
    }

    /// Build a slice from per-node closures; used for synthetic fields.
    pub fn from_fn(
        plane: Plane,
        axis1: Vec<f64>,
        axis2: Vec<f64>,
        u_ref: f64,
        f: impl Fn(f64, f64) -> [f64; 3],
    ) -> Result<Self> {
        check_axis(&axis1, "first")?;
        check_axis(&axis2, "second")?;
        let mut u = Vec::with_capacity(axis1.len() * axis2.len());
        let mut v = Vec::with_capacity(u.capacity());
        let mut w = Vec::with_capacity(u.capacity());
        for a in &axis1 {
            for b in &axis2 {
                let [uu, vv, ww] = f(*a, *b);
                u.push(uu);
                v.push(vv);
                w.push(ww);
            }
        }
        Ok(FieldSlice {
            plane,
            axis1,
            axis2,
            u,
            v,
            w,
            p: None,
            u_ref,
            rho: None,
        })
    }

    /// Node coordinates `(x, y, z)`.
    pub fn position(&self, i: usize, j: usize) -> [f64; 3] {
        match self.plane {
            Plane::ChordwiseX(x) => [x, self.axis1[i], self.axis2[j]],
            Plane::SectionZ(z) => [self.axis1[i], self.axis2[j], z],
        }
    }

    /// Serialize with the ingestion schema, 9 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = FIELD_HEADER.join(",");
        if self.p.is_some() {
            out.push_str(",p_pa");
        }
        out.push('\n');
        for i in 0..self.n1() {
            for j in 0..self.n2() {
                let k = self.idx(i, j);
                let [x, y, z] = self.position(i, j);
                out.push_str(&format!(
                    "{x:.8e},{y:.8e},{z:.8e},{:.8e},{:.8e},{:.8e}",
                    self.u[k], self.v[k], self.w[k]
                ));
                if let Some(p) = &self.p {
                    out.push_str(&format!(",{:.8e}", p[k]));
                }
                out.push('\n');
            }
        }
        out
    }
}

fn check_axis(a: &[f64], which: &str) -> Result<()> {
    if a.len() < 2 {
        return Err(Error::invalid(format!("{which} grid axis needs >= 2 points")));
    }
    if a.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(format!("{which} grid axis is not strictly increasing")));
    }
    Ok(())
}

/// Read a slice CSV (`x_m,y_m,z_m,u_mps,v_mps,w_mps[,p_pa]`).
pub fn ingest_field_slice(path: &Path, u_ref: f64) -> Result<FieldSlice> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_field_slice(&text, &path.display().to_string(), u_ref)
}

/// Parse slice CSV text. Rows may come in any order; the plane is the
/// coordinate that is constant over all rows.
pub fn parse_field_slice(text: &str, label: &str, u_ref: f64) -> Result<FieldSlice> {
    let schema = |message: String| Error::Schema {
        path: label.into(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let has_p = match headers.len() {
        6 => false,
        7 if headers[6] == "p_pa" => true,
        _ => {
            return Err(schema(format!(
                "expected columns {FIELD_HEADER:?}[, p_pa], got {headers:?}"
            )))
        }
    };
    if headers[..6] != FIELD_HEADER {
        return Err(schema(format!(
            "expected columns {FIELD_HEADER:?}[, p_pa], got {headers:?}"
        )));
    }
    let mut rows: Vec<[f64; 7]> = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = r + 2;
        if rec.len() != headers.len() {
            return Err(schema(format!(
                "line {line}: expected {} cells, got {}",
                headers.len(),
                rec.len()
            )));
        }
        let mut row = [0.0; 7];
        for (c, cell) in rec.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| schema(format!("line {line}, column {}: not a number: {cell:?}", headers[c])))?;
            if !v.is_finite() {
                return Err(schema(format!(
                    "line {line}, column {}: non-finite value {cell}",
                    headers[c]
                )));
            }
            row[c] = v;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(schema("no data rows".into()));
    }
    let constant = |c: usize| {
        let first = rows[0][c];
        let scale = rows
            .iter()
            .map(|r| r[0].abs().max(r[1].abs()).max(r[2].abs()))
            .fold(1e-30, f64::max);
        rows.iter().all(|r| (r[c] - first).abs() <= 1e-12 * scale)
    };
    let (plane, c1, c2) = if constant(0) {
        (Plane::ChordwiseX(rows[0][0]), 1, 2)
    } else if constant(2) {
        (Plane::SectionZ(rows[0][2]), 0, 1)
    } else {
        return Err(schema("neither x nor z is constant; not a planar slice".into()));
    };
    // exact coordinate values identify grid lines (`+ 0.0` folds −0 into 0)
    let mut a1: BTreeMap<i64, f64> = BTreeMap::new();
    let mut a2: BTreeMap<i64, f64> = BTreeMap::new();
    for r in &rows {
        a1.insert(key_order(r[c1] + 0.0), r[c1] + 0.0);
        a2.insert(key_order(r[c2] + 0.0), r[c2] + 0.0);
    }
    let axis1: Vec<f64> = a1.values().copied().collect();
    let axis2: Vec<f64> = a2.values().copied().collect();
    if axis1.len() < 2 || axis2.len() < 2 {
        return Err(schema("slice must have >= 2 distinct values on each axis".into()));
    }
    if axis1.len() * axis2.len() != rows.len() {
        return Err(schema(format!(
            "{} rows do not form a rectilinear {}x{} grid",
            rows.len(),
            axis1.len(),
            axis2.len()
        )));
    }
    let n2 = axis2.len();
    let n = rows.len();
    let mut filled = vec![false; n];
    let (mut u, mut v, mut w) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut p = if has_p { Some(vec![0.0; n]) } else { None };
    for r in &rows {
        let i = axis1.partition_point(|&a| a < r[c1] + 0.0);
        let j = axis2.partition_point(|&a| a < r[c2] + 0.0);
        let k = i * n2 + j;
        if filled[k] {
            return Err(schema(format!("duplicate node at ({}, {}, {})", r[0], r[1], r[2])));
        }
        filled[k] = true;
        u[k] = r[3];
        v[k] = r[4];
        w[k] = r[5];
        if let Some(p) = p.as_mut() {
            p[k] = r[6];
        }
    }
    Ok(FieldSlice {
        plane,
        axis1,
        axis2,
        u,
        v,
        w,
        p,
        u_ref,
        rho: None,
    })
}

/// Total order on finite floats that matches numeric order.
fn key_order(v: f64) -> i64 {
    let b = v.to_bits() as i64;
    if b < 0 {
        !(b & i64::MAX)
    } else {
        b
    }
}

/// Trapezoid integration weights of a 1-D grid.
pub fn trapezoid_weights(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { a[i] - a[i - 1] } else { 0.0 };
            let right = if i + 1 < n { a[i + 1] - a[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FieldSlice {
        let ys: Vec<f64> = (0..5).map(|i| i as f64 * 0.1).collect();
        let zs: Vec<f64> = (0..4).map(|i| -0.2 + i as f64 * 0.15).collect();
        FieldSlice::from_fn(Plane::ChordwiseX(0.3), ys, zs, 1.0, |y, z| [1.0 + y, y * z, -z]).unwrap()
    }

    #[test]
    fn round_trip_and_shuffle() {
        let s = sample();
        let text = s.to_csv();
        let a = parse_field_slice(&text, "a", 1.0).unwrap();
        assert_eq!(a.n_nodes(), 20);
        assert_eq!(a.plane, Plane::ChordwiseX(0.3));
        let mut lines: Vec<&str> = text.lines().collect();
        let header = lines.remove(0);
        lines.reverse();
        lines.swap(2, 11);
        let shuffled = format!("{header}\n{}\n", lines.join("\n"));
        let b = parse_field_slice(&shuffled, "b", 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nan_cell_named() {
        let text = sample().to_csv();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let mut cells: Vec<String> = lines[4].split(',').map(str::to_string).collect();
        cells[4] = "NaN".into();
        lines[4] = cells.join(",");
        let err = parse_field_slice(&lines.join("\n"), "f.csv", 1.0)
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 5") && err.contains("v_mps"), "{err}");
    }

    #[test]
    fn schema_errors() {
        assert!(parse_field_slice("a,b,c\n1,2,3\n", "x", 1.0).is_err());
        let text = sample().to_csv();
        let mut lines: Vec<&str> = text.lines().collect();
        lines.pop();
        assert!(parse_field_slice(&lines.join("\n"), "x", 1.0).is_err());
        let dup = format!("{text}{}\n", text.lines().nth(1).unwrap());
        assert!(parse_field_slice(&dup, "x", 1.0).is_err());
    }

    #[test]
    fn negative_coordinates_order() {
        let mut v = vec![-3.0, 2.0, -0.5, 0.0, -0.0001, 7.0];
        v.sort_by_key(|x| key_order(*x));
        assert_eq!(v, vec![-3.0, -0.5, -0.0001, 0.0, 2.0, 7.0]);
    }
}
