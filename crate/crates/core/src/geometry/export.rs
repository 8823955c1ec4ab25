//! Surface export: lofted STL (ASCII or binary) and per-station CSV loops.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::wing::WingGeometry;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceFormat {
    StlAscii,
    StlBinary,
    CsvSections,
}

pub type Triangle = [[f64; 3]; 3];

/// Watertight triangulation of the wing: side skin lofted between stations
/// plus a cap at both span ends.
pub fn triangulate(wing: &WingGeometry) -> Result<Vec<Triangle>> {
    if wing.stations.len() < 2 {
        return Err(Error::Geometry(format!(
            "surface export needs at least 2 stations, wing has {}",
            wing.stations.len()
        )));
    }
    let closed = wing.base_profile.closed_te;
    let loops: Vec<Vec<[f64; 3]>> = wing
        .stations
        .iter()
        .map(|s| {
            let pts = if closed {
                &s.points_m[..s.points_m.len() - 1]
            } else {
                &s.points_m[..]
            };
            pts.iter().map(|p| [p[0], p[1], s.z]).collect()
        })
        .collect();
    // closed loops wrap through the shared TE node; open loops gain a TE-gap face
    let n = loops[0].len();
    let mut tris = Vec::new();
    for k in 0..loops.len() - 1 {
        let (lo, hi) = (&loops[k], &loops[k + 1]);
        for i in 0..n {
            let j = (i + 1) % n;
            tris.push([lo[i], lo[j], hi[j]]);
            tris.push([lo[i], hi[j], hi[i]]);
        }
    }
    let cap = ear_clip(&loops[0].iter().map(|p| [p[0], p[1]]).collect::<Vec<_>>())?;
    let z0 = wing.stations[0].z;
    let z1 = wing.stations[wing.stations.len() - 1].z;
    let first = &loops[0];
    let last = &loops[loops.len() - 1];
    for [a, b, c] in cap {
        // root cap faces -z, tip cap faces +z
        tris.push([with_z(first[a], z0), with_z(first[c], z0), with_z(first[b], z0)]);
        tris.push([with_z(last[a], z1), with_z(last[b], z1), with_z(last[c], z1)]);
    }

    let scale = wing.mean_chord.max(wing.span);
    let min_area = 1e-18 * scale * scale;
    if let Some(t) = tris.iter().find(|t| triangle_area(t) <= min_area) {
        return Err(Error::Geometry(format!(
            "degenerate triangle at ({:.6}, {:.6}, {:.6})",
            t[0][0], t[0][1], t[0][2]
        )));
    }
    Ok(tris)
}

fn with_z(p: [f64; 3], z: f64) -> [f64; 3] {
    [p[0], p[1], z]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn triangle_normal(t: &Triangle) -> [f64; 3] {
    let n = cross(sub(t[1], t[0]), sub(t[2], t[0]));
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if len == 0.0 {
        [0.0; 3]
    } else {
        [n[0] / len, n[1] / len, n[2] / len]
    }
}

pub fn triangle_area(t: &Triangle) -> f64 {
    let n = cross(sub(t[1], t[0]), sub(t[2], t[0]));
    0.5 * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn inside(p: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
/// Returns index triples with counter-clockwise orientation.
fn ear_clip(poly: &[[f64; 2]]) -> Result<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::with_capacity(poly.len().saturating_sub(2));
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&k| {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            if orient(a, b, c) <= 0.0 {
                return false;
            }
            idx.iter()
                .filter(|&&j| j != ia && j != ib && j != ic)
                .all(|&j| !inside(poly[j], a, b, c))
        });
        let Some(k) = ear else {
            return Err(Error::Geometry("end cap could not be triangulated".into()));
        };
        out.push([idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]]);
        idx.remove(k);
    }
    if idx.len() == 3 {
        out.push([idx[0], idx[1], idx[2]]);
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

pub fn export_surface(wing: &WingGeometry, format: SurfaceFormat, path: &Path) -> Result<()> {
    match format {
        SurfaceFormat::StlAscii => write_stl_ascii(&triangulate(wing)?, &wing.base_profile.name, path),
        SurfaceFormat::StlBinary => write_stl_binary(&triangulate(wing)?, path),
        SurfaceFormat::CsvSections => write_sections_csv(wing, path),
    }
}

pub fn write_stl_ascii(tris: &[Triangle], name: &str, path: &Path) -> Result<()> {
    let name = name.replace(char::is_whitespace, "_");
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "solid {name}").map_err(io)?;
    for t in tris {
        let n = triangle_normal(t);
        writeln!(w, "  facet normal {:e} {:e} {:e}", n[0], n[1], n[2]).map_err(io)?;
        writeln!(w, "    outer loop").map_err(io)?;
        for v in t {
            writeln!(w, "      vertex {:e} {:e} {:e}", v[0], v[1], v[2]).map_err(io)?;
        }
        writeln!(w, "    endloop").map_err(io)?;
        writeln!(w, "  endfacet").map_err(io)?;
    }
    writeln!(w, "endsolid {name}").map_err(io)?;
    w.flush().map_err(io)
}

pub fn write_stl_binary(tris: &[Triangle], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    let mut header = [0u8; 80];
    let tag = b"tubercle wing surface";
    header[..tag.len()].copy_from_slice(tag);
    w.write_all(&header).map_err(io)?;
    w.write_all(&(tris.len() as u32).to_le_bytes()).map_err(io)?;
    for t in tris {
        let n = triangle_normal(t);
        for c in n.iter().chain(t.iter().flatten()) {
            w.write_all(&(*c as f32).to_le_bytes()).map_err(io)?;
        }
        w.write_all(&0u16.to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Columns: `station_index, z_m, kind, x_m, y_m`.
pub fn write_sections_csv(wing: &WingGeometry, path: &Path) -> Result<()> {
    if wing.stations.len() < 2 {
        return Err(Error::Geometry("surface export needs at least 2 stations".into()));
    }
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "station_index,z_m,kind,x_m,y_m").map_err(io)?;
    for (k, s) in wing.stations.iter().enumerate() {
        for p in &s.points_m {
            writeln!(w, "{k},{},{},{},{}", s.z, s.kind.as_str(), p[0], p[1]).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}
