use super::field::{trapezoid_weights, FieldSlice, Plane};
use crate::error::{Error, Result};

pub const DEFAULT_CORE_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexSettings {
    /// Core threshold as a fraction of the slice's peak |ω_x|.
    pub core_fraction: f64,
    /// Largest centroid separation of a counter-rotating pair (m).
    pub pairing_radius: f64,
}

impl VortexSettings {
    /// Defaults for protuberance wavelength `pitch_m`: radius `0.5·λ`.
    pub fn for_pitch(pitch_m: f64) -> Self {
        VortexSettings {
            core_fraction: DEFAULT_CORE_FRACTION,
            pairing_radius: 0.5 * pitch_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexCore {
    pub centroid_y: f64,
    pub centroid_z: f64,
    pub peak_omega: f64,
    pub sign: i8,
    /// Signed area integral of ω_x over the core's basin (m²/s).
    pub circulation: f64,
    pub n_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexPairReport {
    pub x: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub cores: Vec<VortexCore>,
    /// Index pairs into `cores` (positive core first).
    pub pairs: Vec<(usize, usize)>,
}

impl VortexPairReport {
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// One row per core; `pair` is the partner's index or empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_m,core,y_m,z_m,peak_omega_x,sign,circulation_m2ps,nodes,pair\n");
        for (k, c) in self.cores.iter().enumerate() {
            let partner = self
                .pairs
                .iter()
                .find_map(|&(a, b)| {
                    if a == k {
                        Some(b)
                    } else if b == k {
                        Some(a)
                    } else {
                        None
                    }
                })
                .map_or(String::new(), |p| p.to_string());
            out.push_str(&format!(
                "{:.8e},{k},{:.8e},{:.8e},{:.8e},{},{:.8e},{},{partner}\n",
                self.x, c.centroid_y, c.centroid_z, c.peak_omega, c.sign, c.circulation, c.n_nodes
            ));
        }
        out
    }
}

/// Three-point derivative on a non-uniform grid, one-sided at the ends.
fn derivative(a: &[f64], f: impl Fn(usize) -> f64, i: usize) -> f64 {
    let n = a.len();
    if n == 2 {
        return (f(1) - f(0)) / (a[1] - a[0]);
    }
    let (k0, k1, k2) = if i == 0 {
        (0, 1, 2)
    } else if i == n - 1 {
        (n - 3, n - 2, n - 1)
    } else {
        (i - 1, i, i + 1)
    };
    // derivative of the quadratic through three points, evaluated at a[i]
    let (x0, x1, x2, x) = (a[k0], a[k1], a[k2], a[i]);
    let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
    l0 * f(k0) + l1 * f(k1) + l2 * f(k2)
}

/// `ω_x = ∂w/∂y − ∂v/∂z` at every node of a chordwise slice.
pub fn omega_x(slice: &FieldSlice) -> Result<Vec<f64>> {
    if !matches!(slice.plane, Plane::ChordwiseX(_)) {
        return Err(Error::invalid("x-vorticity needs a chordwise (x = const) slice"));
    }
    let (n1, n2) = (slice.n1(), slice.n2());
    if n1 < 3 || n2 < 3 {
        return Err(Error::invalid(format!("slice grid {n1}x{n2} is smaller than 3x3")));
    }
    let mut om = vec![0.0; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            let dw_dy = derivative(&slice.axis1, |k| slice.w[slice.idx(k, j)], i);
            let dv_dz = derivative(&slice.axis2, |k| slice.v[slice.idx(i, k)], j);
            om[slice.idx(i, j)] = dw_dy - dv_dz;
        }
    }
    Ok(om)
}

/// Vortex cores and counter-rotating pairs on one chordwise slice.
pub fn vorticity_slice(slice: &FieldSlice, settings: &VortexSettings) -> Result<VortexPairReport> {
    if !(settings.core_fraction > 0.0 && settings.core_fraction < 1.0) {
        return Err(Error::invalid("core fraction must be in (0, 1)"));
    }
    let om = omega_x(slice)?;
    let (n1, n2) = (slice.n1(), slice.n2());
    let x = match slice.plane {
        Plane::ChordwiseX(x) => x,
        Plane::SectionZ(_) => unreachable!(),
    };
    let omega_min = om.iter().copied().fold(f64::INFINITY, f64::min);
    let omega_max = om.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let peak = omega_min.abs().max(omega_max);
    // below this the field is rounding noise of an irrotational flow
    let span1 = slice.axis1[n1 - 1] - slice.axis1[0];
    let span2 = slice.axis2[n2 - 1] - slice.axis2[0];
    let noise = 1e-9 * slice.u_ref.abs().max(1.0) / span1.min(span2);
    let mut report = VortexPairReport {
        x,
        omega_min,
        omega_max,
        cores: Vec::new(),
        pairs: Vec::new(),
    };
    if peak <= noise {
        return Ok(report);
    }
    let cut = settings.core_fraction * peak;
    let mut label = vec![usize::MAX; n1 * n2];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for start in 0..n1 * n2 {
        if label[start] != usize::MAX || om[start].abs() < cut {
            continue;
        }
        let sign = om[start] > 0.0;
        let id = members.len();
        let mut stack = vec![start];
        let mut nodes = Vec::new();
        label[start] = id;
        while let Some(k) = stack.pop() {
            nodes.push(k);
            let (i, j) = (k / n2, k % n2);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(k - n2);
            }
            if i + 1 < n1 {
                nb.push(k + n2);
            }
            if j > 0 {
                nb.push(k - 1);
            }
            if j + 1 < n2 {
                nb.push(k + 1);
            }
            for q in nb {
                if label[q] == usize::MAX && om[q].abs() >= cut && (om[q] > 0.0) == sign {
                    label[q] = id;
                    stack.push(q);
                }
            }
        }
        nodes.sort_unstable();
        members.push(nodes);
    }
    let wy = trapezoid_weights(&slice.axis1);
    let wz = trapezoid_weights(&slice.axis2);
    for nodes in &members {
        let (mut sw, mut sy, mut sz) = (0.0, 0.0, 0.0);
        let mut pk = 0.0f64;
        for &k in nodes {
            let (i, j) = (k / n2, k % n2);
            let m = om[k].abs() * wy[i] * wz[j];
            sw += m;
            sy += m * slice.axis1[i];
            sz += m * slice.axis2[j];
            if om[k].abs() > pk.abs() {
                pk = om[k];
            }
        }
        report.cores.push(VortexCore {
            centroid_y: sy / sw,
            centroid_z: sz / sw,
            peak_omega: pk,
            sign: if pk > 0.0 { 1 } else { -1 },
            circulation: 0.0,
            n_nodes: nodes.len(),
        });
    }
    // circulation: each node joins the nearest core of matching sign
    for k in 0..n1 * n2 {
        if om[k] == 0.0 {
            continue;
        }
        let (i, j) = (k / n2, k % n2);
        let (y, z) = (slice.axis1[i], slice.axis2[j]);
        let sign = if om[k] > 0.0 { 1 } else { -1 };
        let nearest = report
            .cores
            .iter()
            .enumerate()
            .filter(|(_, c)| c.sign == sign)
            .map(|(c_id, c)| (c_id, (c.centroid_y - y).powi(2) + (c.centroid_z - z).powi(2)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((c_id, _)) = nearest {
            report.cores[c_id].circulation += om[k] * wy[i] * wz[j];
        }
    }
    // greedy pairing by distance
    let mut cand = Vec::new();
    for (a, ca) in report.cores.iter().enumerate() {
        for (b, cb) in report.cores.iter().enumerate() {
            if ca.sign > 0 && cb.sign < 0 {
                let d = ((ca.centroid_y - cb.centroid_y).powi(2) + (ca.centroid_z - cb.centroid_z).powi(2)).sqrt();
                if d <= settings.pairing_radius {
                    cand.push((d, a, b));
                }
            }
        }
    }
    cand.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used = vec![false; report.cores.len()];
    for (_, a, b) in cand {
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            report.pairs.push((a, b));
        }
    }
    Ok(report)
}
