//! Reference solutions written independently of the library.
#![allow(dead_code)]

use std::f64::consts::PI;

use tubercle_core::postproc::{FieldSlice, Plane};

/// NACA 4-digit half-thickness from the textbook polynomial, closed trailing
/// edge variant (last coefficient -0.1036).
pub fn naca_half_thickness(t: f64, x: f64) -> f64 {
    5.0 * t * (0.2969 * x.sqrt() - 0.1260 * x - 0.3516 * x * x + 0.2843 * x.powi(3) - 0.1036 * x.powi(4))
}

/// Blasius solution by shooting on f''(0): returns (eta, f') samples.
pub fn blasius_profile() -> Vec<(f64, f64)> {
    let integrate = |fpp0: f64, keep: bool| -> (f64, Vec<(f64, f64)>) {
        // f''' + 0.5 f f'' = 0, explicit midpoint with a small step
        let h = 1e-4;
        let (mut f, mut fp, mut fpp) = (0.0, 0.0, fpp0);
        let mut out = Vec::new();
        let mut eta = 0.0;
        while eta < 12.0 {
            if keep {
                out.push((eta, fp));
            }
            let d = |f: f64, fp: f64, fpp: f64| (fp, fpp, -0.5 * f * fpp);
            let (a1, b1, c1) = d(f, fp, fpp);
            let (a2, b2, c2) = d(f + 0.5 * h * a1, fp + 0.5 * h * b1, fpp + 0.5 * h * c1);
            f += h * a2;
            fp += h * b2;
            fpp += h * c2;
            eta += h;
        }
        (fp, out)
    };
    let (mut lo, mut hi) = (0.1, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if integrate(mid, false).0 > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    integrate(0.5 * (lo + hi), true).1
}

/// η where f' first reaches `level`.
pub fn blasius_eta(level: f64) -> f64 {
    let p = blasius_profile();
    for w in p.windows(2) {
        if w[1].1 >= level {
            let t = (level - w[0].1) / (w[1].1 - w[0].1);
            return w[0].0 + t * (w[1].0 - w[0].0);
        }
    }
    f64::NAN
}

/// Velocity (v, w) induced at (y, z) by a Lamb-Oseen vortex of circulation
/// `g` and core radius `rc` centred at (y0, z0).
pub fn lamb_oseen_vw(g: f64, rc: f64, y0: f64, z0: f64, y: f64, z: f64) -> (f64, f64) {
    let (dy, dz) = (y - y0, z - z0);
    let r2 = dy * dy + dz * dz;
    if r2 == 0.0 {
        return (0.0, 0.0);
    }
    let ut = g / (2.0 * PI * r2) * (1.0 - (-r2 / (rc * rc)).exp());
    (-ut * dz, ut * dy)
}

/// Counter-rotating pair (+g at z = -s/2, -g at z = +s/2) on an n x n
/// chordwise slice centred at (0, 0).
pub fn lamb_oseen_pair_slice(g: f64, rc: f64, s: f64, half_width: f64, n: usize) -> FieldSlice {
    let ax: Vec<f64> = (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect();
    FieldSlice::from_fn(Plane::ChordwiseX(0.3), ax.clone(), ax, 1.0, |y, z| {
        let (v1, w1) = lamb_oseen_vw(g, rc, 0.0, -0.5 * s, y, z);
        let (v2, w2) = lamb_oseen_vw(-g, rc, 0.0, 0.5 * s, y, z);
        [1.0, v1 + v2, w1 + w2]
    })
    .unwrap()
}

/// Periodic lifting-line downwash by principal-value quadrature:
/// w(z) = (1/4λ) ∫ Γ'(ζ) cot(π(z-ζ)/λ) dζ, evaluated with the midpoint rule
/// on 2m points symmetric about z after subtracting Γ'(z).
pub fn pv_downwash(dgamma: &dyn Fn(f64) -> f64, lambda: f64, z: f64, m: usize) -> f64 {
    let h = lambda / (2 * m) as f64;
    let g0 = dgamma(z);
    let mut sum = 0.0;
    for k in 0..2 * m {
        // midpoints never hit the singularity at u = 0
        let u = -0.5 * lambda + (k as f64 + 0.5) * h;
        let cot = 1.0 / (PI * u / lambda).tan();
        sum += (dgamma(z - u) - g0) * cot * h;
    }
    sum / (4.0 * lambda)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
