//! Synthetic flows with known answers, used by the validation suite.

use std::f64::consts::PI;

use crate::error::Result;
use crate::postproc::{FieldSlice, Plane};

/// Wall shear `f''(0)` of the Blasius solution `f''' + ½ f f'' = 0`.
pub const BLASIUS_WALL_SHEAR: f64 = 0.332_057_336;

/// Tabulated Blasius solution `(η, f')` on `[0, eta_max]`, RK4 with step `h`.
pub fn blasius_table(eta_max: f64, h: f64) -> Vec<(f64, f64)> {
    let rhs = |s: [f64; 3]| [s[1], s[2], -0.5 * s[0] * s[2]];
    let mut s = [0.0, 0.0, BLASIUS_WALL_SHEAR];
    let n = (eta_max / h).ceil() as usize;
    let mut out = Vec::with_capacity(n + 1);
    out.push((0.0, 0.0));
    for i in 0..n {
        let add = |a: [f64; 3], k: [f64; 3], t: f64| [a[0] + t * k[0], a[1] + t * k[1], a[2] + t * k[2]];
        let k1 = rhs(s);
        let k2 = rhs(add(s, k1, 0.5 * h));
        let k3 = rhs(add(s, k2, 0.5 * h));
        let k4 = rhs(add(s, k3, h));
        for j in 0..3 {
            s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        out.push(((i + 1) as f64 * h, s[1]));
    }
    out
}

/// `η` where `f'` first reaches `level`.
pub fn blasius_eta_at(level: f64) -> f64 {
    let t = blasius_table(12.0, 1e-3);
    for w in t.windows(2) {
        if w[1].1 >= level {
            let f = (level - w[0].1) / (w[1].1 - w[0].1);
            return w[0].0 + f * (w[1].0 - w[0].0);
        }
    }
    f64::NAN
}

/// Flat-plate Blasius layer on a `z = 0` slice: plate along `y = 0` from
/// `x = 0`, `u = U·f'(y·√(U/(νx)))`.
pub fn blasius_slice(u_inf: f64, nu: f64, x_max: f64, y_max: f64, nx: usize, ny: usize) -> Result<FieldSlice> {
    let table = blasius_table(15.0, 1e-3);
    let fp = |eta: f64| {
        if eta >= 15.0 {
            return 1.0;
        }
        let k = (eta / 1e-3) as usize;
        let t = eta / 1e-3 - k as f64;
        table[k].1 + t * (table[k + 1].1 - table[k].1)
    };
    let xs: Vec<f64> = (1..=nx).map(|i| x_max * i as f64 / nx as f64).collect();
    let ys: Vec<f64> = (0..ny).map(|j| y_max * j as f64 / (ny - 1) as f64).collect();
    FieldSlice::from_fn(Plane::SectionZ(0.0), xs, ys, u_inf, |x, y| {
        [u_inf * fp(y * (u_inf / (nu * x)).sqrt()), 0.0, 0.0]
    })
}

/// Velocity `(v, w)` induced in the (y, z) plane by a Lamb–Oseen vortex.
pub fn lamb_oseen(gamma: f64, core: f64, y0: f64, z0: f64, y: f64, z: f64) -> (f64, f64) {
    let (dy, dz) = (y - y0, z - z0);
    let r2 = dy * dy + dz * dz;
    if r2 == 0.0 {
        return (0.0, 0.0);
    }
    let ut_over_r = gamma / (2.0 * PI * r2) * (1.0 - (-r2 / (core * core)).exp());
    (-ut_over_r * dz, ut_over_r * dy)
}

/// Chordwise slice holding a `+Γ` and a `−Γ` Lamb–Oseen vortex at
/// `(y0, ±separation/2)`.
pub fn lamb_oseen_pair(gamma: f64, core: f64, separation: f64, n: usize) -> Result<FieldSlice> {
    let half = 0.5 * separation;
    let extent = half + 6.0 * core;
    let y0 = 6.0 * core;
    let ys: Vec<f64> = (0..n).map(|i| 2.0 * y0 * i as f64 / (n - 1) as f64).collect();
    let zs: Vec<f64> = (0..n)
        .map(|i| -extent + 2.0 * extent * i as f64 / (n - 1) as f64)
        .collect();
    FieldSlice::from_fn(Plane::ChordwiseX(0.5), ys, zs, 1.0, |y, z| {
        let (v1, w1) = lamb_oseen(gamma, core, y0, -half, y, z);
        let (v2, w2) = lamb_oseen(-gamma, core, y0, half, y, z);
        [1.0, v1 + v2, w1 + w2]
    })
}

/// Periodic downwash by principal-value quadrature of the cotangent kernel,
/// `w(z) = (1/4λ)·∫ (Γ'(ζ) − Γ'(z))·cot(π(z − ζ)/λ) dζ` over one period,
/// with `m` trapezoid nodes offset from the singular point.
pub fn pv_periodic_downwash(
    dgamma: &dyn Fn(f64) -> f64,
    d2gamma: &dyn Fn(f64) -> f64,
    lambda: f64,
    z: f64,
    m: usize,
) -> f64 {
    let h = lambda / m as f64;
    let g = dgamma(z);
    let mut sum = 0.0;
    for j in 0..m {
        let u = j as f64 * h; // ζ = z − u
        let term = if j == 0 {
            // limit (Γ'(z − u) − Γ'(z))·cot(πu/λ) → −Γ''(z)·λ/π
            -d2gamma(z) * lambda / PI
        } else {
            (dgamma(z - u) - g) / (PI * u / lambda).tan()
        };
        sum += term * h;
    }
    sum / (4.0 * lambda)
}
