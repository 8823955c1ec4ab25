use super::inviscid::{CpDistribution, Surface};
use crate::error::{Error, Result};

pub const MIN_SAMPLES_PER_SURFACE: usize = 10;

/// Pressure lift and drag coefficients from a surface Cp distribution.
///
/// Trapezoidal integration of `-Cp·n ds` around the closed sample loop
/// (x and y projections), rotated into wind axes by the distribution's
/// angle of attack. Samples must be in loop order with strictly monotone
/// abscissae on each surface.
pub fn integrate_cp_loads(cp: &CpDistribution) -> Result<(f64, f64)> {
    let upper: Vec<_> = cp.surface(Surface::Upper).collect();
    let lower: Vec<_> = cp.surface(Surface::Lower).collect();
    if upper.len() < MIN_SAMPLES_PER_SURFACE || lower.len() < MIN_SAMPLES_PER_SURFACE {
        return Err(Error::invalid(format!(
            "need at least {MIN_SAMPLES_PER_SURFACE} samples per surface (upper {}, lower {})",
            upper.len(),
            lower.len()
        )));
    }
    if upper.windows(2).any(|w| !(w[1].x < w[0].x)) {
        return Err(Error::invalid(
            "upper-surface abscissae must strictly decrease in loop order",
        ));
    }
    if lower.windows(2).any(|w| !(w[1].x > w[0].x)) {
        return Err(Error::invalid(
            "lower-surface abscissae must strictly increase in loop order",
        ));
    }
    let loop_pts: Vec<_> = upper.iter().chain(lower.iter()).collect();
    let n = loop_pts.len();
    let (mut fx, mut fy) = (0.0, 0.0);
    for k in 0..n {
        let a = loop_pts[k];
        let b = loop_pts[(k + 1) % n];
        let cp_avg = 0.5 * (a.cp + b.cp);
        fx -= cp_avg * (b.y - a.y);
        fy += cp_avg * (b.x - a.x);
    }
    let alpha = cp.alpha_deg.to_radians();
    let cl = fy * alpha.cos() - fx * alpha.sin();
    let cd = fx * alpha.cos() + fy * alpha.sin();
    Ok((cl, cd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel2d::inviscid::CpSample;

    fn sample(x: f64, surface: Surface, cp: f64) -> CpSample {
        CpSample {
            x,
            y: 0.0,
            surface,
            cp,
            ue_ratio: 1.0,
            tangential: 1.0,
        }
    }

    fn flat(n: usize, alpha_deg: f64, cp_u: impl Fn(f64) -> f64, cp_l: impl Fn(f64) -> f64) -> CpDistribution {
        let xs: Vec<f64> = (1..=n)
            .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * (i as f64 - 0.5) / n as f64).cos()))
            .collect();
        let mut samples: Vec<_> = xs.iter().rev().map(|&x| sample(x, Surface::Upper, cp_u(x))).collect();
        samples.extend(xs.iter().map(|&x| sample(x, Surface::Lower, cp_l(x))));
        CpDistribution { alpha_deg, samples }
    }

    #[test]
    fn constant_pressure_gives_no_load() {
        let cp = flat(40, 7.0, |_| 0.3, |_| 0.3);
        let (cl, cd) = integrate_cp_loads(&cp).unwrap();
        assert!(cl.abs() < 1e-14 && cd.abs() < 1e-14);
    }

    #[test]
    fn thin_airfoil_loading() {
        // ΔCp = 4α sqrt((1-x)/x) integrates to 2πα
        let alpha = 2f64.to_radians();
        let dcp = |x: f64| 4.0 * alpha * ((1.0 - x) / x).sqrt();
        let cp = flat(600, 0.0, |x| -0.5 * dcp(x), |x| 0.5 * dcp(x));
        let (cl, _) = integrate_cp_loads(&cp).unwrap();
        let exact = 2.0 * std::f64::consts::PI * alpha;
        assert!(((cl - exact) / exact).abs() < 0.01, "cl = {cl}, exact = {exact}");
    }

    #[test]
    fn unsorted_and_duplicate_rejected() {
        let mut cp = flat(20, 0.0, |_| 0.0, |_| 0.0);
        cp.samples.swap(3, 4);
        assert!(integrate_cp_loads(&cp).is_err());
        let mut cp = flat(20, 0.0, |_| 0.0, |_| 0.0);
        cp.samples[25].x = cp.samples[24].x;
        assert!(integrate_cp_loads(&cp).is_err());
        let cp = flat(5, 0.0, |_| 0.0, |_| 0.0);
        assert!(integrate_cp_loads(&cp).is_err());
    }
}
