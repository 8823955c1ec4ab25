use super::polar::{PointFlag, Provenance, SectionPolar};
use crate::error::{Error, Result};

/// Maximum drag coefficient for an infinite aspect ratio.
pub const DEFAULT_CD_MAX: f64 = 1.8;

/// Viterna–Corrigan `Cd_max` for a blade of aspect ratio `ar`, capped at
/// the infinite-span value.
pub fn cd_max_for_aspect_ratio(ar: Option<f64>) -> f64 {
    match ar {
        Some(ar) if ar.is_finite() && ar > 0.0 => (1.11 + 0.018 * ar).min(DEFAULT_CD_MAX),
        _ => DEFAULT_CD_MAX,
    }
}

#[derive(Debug, Clone, Copy)]
struct Coeffs {
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
}

impl Coeffs {
    fn fit(alpha_s_deg: f64, cl_s: f64, cd_s: f64, cd_max: f64) -> Self {
        let a = alpha_s_deg.to_radians();
        let (s, c) = a.sin_cos();
        Coeffs {
            a1: 0.5 * cd_max,
            a2: (cl_s - cd_max * s * c) * s / (c * c),
            b1: cd_max,
            b2: (cd_s - cd_max * s * s) / c,
        }
    }

    fn cl(&self, alpha_deg: f64) -> f64 {
        let a = alpha_deg.to_radians();
        let (s, c) = a.sin_cos();
        self.a1 * (2.0 * a).sin() + self.a2 * c * c / s
    }

    fn cd(&self, alpha_deg: f64) -> f64 {
        let a = alpha_deg.to_radians();
        let (s, c) = a.sin_cos();
        self.b1 * s * s + self.b2 * c
    }
}

/// Extend a computed polar to ±90° with the Viterna–Corrigan model.
///
/// The fit is anchored at each end of the computed range, so the extended
/// curve is continuous there. The polar must show a lift maximum.
pub fn viterna_extend(polar: &SectionPolar, aspect_ratio: Option<f64>) -> Result<SectionPolar> {
    viterna_extend_with(polar, cd_max_for_aspect_ratio(aspect_ratio))
}

pub fn viterna_extend_with(polar: &SectionPolar, cd_max: f64) -> Result<SectionPolar> {
    if polar.stall_alpha.is_none() {
        return Err(Error::invalid(
            "polar has no lift maximum inside its range; extend the angle range past stall",
        ));
    }
    let n = polar.alphas.len();
    let (a_lo, a_hi) = (polar.alphas[0], polar.alphas[n - 1]);
    if !(a_hi > 0.0 && a_hi < 90.0 && a_lo > -90.0) {
        return Err(Error::invalid("polar range must lie inside (-90, 90) degrees"));
    }
    let hi = Coeffs::fit(a_hi, polar.cl[n - 1], polar.cd[n - 1], cd_max);

    let mut alphas = Vec::new();
    let mut cl = Vec::new();
    let mut cd = Vec::new();
    let mut flags = Vec::new();

    if a_lo < 0.0 {
        let lo = Coeffs::fit(a_lo, polar.cl[0], polar.cd[0], cd_max);
        let mut a = -90.0;
        while a < a_lo - 0.5 {
            alphas.push(a);
            cl.push(lo.cl(a));
            cd.push(lo.cd(a));
            flags.push(PointFlag::Extrapolated);
            a += 1.0;
        }
    }
    alphas.extend_from_slice(&polar.alphas);
    cl.extend_from_slice(&polar.cl);
    cd.extend_from_slice(&polar.cd);
    flags.extend_from_slice(&polar.flags);
    let mut a = (a_hi + 0.5).ceil();
    while a <= 90.0 {
        alphas.push(a);
        cl.push(hi.cl(a));
        cd.push(hi.cd(a));
        flags.push(PointFlag::Extrapolated);
        a += 1.0;
    }
    let mut out = SectionPolar::new(polar.reynolds, alphas, cl, cd, flags, Provenance::ViternaExtended)?;
    out.stall_alpha = polar.stall_alpha;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_polar() -> SectionPolar {
        let alphas: Vec<f64> = (-20..=20).map(|a| a as f64).collect();
        let cl: Vec<f64> = alphas
            .iter()
            .map(|&a: &f64| {
                let s = a.signum();
                let m = a.abs();
                s * if m <= 10.0 { 0.1 * m } else { 1.0 - 0.04 * (m - 10.0) }
            })
            .collect();
        let cd: Vec<f64> = alphas.iter().map(|a| 0.01 + 0.0004 * a * a).collect();
        let n = alphas.len();
        SectionPolar::new(5e4, alphas, cl, cd, vec![PointFlag::Ok; n], Provenance::Computed).unwrap()
    }

    #[test]
    fn continuous_at_stitch_and_flat_plate_at_90() {
        let p = toy_polar();
        let e = viterna_extend(&p, None).unwrap();
        assert_eq!(e.alphas[0], -90.0);
        assert_eq!(*e.alphas.last().unwrap(), 90.0);
        let hi = Coeffs::fit(20.0, 0.6, p.cd_at(20.0), DEFAULT_CD_MAX);
        assert!((hi.cl(20.0) - 0.6).abs() < 1e-12);
        assert!((hi.cd(20.0) - p.cd_at(20.0)).abs() < 1e-12);
        assert!(e.cl_at(90.0).abs() < 1e-12);
        assert!((e.cd_at(90.0) - DEFAULT_CD_MAX).abs() < 1e-12);
        // odd/even symmetry of a symmetric input
        for a in [25.0, 40.0, 70.0] {
            assert!((e.cl_at(a) + e.cl_at(-a)).abs() < 1e-12);
            assert!((e.cd_at(a) - e.cd_at(-a)).abs() < 1e-12);
        }
        assert_eq!(e.stall_alpha, Some(10.0));
    }

    #[test]
    fn no_maximum_is_an_error() {
        let alphas: Vec<f64> = (0..=8).map(|a| a as f64).collect();
        let cl: Vec<f64> = alphas.iter().map(|a| 0.1 * a).collect();
        let p = SectionPolar::new(
            5e4,
            alphas,
            cl,
            vec![0.01; 9],
            vec![PointFlag::Ok; 9],
            Provenance::Computed,
        )
        .unwrap();
        assert!(viterna_extend(&p, None).is_err());
    }

    #[test]
    fn aspect_ratio_cd_max() {
        assert!((cd_max_for_aspect_ratio(Some(10.0)) - 1.29).abs() < 1e-12);
        assert_eq!(cd_max_for_aspect_ratio(None), DEFAULT_CD_MAX);
        assert_eq!(cd_max_for_aspect_ratio(Some(1e6)), DEFAULT_CD_MAX);
    }
}
