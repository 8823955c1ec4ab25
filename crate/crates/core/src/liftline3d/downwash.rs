use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};

/// Minimum station count for the finite-span operator.
pub const MIN_FINITE_STATIONS: usize = 20;

const SPACING_TOL: f64 = 1e-9;

/// Number of whole wavelengths covered by uniformly spaced stations `z`
/// (the station one period after `z[0]` is implied, not listed).
pub fn periodic_wavelengths(z: &[f64], pitch: f64) -> Result<usize> {
    let n = z.len();
    if n < 4 {
        return Err(Error::invalid(format!(
            "periodic downwash needs >= 4 stations, got {n}"
        )));
    }
    if !(pitch > 0.0) {
        return Err(Error::invalid("pitch must be positive"));
    }
    let h = (z[n - 1] - z[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::invalid("stations must be increasing"));
    }
    for (i, zi) in z.iter().enumerate() {
        if (zi - (z[0] + i as f64 * h)).abs() > SPACING_TOL * pitch.max(h * n as f64) {
            return Err(Error::invalid(format!("non-uniform station spacing at index {i}")));
        }
    }
    let periods = n as f64 * h / pitch;
    let k = periods.round();
    if k < 1.0 || (periods - k).abs() > 1e-6 {
        return Err(Error::invalid(format!(
            "stations span {periods:.6} wavelengths; need a whole number >= 1"
        )));
    }
    Ok(k as usize)
}

/// Downwash of a spanwise-periodic trailing sheet.
///
/// Each Fourier mode of Γ with wavenumber k induces `|k|/4` times its
/// amplitude; the mean mode induces nothing. Positive `w` is downwash.
pub fn downwash_periodic(gamma: &[f64], z: &[f64], pitch: f64) -> Result<Vec<f64>> {
    if gamma.len() != z.len() {
        return Err(Error::invalid("gamma and station arrays differ in length"));
    }
    periodic_wavelengths(z, pitch)?;
    let n = z.len();
    let period = n as f64 * (z[n - 1] - z[0]) / (n - 1) as f64;
    let g0 = gamma[0];
    let mut buf: Vec<Complex<f64>> = gamma.iter().map(|&g| Complex::new(g - g0, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (m, c) in buf.iter_mut().enumerate() {
        let mode = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
        let k = 2.0 * PI * mode.abs() / period;
        *c *= k / 4.0 / n as f64;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(buf.iter().map(|c| c.re).collect())
}

/// Cosine-spaced stations on a span `b` centred at zero:
/// `z_i = −(b/2)·cos(iπ/(N+1))`, `i = 1..=N`.
pub fn cosine_stations(n: usize, span: f64) -> Vec<f64> {
    (1..=n)
        .map(|i| -0.5 * span * (i as f64 * PI / (n + 1) as f64).cos())
        .collect()
}

/// Downwash of a finite wing, `w(z) = (1/4π)·PV∫ Γ'(ζ)/(z − ζ) dζ`,
/// evaluated exactly for the sine series interpolating Γ at cosine stations.
pub fn downwash_finite(gamma: &[f64], z: &[f64], span: f64) -> Result<Vec<f64>> {
    let n = z.len();
    if n < MIN_FINITE_STATIONS {
        return Err(Error::invalid(format!(
            "finite-span downwash needs >= {MIN_FINITE_STATIONS} stations, got {n}"
        )));
    }
    if gamma.len() != n {
        return Err(Error::invalid("gamma and station arrays differ in length"));
    }
    if !(span > 0.0) {
        return Err(Error::invalid("span must be positive"));
    }
    let expected = cosine_stations(n, span);
    if let Some(i) = (0..n).find(|&i| (z[i] - expected[i]).abs() > SPACING_TOL * span) {
        return Err(Error::invalid(format!("station {i} is not on the cosine grid")));
    }
    let theta: Vec<f64> = (1..=n).map(|i| i as f64 * PI / (n + 1) as f64).collect();
    let scale = 2.0 / (n + 1) as f64;
    let coeffs: Vec<f64> = (1..=n)
        .map(|m| {
            scale
                * gamma
                    .iter()
                    .zip(&theta)
                    .map(|(g, t)| g * (m as f64 * t).sin())
                    .sum::<f64>()
        })
        .collect();
    Ok(theta
        .iter()
        .map(|t| {
            let s: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, g)| (k + 1) as f64 * g * ((k + 1) as f64 * t).sin())
                .sum();
            s / (2.0 * span * t.sin())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, length: f64) -> Vec<f64> {
        (0..n).map(|i| i as f64 * length / n as f64).collect()
    }

    #[test]
    fn constant_gamma_gives_zero() {
        let z = grid(64, 0.5);
        let w = downwash_periodic(&vec![3.7; 64], &z, 0.25).unwrap();
        assert!(w.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cosine_mode_multiplier() {
        let lambda = 0.25;
        let z = grid(64, lambda);
        let g: Vec<f64> = z.iter().map(|z| (2.0 * PI * z / lambda).cos()).collect();
        let w = downwash_periodic(&g, &z, lambda).unwrap();
        for (wi, zi) in w.iter().zip(&z) {
            assert!((wi - 2.0 * PI * (2.0 * PI * zi / lambda).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let mut z = grid(32, 0.25);
        z[5] += 1e-4;
        assert!(downwash_periodic(&vec![0.0; 32], &z, 0.25).is_err());
        let z = grid(32, 0.3);
        assert!(downwash_periodic(&vec![0.0; 32], &z, 0.25).is_err());
        let z = cosine_stations(10, 1.0);
        assert!(downwash_finite(&[0.0; 10], &z, 1.0).is_err());
        let z = grid(30, 1.0);
        assert!(downwash_finite(&vec![0.0; 30], &z, 1.0).is_err());
    }

    #[test]
    fn elliptic_gamma_uniform_downwash() {
        let b = 3.0;
        let z = cosine_stations(41, b);
        let g: Vec<f64> = z.iter().map(|z| (1.0 - (2.0 * z / b).powi(2)).sqrt()).collect();
        let w = downwash_finite(&g, &z, b).unwrap();
        for wi in &w {
            assert!((wi - 1.0 / (2.0 * b)).abs() < 1e-12);
        }
        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
        let wn = downwash_finite(&neg, &z, b).unwrap();
        assert!(w.iter().zip(&wn).all(|(a, b)| *a == -*b));
        assert!(downwash_finite(&vec![0.0; 41], &z, b)
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
    }
}
