use std::f64::consts::PI;

use super::naca::AirfoilProfile;
use crate::error::{Error, Result};

/// Pitch used for every protuberance configuration of the study, in mean
/// chords.
pub const DEFAULT_PITCH: f64 = 0.25;

/// PAR values of the studied configuration table.
pub const STUDY_PARS: [u32; 8] = [1, 3, 6, 9, 12, 18, 21, 27];

/// Amplitudes as printed in the configuration table, `(PAR, printed, decimals)`.
pub const PRINTED_AMPLITUDES: [(u32, f64, u32); 8] = [
    (1, 0.25, 2),
    (3, 0.083, 3),
    (6, 0.041, 3),
    (9, 0.027, 3),
    (12, 0.020, 3),
    (18, 0.013, 3),
    (21, 0.011, 3),
    (27, 0.0092, 4),
];

const CLASSIFY_TOL: f64 = 1e-6;

/// Sinusoidal leading-edge protuberance, lengths in mean-chord fractions.
///
/// `amplitude` is peak-to-trough: the leading edge moves by `±amplitude / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtuberanceSpec {
    pub pitch: f64,
    pub amplitude: f64,
}

impl ProtuberanceSpec {
    pub fn new(pitch: f64, amplitude: f64) -> Result<Self> {
        if !(pitch > 0.0) || !(amplitude > 0.0) {
            return Err(Error::invalid(format!(
                "protuberance pitch and amplitude must be positive (pitch={pitch}, amplitude={amplitude})"
            )));
        }
        Ok(ProtuberanceSpec { pitch, amplitude })
    }

    pub fn from_par(par: f64, pitch: f64) -> Result<Self> {
        Self::new(pitch, par_to_amplitude(par, pitch)?)
    }

    pub fn par(&self) -> f64 {
        self.pitch / self.amplitude
    }
}

/// Amplitude `A = pitch / PAR`, both in chord fractions.
pub fn par_to_amplitude(par: f64, pitch: f64) -> Result<f64> {
    if !(par > 0.0) || !(pitch > 0.0) || !par.is_finite() || !pitch.is_finite() {
        return Err(Error::invalid(format!(
            "PAR and pitch must be positive (par={par}, pitch={pitch})"
        )));
    }
    Ok(pitch / par)
}

/// Truncate (not round) to `decimals` places, the way the configuration
/// table prints amplitudes.
pub fn truncate_decimals(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    // nudge guards against 0.25 * 100 = 24.999...
    ((value * scale) + 1e-9).floor() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    Peak,
    Mean,
    Trough,
    Generic,
}

impl SectionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SectionKind::Peak => "peak",
            SectionKind::Mean => "mean",
            SectionKind::Trough => "trough",
            SectionKind::Generic => "generic",
        }
    }
}

/// One spanwise station of a wing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanSection {
    pub z: f64,
    pub kind: SectionKind,
    pub local_chord: f64,
    /// Leading-edge abscissa in metres, relative to the baseline leading edge.
    pub le_x: f64,
    /// Section shape in local-chord fractions (identical at every station).
    pub profile: AirfoilProfile,
    /// Section loop in metres: scaled to the local chord and shifted to `le_x`.
    pub points_m: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WingGeometry {
    pub base_profile: AirfoilProfile,
    pub spec: Option<ProtuberanceSpec>,
    pub mean_chord: f64,
    pub span: f64,
    pub stations: Vec<SpanSection>,
}

impl WingGeometry {
    pub fn n_stations(&self) -> usize {
        self.stations.len()
    }

    /// Pitch in metres, if tubercled.
    pub fn pitch_m(&self) -> Option<f64> {
        self.spec.map(|s| s.pitch * self.mean_chord)
    }

    /// Peak-to-trough amplitude in metres (0 for the baseline).
    pub fn amplitude_m(&self) -> f64 {
        self.spec.map_or(0.0, |s| s.amplitude * self.mean_chord)
    }

    fn phase(&self, z: f64) -> Option<f64> {
        self.pitch_m().map(|l| (2.0 * PI * z / l).cos())
    }

    /// `c(z) = c + (A/2) cos(2πz/λ)`.
    pub fn chord_at(&self, z: f64) -> f64 {
        match self.phase(z) {
            Some(cos) => self.mean_chord + 0.5 * self.amplitude_m() * cos,
            None => self.mean_chord,
        }
    }

    /// `x_LE(z) = -(A/2) cos(2πz/λ)`; the trailing edge stays at `x = c`.
    pub fn le_offset_at(&self, z: f64) -> f64 {
        match self.phase(z) {
            Some(cos) => -0.5 * self.amplitude_m() * cos,
            None => 0.0,
        }
    }

    pub fn kind_at(&self, z: f64) -> SectionKind {
        match self.phase(z) {
            Some(cos) if (cos - 1.0).abs() < CLASSIFY_TOL => SectionKind::Peak,
            Some(cos) if (cos + 1.0).abs() < CLASSIFY_TOL => SectionKind::Trough,
            Some(cos) if cos.abs() < CLASSIFY_TOL => SectionKind::Mean,
            _ => SectionKind::Generic,
        }
    }

    /// Span measured in protuberance wavelengths.
    pub fn wavelengths(&self) -> Option<f64> {
        self.pitch_m().map(|l| self.span / l)
    }

    /// Planform area by trapezoidal integration over the stations.
    pub fn planform_area(&self) -> f64 {
        self.stations
            .windows(2)
            .map(|w| 0.5 * (w[0].local_chord + w[1].local_chord) * (w[1].z - w[0].z))
            .sum()
    }

    fn make_section(&self, z: f64) -> SpanSection {
        let chord = self.chord_at(z);
        let le_x = self.le_offset_at(z);
        SpanSection {
            z,
            kind: self.kind_at(z),
            local_chord: chord,
            le_x,
            profile: self.base_profile.clone(),
            points_m: scale_points(&self.base_profile, chord, le_x),
        }
    }
}

fn scale_points(profile: &AirfoilProfile, chord: f64, le_x: f64) -> Vec<[f64; 2]> {
    profile
        .points
        .iter()
        .map(|p| [le_x + p[0] * chord, p[1] * chord])
        .collect()
}

/// Build a constant-`t/c` wing whose leading edge follows the protuberance
/// sinusoid. `spec = None` gives the constant-chord baseline.
///
/// Stations are uniformly spaced over `[0, span]`, both ends included.
pub fn build_tubercled_wing(
    base: &AirfoilProfile,
    spec: Option<ProtuberanceSpec>,
    mean_chord: f64,
    span: f64,
    n_stations: usize,
) -> Result<WingGeometry> {
    if !(span > 0.0) || !span.is_finite() {
        return Err(Error::invalid(format!("span must be positive, got {span}")));
    }
    if !(mean_chord > 0.0) || !mean_chord.is_finite() {
        return Err(Error::invalid(format!("mean chord must be positive, got {mean_chord}")));
    }
    if n_stations < 2 {
        return Err(Error::invalid("a wing needs at least 2 stations"));
    }
    if let Some(s) = spec {
        let pitch = s.pitch * mean_chord;
        let per_wavelength = (n_stations - 1) as f64 * pitch / span;
        if per_wavelength < 5.0 - 1e-9 {
            return Err(Error::invalid(format!(
                "{n_stations} stations resolve only {per_wavelength:.2} per wavelength (need 5)"
            )));
        }
        if s.amplitude >= 2.0 {
            return Err(Error::Geometry("amplitude would produce a non-positive chord".into()));
        }
    }
    let mut wing = WingGeometry {
        base_profile: base.clone(),
        spec,
        mean_chord,
        span,
        stations: Vec::with_capacity(n_stations),
    };
    let dz = span / (n_stations - 1) as f64;
    wing.stations = (0..n_stations).map(|i| wing.make_section(i as f64 * dz)).collect();
    Ok(wing)
}

/// Section at an arbitrary spanwise position.
pub fn extract_section(wing: &WingGeometry, z: f64) -> Result<SpanSection> {
    if !(0.0..=wing.span).contains(&z) {
        return Err(Error::invalid(format!("z = {z} outside span [0, {}]", wing.span)));
    }
    Ok(wing.make_section(z))
}
