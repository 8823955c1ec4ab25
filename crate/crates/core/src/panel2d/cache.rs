use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::polar::{viscous_polar, PolarSettings, Provenance, SectionPolar};
use crate::error::{Error, Result};
use crate::geometry::{AirfoilProfile, CaseSpec};

/// On-disk store of computed section polars, one CSV per key.
#[derive(Debug, Clone)]
pub struct PolarCache {
    dir: PathBuf,
}

/// Cache key: hash of the exact profile coordinates, Reynolds number,
/// panel count, closure settings and angle grid.
pub fn polar_cache_key(profile: &AirfoilProfile, re: f64, alphas: &[f64], settings: &PolarSettings) -> String {
    let mut h = Sha256::new();
    for p in &profile.points {
        h.update(p[0].to_bits().to_le_bytes());
        h.update(p[1].to_bits().to_le_bytes());
    }
    h.update(re.to_bits().to_le_bytes());
    h.update((settings.n_panels as u64).to_le_bytes());
    h.update(settings.closure.fingerprint().as_bytes());
    for a in alphas {
        h.update(a.to_bits().to_le_bytes());
    }
    hex::encode(h.finalize())
}

impl PolarCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(PolarCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.csv"))
    }

    pub fn load(&self, key: &str, reynolds: f64) -> Result<Option<SectionPolar>> {
        let path = self.path(key);
        match fs::read_to_string(&path) {
            Ok(text) => SectionPolar::from_csv(&text, reynolds, Provenance::Cached).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    /// Write via a temporary file and rename, so readers never see a
    /// partial file even when two workers store the same key.
    pub fn store(&self, key: &str, polar: &SectionPolar) -> Result<()> {
        let path = self.path(key);
        let tmp = self.dir.join(format!(
            "{key}.{}.{:?}.tmp",
            std::process::id(),
            std::thread::current().id()
        ));
        fs::write(&tmp, polar.to_csv()).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }

    pub fn get_or_compute(
        &self,
        profile: &AirfoilProfile,
        case: &CaseSpec,
        alphas: &[f64],
        settings: &PolarSettings,
    ) -> Result<SectionPolar> {
        let key = polar_cache_key(profile, case.re, alphas, settings);
        if let Some(p) = self.load(&key, case.re)? {
            return Ok(p);
        }
        let polar = viscous_polar(profile, case, alphas, settings)?;
        self.store(&key, &polar)?;
        Ok(polar)
    }
}
