use crate::error::{Error, Result};

/// `100·(metric − baseline)/baseline`.
pub fn percent_change(metric: f64, baseline: f64) -> Result<f64> {
    if baseline == 0.0 {
        return Err(Error::invalid("percent change against a zero baseline"));
    }
    Ok(100.0 * (metric - baseline) / baseline)
}

/// `Σ cᵢvᵢ / Σ cᵢ`.
pub fn chord_weighted_average(values: &[f64], chords: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("no sections to average"));
    }
    if values.len() != chords.len() {
        return Err(Error::invalid(format!(
            "{} values but {} chords",
            values.len(),
            chords.len()
        )));
    }
    if let Some(c) = chords.iter().find(|c| !(**c > 0.0)) {
        return Err(Error::invalid(format!("chord {c} is not positive")));
    }
    let num: f64 = values.iter().zip(chords).map(|(v, c)| v * c).sum();
    let den: f64 = chords.iter().sum();
    Ok(num / den)
}

/// PAR with the largest metric; exact ties go to the larger PAR. The
/// baseline takes part as PAR 0.
pub fn best_par_select(table: &[(f64, f64)]) -> Result<f64> {
    let mut best: Option<(f64, f64)> = None;
    for &(par, metric) in table {
        if !metric.is_finite() {
            continue;
        }
        best = match best {
            Some((bp, bm)) if bm > metric || (bm == metric && bp >= par) => Some((bp, bm)),
            _ => Some((par, metric)),
        };
    }
    best.map(|b| b.0).ok_or_else(|| Error::invalid("empty PAR table"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_identities() {
        assert_eq!(percent_change(0.7, 0.7).unwrap(), 0.0);
        assert!(percent_change(1.0, 0.0).is_err());
        let p = percent_change(0.5 * 1.27, 0.5).unwrap();
        assert!((p - 27.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_average() {
        assert_eq!(chord_weighted_average(&[2.5], &[0.3]).unwrap(), 2.5);
        assert!((chord_weighted_average(&[1.0, 2.0, 6.0], &[2.0; 3]).unwrap() - 3.0).abs() < 1e-15);
        assert!(chord_weighted_average(&[1.0], &[1.0, 2.0]).is_err());
        assert!(chord_weighted_average(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(chord_weighted_average(&[], &[]).is_err());
    }

    #[test]
    fn best_par() {
        assert_eq!(best_par_select(&[(3.0, 0.6), (6.0, 0.7), (9.0, 0.65)]).unwrap(), 6.0);
        assert_eq!(best_par_select(&[(3.0, 0.5), (27.0, 0.5), (9.0, 0.5)]).unwrap(), 27.0);
        assert_eq!(best_par_select(&[(0.0, 0.8), (6.0, 0.7)]).unwrap(), 0.0);
        assert!(best_par_select(&[]).is_err());
    }
}
