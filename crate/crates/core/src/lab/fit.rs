//! Log-log least squares for ε-decay rates.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Slope of `log|value|` against `log ε`; NaN when fewer than two
    /// values are nonzero.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Number of zero values left out of the fit.
    pub excluded_zeros: usize,
    pub identically_zero: bool,
}

/// Least-squares line through `(log ε, log|v|)`, skipping zero values.
pub fn decay_fit(epsilons: &[f64], values: &[f64]) -> Result<DecayFit> {
    if epsilons.len() != values.len() {
        return Err(Error::Input(format!(
            "{} radii but {} values",
            epsilons.len(),
            values.len()
        )));
    }
    if epsilons.len() < 3 {
        return Err(Error::Input(
            "a decay fit needs at least three radii".into(),
        ));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::Input("radii must be positive and finite".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("decay values must be finite".into()));
    }
    let pts: Vec<(f64, f64)> = epsilons
        .iter()
        .zip(values)
        .filter(|(_, v)| **v != 0.0)
        .map(|(e, v)| (e.ln(), v.abs().ln()))
        .collect();
    let excluded_zeros = values.len() - pts.len();
    if pts.is_empty() {
        return Ok(DecayFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            r_squared: f64::NAN,
            excluded_zeros,
            identically_zero: true,
        });
    }
    if pts.len() < 2 {
        return Ok(DecayFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            r_squared: f64::NAN,
            excluded_zeros,
            identically_zero: false,
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("radii must not all be equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        excluded_zeros,
        identically_zero: false,
    })
}
