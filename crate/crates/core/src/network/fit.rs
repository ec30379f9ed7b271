use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `count ≈ amplitude · exp(-rate · degree)`, fitted in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    pub rate: f64,
    pub amplitude: f64,
    /// Coefficient of determination of the log-space fit.
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`. R² is 1 when `y` has no variance.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Fit `value = intercept + slope · ln(m)`.
pub fn fit_log_linear(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: points.len(),
        });
    }
    if let Some(p) = points.iter().find(|p| p.0.is_nan() || p.0 <= 0.0) {
        return Err(Error::DegenerateFit(format!("log fit needs m > 0, got {}", p.0)));
    }
    let logged: Vec<(f64, f64)> = points.iter().map(|&(m, v)| (m.ln(), v)).collect();
    fit_linear(&logged)
}

/// Fit an exponential decay to a degree histogram, using only bins with a
/// nonzero count.
pub fn fit_exponential(histogram: &BTreeMap<usize, usize>) -> Result<ExponentialFit> {
    let points: Vec<(f64, f64)> = histogram
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(&d, &c)| (d as f64, (c as f64).ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFew {
            needed: 3,
            got: points.len(),
        });
    }
    let fit = fit_linear(&points)?;
    Ok(ExponentialFit {
        rate: -fit.slope,
        amplitude: fit.intercept.exp(),
        r_squared: fit.r_squared,
    })
}
