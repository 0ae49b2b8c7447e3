//! Convergence-order estimation by least squares on log-log data.
//!
//! Points whose error sits below 100× the estimated numerical floor are
//! excluded before fitting so that floor saturation cannot corrupt the
//! slope; a fit with fewer than two surviving points is flagged
//! degenerate instead of inventing an order.

/// Exclusion multiplier applied to the numerical floor.
pub const FLOOR_EXCLUSION_FACTOR: f64 = 100.0;

/// Default combined numerical floor (integrator, oracle and interpolation
/// tolerances) used by the verification pipelines.
pub const DEFAULT_NUMERICAL_FLOOR: f64 = 1e-10;

/// Ordinary least-squares fit of log(error) against log(x).
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Fitted slope (the observed convergence order).
    pub slope: f64,
    /// Fitted intercept in log space.
    pub intercept: f64,
    /// Half-width of the ~95% confidence interval of the slope
    /// (2 standard errors); zero when fewer than 3 points survive.
    pub slope_half_width: f64,
    /// Which input points entered the fit.
    pub used: Vec<bool>,
    /// True when fewer than two points survived the floor exclusion.
    pub degenerate: bool,
}

/// Fits error ≈ C·x^slope on the points with error above
/// [`FLOOR_EXCLUSION_FACTOR`]·floor.
pub fn fit_loglog(x: &[f64], errors: &[f64], floor: f64) -> FitResult {
    assert_eq!(x.len(), errors.len(), "mismatched fit data");
    let cutoff = FLOOR_EXCLUSION_FACTOR * floor;
    let used: Vec<bool> = errors.iter().map(|&e| e > cutoff && e.is_finite()).collect();
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(errors)
        .zip(&used)
        .filter(|(_, &u)| u)
        .map(|((&xi, &ei), _)| (xi.ln(), ei.ln()))
        .collect();
    if pts.len() < 2 {
        return FitResult {
            slope: f64::NAN,
            intercept: f64::NAN,
            slope_half_width: f64::NAN,
            used,
            degenerate: true,
        };
    }
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let slope_half_width = if pts.len() >= 3 {
        let ss_res: f64 = pts
            .iter()
            .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
            .sum();
        2.0 * (ss_res / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    FitResult { slope, intercept, slope_half_width, used, degenerate: false }
}
