//! Shared fixtures for the integration suites: analytic test curves with
//! known boundary correspondences, and the numerical-floor constants the
//! convergence fits are pinned to.

// not every test target uses every fixture
#![allow(dead_code)]

use lkweld_core::homeo::CircleHomeo;
use lkweld_core::trig::{grid_angle, TrigSeries};
use lkweld_core::{BoundaryCurve, Complex};

/// Combined tolerance floor of the verification pipelines (integrator,
/// oracle fixed point, homeomorphism inversion). Fit exclusion kicks in
/// at 100× this value.
pub const NUMERICAL_FLOOR: f64 = 1e-10;

/// Analytic boundary data of a univalent test map: the correspondence
/// θ ↦ ψ and the curve in polar form, both exact up to the homeomorphism
/// inversion tolerance.
pub struct AnalyticCurve {
    pub curve: BoundaryCurve,
    /// Exact boundary correspondence of the map that generated the curve.
    pub psi_of_theta: CircleHomeo,
}

/// Curve traced by z + α z^k on the unit circle, polar-resampled.
/// The generating map is the normalized interior Riemann map of the
/// enclosed domain, with f'(0) = 1 exactly.
pub fn interior_test_curve(alpha: f64, k: u32, n: usize) -> AnalyticCurve {
    let freq = (k - 1) as f64;
    parametrized_curve(n, |theta| {
        let inner = Complex::new(1.0, 0.0) + alpha * Complex::from_polar(1.0, freq * theta);
        (theta + inner.arg(), inner.norm())
    })
}

/// Curve traced by Z + α Z^{-k} on the unit circle, viewed from outside.
/// The generating map is the normalized exterior Riemann map, with
/// F'(∞) = 1 exactly.
pub fn exterior_test_curve(alpha: f64, k: u32, n: usize) -> AnalyticCurve {
    let freq = (k + 1) as f64;
    parametrized_curve(n, |theta| {
        let inner = Complex::new(1.0, 0.0) + alpha * Complex::from_polar(1.0, -freq * theta);
        (theta + inner.arg(), inner.norm())
    })
}

/// Builds the polar form r(ψ) = 1 - δ(ψ) of a curve given by boundary
/// samples (Ψ(θ), R(θ)): δ is resampled to the uniform ψ grid through the
/// inverse of the angle correspondence.
fn parametrized_curve(n: usize, boundary: impl Fn(f64) -> (f64, f64)) -> AnalyticCurve {
    let lift: Vec<f64> = (0..n).map(|j| boundary(grid_angle(n, j)).0).collect();
    let psi_of_theta = CircleHomeo::from_lift_samples(lift).expect("test map is monotone");
    let radius_of_theta =
        TrigSeries::from_fn_real(n, |theta| boundary(theta).1).expect("valid grid");
    let delta: Vec<f64> = (0..n)
        .map(|j| {
            let theta = psi_of_theta.inverse(grid_angle(n, j));
            1.0 - radius_of_theta.eval_real(theta)
        })
        .collect();
    let curve = BoundaryCurve::new(TrigSeries::analyze_real(&delta).expect("valid grid"))
        .expect("test curve is star-like");
    AnalyticCurve { curve, psi_of_theta }
}
