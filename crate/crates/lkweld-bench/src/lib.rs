//! Shared fixtures for the criterion benches.

use lkweld_core::caratheodory::{DrivingFunction, DrivingTerm};
use lkweld_core::{BoundaryCurve, Complex};

/// The headline driving p = 1 + 0.3i z.
pub fn headline_driving() -> DrivingFunction {
    DrivingFunction::new(
        vec![DrivingTerm::constant(Complex::new(0.0, 0.3), 1)],
        f64::INFINITY,
    )
    .expect("valid driving")
}

/// A mid-size multi-harmonic test curve.
pub fn test_curve(n: usize) -> BoundaryCurve {
    BoundaryCurve::from_fn(n, |psi| 0.02 * (psi.cos() + 0.5 * (3.0 * psi).sin()))
        .expect("valid curve")
}
