//! First-order conformal maps and welding of a near-circular curve.
//!
//! For a curve r = 1 - δ with ε = max(sup|δ|, sup|δ'|, sup|δ''|) the
//! normalized Riemann maps admit the expansions
//!
//! * interior: f(z) = z(1 - S\[δ\](z)) + O(ε²), |z| ≤ 1,
//! * exterior: F(z) = z(1 - c_0 - 2 Σ_{k≥1} c_{-k} z^{-k}) + O(ε²), |z| ≥ 1,
//!
//! and the welding σ(s) between the two boundary parametrizations
//! (f(e^{is}) = F(e^{iσ})) satisfies s + h(s) = σ - h(σ) + O(ε²) with h the
//! conjugation of δ. The welding solver inverts that relation pointwise by
//! bisection; its bracket σ ∈ [s - 4ε, s + 4ε] fails only when the curve is
//! far outside the asymptotic regime, which is reported rather than
//! extrapolated.
//!
//! All kernels are evaluated spectrally from Fourier coefficients; raw
//! kernel quadrature exists only as a test oracle.

use num_complex::Complex64;
use thiserror::Error;

use crate::caratheodory::{CaratheodoryError, DrivingFunction};
use crate::curve::BoundaryCurve;
use crate::homeo::{CircleHomeo, HomeoError};
use crate::trig::{grid_angle, schwarz_integral, TrigError, TrigSeries};

/// Bisection tolerance of the welding solve.
pub const WELDING_TOL: f64 = 1e-12;

/// ε above which the asymptotic welding emits a warning.
pub const EPSILON_WARN: f64 = 0.1;

#[derive(Debug, Error)]
pub enum AsymptoticError {
    #[error("welding bracket [s - 4e, s + 4e] does not enclose a root at s = {s:.6}; epsilon = {epsilon:.3} too large")]
    NonBracketing { s: f64, epsilon: f64 },
    #[error("first-order welding loses monotonicity (t too large): {0}")]
    MonotonicityLoss(HomeoError),
    #[error(transparent)]
    Driving(#[from] CaratheodoryError),
    #[error(transparent)]
    Grid(#[from] TrigError),
}

/// Interior first-order map f(z) = z(1 - S\[δ\](z)) on the closed disk.
/// f(0) = 0 and f'(0) = 1 - c_0.
pub fn interior_map(curve: &BoundaryCurve, z: Complex64) -> Complex64 {
    let s = schwarz_integral(curve.delta(), z).expect("curve deficit is real by construction");
    z * (Complex64::new(1.0, 0.0) - s)
}

/// Exterior first-order map F(z) = z(1 - c_0 - 2 Σ_{k≥1} c_{-k} z^{-k}) on
/// |z| ≥ 1. F(z)/z → 1 - c_0 as z → ∞.
pub fn exterior_map(curve: &BoundaryCurve, z: Complex64) -> Complex64 {
    debug_assert!(z.norm() >= 1.0 - 1e-12, "exterior_map inside the disk");
    let delta = curve.delta();
    let half = delta.n() / 2;
    let w = 1.0 / z;
    // Horner over the reflected coefficients c_{-k}, k = n/2-1 .. 1
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..half).rev() {
        acc = (acc + delta.coeff(-(k as i64))) * w;
    }
    let kernel = delta.coeff(0) + 2.0 * acc;
    z * (Complex64::new(1.0, 0.0) - kernel)
}

/// Asymptotic welding σ(s) together with the data it was solved from.
#[derive(Debug, Clone)]
pub struct WeldingRecord {
    /// Grid angles s_j the welding was solved at.
    pub s_grid: Vec<f64>,
    /// The welding homeomorphism σ(s).
    pub sigma: CircleHomeo,
    /// Conjugation h of the deficit.
    pub h: TrigSeries,
    /// Sup over the grid of the residual defect |(s + h(s)) - (σ - h(σ))|.
    pub residual: f64,
}

/// Solves the first-order welding relation s + h(s) = σ - h(σ) for σ at
/// every grid point by bisection.
pub fn welding(curve: &BoundaryCurve) -> Result<WeldingRecord, AsymptoticError> {
    let eps = curve.epsilon();
    if eps > EPSILON_WARN {
        log::warn!(
            "asymptotic welding at epsilon = {eps:.3}; the O(epsilon^2) regime ends around {EPSILON_WARN}"
        );
    }
    let h = crate::trig::conjugate_pv(curve.delta())?;
    let n = curve.n();
    let goal = |sigma: f64| sigma - h.eval_real(sigma);
    let mut lift = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for j in 0..n {
        let s = grid_angle(n, j);
        let target = s + h.eval_real(s);
        let sigma = if eps == 0.0 {
            s
        } else {
            let mut lo = s - 4.0 * eps;
            let mut hi = s + 4.0 * eps;
            if (goal(lo) - target) > 0.0 || (goal(hi) - target) < 0.0 {
                return Err(AsymptoticError::NonBracketing { s, epsilon: eps });
            }
            while hi - lo > WELDING_TOL {
                let mid = 0.5 * (lo + hi);
                if goal(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        residual = residual.max((goal(sigma) - target).abs());
        lift.push(sigma);
    }
    let sigma = CircleHomeo::from_lift_samples(lift).map_err(AsymptoticError::MonotonicityLoss)?;
    Ok(WeldingRecord { s_grid: crate::trig::grid_angles(n), sigma, h, residual })
}

/// The first-order welding law of the evolution: the map
/// φ̃ ↦ φ̃ + 2·Im p(e^{iφ̃}, 0)·t, monotone for t below
/// 1/(2 sup|∂_θ Im p|).
pub fn first_order_welding(
    driving: &DrivingFunction,
    t: f64,
    n: usize,
) -> Result<CircleHomeo, AsymptoticError> {
    let mut lift = Vec::with_capacity(n);
    for j in 0..n {
        let phi = grid_angle(n, j);
        let p = driving.eval(Complex64::from_polar(1.0, phi), 0.0)?;
        lift.push(phi + 2.0 * p.im * t);
    }
    CircleHomeo::from_lift_samples(lift).map_err(AsymptoticError::MonotonicityLoss)
}
