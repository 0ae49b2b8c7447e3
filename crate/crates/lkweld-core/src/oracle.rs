//! Independent conformal-mapping ground truth via Theodorsen iteration.
//!
//! For a star-like curve r = r(ψ) the boundary correspondence θ ↦ ψ(θ) of
//! the normalized interior Riemann map satisfies the fixed-point equation
//! ψ(θ) = θ + K\[log r ∘ ψ\](θ), where K is harmonic conjugation on the
//! circle. Writing log(f(z)/z) with boundary values log r(ψ(θ)) +
//! i(ψ(θ) - θ) makes the imaginary part the conjugate of the real part
//! because the function is analytic in the disk and real at 0; the same
//! argument in the exterior flips the conjugation sign (analytic at ∞,
//! decaying spectrum in the opposite half). The conjugation operator from
//! `trig` carries frequency multiplier +i·sgn(k): that is exactly the
//! exterior conjugation, so interior solves negate it.
//!
//! The iteration contracts when sup|d log r / dψ| < 1; a damping factor
//! 0.5 is engaged automatically above 0.3 to extend the usable range.
//! conf_factor recovers f'(0) (interior) or F'(∞) = e^{-τ} (exterior) as
//! exp(mean log r ∘ ψ); the exterior solve also reports the first Laurent
//! coefficients b_0, b_1 of F from the Fourier expansion of its boundary
//! values.
//!
//! The oracle is validated against analytic test maps only — the
//! asymptotic formulas it referees never enter its own validation.

use num_complex::Complex64;
use thiserror::Error;

use crate::curve::BoundaryCurve;
use crate::homeo::{CircleHomeo, HomeoError};
use crate::trig::{conjugate_pv, grid_angle, TrigError, TrigSeries};

/// Lebedev slack below which the inequality τ ≤ t counts as violated.
pub const LEBEDEV_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("Theodorsen iteration did not reach {tol:.1e} in {max_iter} iterations (residual {residual:.3e})")]
    NoConvergence { residual: f64, tol: f64, max_iter: usize },
    #[error("iterate lost monotonicity: {0}")]
    IterateNonMonotone(HomeoError),
    #[error("map solutions disagree: {0}")]
    SolutionMismatch(String),
    #[error("welding branch mismatch (mean angle offset {0:.3} ≥ π/2)")]
    BranchMismatch(f64),
    #[error("Lebedev inequality violated: slack {slack:.3e} < -{LEBEDEV_TOL:.0e}")]
    LebedevViolated { slack: f64 },
    #[error(transparent)]
    Grid(#[from] TrigError),
    #[error(transparent)]
    Homeo(#[from] HomeoError),
}

/// Which Riemann map a solution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

/// Iteration controls for the Theodorsen solver.
#[derive(Debug, Clone, Copy)]
pub struct TheodorsenParams {
    pub tol: f64,
    pub max_iter: usize,
    /// Contraction number above which damping is engaged.
    pub damping_threshold: f64,
    /// Update fraction used once damping is engaged.
    pub damping: f64,
}

impl Default for TheodorsenParams {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, damping_threshold: 0.3, damping: 0.5 }
    }
}

/// Converged boundary correspondence of one side.
#[derive(Debug, Clone)]
pub struct MapSolution {
    pub side: Side,
    /// θ ↦ ψ(θ), monotone degree-1.
    pub psi_of_theta: CircleHomeo,
    /// f'(0) (interior) or F'(∞) = e^{-τ} (exterior); positive.
    pub conf_factor: f64,
    pub iterations: usize,
    /// Sup-norm of the final fixed-point update.
    pub residual: f64,
    /// Laurent coefficient b_0 of F (exterior only).
    pub b0: Option<Complex64>,
    /// Laurent coefficient b_1 of F (exterior only).
    pub b1: Option<Complex64>,
}

fn solve(
    curve: &BoundaryCurve,
    side: Side,
    params: TheodorsenParams,
) -> Result<MapSolution, OracleError> {
    let n = curve.n();
    let contraction = curve.log_radius_deriv_sup();
    if contraction >= 1.0 {
        log::warn!(
            "Theodorsen contraction number {contraction:.3} ≥ 1; iterating with damping anyway"
        );
    }
    let damp = if contraction >= params.damping_threshold { params.damping } else { 1.0 };
    let conj_sign = match side {
        Side::Interior => -1.0,
        Side::Exterior => 1.0,
    };

    let mut dev = vec![0.0f64; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut log_r = vec![0.0f64; n];
    while iterations < params.max_iter {
        iterations += 1;
        for j in 0..n {
            let psi = grid_angle(n, j) + dev[j];
            log_r[j] = curve.radius(psi).ln();
        }
        let conj = conjugate_pv(&TrigSeries::analyze_real(&log_r)?)?;
        residual = 0.0;
        let mut monotone_guard = f64::NEG_INFINITY;
        let mut monotone_ok = true;
        for (j, d) in dev.iter_mut().enumerate() {
            let update = damp * (conj_sign * conj.values()[j].re - *d);
            residual = residual.max(update.abs());
            *d += update;
            let lift = grid_angle(n, j) + *d;
            if lift <= monotone_guard {
                monotone_ok = false;
            }
            monotone_guard = lift;
        }
        if !monotone_ok {
            return Err(OracleError::IterateNonMonotone(HomeoError::NotMonotone(0)));
        }
        if residual <= params.tol {
            break;
        }
    }
    if residual > params.tol {
        return Err(OracleError::NoConvergence {
            residual,
            tol: params.tol,
            max_iter: params.max_iter,
        });
    }

    let lift: Vec<f64> = (0..n).map(|j| grid_angle(n, j) + dev[j]).collect();
    let psi_of_theta =
        CircleHomeo::from_lift_samples(lift.clone()).map_err(OracleError::IterateNonMonotone)?;
    for (j, l) in log_r.iter_mut().enumerate() {
        *l = curve.radius(lift[j]).ln();
    }
    let conf_factor = (log_r.iter().sum::<f64>() / n as f64).exp();

    let (b0, b1) = match side {
        Side::Interior => (None, None),
        Side::Exterior => {
            // Boundary samples of F(e^{iθ}) = r(ψ(θ)) e^{iψ(θ)}; its Fourier
            // coefficients are the Laurent coefficients of F.
            let boundary: Vec<Complex64> = (0..n)
                .map(|j| Complex64::from_polar(log_r[j].exp(), lift[j]))
                .collect();
            let series = TrigSeries::analyze(&boundary)?;
            (Some(series.coeff(0)), Some(series.coeff(-1)))
        }
    };

    Ok(MapSolution { side, psi_of_theta, conf_factor, iterations, residual, b0, b1 })
}

/// Boundary correspondence and conformal radius of the interior map.
///
/// Warns and damps when the contraction condition sup|d log r/dψ| < 1 is
/// not comfortably met.
pub fn solve_interior(
    curve: &BoundaryCurve,
    params: TheodorsenParams,
) -> Result<MapSolution, OracleError> {
    solve(curve, Side::Interior, params)
}

/// Boundary correspondence, capacity factor e^{-τ} and leading Laurent
/// coefficients of the exterior map.
pub fn solve_exterior(
    curve: &BoundaryCurve,
    params: TheodorsenParams,
) -> Result<MapSolution, OracleError> {
    solve(curve, Side::Exterior, params)
}

/// The conformal welding σ(s) of the curve both solutions belong to:
/// the exterior angle with F(e^{iσ}) = f(e^{is}), computed by matching
/// polar angles σ(s) = ψ_ext^{-1}(ψ_int(s)).
pub fn true_welding(
    interior: &MapSolution,
    exterior: &MapSolution,
) -> Result<CircleHomeo, OracleError> {
    if interior.side != Side::Interior || exterior.side != Side::Exterior {
        return Err(OracleError::SolutionMismatch(
            "true_welding needs (interior, exterior) in that order".into(),
        ));
    }
    if interior.psi_of_theta.n() != exterior.psi_of_theta.n() {
        return Err(OracleError::SolutionMismatch(format!(
            "grid sizes differ: {} vs {}",
            interior.psi_of_theta.n(),
            exterior.psi_of_theta.n()
        )));
    }
    let n = interior.psi_of_theta.n();
    let lift: Vec<f64> = interior
        .psi_of_theta
        .samples()
        .iter()
        .map(|&psi| exterior.psi_of_theta.inverse(psi))
        .collect();
    let offset =
        lift.iter().enumerate().map(|(j, &s)| s - grid_angle(n, j)).sum::<f64>() / n as f64;
    if offset.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(OracleError::BranchMismatch(offset.abs()));
    }
    Ok(CircleHomeo::from_lift_samples(lift)?)
}

/// Capacity comparison of an evolution time t against the exterior
/// solution of the evolved curve.
#[derive(Debug, Clone, Copy)]
pub struct LebedevReport {
    pub t: f64,
    /// τ = -log F'(∞).
    pub tau: f64,
    /// t - τ; non-negative up to [`LEBEDEV_TOL`], zero only for circles.
    pub slack: f64,
}

/// Checks the capacity inequality τ ≤ t for a curve evolved to time t
/// (interior conformal radius e^{-t} by the evolution normalization).
pub fn lebedev_check(t: f64, exterior: &MapSolution) -> Result<LebedevReport, OracleError> {
    debug_assert_eq!(exterior.side, Side::Exterior);
    let tau = -exterior.conf_factor.ln();
    let slack = t - tau;
    if slack < -LEBEDEV_TOL {
        return Err(OracleError::LebedevViolated { slack });
    }
    Ok(LebedevReport { t, tau, slack })
}
