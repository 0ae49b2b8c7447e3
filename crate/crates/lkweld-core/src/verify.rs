//! End-to-end verification pipelines.
//!
//! Each pipeline runs a family of experiments (over evolution times or
//! curve sizes), measures the defect of one asymptotic relation against
//! the conformal oracle, and returns the raw rows; convergence orders are
//! fitted by the caller via [`crate::fit`]. Errors are tagged with the
//! pipeline stage that failed.
//!
//! Relations covered:
//! * the first-order map expansions of a near-circular curve (interior
//!   and exterior), measured on the boundary;
//! * the welding relation s + h(s) = σ - h(σ) + O(ε²);
//! * the evolution welding law φ = φ̃ + 2 Im p(e^{iφ̃},0) t + O(t²);
//! * the duality zF(1/z,τ) = 1 - p*(z,0) τ + O(τ²) on |z| = 0.9;
//! * the capacity inequality τ ≤ t with O(t²) slack.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::asymptotic::{self, AsymptoticError};
use crate::caratheodory::DrivingFunction;
use crate::curve::{BoundaryCurve, CurveError};
use crate::evolution::{
    evolve_boundary, integrate_characteristic, EvolutionConfig, EvolutionError,
};
use crate::oracle::{
    lebedev_check, solve_exterior, solve_interior, true_welding, MapSolution, OracleError,
    TheodorsenParams,
};
use crate::trig::{grid_angle, TrigError, TrigSeries};

/// Radius of the measurement circle used by the duality check.
pub const DUALITY_RADIUS: f64 = 0.9;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("evolve: {0}")]
    Evolve(#[from] EvolutionError),
    #[error("oracle-interior: {0}")]
    OracleInterior(OracleError),
    #[error("oracle-exterior: {0}")]
    OracleExterior(OracleError),
    #[error("welding: {0}")]
    Welding(OracleError),
    #[error("asymptotic: {0}")]
    Asymptotic(#[from] AsymptoticError),
    #[error("curve: {0}")]
    Curve(#[from] CurveError),
    #[error("lebedev: {0}")]
    Lebedev(OracleError),
    #[error("grid: {0}")]
    Grid(#[from] TrigError),
}

/// Common pipeline controls.
#[derive(Debug, Clone, Copy)]
pub struct PipelineSettings {
    /// Boundary grid size.
    pub grid: usize,
    /// ODE step override; default is 256 steps per unit time.
    pub steps: Option<usize>,
    /// Run the experiment family in parallel (results stay in input order).
    pub parallel: bool,
}

impl Default for PipelineSettings {
    fn default() -> Self {
        Self { grid: crate::evolution::DEFAULT_BOUNDARY_N, steps: None, parallel: false }
    }
}

impl PipelineSettings {
    fn steps_for(&self, t: f64) -> usize {
        self.steps.unwrap_or_else(|| crate::evolution::default_steps(t))
    }
}

fn map_rows<T, U>(
    inputs: &[T],
    parallel: bool,
    f: impl Fn(&T) -> Result<U, VerifyError> + Sync,
) -> Result<Vec<U>, VerifyError>
where
    T: Sync,
    U: Send,
{
    if parallel {
        inputs.par_iter().map(&f).collect()
    } else {
        inputs.iter().map(&f).collect()
    }
}

/// Wraps an angle difference into (-π, π].
fn circle_distance(d: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = (d + std::f64::consts::PI).rem_euclid(two_pi) - std::f64::consts::PI;
    if r <= -std::f64::consts::PI {
        r += two_pi;
    }
    r
}

fn oracle_pair(curve: &BoundaryCurve) -> Result<(MapSolution, MapSolution), VerifyError> {
    let params = TheodorsenParams::default();
    let int = solve_interior(curve, params).map_err(VerifyError::OracleInterior)?;
    let ext = solve_exterior(curve, params).map_err(VerifyError::OracleExterior)?;
    Ok((int, ext))
}

/// One measurement of the first-order map defects at curve size ε.
#[derive(Debug, Clone, Copy)]
pub struct MapDefectRow {
    pub epsilon: f64,
    /// Boundary sup-norm defect of the interior expansion.
    pub interior_error: f64,
    /// Boundary sup-norm defect of the exterior expansion.
    pub exterior_error: f64,
}

/// Measures both first-order map expansions against the oracle on curves
/// ε·shape, one row per ε.
pub fn map_defects(
    shape: impl Fn(f64) -> f64 + Sync,
    eps_list: &[f64],
    settings: PipelineSettings,
) -> Result<Vec<MapDefectRow>, VerifyError> {
    map_rows(eps_list, settings.parallel, |&eps| {
        let curve = BoundaryCurve::from_fn(settings.grid, |psi| eps * shape(psi))?;
        let (int, ext) = oracle_pair(&curve)?;
        let n = curve.n();
        let mut interior_error = 0.0f64;
        let mut exterior_error = 0.0f64;
        for j in 0..n {
            let theta = grid_angle(n, j);
            let z = Complex64::from_polar(1.0, theta);
            let psi_i = int.psi_of_theta.samples()[j];
            let true_int = Complex64::from_polar(curve.radius(psi_i), psi_i);
            interior_error =
                interior_error.max((asymptotic::interior_map(&curve, z) - true_int).norm());
            let psi_e = ext.psi_of_theta.samples()[j];
            let true_ext = Complex64::from_polar(curve.radius(psi_e), psi_e);
            exterior_error =
                exterior_error.max((asymptotic::exterior_map(&curve, z) - true_ext).norm());
        }
        Ok(MapDefectRow { epsilon: eps, interior_error, exterior_error })
    })
}

/// One measurement of the welding-relation defect at curve size ε.
#[derive(Debug, Clone, Copy)]
pub struct WeldingDefectRow {
    pub epsilon: f64,
    /// sup_s |(s + h(s)) - (σ(s) - h(σ(s)))| with σ from the oracle.
    pub error: f64,
}

/// Measures the welding relation against the oracle welding on curves
/// ε·shape.
pub fn welding_defects(
    shape: impl Fn(f64) -> f64 + Sync,
    eps_list: &[f64],
    settings: PipelineSettings,
) -> Result<Vec<WeldingDefectRow>, VerifyError> {
    map_rows(eps_list, settings.parallel, |&eps| {
        let curve = BoundaryCurve::from_fn(settings.grid, |psi| eps * shape(psi))?;
        let h = crate::trig::conjugate_pv(curve.delta())?;
        let (int, ext) = oracle_pair(&curve)?;
        let sigma = true_welding(&int, &ext).map_err(VerifyError::Welding)?;
        let n = curve.n();
        let mut error = 0.0f64;
        for j in 0..n {
            let s = grid_angle(n, j);
            let sg = sigma.samples()[j];
            let defect = (s + h.eval_real(s)) - (sg - h.eval_real(sg));
            error = error.max(defect.abs());
        }
        Ok(WeldingDefectRow { epsilon: eps, error })
    })
}

/// One measurement of the evolution welding law at time t.
#[derive(Debug, Clone, Copy)]
pub struct WeldingLawRow {
    pub t: f64,
    /// sup_φ̃ |φ(φ̃) - φ̃ - 2 Im p(e^{iφ̃},0) t| (circle distance).
    pub error: f64,
    /// τ of the evolved curve's exterior map.
    pub tau: f64,
    /// t - τ.
    pub slack: f64,
}

/// Runs the full evolve → oracle → welding pipeline for each t and
/// measures the first-order welding law.
pub fn welding_law_errors(
    driving: &DrivingFunction,
    t_list: &[f64],
    settings: PipelineSettings,
) -> Result<Vec<WeldingLawRow>, VerifyError> {
    map_rows(t_list, settings.parallel, |&t| {
        let cfg = EvolutionConfig::with_resolution(
            driving.clone(),
            t,
            settings.steps_for(t),
            settings.grid,
        )?;
        let result = evolve_boundary(&cfg)?;
        let (int, ext) = oracle_pair(&result.curve)?;
        let sigma = true_welding(&int, &ext).map_err(VerifyError::Welding)?;
        // σ maps the interior angle to the exterior angle; the welding law
        // is stated for the opposite orientation φ(φ̃).
        let phi_of_phit = sigma.inverse_homeo().map_err(OracleError::Homeo).map_err(VerifyError::Welding)?;
        let predicted = asymptotic::first_order_welding(driving, t, settings.grid)?;
        let mut error = 0.0f64;
        for (w, p) in phi_of_phit.samples().iter().zip(predicted.samples()) {
            error = error.max(circle_distance(w - p).abs());
        }
        let report = lebedev_check(t, &ext).map_err(VerifyError::Lebedev)?;
        Ok(WeldingLawRow { t, error, tau: report.tau, slack: report.slack })
    })
}

/// One measurement of the exterior duality at time t.
#[derive(Debug, Clone, Copy)]
pub struct DualityRow {
    pub t: f64,
    pub tau: f64,
    /// sup_{|z|=0.9} |zF(1/z,τ) - 1 + p*(z,0) τ|.
    pub error: f64,
}

/// Measures the duality between the exterior expansion of the evolved
/// curve and the reflected driving function.
pub fn duality_errors(
    driving: &DrivingFunction,
    t_list: &[f64],
    settings: PipelineSettings,
) -> Result<Vec<DualityRow>, VerifyError> {
    let reflected = driving.reflect();
    map_rows(t_list, settings.parallel, |&t| {
        let cfg = EvolutionConfig::with_resolution(
            driving.clone(),
            t,
            settings.steps_for(t),
            settings.grid,
        )?;
        let result = evolve_boundary(&cfg)?;
        let ext = solve_exterior(&result.curve, TheodorsenParams::default())
            .map_err(VerifyError::OracleExterior)?;
        let tau = -ext.conf_factor.ln();
        // Laurent coefficients of F from its boundary samples
        let n = result.curve.n();
        let boundary: Vec<Complex64> = (0..n)
            .map(|j| {
                let psi = ext.psi_of_theta.samples()[j];
                Complex64::from_polar(result.curve.radius(psi), psi)
            })
            .collect();
        let series = TrigSeries::analyze(&boundary)?;
        let half = n / 2;
        let mut error = 0.0f64;
        for j in 0..n {
            let z = Complex64::from_polar(DUALITY_RADIUS, grid_angle(n, j));
            // zF(1/z) = g_1 + g_0 z + Σ_{m≥1} g_{-m} z^{m+1}, Horner form
            let mut acc = Complex64::new(0.0, 0.0);
            for m in (1..half).rev() {
                acc = (acc + series.coeff(-(m as i64))) * z;
            }
            let value = series.coeff(1) + (series.coeff(0) + acc) * z;
            let q = reflected.eval(1.0 / z).expect("1/z is outside the unit circle");
            let predicted = Complex64::new(1.0, 0.0) - q * tau;
            error = error.max((value - predicted).norm());
        }
        Ok(DualityRow { t, tau, error })
    })
}

/// One capacity measurement at time t.
#[derive(Debug, Clone, Copy)]
pub struct LebedevRow {
    pub t: f64,
    pub tau: f64,
    pub slack: f64,
}

/// Evolves the curve and extracts the capacity slack t - τ for each t.
pub fn lebedev_slacks(
    driving: &DrivingFunction,
    t_list: &[f64],
    settings: PipelineSettings,
) -> Result<Vec<LebedevRow>, VerifyError> {
    map_rows(t_list, settings.parallel, |&t| {
        let cfg = EvolutionConfig::with_resolution(
            driving.clone(),
            t,
            settings.steps_for(t),
            settings.grid,
        )?;
        let result = evolve_boundary(&cfg)?;
        let ext = solve_exterior(&result.curve, TheodorsenParams::default())
            .map_err(VerifyError::OracleExterior)?;
        let report = lebedev_check(t, &ext).map_err(VerifyError::Lebedev)?;
        Ok(LebedevRow { t, tau: report.tau, slack: report.slack })
    })
}

/// Endpoint errors of the characteristic integrator against a fine-step
/// reference, one row (step size, error) per entry of `steps_list`.
pub fn integrator_self_convergence(
    driving: &DrivingFunction,
    z0: Complex64,
    t: f64,
    steps_list: &[usize],
    reference_steps: usize,
) -> Result<Vec<(f64, f64)>, VerifyError> {
    let reference = integrate_characteristic(driving, z0, t, reference_steps)?.endpoint();
    steps_list
        .iter()
        .map(|&steps| {
            let endpoint = integrate_characteristic(driving, z0, t, steps)?.endpoint();
            Ok((t / steps as f64, (endpoint - reference).norm()))
        })
        .collect()
}
