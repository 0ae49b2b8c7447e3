//! Löwner-Kufarev evolution by integration of characteristics.
//!
//! The decreasing evolution ∂_t f = -z f_z p(z,t) is solved through its
//! characteristic ODE dw/dt = -w p(w, s-t), w(0) = z: the endpoint at
//! t = s is f(z, s). The time argument of the driving function is
//! reversed because the target map at time s is rebuilt from an
//! initial-value problem running forward from the identity — a no-op for
//! time-constant driving.
//!
//! Characteristics are integrated in logarithmic coordinates u = log w,
//! where the flow is an exponential of an integral: du/dt = -p(e^u, s-t).
//! This makes |w| = e^{Re u} monotone by construction (Re p > 0) and keeps
//! the angular lift Im u continuous, which is what the boundary angle map
//! needs. Alongside u the integrator accumulates v = ∫ w p'(w, s-t) dt,
//! whose negative imaginary part is arg(ζ f'/f) on the boundary — the
//! star-likeness defect.
//!
//! Each boundary trajectory is independent; they are integrated in
//! parallel and collected in grid order, so results are deterministic.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::caratheodory::{CaratheodoryError, DrivingFunction};
use crate::curve::{BoundaryCurve, CurveError};
use crate::homeo::{CircleHomeo, HomeoError};
use crate::trig::{grid_angle, TrigError, TrigSeries};

/// Minimum ODE step count accepted by a configuration.
pub const MIN_STEPS: usize = 64;

/// Default steps per unit evolution time.
pub const STEPS_PER_UNIT_TIME: usize = 256;

/// Default boundary grid size.
pub const DEFAULT_BOUNDARY_N: usize = 512;

/// Tolerance on |w| ≤ 1 along a trajectory before the integrator is
/// declared broken.
pub const DISK_EXIT_TOL: f64 = 1e-10;

/// Default step count for an evolution to time t: 256 per unit time with
/// a floor of [`MIN_STEPS`].
pub fn default_steps(t: f64) -> usize {
    ((STEPS_PER_UNIT_TIME as f64 * t).ceil() as usize).max(MIN_STEPS)
}

/// Slack allowed on per-step monotonicity of |w|.
pub const MODULUS_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("configuration: {0}")]
    InvalidConfig(String),
    #[error("trajectory exited the closed disk (log|w| = {log_modulus:.3e} at step {step})")]
    DiskExit { log_modulus: f64, step: usize },
    #[error("|w| increased beyond slack at step {step} (d log|w| = {increase:.3e})")]
    ModulusIncrease { step: usize, increase: f64 },
    #[error("angle map lost monotonicity (t too large for the star-like regime): {0}")]
    AngleMapNonMonotone(HomeoError),
    #[error(transparent)]
    Driving(#[from] CaratheodoryError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Grid(#[from] TrigError),
}

/// Evolution problem: driving function, final time, step count and
/// boundary grid size.
#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    pub driving: DrivingFunction,
    pub t_final: f64,
    pub steps: usize,
    pub boundary_n: usize,
}

impl EvolutionConfig {
    /// Configuration with default resolution: 256 steps per unit time
    /// (at least [`MIN_STEPS`]) on a 512-point boundary grid.
    pub fn new(driving: DrivingFunction, t_final: f64) -> Result<Self, EvolutionError> {
        Self::with_resolution(driving, t_final, default_steps(t_final), DEFAULT_BOUNDARY_N)
    }

    pub fn with_resolution(
        driving: DrivingFunction,
        t_final: f64,
        steps: usize,
        boundary_n: usize,
    ) -> Result<Self, EvolutionError> {
        if !t_final.is_finite() || t_final < 0.0 {
            return Err(EvolutionError::InvalidConfig(format!(
                "t_final = {t_final} must be a finite non-negative real"
            )));
        }
        if t_final >= driving.horizon() {
            return Err(EvolutionError::InvalidConfig(format!(
                "t_final = {t_final} beyond the driving horizon {}",
                driving.horizon()
            )));
        }
        if steps < MIN_STEPS {
            return Err(EvolutionError::InvalidConfig(format!(
                "steps = {steps} below the minimum of {MIN_STEPS}"
            )));
        }
        Ok(Self { driving, t_final, steps, boundary_n })
    }
}

/// State carried along one characteristic: u = log w and the accumulated
/// p'-integral v = ∫ w p'(w, s-t) dt.
#[derive(Debug, Clone, Copy)]
struct FlowState {
    u: Complex64,
    v: Complex64,
}

/// A single characteristic trajectory in log coordinates.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times 0 = t_0 < … < t_steps = t.
    pub times: Vec<f64>,
    /// log w at each time.
    pub log_w: Vec<Complex64>,
    /// ∫ w p' dt at each time.
    pub pprime_integral: Vec<Complex64>,
}

impl Trajectory {
    /// Endpoint w(t) = e^{u(t)}.
    pub fn endpoint(&self) -> Complex64 {
        self.log_w.last().expect("trajectory is never empty").exp()
    }

    pub fn endpoint_log(&self) -> Complex64 {
        *self.log_w.last().expect("trajectory is never empty")
    }
}

fn rhs(
    driving: &DrivingFunction,
    s: f64,
    t: f64,
    state: FlowState,
) -> Result<FlowState, EvolutionError> {
    // reversed driving time, clamped against roundoff at the endpoints
    let tau = (s - t).clamp(0.0, s);
    let w = state.u.exp();
    let (p, dp, _) = driving.eval_derivs(w, tau)?;
    Ok(FlowState { u: -p, v: w * dp })
}

fn rk4_step(
    driving: &DrivingFunction,
    s: f64,
    t: f64,
    h: f64,
    state: FlowState,
) -> Result<FlowState, EvolutionError> {
    let add = |a: FlowState, k: FlowState, c: f64| FlowState { u: a.u + c * k.u, v: a.v + c * k.v };
    let k1 = rhs(driving, s, t, state)?;
    let k2 = rhs(driving, s, t + 0.5 * h, add(state, k1, 0.5 * h))?;
    let k3 = rhs(driving, s, t + 0.5 * h, add(state, k2, 0.5 * h))?;
    let k4 = rhs(driving, s, t + h, add(state, k3, h))?;
    Ok(FlowState {
        u: state.u + (h / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
        v: state.v + (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
    })
}

fn integrate_from_log(
    driving: &DrivingFunction,
    u0: Complex64,
    t: f64,
    steps: usize,
) -> Result<Trajectory, EvolutionError> {
    let h = t / steps as f64;
    let mut state = FlowState { u: u0, v: Complex64::new(0.0, 0.0) };
    let mut times = Vec::with_capacity(steps + 1);
    let mut log_w = Vec::with_capacity(steps + 1);
    let mut pprime = Vec::with_capacity(steps + 1);
    times.push(0.0);
    log_w.push(state.u);
    pprime.push(state.v);
    for step in 0..steps {
        let t_step = step as f64 * h;
        let prev_re = state.u.re;
        state = rk4_step(driving, t, t_step, h, state)?;
        if state.u.re > prev_re + MODULUS_SLACK {
            return Err(EvolutionError::ModulusIncrease {
                step: step + 1,
                increase: state.u.re - prev_re,
            });
        }
        if state.u.re > DISK_EXIT_TOL {
            return Err(EvolutionError::DiskExit { log_modulus: state.u.re, step: step + 1 });
        }
        times.push((step + 1) as f64 * h);
        log_w.push(state.u);
        pprime.push(state.v);
    }
    Ok(Trajectory { times, log_w, pprime_integral: pprime })
}

/// Integrates the characteristic dw/dt = -w p(w, t_final - t) from w(0) = z0
/// to its endpoint f(z0, t_final), retaining the full trajectory.
///
/// |w| is checked non-increasing at every step (Re p > 0 makes the exact
/// flow contractive) and the trajectory must stay in the closed disk.
pub fn integrate_characteristic(
    driving: &DrivingFunction,
    z0: Complex64,
    t: f64,
    steps: usize,
) -> Result<Trajectory, EvolutionError> {
    if steps == 0 {
        return Err(EvolutionError::InvalidConfig("steps must be positive".into()));
    }
    if z0.norm() > 1.0 + 1e-12 {
        return Err(EvolutionError::InvalidConfig(format!(
            "|z0| = {} outside the closed disk",
            z0.norm()
        )));
    }
    if z0.norm() == 0.0 {
        // the origin is a fixed point of the flow
        let times: Vec<f64> = (0..=steps).map(|j| t * j as f64 / steps as f64).collect();
        let n = times.len();
        return Ok(Trajectory {
            times,
            log_w: vec![Complex64::new(f64::NEG_INFINITY, 0.0); n],
            pprime_integral: vec![Complex64::new(0.0, 0.0); n],
        });
    }
    integrate_from_log(driving, z0.ln(), t, steps)
}

/// Boundary trajectory record of one evolution time.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    /// Evolution time.
    pub t: f64,
    /// Evolved curve, deficit resampled to the uniform polar grid.
    pub curve: BoundaryCurve,
    /// Angle map φ ↦ ψ_t (polar angle of the image of e^{iφ}).
    pub angle_map: CircleHomeo,
    /// Boundary images f(e^{iφ_j}, t).
    pub raw_points: Vec<Complex64>,
    /// log f'(e^{iφ_j}, t) along the flow.
    pub log_deriv: Vec<Complex64>,
    /// arg(ζ f'/f) samples — the star-likeness defect angles.
    pub star_defect: Vec<f64>,
}

/// Evolves the full boundary grid to cfg.t_final.
///
/// For every ζ_j = e^{iφ_j}: δ_t = 1 - |f(ζ_j, t)| and ψ_t = arg f(ζ_j, t)
/// as a continuous lift; the deficit is then resampled to the uniform ψ
/// grid through the inverse angle map so the result is again a polar-form
/// curve.
pub fn evolve_boundary(cfg: &EvolutionConfig) -> Result<EvolutionResult, EvolutionError> {
    let n = cfg.boundary_n;
    let s = cfg.t_final;
    let endpoints: Vec<(Complex64, Complex64)> = (0..n)
        .into_par_iter()
        .map(|j| {
            let u0 = Complex64::new(0.0, grid_angle(n, j));
            integrate_from_log(&cfg.driving, u0, s, cfg.steps)
                .map(|traj| (traj.endpoint_log(), *traj.pprime_integral.last().unwrap()))
        })
        .collect::<Result<_, _>>()?;

    let mut psi_lift = Vec::with_capacity(n);
    let mut delta_at_phi = Vec::with_capacity(n);
    let mut raw_points = Vec::with_capacity(n);
    let mut log_deriv = Vec::with_capacity(n);
    let mut star_defect = Vec::with_capacity(n);
    for (j, &(u, v)) in endpoints.iter().enumerate() {
        let phi = grid_angle(n, j);
        psi_lift.push(u.im);
        delta_at_phi.push(1.0 - u.re.exp());
        raw_points.push(u.exp());
        // log f' = -∫ (p + w p') dt; the first integral is u(0) - u(s)
        log_deriv.push(u - Complex64::new(0.0, phi) - v);
        star_defect.push(-v.im);
    }

    let angle_map =
        CircleHomeo::from_lift_samples(psi_lift).map_err(EvolutionError::AngleMapNonMonotone)?;

    // Resample δ_t(ψ) onto the uniform ψ grid: δ as a function of φ is
    // band-limited, so evaluate it at φ = ψ_t^{-1}(ψ_j).
    let delta_of_phi = TrigSeries::analyze_real(&delta_at_phi)?;
    let mut delta_uniform = Vec::with_capacity(n);
    for j in 0..n {
        let psi = grid_angle(n, j);
        let phi = angle_map.inverse(psi);
        delta_uniform.push(delta_of_phi.eval_real(phi));
    }
    let curve = BoundaryCurve::new(TrigSeries::analyze_real(&delta_uniform)?)?;

    Ok(EvolutionResult { t: s, curve, angle_map, raw_points, log_deriv, star_defect })
}

/// Measured linear-decay ratios (sup|δ_t|/t, sup|δ_t'|/t, sup|δ_t''|/t):
/// all three stay bounded as t → 0, with the first converging to
/// sup_θ Re p(e^{iθ}, 0).
///
/// Panics if the result was evolved to t = 0.
pub fn regularity_ratios(result: &EvolutionResult) -> (f64, f64, f64) {
    assert!(result.t > 0.0, "regularity ratios need t > 0");
    let c = &result.curve;
    (
        c.delta().sup_norm() / result.t,
        c.delta_deriv().sup_norm() / result.t,
        c.delta_deriv2().sup_norm() / result.t,
    )
}

/// Sup over the boundary grid of |arg(ζ f'/f)|; below π/2 exactly when the
/// evolved curve is star-like in the measured sense.
pub fn star_angle_defect(result: &EvolutionResult) -> f64 {
    result.star_defect.iter().map(|d| d.abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::DrivingTerm;
    use approx::assert_abs_diff_eq;

    fn driving_03z() -> DrivingFunction {
        DrivingFunction::new(
            vec![DrivingTerm::constant(Complex64::new(0.3, 0.0), 1)],
            f64::INFINITY,
        )
        .unwrap()
    }

    #[test]
    fn pure_scaling_flow_is_exact() {
        let p = DrivingFunction::constant_one();
        let traj =
            integrate_characteristic(&p, Complex64::new(1.0, 0.0), 1.0, 64).unwrap();
        assert!((traj.endpoint() - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-14);
        for &z0 in &[Complex64::new(0.3, 0.4), Complex64::new(0.0, -0.9)] {
            let t = 0.37;
            let traj = integrate_characteristic(&p, z0, t, 64).unwrap();
            assert!((traj.endpoint() - z0 * (-t).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn origin_is_fixed() {
        let traj =
            integrate_characteristic(&driving_03z(), Complex64::new(0.0, 0.0), 0.5, 64).unwrap();
        assert_eq!(traj.endpoint(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn richardson_step_halving_agreement() {
        let p = driving_03z();
        let z0 = Complex64::new(1.0, 0.0);
        let coarse = integrate_characteristic(&p, z0, 0.1, 128).unwrap().endpoint();
        let fine = integrate_characteristic(&p, z0, 0.1, 256).unwrap().endpoint();
        assert!((coarse - fine).norm() < 1e-10);
    }

    #[test]
    fn modulus_is_monotone_along_trajectories() {
        let p = driving_03z();
        let traj = integrate_characteristic(&p, Complex64::new(0.0, 1.0), 0.8, 256).unwrap();
        for pair in traj.log_w.windows(2) {
            assert!(pair[1].re <= pair[0].re + MODULUS_SLACK);
        }
    }

    #[test]
    fn semigroup_composition_for_autonomous_driving() {
        let p = driving_03z();
        let z0 = Complex64::from_polar(1.0, 0.7);
        let whole = integrate_characteristic(&p, z0, 0.4, 512).unwrap().endpoint();
        let first = integrate_characteristic(&p, z0, 0.25, 320).unwrap().endpoint();
        let second = integrate_characteristic(&p, first, 0.15, 192).unwrap().endpoint();
        assert!((whole - second).norm() < 1e-10);
    }

    #[test]
    fn circles_evolve_to_circles() {
        let cfg = EvolutionConfig::new(DrivingFunction::constant_one(), 0.3).unwrap();
        let res = evolve_boundary(&cfg).unwrap();
        let radius = (-0.3f64).exp();
        for w in &res.raw_points {
            assert_abs_diff_eq!(w.norm(), radius, epsilon = 1e-12);
        }
        for v in res.curve.delta().values() {
            assert_abs_diff_eq!(v.re, 1.0 - radius, epsilon = 1e-12);
        }
        // angle map is the identity
        assert!(res.angle_map.max_deviation() < 1e-12);
        let (r0, r1, r2) = regularity_ratios(&res);
        assert_abs_diff_eq!(r0, (1.0 - radius) / 0.3, epsilon = 1e-10);
        assert!(r1 < 1e-10 && r2 < 1e-9);
        assert_eq!(star_angle_defect(&res), 0.0);
    }

    #[test]
    fn zero_time_is_identity() {
        let cfg = EvolutionConfig::new(driving_03z(), 0.0).unwrap();
        let res = evolve_boundary(&cfg).unwrap();
        assert!(res.curve.delta().sup_norm() < 1e-14);
        assert!(res.angle_map.max_deviation() < 1e-14);
    }

    #[test]
    fn deficit_first_order_matches_driving() {
        // δ_t(ψ_t)/t → Re p(e^{iφ(ψ_t)}, 0) with first-order rate
        let p = driving_03z();
        let t_list = [0.08, 0.04, 0.02, 0.01];
        let mut errs = Vec::new();
        for &t in &t_list {
            let cfg = EvolutionConfig::new(p.clone(), t).unwrap();
            let res = evolve_boundary(&cfg).unwrap();
            let n = res.curve.n();
            let mut sup = 0.0f64;
            for j in 0..n {
                let psi = grid_angle(n, j);
                let phi = res.angle_map.inverse(psi);
                let re_p = p.eval(Complex64::from_polar(1.0, phi), 0.0).unwrap().re;
                let ratio = res.curve.delta().values()[j].re / t;
                sup = sup.max((ratio - re_p).abs());
            }
            errs.push(sup);
        }
        let fit = crate::fit::fit_loglog(&t_list, &errs, 1e-10);
        assert!(fit.slope >= 0.9, "first-order rate too low: {}", fit.slope);
    }

    #[test]
    fn evolution_matches_characteristics_pointwise() {
        let p = driving_03z();
        let cfg = EvolutionConfig::with_resolution(p.clone(), 0.05, 64, 64).unwrap();
        let res = evolve_boundary(&cfg).unwrap();
        for j in 0..64 {
            let z0 = Complex64::from_polar(1.0, grid_angle(64, j));
            let traj = integrate_characteristic(&p, z0, 0.05, 64).unwrap();
            assert!((res.raw_points[j] - traj.endpoint()).norm() < 1e-10);
        }
    }

    #[test]
    fn star_defect_scales_linearly() {
        let p = driving_03z();
        let mut prev = f64::INFINITY;
        for &t in &[0.08, 0.04, 0.02] {
            let cfg = EvolutionConfig::new(p.clone(), t).unwrap();
            let res = evolve_boundary(&cfg).unwrap();
            let defect = star_angle_defect(&res);
            assert!(defect < std::f64::consts::FRAC_PI_2);
            assert!(defect / t < 0.5, "defect/t = {}", defect / t);
            assert!(defect < prev);
            prev = defect;
        }
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            EvolutionConfig::new(driving_03z(), -1.0),
            Err(EvolutionError::InvalidConfig(_))
        ));
        let bounded = DrivingFunction::new(
            vec![DrivingTerm::constant(Complex64::new(0.2, 0.0), 1)],
            0.5,
        )
        .unwrap();
        assert!(matches!(
            EvolutionConfig::new(bounded, 0.5),
            Err(EvolutionError::InvalidConfig(_))
        ));
        assert!(matches!(
            EvolutionConfig::with_resolution(driving_03z(), 0.1, 32, 512),
            Err(EvolutionError::InvalidConfig(_))
        ));
    }
}
