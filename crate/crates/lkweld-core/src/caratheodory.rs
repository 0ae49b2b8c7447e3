//! Driving functions p(z,t) of the Carathéodory class.
//!
//! The model is a finite polynomial 1 + Σ p_k(t) z^k with each coefficient
//! either constant or a single real-rate exponential c·e^{λt}. Polynomials
//! are C² on the closed disk with bounded p, p', p'' for free, which is
//! exactly the regularity the evolution machinery needs; boundary point
//! masses and rougher Herglotz data are deliberately out of scope.
//!
//! Positivity of Re p on D̄ × [0,T) is enforced at construction by a grid
//! scan over the boundary circle (sufficient by harmonicity) and sampled
//! times; constructions whose margin falls below [`MIN_MARGIN`] are
//! rejected with the violating point attached.

use num_complex::Complex64;
use thiserror::Error;

/// Positivity margin below which a driving function is rejected.
pub const MIN_MARGIN: f64 = 1e-3;

/// Boundary grid used by the construction-time positivity scan.
pub const POSITIVITY_GRID: usize = 1024;

/// Number of time samples used by the construction-time positivity scan.
pub const POSITIVITY_TIME_SAMPLES: usize = 64;

/// Horizon substitute for the positivity scan when T = ∞.
const UNBOUNDED_PROBE_HORIZON: f64 = 16.0;

#[derive(Debug, Error)]
pub enum CaratheodoryError {
    #[error(
        "positivity violated: min Re p = {margin:.6e} at theta = {theta:.6}, t = {t:.6} \
         (margin must be ≥ {MIN_MARGIN:.0e})"
    )]
    PositivityViolation { margin: f64, theta: f64, t: f64 },
    #[error("evaluation point |z| = {modulus} outside the closed unit disk")]
    OutsideDisk { modulus: f64 },
    #[error("evaluation point |z| = {modulus} inside the unit circle (exterior function)")]
    InsideDisk { modulus: f64 },
    #[error("time {t} outside the horizon [0, {horizon})")]
    OutsideHorizon { t: f64, horizon: f64 },
    #[error("term with power {0}; powers must be ≥ 1")]
    ZeroPower(u32),
}

/// Time law of one polynomial coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoeffLaw {
    Constant,
    /// c·e^{λt} with real λ.
    Exponential { rate: f64 },
}

/// One term amp(t)·z^power of the driving polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivingTerm {
    pub amp: Complex64,
    pub law: CoeffLaw,
    pub power: u32,
}

impl DrivingTerm {
    pub fn constant(amp: Complex64, power: u32) -> Self {
        Self { amp, law: CoeffLaw::Constant, power }
    }

    pub fn exponential(amp: Complex64, rate: f64, power: u32) -> Self {
        Self { amp, law: CoeffLaw::Exponential { rate }, power }
    }

    fn amp_at(&self, t: f64) -> Complex64 {
        match self.law {
            CoeffLaw::Constant => self.amp,
            CoeffLaw::Exponential { rate } => self.amp * (rate * t).exp(),
        }
    }
}

/// Result of a positivity scan: the minimum of Re p over the scan set and
/// where it was attained.
#[derive(Debug, Clone, Copy)]
pub struct PositivityCheck {
    pub margin: f64,
    pub theta: f64,
    pub t: f64,
}

/// Carathéodory-class driving polynomial p(z,t) = 1 + Σ p_k(t) z^k.
#[derive(Debug, Clone)]
pub struct DrivingFunction {
    terms: Vec<DrivingTerm>,
    horizon: f64,
    margin: f64,
}

impl DrivingFunction {
    /// The rotationally symmetric driving p ≡ 1.
    pub fn constant_one() -> Self {
        Self { terms: Vec::new(), horizon: f64::INFINITY, margin: 1.0 }
    }

    /// Validated construction: runs the positivity scan and rejects
    /// margins below [`MIN_MARGIN`].
    pub fn new(terms: Vec<DrivingTerm>, horizon: f64) -> Result<Self, CaratheodoryError> {
        for term in &terms {
            if term.power == 0 {
                return Err(CaratheodoryError::ZeroPower(0));
            }
        }
        let candidate = Self { terms, horizon, margin: 0.0 };
        let t_samples = candidate.scan_times();
        let check = candidate.positivity_margin(POSITIVITY_GRID, &t_samples);
        if check.margin < MIN_MARGIN {
            return Err(CaratheodoryError::PositivityViolation {
                margin: check.margin,
                theta: check.theta,
                t: check.t,
            });
        }
        Ok(Self { margin: check.margin, ..candidate })
    }

    fn scan_times(&self) -> Vec<f64> {
        let t_max = if self.horizon.is_finite() {
            self.horizon
        } else {
            UNBOUNDED_PROBE_HORIZON
        };
        (0..POSITIVITY_TIME_SAMPLES)
            .map(|i| t_max * i as f64 / POSITIVITY_TIME_SAMPLES as f64)
            .collect()
    }

    /// Minimum of Re p over a boundary grid × the given times. By
    /// harmonicity of Re p the boundary minimum bounds the disk minimum.
    pub fn positivity_margin(&self, boundary_n: usize, t_samples: &[f64]) -> PositivityCheck {
        let mut worst = PositivityCheck { margin: f64::INFINITY, theta: 0.0, t: 0.0 };
        for &t in t_samples {
            for j in 0..boundary_n {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / boundary_n as f64;
                let z = Complex64::from_polar(1.0, theta);
                let re = self.eval_unchecked(z, t).re;
                if re < worst.margin {
                    worst = PositivityCheck { margin: re, theta, t };
                }
            }
        }
        worst
    }

    pub fn terms(&self) -> &[DrivingTerm] {
        &self.terms
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Margin found by the construction-time scan.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// True for p ≡ 1 (no z-dependence; the evolution is a pure scaling).
    pub fn is_constant_one(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_args(&self, z: Complex64, t: f64) -> Result<(), CaratheodoryError> {
        let modulus = z.norm();
        if modulus > 1.0 + 1e-12 {
            return Err(CaratheodoryError::OutsideDisk { modulus });
        }
        if !(0.0..self.horizon).contains(&t) {
            return Err(CaratheodoryError::OutsideHorizon { t, horizon: self.horizon });
        }
        Ok(())
    }

    fn eval_unchecked(&self, z: Complex64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for term in &self.terms {
            acc += term.amp_at(t) * z.powu(term.power);
        }
        acc
    }

    /// p(z,t) on the closed disk.
    pub fn eval(&self, z: Complex64, t: f64) -> Result<Complex64, CaratheodoryError> {
        self.check_args(z, t)?;
        Ok(self.eval_unchecked(z, t))
    }

    /// (p, ∂_z p, ∂_z² p) at (z,t); exact polynomial derivatives.
    pub fn eval_derivs(
        &self,
        z: Complex64,
        t: f64,
    ) -> Result<(Complex64, Complex64, Complex64), CaratheodoryError> {
        self.check_args(z, t)?;
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut ddp = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            let a = term.amp_at(t);
            let k = term.power;
            p += a * z.powu(k);
            dp += a * k as f64 * z.powu(k - 1);
            if k >= 2 {
                ddp += a * (k * (k - 1)) as f64 * z.powu(k - 2);
            }
        }
        Ok((p, dp, ddp))
    }

    /// The reflected exterior driving q with q_k = conj(p_k(0)), so that
    /// q(1/z, 0) = p*(z, 0) = conj(p(conj z, 0)).
    pub fn reflect(&self) -> ExteriorDriving {
        let terms = self
            .terms
            .iter()
            .map(|term| (term.amp_at(0.0).conj(), term.power))
            .collect();
        ExteriorDriving { terms }
    }
}

/// Exterior driving snapshot q(z) = 1 + Σ q_k z^{-k} at t = 0.
#[derive(Debug, Clone)]
pub struct ExteriorDriving {
    terms: Vec<(Complex64, u32)>,
}

impl ExteriorDriving {
    /// Coefficient q_k, zero when the power is absent.
    pub fn coefficient(&self, power: u32) -> Complex64 {
        self.terms
            .iter()
            .filter(|(_, k)| *k == power)
            .map(|(a, _)| *a)
            .sum()
    }

    pub fn terms(&self) -> &[(Complex64, u32)] {
        &self.terms
    }

    /// q(z) on the closed exterior |z| ≥ 1.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, CaratheodoryError> {
        let modulus = z.norm();
        if modulus < 1.0 - 1e-12 {
            return Err(CaratheodoryError::InsideDisk { modulus });
        }
        let w = 1.0 / z;
        let mut acc = Complex64::new(1.0, 0.0);
        for &(amp, power) in &self.terms {
            acc += amp * w.powu(power);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn driving(terms: Vec<DrivingTerm>) -> DrivingFunction {
        DrivingFunction::new(terms, f64::INFINITY).unwrap()
    }

    #[test]
    fn constant_one_everywhere() {
        let p = DrivingFunction::constant_one();
        assert_eq!(p.eval(Complex64::new(0.3, -0.4), 2.0).unwrap(), Complex64::new(1.0, 0.0));
        let (v, d1, d2) = p.eval_derivs(Complex64::new(0.1, 0.1), 0.0).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
        assert_eq!(d1, Complex64::new(0.0, 0.0));
        assert_eq!(d2, Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(p.margin(), 1.0);
    }

    #[test]
    fn linear_term_at_one() {
        let p = driving(vec![DrivingTerm::constant(Complex64::new(0.3, 0.0), 1)]);
        let v = p.eval(Complex64::new(1.0, 0.0), 0.0).unwrap();
        assert_abs_diff_eq!(v.re, 1.3, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exponential_law_decays() {
        // p = 1 + 0.5 e^{-t} z^2 at z = i, t = ln 2: 1 + 0.25·(-1) = 0.75
        let p = driving(vec![DrivingTerm::exponential(Complex64::new(0.5, 0.0), -1.0, 2)]);
        let v = p.eval(Complex64::new(0.0, 1.0), std::f64::consts::LN_2).unwrap();
        assert_abs_diff_eq!(v.re, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn derivative_triple_for_cubic() {
        let a = Complex64::new(0.05, 0.02);
        let p = driving(vec![DrivingTerm::constant(a, 3)]);
        let z = Complex64::new(1.0, 0.0);
        let (v, d1, d2) = p.eval_derivs(z, 0.0).unwrap();
        assert!((v - (Complex64::new(1.0, 0.0) + a)).norm() < 1e-15);
        assert!((d1 - 3.0 * a).norm() < 1e-15);
        assert!((d2 - 6.0 * a).norm() < 1e-15);
    }

    #[test]
    fn derivs_match_finite_differences() {
        let p = driving(vec![
            DrivingTerm::constant(Complex64::new(0.2, 0.1), 1),
            DrivingTerm::constant(Complex64::new(-0.05, 0.15), 3),
        ]);
        let z = Complex64::new(0.4, -0.3);
        let h = 1e-5;
        let (_, d1, d2) = p.eval_derivs(z, 0.0).unwrap();
        let f = |w: Complex64| p.eval(w, 0.0).unwrap();
        let fd1 = (f(z + h) - f(z - h)) / (2.0 * h);
        let fd2 = (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
        assert!((d1 - fd1).norm() / d1.norm() < 1e-8);
        assert!((d2 - fd2).norm() / d2.norm() < 1e-5);
    }

    #[test]
    fn boundary_case_rejected() {
        // p = 1 + z has margin exactly 0 at theta = pi.
        let err = DrivingFunction::new(
            vec![DrivingTerm::constant(Complex64::new(1.0, 0.0), 1)],
            f64::INFINITY,
        )
        .unwrap_err();
        match err {
            CaratheodoryError::PositivityViolation { margin, theta, .. } => {
                assert!(margin.abs() < 1e-12);
                assert_abs_diff_eq!(theta, std::f64::consts::PI, epsilon = 1e-12);
            }
            other => panic!("expected positivity violation, got {other}"),
        }
    }

    #[test]
    fn margin_matches_fine_grid_oracle() {
        // p = 1 + 0.4 z + 0.2 z^2: the minimum of Re p on |z| = 1 is 0.7,
        // attained at cos(theta) = -1/2.
        let p = driving(vec![
            DrivingTerm::constant(Complex64::new(0.4, 0.0), 1),
            DrivingTerm::constant(Complex64::new(0.2, 0.0), 2),
        ]);
        let oracle = p.positivity_margin(8192, &[0.0]).margin;
        assert_abs_diff_eq!(oracle, 0.7, epsilon = 1e-7);
        assert_abs_diff_eq!(p.margin(), oracle, epsilon = 1e-5);
        assert!(p.margin() > 0.0);
    }

    #[test]
    fn maximum_principle_spot_check() {
        let p = driving(vec![DrivingTerm::constant(Complex64::new(0.3, 0.2), 2)]);
        let mu = p.margin();
        // deterministic pseudo-random interior points
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let r = next().sqrt();
            let theta = 2.0 * std::f64::consts::PI * next();
            let z = Complex64::from_polar(r, theta);
            assert!(p.eval(z, 0.0).unwrap().re >= mu - 1e-12);
        }
    }

    #[test]
    fn eval_rejects_bad_arguments() {
        let p = DrivingFunction::new(
            vec![DrivingTerm::constant(Complex64::new(0.2, 0.0), 1)],
            1.0,
        )
        .unwrap();
        assert!(matches!(
            p.eval(Complex64::new(1.1, 0.0), 0.0),
            Err(CaratheodoryError::OutsideDisk { .. })
        ));
        assert!(matches!(
            p.eval(Complex64::new(0.0, 0.0), 1.0),
            Err(CaratheodoryError::OutsideHorizon { .. })
        ));
    }

    #[test]
    fn reflection_conjugates_coefficients() {
        let p = driving(vec![DrivingTerm::constant(Complex64::new(0.2, 0.1), 2)]);
        let q = p.reflect();
        assert_eq!(q.coefficient(2), Complex64::new(0.2, -0.1));
        // reflecting twice restores the original coefficient
        assert_eq!(q.coefficient(2).conj(), p.terms()[0].amp);
        // q(1/z) = p*(z) on a sample point
        let z = Complex64::new(0.5, 0.25);
        let p_star = p.eval(z.conj(), 0.0).unwrap().conj();
        let q_val = q.eval(1.0 / z).unwrap();
        assert!((p_star - q_val).norm() < 1e-14);
    }

    #[test]
    fn pure_rotation_reflects_to_one() {
        let p = DrivingFunction::constant_one();
        let q = p.reflect();
        assert_eq!(q.eval(Complex64::new(2.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn imaginary_coefficient_reflects_with_sign() {
        let p = driving(vec![DrivingTerm::constant(Complex64::new(0.0, 0.5), 1)]);
        let q = p.reflect();
        assert_eq!(q.coefficient(1), Complex64::new(0.0, -0.5));
    }
}
