//! Star-like Jordan curves in polar form r(ψ) = 1 - δ(ψ).
//!
//! The deficit δ is held as a real trigonometric series together with its
//! first two spectral derivatives; the size parameter ε is the largest of
//! the three grid sup-norms. A positive radius is required everywhere —
//! any curve with a single-valued polar equation is automatically
//! star-like with respect to the origin.

use thiserror::Error;

use crate::trig::{TrigError, TrigSeries};

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("deficit series must be real-valued")]
    NonReal,
    #[error("polar radius 1 - delta is not positive at psi = {psi:.6} (delta = {delta:.6})")]
    NonPositiveRadius { psi: f64, delta: f64 },
    #[error(transparent)]
    Grid(#[from] TrigError),
}

/// Near-unit-circle Jordan curve r(ψ) = 1 - δ(ψ) with cached derivative
/// data and size ε = max(sup|δ|, sup|δ'|, sup|δ''|).
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    delta: TrigSeries,
    d1: TrigSeries,
    d2: TrigSeries,
    epsilon: f64,
}

impl BoundaryCurve {
    pub fn new(delta: TrigSeries) -> Result<Self, CurveError> {
        if !delta.is_real() {
            return Err(CurveError::NonReal);
        }
        for (j, v) in delta.values().iter().enumerate() {
            if v.re >= 1.0 {
                return Err(CurveError::NonPositiveRadius {
                    psi: crate::trig::grid_angle(delta.n(), j),
                    delta: v.re,
                });
            }
        }
        let d1 = delta.derivative();
        let d2 = d1.derivative();
        let epsilon = delta.sup_norm().max(d1.sup_norm()).max(d2.sup_norm());
        Ok(Self { delta, d1, d2, epsilon })
    }

    /// Samples δ(ψ) on an n-point grid and builds the curve.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, CurveError> {
        Self::new(TrigSeries::from_fn_real(n, f)?)
    }

    pub fn n(&self) -> usize {
        self.delta.n()
    }

    pub fn delta(&self) -> &TrigSeries {
        &self.delta
    }

    pub fn delta_deriv(&self) -> &TrigSeries {
        &self.d1
    }

    pub fn delta_deriv2(&self) -> &TrigSeries {
        &self.d2
    }

    /// ε of the curve, the common bound on |δ|, |δ'|, |δ''|.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Polar radius r(ψ) = 1 - δ(ψ).
    pub fn radius(&self, psi: f64) -> f64 {
        1.0 - self.delta.eval_real(psi)
    }

    /// sup |d log r / dψ| = sup |δ' / (1 - δ)| over the grid — the
    /// Theodorsen contraction number of the curve.
    pub fn log_radius_deriv_sup(&self) -> f64 {
        self.d1
            .values()
            .iter()
            .zip(self.delta.values())
            .map(|(d, v)| (d.re / (1.0 - v.re)).abs())
            .fold(0.0, f64::max)
    }

    /// sup |arg( tangent vs radial )| = sup |atan(r'/r)| over the grid;
    /// strictly below π/2 for every valid polar curve.
    pub fn star_angle_sup(&self) -> f64 {
        self.log_radius_deriv_sup().atan()
    }

    /// The curve rotated by angle a, i.e. deficit δ(ψ - a), performed
    /// exactly in coefficient space.
    pub fn rotate(&self, a: f64) -> Result<Self, CurveError> {
        let n = self.delta.n();
        let half = (n / 2) as i64;
        let mut coeffs = vec![num_complex::Complex64::new(0.0, 0.0); n];
        for k in -half..half {
            let m = if k >= 0 { k as usize } else { (k + n as i64) as usize };
            coeffs[m] =
                self.delta.coeff(k) * num_complex::Complex64::from_polar(1.0, -(k as f64) * a);
        }
        Self::new(TrigSeries::from_coeffs(coeffs, true))
    }
}
