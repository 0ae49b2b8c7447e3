//! Monotone degree-1 circle maps (boundary correspondences and weldings).
//!
//! A map is stored through its lift samples v_j at θ_j = 2πj/n. The
//! deviation v(θ) - θ is 2π-periodic and is interpolated spectrally, so
//! evaluation between nodes inherits the accuracy of the underlying data
//! rather than the O(h²) of piecewise schemes. Inversion is bisection on
//! the monotone lift.

use thiserror::Error;

use crate::trig::{grid_angle, TrigError, TrigSeries};

/// Absolute tolerance of the bisection inverse.
pub const INVERSE_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum HomeoError {
    #[error("lift samples are not strictly increasing at index {0}")]
    NotMonotone(usize),
    #[error("lift does not close up to degree one (wrap increment {0:.3e} ≤ 0)")]
    NotDegreeOne(f64),
    #[error(transparent)]
    Grid(#[from] TrigError),
}

/// Monotone degree-1 map of the circle, v(x + 2π) = v(x) + 2π.
#[derive(Debug, Clone)]
pub struct CircleHomeo {
    lift: Vec<f64>,
    deviation: TrigSeries,
}

impl CircleHomeo {
    /// The identity map on an n-point grid.
    pub fn identity(n: usize) -> Result<Self, HomeoError> {
        Self::from_lift_samples((0..n).map(|j| grid_angle(n, j)).collect())
    }

    /// Builds a map from lift samples at the uniform grid, rejecting
    /// non-monotone or degree≠1 data.
    pub fn from_lift_samples(lift: Vec<f64>) -> Result<Self, HomeoError> {
        let n = lift.len();
        for j in 0..n - 1 {
            if lift[j + 1] <= lift[j] {
                return Err(HomeoError::NotMonotone(j + 1));
            }
        }
        let wrap = lift[0] + 2.0 * std::f64::consts::PI - lift[n - 1];
        if wrap <= 0.0 {
            return Err(HomeoError::NotDegreeOne(wrap));
        }
        let dev: Vec<f64> = lift
            .iter()
            .enumerate()
            .map(|(j, &v)| v - grid_angle(n, j))
            .collect();
        let deviation = TrigSeries::analyze_real(&dev)?;
        Ok(Self { lift, deviation })
    }

    pub fn n(&self) -> usize {
        self.lift.len()
    }

    /// Lift samples at the grid nodes.
    pub fn samples(&self) -> &[f64] {
        &self.lift
    }

    /// Lift evaluation at an arbitrary point.
    pub fn eval(&self, x: f64) -> f64 {
        x + self.deviation.eval_real(x)
    }

    /// Sup norm of the deviation from the identity.
    pub fn max_deviation(&self) -> f64 {
        self.deviation.sup_norm()
    }

    /// Inverse lift value: the x with eval(x) = y, by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        let pad = self.max_deviation() + 0.1;
        let mut lo = y - pad;
        let mut hi = y + pad;
        debug_assert!(self.eval(lo) <= y && self.eval(hi) >= y);
        while hi - lo > INVERSE_TOL {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The inverse map, sampled on the same grid.
    pub fn inverse_homeo(&self) -> Result<CircleHomeo, HomeoError> {
        let n = self.n();
        let lift = (0..n).map(|j| self.inverse(grid_angle(n, j))).collect();
        Self::from_lift_samples(lift)
    }
}
