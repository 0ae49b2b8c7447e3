//! Spectral primitives on the unit circle.
//!
//! Periodic boundary data lives on the uniform grid θ_j = 2πj/n and is
//! represented by its Fourier coefficients c_k, k ∈ [-n/2, n/2), with the
//! convention c_k = (1/n) Σ_j v_j e^{-ikθ_j}. On this grid the trapezoid
//! rule and the discrete Fourier transform coincide, so analysis is exact
//! on trigonometric polynomials of degree < n/2.
//!
//! Besides analysis/synthesis the module provides the two boundary
//! integrals everything downstream is built from:
//!
//! * the Schwarz integral S\[δ\](z) = (1/2π)∫ δ(ψ)(e^{iψ}+z)/(e^{iψ}-z) dψ,
//!   evaluated spectrally as c_0 + 2 Σ_{k≥1} c_k z^k;
//! * the principal-value conjugation
//!   h(x) = (1/2π)∫ (δ(ψ)-δ(x)) cot((ψ-x)/2) dψ,
//!   realized as the Fourier multiplier h_k = i·sgn(k)·c_k.
//!
//! The multiplier sign is pinned by [`pv_quadrature`], the direct trapezoid
//! evaluation of the cotangent integral (with the removable-singularity
//! value 2δ'(x) on the diagonal), which stays in the crate as an
//! independent cross-check. Note the kernel here is cot((ψ-x)/2); the
//! classical conjugate function uses cot((x-ψ)/2), so h is the *negative*
//! of the textbook conjugate.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

/// Smallest admissible grid.
pub const MIN_GRID: usize = 16;

/// Relative coefficient-tail threshold above which a series is considered
/// under-resolved (aliasing suspected).
pub const TAIL_DECAY_THRESHOLD: f64 = 1e-10;

/// Errors produced by grid construction and the spectral operators.
#[derive(Debug, Error)]
pub enum TrigError {
    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("grid size {0} is below the minimum of {MIN_GRID}")]
    GridTooSmall(usize),
    #[error("operation requires a real-valued series")]
    NonRealInput,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

fn check_grid(n: usize) -> Result<(), TrigError> {
    if !n.is_power_of_two() {
        return Err(TrigError::NotPowerOfTwo(n));
    }
    if n < MIN_GRID {
        return Err(TrigError::GridTooSmall(n));
    }
    Ok(())
}

/// Grid angle θ_j = 2πj/n.
#[inline]
pub fn grid_angle(n: usize, j: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

/// All grid angles of an n-point grid.
pub fn grid_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| grid_angle(n, j)).collect()
}

/// A 2π-periodic function sampled on the uniform grid together with its
/// Fourier coefficients.
///
/// Coefficients are stored in FFT order: slot m holds c_k with k = m for
/// m < n/2 and k = m - n otherwise. `real` marks conjugate-symmetric
/// spectra (c_{-k} = conj(c_k)).
#[derive(Debug, Clone)]
pub struct TrigSeries {
    n: usize,
    values: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl TrigSeries {
    /// Fourier analysis of complex samples on the uniform grid.
    pub fn analyze(samples: &[Complex64]) -> Result<Self, TrigError> {
        check_grid(samples.len())?;
        let n = samples.len();
        let mut buf = samples.to_vec();
        plan_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Ok(Self {
            n,
            values: samples.to_vec(),
            coeffs: buf,
            real: false,
        })
    }

    /// Fourier analysis of real samples; the result carries the real flag.
    pub fn analyze_real(samples: &[f64]) -> Result<Self, TrigError> {
        let complex: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut series = Self::analyze(&complex)?;
        series.real = true;
        Ok(series)
    }

    /// Samples a real function on the n-point grid and analyzes it.
    pub fn from_fn_real(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, TrigError> {
        check_grid(n)?;
        let samples: Vec<f64> = (0..n).map(|j| f(grid_angle(n, j))).collect();
        Self::analyze_real(&samples)
    }

    /// Rebuilds a series from coefficients in FFT order.
    pub(crate) fn from_coeffs(coeffs: Vec<Complex64>, real: bool) -> Self {
        let n = coeffs.len();
        let mut buf = coeffs.clone();
        plan_inverse(n).process(&mut buf);
        if real {
            // Conjugate-symmetric spectra synthesize to real values up to
            // roundoff; drop the noise so the real flag stays honest.
            for v in &mut buf {
                v.im = 0.0;
            }
        }
        Self {
            n,
            values: buf,
            coeffs,
            real,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Real parts of the samples (the samples themselves for real series).
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Coefficient c_k for k ∈ [-n/2, n/2).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let half = (self.n / 2) as i64;
        debug_assert!(k >= -half && k < half, "frequency {k} out of range");
        let m = if k >= 0 { k as usize } else { (k + self.n as i64) as usize };
        self.coeffs[m]
    }

    /// Coefficients in FFT order (slot m ↔ k = m for m < n/2, else m - n).
    pub fn coeffs_fft_order(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mean value c_0.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Sup norm over the grid samples.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Ratio of the largest coefficient with |k| ≥ n/4 to the largest
    /// coefficient overall. Large values indicate aliasing.
    pub fn tail_ratio(&self) -> f64 {
        let half = (self.n / 2) as i64;
        let quarter = half / 2;
        let mut max_all: f64 = 0.0;
        let mut max_tail: f64 = 0.0;
        for k in -half..half {
            let a = self.coeff(k).norm();
            max_all = max_all.max(a);
            if k.abs() >= quarter {
                max_tail = max_tail.max(a);
            }
        }
        if max_all == 0.0 {
            0.0
        } else {
            max_tail / max_all
        }
    }

    /// True when the coefficient tail has decayed below the resolution
    /// threshold, i.e. the grid resolves the sampled function.
    pub fn resolution_ok(&self) -> bool {
        self.tail_ratio() <= TAIL_DECAY_THRESHOLD
    }

    /// Trigonometric interpolation at an arbitrary angle.
    ///
    /// Evaluates Σ c_k e^{ikθ} by two Horner recurrences in e^{±iθ}. For
    /// real series the Nyquist coefficient contributes c_{-n/2}·cos(nθ/2)
    /// so the interpolant stays real off the grid.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let half = self.n / 2;
        let w = Complex64::from_polar(1.0, theta);
        let wb = w.conj();
        // positive frequencies 0..n/2-1
        let mut pos = Complex64::new(0.0, 0.0);
        for k in (0..half).rev() {
            pos = pos * w + self.coeffs[k];
        }
        // negative frequencies -1..-(n/2-1)
        let mut neg = Complex64::new(0.0, 0.0);
        for k in (1..half).rev() {
            neg = neg * wb + self.coeffs[self.n - k];
        }
        neg *= wb;
        let nyquist = self.coeffs[half];
        let ny = if self.real {
            nyquist * (0.5 * self.n as f64 * theta).cos()
        } else {
            nyquist * wb.powu(half as u32)
        };
        pos + neg + ny
    }

    /// Interpolation of a real series at an arbitrary angle.
    pub fn eval_real(&self, theta: f64) -> f64 {
        debug_assert!(self.real, "eval_real on a non-real series");
        self.eval(theta).re
    }

    /// Spectral derivative: c_k ↦ ik·c_k (Nyquist zeroed to preserve
    /// realness, standard for odd-order derivatives).
    pub fn derivative(&self) -> TrigSeries {
        let half = (self.n / 2) as i64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.n];
        for k in -half..half {
            let m = if k >= 0 { k as usize } else { (k + self.n as i64) as usize };
            if k == -half {
                continue;
            }
            coeffs[m] = self.coeffs[m] * Complex64::new(0.0, k as f64);
        }
        TrigSeries::from_coeffs(coeffs, self.real)
    }

    /// Synthesis of the stored coefficients back to grid samples
    /// (round-trip partner of [`TrigSeries::analyze`]).
    pub fn synthesize(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        plan_inverse(self.n).process(&mut buf);
        buf
    }
}

/// Schwarz integral S\[δ\](z) of a real series, evaluated spectrally as
/// c_0 + 2 Σ_{k=1}^{n/2-1} c_k z^k. Valid on the closed disk |z| ≤ 1;
/// Re S\[δ\](0) = c_0 and Re S\[δ\](e^{ix}) → δ(x) under grid refinement.
pub fn schwarz_integral(delta: &TrigSeries, z: Complex64) -> Result<Complex64, TrigError> {
    if !delta.is_real() {
        return Err(TrigError::NonRealInput);
    }
    debug_assert!(z.norm() <= 1.0 + 1e-12, "schwarz_integral outside closed disk");
    let half = delta.n() / 2;
    // Horner over k = n/2-1 .. 1
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..half).rev() {
        acc = (acc + delta.coeffs[k]) * z;
    }
    Ok(delta.coeffs[0] + 2.0 * acc)
}

/// Conjugation h of a real series: the Fourier multiplier i·sgn(k), the
/// spectral form of the principal-value integral
/// (1/2π)∫ (δ(ψ)-δ(x)) cot((ψ-x)/2) dψ.
///
/// Emits a resolution warning when the coefficient tail of the input has
/// not decayed (the multiplier is exact per mode, so aliased modes pass
/// straight through). The Nyquist bin is zeroed.
pub fn conjugate_pv(delta: &TrigSeries) -> Result<TrigSeries, TrigError> {
    if !delta.is_real() {
        return Err(TrigError::NonRealInput);
    }
    if !delta.resolution_ok() {
        log::warn!(
            "conjugate_pv: coefficient tail ratio {:.3e} exceeds {:.0e}; grid may be too coarse",
            delta.tail_ratio(),
            TAIL_DECAY_THRESHOLD
        );
    }
    let n = delta.n();
    let half = (n / 2) as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..half {
        let kp = k as usize;
        let km = (n as i64 - k) as usize;
        coeffs[kp] = delta.coeffs[kp] * Complex64::new(0.0, 1.0);
        coeffs[km] = delta.coeffs[km] * Complex64::new(0.0, -1.0);
    }
    Ok(TrigSeries::from_coeffs(coeffs, true))
}

/// Direct trapezoid evaluation of the principal-value cotangent integral
/// at an angle x (on or off the grid). At a grid node with ψ = x the
/// integrand is replaced by its removable-singularity limit 2δ'(x).
///
/// This is the quadrature oracle for [`conjugate_pv`]; it shares no code
/// path with the spectral multiplier.
pub fn pv_quadrature(delta: &TrigSeries, x: f64) -> Result<f64, TrigError> {
    if !delta.is_real() {
        return Err(TrigError::NonRealInput);
    }
    let n = delta.n();
    let deriv = delta.derivative();
    let delta_x = delta.eval_real(x);
    let mut sum = 0.0;
    for j in 0..n {
        let psi = grid_angle(n, j);
        // distance on the circle, singular when ψ ≡ x (mod 2π)
        let d = (psi - x).rem_euclid(2.0 * PI);
        let singular = d < 1e-12 || (2.0 * PI - d) < 1e-12;
        let term = if singular {
            2.0 * deriv.eval_real(x)
        } else {
            (delta.values[j].re - delta_x) / ((psi - x) * 0.5).tan()
        };
        sum += term;
    }
    Ok(sum / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn series_of(n: usize, f: impl Fn(f64) -> f64) -> TrigSeries {
        TrigSeries::from_fn_real(n, f).unwrap()
    }

    #[test]
    fn analyze_rejects_bad_grids() {
        let samples = vec![Complex64::new(1.0, 0.0); 24];
        assert!(matches!(
            TrigSeries::analyze(&samples),
            Err(TrigError::NotPowerOfTwo(24))
        ));
        let samples = vec![Complex64::new(1.0, 0.0); 8];
        assert!(matches!(
            TrigSeries::analyze(&samples),
            Err(TrigError::GridTooSmall(8))
        ));
    }

    #[test]
    fn analyze_constant() {
        let s = series_of(16, |_| 2.5);
        assert_abs_diff_eq!(s.coeff(0).re, 2.5, epsilon = 1e-15);
        for k in 1..8 {
            assert!(s.coeff(k).norm() < 1e-15);
            assert!(s.coeff(-k).norm() < 1e-15);
        }
    }

    #[test]
    fn analyze_single_harmonic() {
        let s = series_of(16, f64::cos);
        assert_abs_diff_eq!(s.coeff(1).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.coeff(-1).re, 0.5, epsilon = 1e-15);
        for k in [-7, -5, -3, -2, 0, 2, 3, 5, 7] {
            assert!(s.coeff(k).norm() < 1e-15, "stray coefficient at k={k}");
        }
    }

    /// Quadrature oracle for the analysis coefficients: composite trapezoid
    /// of (1/2π)∫ f(θ) e^{-ikθ} dθ on a much finer grid.
    fn coeff_by_quadrature(f: impl Fn(f64) -> f64, k: i64, m: usize) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let theta = 2.0 * PI * j as f64 / m as f64;
            sum += f(theta) * Complex64::from_polar(1.0, -(k as f64) * theta);
        }
        sum / m as f64
    }

    #[test]
    fn analyze_matches_quadrature_on_exp_cos() {
        let f = |theta: f64| theta.cos().exp();
        let s = series_of(64, f);
        for k in -10..=10 {
            let expected = coeff_by_quadrature(f, k, 8192);
            assert!(
                (s.coeff(k) - expected).norm() < 1e-10,
                "coefficient mismatch at k={k}"
            );
        }
    }

    #[test]
    fn round_trip_is_tight() {
        let s = series_of(128, |t| (2.0 * t).sin() + 0.3 * (5.0 * t).cos());
        let back = s.synthesize();
        let max_err = s
            .values()
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-12 * s.sup_norm().max(1.0));
    }

    #[test]
    fn eval_interpolates_off_grid() {
        let s = series_of(64, |t| (3.0 * t).cos() - 0.4 * t.sin());
        for &theta in &[0.1f64, 1.7, 3.9, 6.1] {
            let expected = (3.0 * theta).cos() - 0.4 * theta.sin();
            assert_abs_diff_eq!(s.eval_real(theta), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_is_spectral() {
        let s = series_of(64, |t| (2.0 * t).sin());
        let d = s.derivative();
        for &theta in &[0.0, 0.3, 2.2, 5.5] {
            assert_abs_diff_eq!(d.eval_real(theta), 2.0 * (2.0 * theta).cos(), epsilon = 1e-12);
        }
        assert!(d.is_real());
    }

    #[test]
    fn schwarz_constant_is_identity_on_poisson_kernel() {
        let eps = 0.07;
        let s = series_of(32, |_| eps);
        for &z in &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, -0.2),
            Complex64::new(0.0, 0.999),
        ] {
            let v = schwarz_integral(&s, z).unwrap();
            assert!((v - eps).norm() < 1e-14);
        }
    }

    /// Direct quadrature of the Schwarz kernel integral, the oracle for the
    /// spectral form (only valid safely away from the boundary).
    fn schwarz_by_quadrature(f: impl Fn(f64) -> f64, z: Complex64, m: usize) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let psi = 2.0 * PI * j as f64 / m as f64;
            let e = Complex64::from_polar(1.0, psi);
            sum += f(psi) * (e + z) / (e - z);
        }
        sum / m as f64
    }

    #[test]
    fn schwarz_cos_matches_kernel_quadrature() {
        let eps = 0.02;
        let s = series_of(64, |p| eps * p.cos());
        for &z in &[Complex64::new(0.3, 0.4), Complex64::new(-0.7, 0.1)] {
            let spectral = schwarz_integral(&s, z).unwrap();
            let oracle = schwarz_by_quadrature(|p| eps * p.cos(), z, 8192);
            assert!((spectral - oracle).norm() < 1e-10);
            assert!((spectral - eps * z).norm() < 1e-12, "closed form S[eps cos] = eps z");
        }
    }

    #[test]
    fn schwarz_sin2_matches_kernel_quadrature() {
        let eps = 0.015;
        let s = series_of(64, |p| eps * (2.0 * p).sin());
        for &z in &[Complex64::new(0.2, -0.5), Complex64::new(0.6, 0.3)] {
            let spectral = schwarz_integral(&s, z).unwrap();
            let oracle = schwarz_by_quadrature(|p| eps * (2.0 * p).sin(), z, 8192);
            assert!((spectral - oracle).norm() < 1e-10);
            let closed = Complex64::new(0.0, -eps) * z * z;
            assert!((spectral - closed).norm() < 1e-12, "closed form -i eps z^2");
        }
    }

    #[test]
    fn schwarz_rejects_complex_series() {
        let samples = vec![Complex64::new(0.0, 1.0); 16];
        let s = TrigSeries::analyze(&samples).unwrap();
        assert!(matches!(
            schwarz_integral(&s, Complex64::new(0.0, 0.0)),
            Err(TrigError::NonRealInput)
        ));
    }

    #[test]
    fn conjugate_of_constant_vanishes() {
        let s = series_of(32, |_| 0.4);
        let h = conjugate_pv(&s).unwrap();
        assert!(h.sup_norm() < 1e-15);
    }

    // The sign convention: for δ = cos ψ the cotangent kernel integrates in
    // closed form to -(sin ψ + sin x)/2π per mode, giving h(x) = -sin x.
    // pv_quadrature pins this before the multiplier is trusted.
    #[test]
    fn conjugate_sign_pinned_by_quadrature() {
        let s = series_of(64, f64::cos);
        let h = conjugate_pv(&s).unwrap();
        for &x in &[0.0, 0.7, PI / 2.0, 4.0] {
            let oracle = pv_quadrature(&s, x).unwrap();
            assert_abs_diff_eq!(h.eval_real(x), oracle, epsilon = 1e-12);
            assert_abs_diff_eq!(oracle, -x.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn conjugate_of_sin3_is_single_harmonic() {
        let s = series_of(64, |p| (3.0 * p).sin());
        let h = conjugate_pv(&s).unwrap();
        assert!((h.coeff(3) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((h.coeff(-3) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        let amp = 2.0 * h.coeff(3).norm();
        assert_abs_diff_eq!(amp, 1.0, epsilon = 1e-13);
        for x in grid_angles(64) {
            let oracle = pv_quadrature(&s, x).unwrap();
            assert_abs_diff_eq!(h.eval_real(x), oracle, epsilon = 1e-11);
        }
    }

    #[test]
    fn pv_quadrature_zero_function() {
        let s = series_of(32, |_| 0.0);
        assert_eq!(pv_quadrature(&s, 1.3).unwrap(), 0.0);
    }

    #[test]
    fn pv_quadrature_agrees_with_multiplier_at_1024() {
        let s = series_of(1024, f64::cos);
        let h = conjugate_pv(&s).unwrap();
        for &x in &[0.0, PI / 2.0] {
            let oracle = pv_quadrature(&s, x).unwrap();
            assert_abs_diff_eq!(h.eval_real(x), oracle, epsilon = 1e-8);
        }
    }

    #[test]
    fn poisson_boundary_value_recovered() {
        // Re S\[δ\](e^{ix}) = δ(x) for band-limited δ.
        let s = series_of(1024, |p| 0.03 * p.cos() + 0.01 * (4.0 * p).sin());
        for &x in &[0.2, 1.1, 3.0, 5.9] {
            let v = schwarz_integral(&s, Complex64::from_polar(1.0, x)).unwrap();
            let delta = 0.03 * x.cos() + 0.01 * (4.0 * x).sin();
            assert_abs_diff_eq!(v.re, delta, epsilon = 1e-8);
            // Im S\[δ\](e^{ix}) = -h(x): the Schwarz integral carries the
            // classical conjugate, h the reversed kernel.
            let h = conjugate_pv(&s).unwrap();
            assert_abs_diff_eq!(v.im, -h.eval_real(x), epsilon = 1e-10);
        }
    }

    #[test]
    fn tail_ratio_flags_aliasing() {
        let smooth = series_of(64, |p| p.cos());
        assert!(smooth.resolution_ok());
        let rough = series_of(64, |p| (31.0 * p).cos());
        assert!(!rough.resolution_ok());
    }
}
