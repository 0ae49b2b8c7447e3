//! Numerical laboratory for Löwner-Kufarev evolution and asymptotic
//! conformal welding of near-circular Jordan domains.
//!
//! The crate has three layers:
//!
//! * spectral primitives on the circle ([`trig`], [`homeo`], [`curve`]) —
//!   Fourier analysis, Schwarz integrals, principal-value conjugation,
//!   monotone circle maps and polar-form curves;
//! * the evolution and its closed-form asymptotics ([`caratheodory`],
//!   [`evolution`], [`asymptotic`]) — Carathéodory driving polynomials,
//!   the characteristic integrator of ∂_t f = -z f_z p(z,t), first-order
//!   maps and weldings;
//! * independent ground truth and verification ([`oracle`], [`verify`],
//!   [`fit`]) — Theodorsen-type conformal mapping, true weldings,
//!   capacity extraction, and convergence-order measurement of every
//!   asymptotic relation against the oracle.
//!
//! All values are immutable after construction and safe to share across
//! threads; the evolution integrates boundary characteristics in parallel
//! with deterministic results.

pub mod asymptotic;
pub mod caratheodory;
pub mod curve;
pub mod evolution;
pub mod fit;
pub mod homeo;
pub mod oracle;
pub mod trig;
pub mod verify;

pub use asymptotic::WeldingRecord;
pub use caratheodory::{DrivingFunction, DrivingTerm, ExteriorDriving};
pub use curve::BoundaryCurve;
pub use evolution::{EvolutionConfig, EvolutionResult, Trajectory};
pub use fit::FitResult;
pub use homeo::CircleHomeo;
pub use oracle::{LebedevReport, MapSolution, Side, TheodorsenParams};
pub use trig::TrigSeries;

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;
