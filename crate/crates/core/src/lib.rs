//! Uhlmann fidelity of single-mode Gaussian states evolving under the
//! damped-harmonic-oscillator master equation.
//!
//! - [`gaussian`]: states, A-matrices and the two-state fidelity formulas.
//! - [`dynamics`]: closed-form evolution of means and covariances.
//! - [`evolution`]: F(t) against the initial correlated squeezed state, plus
//!   the thermal-bath closed forms and asymptotes.
//! - [`oracle`]: independent RK4 integration of the moment equations.
//! - [`verify`]: randomised cross-checks between all of the above.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod evolution;
pub mod gaussian;
pub mod oracle;
pub mod verify;

pub use dynamics::{
    asymptotic_variances, evolve_means, evolve_state, evolve_variances, propagator,
    thermal_diffusion, thermal_diffusion_unchecked, uncertainty_sigma, validate_constraints,
    ConstraintReport, DiffusionCoeffs, Propagator, SystemParams, ThermalSpec, VarianceVector,
};
pub use error::{Error, Result};
pub use evolution::{
    asymptotic_fidelity, asymptotic_fidelity_displaced, displaced_exponent_asymptotic, fidelity_at,
    fidelity_closed_mu0, fidelity_closed_r0, fidelity_trajectory, initial_state, sigma_closed_form,
    trajectory_point, uniform_times, Bath, FidelityTrajectory, InitialParams, TrajectoryPoint,
};
pub use gaussian::{
    a_matrix_from_state, fidelity_general, fidelity_pure, AMatrix, AmplitudeVector, GaussianState,
};

/// Numerical tolerances shared across modules.
pub mod tol {
    /// `|det A − 1|` below which a state counts as pure.
    pub const PURITY: f64 = 1e-9;
    /// Relative slack on `σ ≥ ħ²/4` absorbing rounding on minimum-uncertainty states.
    pub const UNCERTAINTY_REL: f64 = 1e-10;
    /// Relative slack on `≥` constraints so exact boundary cases pass.
    pub const CONSTRAINT_REL: f64 = 1e-12;
    /// Allowed imaginary residue of the propagator, relative to its largest entry.
    pub const IMAGINARY: f64 = 1e-12;
    /// `‖T·T − I‖_max`.
    pub const INVOLUTION: f64 = 1e-12;
}
