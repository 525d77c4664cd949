//! Single-mode Gaussian states and their Uhlmann fidelity.
//!
//! A state is stored as raw first and second moments plus the ħ convention it
//! was written in. The dimensionless matrix
//!
//! ```text
//! A = | 2σ_qq     2σ_pq/ħ  |
//!     | 2σ_pq/ħ   2σ_pp/ħ² |
//! ```
//!
//! and the amplitude vector α = (⟨q⟩, ⟨p⟩/ħ) are derived on demand. With these,
//! det A ≥ 1 for every physical state and det A = 1 exactly for pure ones.

use crate::error::{require_finite, Error, Result};
use crate::tol;

/// Mean vector and covariance of a single-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    mean_q: f64,
    mean_p: f64,
    var_qq: f64,
    var_pp: f64,
    cov_pq: f64,
    hbar: f64,
}

impl GaussianState {
    /// Builds a state, checking positivity and the Schrödinger–Robertson bound
    /// `var_qq·var_pp − cov_pq² ≥ ħ²/4` (equality allowed, up to rounding).
    pub fn new(
        mean_q: f64,
        mean_p: f64,
        var_qq: f64,
        var_pp: f64,
        cov_pq: f64,
        hbar: f64,
    ) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        require_finite("mean_q", mean_q)?;
        require_finite("mean_p", mean_p)?;
        require_finite("cov_pq", cov_pq)?;
        if !(var_qq > 0.0 && var_qq.is_finite()) {
            return Err(Error::NonPositiveVariance {
                name: "var_qq",
                value: var_qq,
            });
        }
        if !(var_pp > 0.0 && var_pp.is_finite()) {
            return Err(Error::NonPositiveVariance {
                name: "var_pp",
                value: var_pp,
            });
        }
        let sigma = var_qq * var_pp - cov_pq * cov_pq;
        let bound = 0.25 * hbar * hbar;
        if sigma < bound * (1.0 - tol::UNCERTAINTY_REL) {
            return Err(Error::UncertaintyViolation { sigma, bound });
        }
        Ok(Self {
            mean_q,
            mean_p,
            var_qq,
            var_pp,
            cov_pq,
            hbar,
        })
    }

    /// Undisplaced state with the given covariance.
    pub fn centered(var_qq: f64, var_pp: f64, cov_pq: f64, hbar: f64) -> Result<Self> {
        Self::new(0.0, 0.0, var_qq, var_pp, cov_pq, hbar)
    }

    /// Ground state of an oscillator with mass `m` and frequency `omega`.
    pub fn vacuum(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        Self::centered(hbar / (2.0 * m * omega), hbar * m * omega / 2.0, 0.0, hbar)
    }

    /// Gibbs state of the oscillator, `c = coth(ħω/2kT)`.
    pub fn thermal(m: f64, omega: f64, hbar: f64, c: f64) -> Result<Self> {
        Self::centered(
            c * hbar / (2.0 * m * omega),
            c * hbar * m * omega / 2.0,
            0.0,
            hbar,
        )
    }

    /// The same covariance moved by `(dq, dp)` in phase space.
    pub fn displaced(&self, dq: f64, dp: f64) -> Result<Self> {
        Self::new(
            self.mean_q + dq,
            self.mean_p + dp,
            self.var_qq,
            self.var_pp,
            self.cov_pq,
            self.hbar,
        )
    }

    pub fn mean_q(&self) -> f64 {
        self.mean_q
    }

    pub fn mean_p(&self) -> f64 {
        self.mean_p
    }

    pub fn var_qq(&self) -> f64 {
        self.var_qq
    }

    pub fn var_pp(&self) -> f64 {
        self.var_pp
    }

    pub fn cov_pq(&self) -> f64 {
        self.cov_pq
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Schrödinger generalized uncertainty function `σ_qq σ_pp − σ_pq²`.
    pub fn uncertainty_sigma(&self) -> f64 {
        self.var_qq * self.var_pp - self.cov_pq * self.cov_pq
    }

    pub fn a_matrix(&self) -> AMatrix {
        AMatrix {
            a_qq: 2.0 * self.var_qq,
            a_pp: 2.0 * self.var_pp / (self.hbar * self.hbar),
            a_pq: 2.0 * self.cov_pq / self.hbar,
        }
    }

    pub fn amplitude(&self) -> AmplitudeVector {
        AmplitudeVector {
            alpha_q: self.mean_q,
            alpha_p: self.mean_p / self.hbar,
        }
    }

    /// `|det A − 1| ≤ 1e-9`.
    pub fn is_pure(&self) -> bool {
        (self.a_matrix().det() - 1.0).abs() <= tol::PURITY
    }
}

/// Symmetric 2×2 scaled covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AMatrix {
    pub a_qq: f64,
    pub a_pp: f64,
    pub a_pq: f64,
}

impl AMatrix {
    pub fn det(&self) -> f64 {
        self.a_qq * self.a_pp - self.a_pq * self.a_pq
    }

    /// `vᵀ A⁻¹ v` via the closed-form 2×2 inverse.
    pub fn inverse_quadratic_form(&self, v: AmplitudeVector) -> Result<f64> {
        let det = self.det();
        if !(det > 0.0) {
            return Err(Error::SingularMatrix(det));
        }
        let (x, y) = (v.alpha_q, v.alpha_p);
        Ok((self.a_pp * x * x - 2.0 * self.a_pq * x * y + self.a_qq * y * y) / det)
    }
}

impl std::ops::Add for AMatrix {
    type Output = AMatrix;

    fn add(self, rhs: AMatrix) -> AMatrix {
        AMatrix {
            a_qq: self.a_qq + rhs.a_qq,
            a_pp: self.a_pp + rhs.a_pp,
            a_pq: self.a_pq + rhs.a_pq,
        }
    }
}

/// Scaled mean vector `(⟨q⟩, ⟨p⟩/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeVector {
    pub alpha_q: f64,
    pub alpha_p: f64,
}

impl std::ops::Sub for AmplitudeVector {
    type Output = AmplitudeVector;

    fn sub(self, rhs: AmplitudeVector) -> AmplitudeVector {
        AmplitudeVector {
            alpha_q: self.alpha_q - rhs.alpha_q,
            alpha_p: self.alpha_p - rhs.alpha_p,
        }
    }
}

/// Checked access to the A-matrix of a state built elsewhere.
///
/// [`GaussianState::new`] already refuses unphysical inputs, so this only
/// re-validates; it exists so callers holding raw moments get the same
/// positivity / uncertainty error codes.
pub fn a_matrix_from_state(state: &GaussianState) -> Result<AMatrix> {
    let s = GaussianState::new(
        state.mean_q,
        state.mean_p,
        state.var_qq,
        state.var_pp,
        state.cov_pq,
        state.hbar,
    )?;
    Ok(s.a_matrix())
}

fn check_hbar(s1: &GaussianState, s2: &GaussianState) -> Result<()> {
    let scale = s1.hbar.abs().max(s2.hbar.abs());
    if (s1.hbar - s2.hbar).abs() > 1e-12 * scale {
        return Err(Error::HbarMismatch(s1.hbar, s2.hbar));
    }
    Ok(())
}

/// `βᵀ(A₁+A₂)⁻¹β` with `β = α₂ − α₁`; the argument of the displacement factor.
pub fn displacement_exponent(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    check_hbar(s1, s2)?;
    let sum = s1.a_matrix() + s2.a_matrix();
    sum.inverse_quadratic_form(s2.amplitude() - s1.amplitude())
}

/// Uhlmann fidelity between two arbitrary single-mode Gaussian states.
pub fn fidelity_general(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    check_hbar(s1, s2)?;
    if s1 == s2 {
        return Ok(1.0);
    }
    let (a1, a2) = (s1.a_matrix(), s2.a_matrix());
    let sum = a1 + a2;
    let big_delta = sum.det();
    if !(big_delta > 0.0) {
        return Err(Error::SingularMatrix(big_delta));
    }
    // √δ amplifies rounding on pure states (det A − 1 ≈ 1e-16 gives √δ ≈ 1e-8),
    // so a factor inside the purity tolerance counts as exactly zero.
    let impurity = |a: AMatrix| {
        let x = a.det() - 1.0;
        if x.abs() <= tol::PURITY {
            0.0
        } else {
            x
        }
    };
    let small_delta = (impurity(a1) * impurity(a2)).max(0.0);
    // 2/(√(Δ+δ) − √δ) rewritten without the cancellation.
    let prefactor = 2.0 * ((big_delta + small_delta).sqrt() + small_delta.sqrt()) / big_delta;
    let exponent = sum.inverse_quadratic_form(s2.amplitude() - s1.amplitude())?;
    Ok((prefactor * (-exponent).exp()).min(1.0))
}

/// Fidelity when `s1` is pure: `F = det((A₁+A₂)/2)^{-1/2} · exp(−βᵀ(A₁+A₂)⁻¹β)`.
pub fn fidelity_pure(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    check_hbar(s1, s2)?;
    let a1 = s1.a_matrix();
    let impurity = (a1.det() - 1.0).abs();
    if impurity > tol::PURITY {
        return Err(Error::NotPure(impurity));
    }
    let sum = a1 + s2.a_matrix();
    let half_det = 0.25 * sum.det();
    if !(half_det > 0.0) {
        return Err(Error::SingularMatrix(sum.det()));
    }
    let exponent = sum.inverse_quadratic_form(s2.amplitude() - s1.amplitude())?;
    Ok(((-exponent).exp() / half_det.sqrt()).min(1.0))
}
