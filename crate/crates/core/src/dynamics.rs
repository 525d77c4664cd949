//! Moment dynamics of the damped harmonic oscillator.
//!
//! The master equation with Hamiltonian `H₀ + (μ/2)(qp + pq)`, friction λ and
//! diffusion coefficients `D_pp, D_qq, D_pq` closes on first and second
//! moments. Means follow the underdamped closed form; the variance vector
//! `X = (mωσ_qq, σ_pp/mω, σ_pq)` obeys `Ẋ = M X + D`, which is diagonalised
//! by the involutory matrix `T` (so `M = T K T`, `K` diagonal):
//!
//! ```text
//! X(t) = T e^{Kt} T (X(0) − X(∞)) + X(∞),    X(∞) = −T K⁻¹ T D
//! ```

use num_complex::Complex64;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::gaussian::GaussianState;
use crate::tol;

/// Oscillator and bath parameters. Only the underdamped regime `ω > |μ|` is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    m: f64,
    omega: f64,
    hbar: f64,
    lambda: f64,
    mu: f64,
}

impl SystemParams {
    pub fn new(m: f64, omega: f64, hbar: f64, lambda: f64, mu: f64) -> Result<Self> {
        require_positive("m", m)?;
        require_positive("omega", omega)?;
        require_positive("hbar", hbar)?;
        require_finite("mu", mu)?;
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be finite and >= 0",
            });
        }
        if omega <= mu.abs() {
            return Err(Error::NotUnderdamped { omega, mu });
        }
        Ok(Self {
            m,
            omega,
            hbar,
            lambda,
            mu,
        })
    }

    /// `m = ω = ħ = 1`.
    pub fn unit(lambda: f64, mu: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, lambda, mu)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.m, self.omega, self.hbar, lambda, self.mu)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.m, self.omega, self.hbar, self.lambda, mu)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Ω = √(ω² − μ²).
    pub fn omega_eff(&self) -> f64 {
        (self.omega * self.omega - self.mu * self.mu).sqrt()
    }
}

/// Bath temperature expressed as `C = coth(ħω/2kT) ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    c: f64,
}

impl ThermalSpec {
    pub fn new(c: f64) -> Result<Self> {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "C",
                value: c,
                reason: "coth(hbar*omega/2kT) must be finite and >= 1",
            });
        }
        Ok(Self { c })
    }

    /// Zero temperature, `C = 1`.
    pub fn zero_temperature() -> Self {
        Self { c: 1.0 }
    }

    /// Converts a temperature to `C` given the energy scale `ħω/2k` in the same units.
    pub fn from_temperature(energy_scale: f64, temperature: f64) -> Result<Self> {
        require_positive("energy_scale", energy_scale)?;
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                value: temperature,
                reason: "must be finite and >= 0",
            });
        }
        if temperature == 0.0 {
            return Ok(Self::zero_temperature());
        }
        let eps = energy_scale / temperature;
        Self::new(1.0 / eps.tanh())
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Quantum diffusion coefficients. Plain data: physical admissibility depends
/// on λ and ħ and is checked by [`validate_constraints`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionCoeffs {
    pub d_pp: f64,
    pub d_qq: f64,
    pub d_pq: f64,
}

impl DiffusionCoeffs {
    /// Builds coefficients and rejects them unless every fundamental constraint holds.
    pub fn validated(sys: &SystemParams, d_pp: f64, d_qq: f64, d_pq: f64) -> Result<Self> {
        let d = Self { d_pp, d_qq, d_pq };
        let report = validate_constraints(sys, &d);
        match report.first_failure() {
            None => Ok(d),
            Some(c) => Err(Error::DiffusionConstraintViolated(format!(
                "{} (margin {:e})",
                c.name, c.margin
            ))),
        }
    }

    /// Inhomogeneous term `(2mωD_qq, 2D_pp/mω, 2D_pq)` of the variance equations.
    pub fn drive_vector(&self, sys: &SystemParams) -> [f64; 3] {
        let mw = sys.m * sys.omega;
        [2.0 * mw * self.d_qq, 2.0 * self.d_pp / mw, 2.0 * self.d_pq]
    }
}

/// Second moments scaled to action units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl VarianceVector {
    pub fn from_moments(sys: &SystemParams, var_qq: f64, var_pp: f64, cov_pq: f64) -> Self {
        let mw = sys.m * sys.omega;
        Self {
            x1: mw * var_qq,
            x2: var_pp / mw,
            x3: cov_pq,
        }
    }

    pub fn from_state(sys: &SystemParams, state: &GaussianState) -> Self {
        Self::from_moments(sys, state.var_qq(), state.var_pp(), state.cov_pq())
    }

    /// `(σ_qq, σ_pp, σ_pq)`.
    pub fn moments(&self, sys: &SystemParams) -> (f64, f64, f64) {
        let mw = sys.m * sys.omega;
        (self.x1 / mw, self.x2 * mw, self.x3)
    }

    /// `x1·x2 − x3²`, equal to the uncertainty function σ.
    pub fn sigma(&self) -> f64 {
        self.x1 * self.x2 - self.x3 * self.x3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            x1: a[0],
            x2: a[1],
            x3: a[2],
        }
    }
}

/// Real 3×3 matrix `T e^{Kt} T` propagating variance deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub matrix: [[f64; 3]; 3],
}

impl Propagator {
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.matrix;
        std::array::from_fn(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

type CMat3 = [[Complex64; 3]; 3];

/// The involutory modal matrix `T`.
pub(crate) fn modal_matrix(sys: &SystemParams) -> CMat3 {
    let om = sys.omega_eff();
    let (w, mu) = (sys.omega, sys.mu);
    let scale = Complex64::new(0.0, 2.0 * om).inv();
    let plus = Complex64::new(mu, om);
    let minus = Complex64::new(mu, -om);
    let re = |x: f64| Complex64::new(x, 0.0);
    let raw = [
        [plus, minus, re(2.0 * w)],
        [minus, plus, re(2.0 * w)],
        [re(-w), re(-w), re(-2.0 * mu)],
    ];
    raw.map(|row| row.map(|z| z * scale))
}

/// Diagonal of `K`: `(−2λ + 2iΩ, −2λ − 2iΩ, −2λ)`.
pub(crate) fn modal_rates(sys: &SystemParams) -> [Complex64; 3] {
    let om = sys.omega_eff();
    let lam = sys.lambda;
    [
        Complex64::new(-2.0 * lam, 2.0 * om),
        Complex64::new(-2.0 * lam, -2.0 * om),
        Complex64::new(-2.0 * lam, 0.0),
    ]
}

/// `T · diag(d) · T`.
fn sandwich(t: &CMat3, d: [Complex64; 3]) -> CMat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| t[i][k] * d[k] * t[k][j]).sum()))
}

fn real_part(m: &CMat3) -> Result<[[f64; 3]; 3]> {
    let re = m.map(|row| row.map(|z| z.re));
    let scale = re.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let residue = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    if residue > tol::IMAGINARY * scale {
        return Err(Error::ImaginaryResidue(residue));
    }
    Ok(re)
}

fn require_time(t: f64) -> Result<f64> {
    if t >= 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite and >= 0",
        })
    }
}

fn mat_vec(m: &CMat3, v: [f64; 3]) -> [Complex64; 3] {
    std::array::from_fn(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

fn real_vector(v: [Complex64; 3]) -> Result<[f64; 3]> {
    let re = v.map(|z| z.re);
    let scale = re.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let residue = v.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    if residue > tol::IMAGINARY * scale {
        return Err(Error::ImaginaryResidue(residue));
    }
    Ok(re)
}

/// Gibbs-state diffusion coefficients for the bath at `th`.
///
/// Requires `λ > μ` and `(λ² − μ²)C² ≥ λ²`; the latter is tested with a
/// relative slack of 1e-12 so that parameter sets sitting exactly on the
/// boundary (e.g. λ = 0.1, μ = 0.08, C = 5/3) are accepted.
pub fn thermal_diffusion(sys: &SystemParams, th: &ThermalSpec) -> Result<DiffusionCoeffs> {
    let (lam, mu, c) = (sys.lambda, sys.mu, th.c);
    if lam <= mu {
        return Err(Error::GibbsRequiresLambdaGtMu { lambda: lam, mu });
    }
    let lhs = (lam * lam - mu * mu) * c * c;
    let rhs = lam * lam;
    if !at_least(lhs, rhs) {
        return Err(Error::ThermalConstraintViolated { lhs, rhs });
    }
    Ok(thermal_diffusion_unchecked(sys, th))
}

/// The Gibbs coefficient formulas without the admissibility checks.
///
/// Outside `λ > μ`, `(λ² − μ²)C² ≥ λ²` the resulting dynamics is not completely
/// positive; this is only for evaluating the formal moment equations.
pub fn thermal_diffusion_unchecked(sys: &SystemParams, th: &ThermalSpec) -> DiffusionCoeffs {
    let (lam, mu, c) = (sys.lambda, sys.mu, th.c);
    let mw = sys.m * sys.omega;
    DiffusionCoeffs {
        d_pp: 0.5 * (lam + mu) * sys.hbar * mw * c,
        d_qq: 0.5 * (lam - mu) * sys.hbar / mw * c,
        d_pq: 0.0,
    }
}

fn at_least(lhs: f64, rhs: f64) -> bool {
    lhs - rhs >= -tol::CONSTRAINT_REL * lhs.abs().max(rhs.abs())
}

/// One fundamental-constraint check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub passed: bool,
    /// `lhs − rhs`; negative means violated.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Reports `D_pp > 0`, `D_qq > 0` and `D_pp D_qq − D_pq² ≥ λ²ħ²/4`.
pub fn validate_constraints(sys: &SystemParams, d: &DiffusionCoeffs) -> ConstraintReport {
    let det = d.d_pp * d.d_qq - d.d_pq * d.d_pq;
    let bound = 0.25 * sys.lambda * sys.lambda * sys.hbar * sys.hbar;
    ConstraintReport {
        checks: vec![
            ConstraintCheck {
                name: "d_pp > 0",
                passed: d.d_pp > 0.0,
                margin: d.d_pp,
            },
            ConstraintCheck {
                name: "d_qq > 0",
                passed: d.d_qq > 0.0,
                margin: d.d_qq,
            },
            ConstraintCheck {
                name: "d_pp*d_qq - d_pq^2 >= lambda^2*hbar^2/4",
                passed: at_least(det, bound),
                margin: det - bound,
            },
        ],
    }
}

/// Underdamped closed-form means `(⟨q⟩(t), ⟨p⟩(t))`.
pub fn evolve_means(sys: &SystemParams, q0: f64, p0: f64, t: f64) -> Result<(f64, f64)> {
    require_time(t)?;
    let om = sys.omega_eff();
    let (s, c) = (om * t).sin_cos();
    let decay = (-sys.lambda * t).exp();
    let r = sys.mu / om;
    let q = decay * ((c + r * s) * q0 + s / (sys.m * om) * p0);
    let p = decay * (-sys.m * sys.omega * sys.omega / om * s * q0 + (c - r * s) * p0);
    Ok((q, p))
}

/// `T e^{Kt} T`.
pub fn propagator(sys: &SystemParams, t: f64) -> Result<Propagator> {
    require_time(t)?;
    let tm = modal_matrix(sys);
    let diag = modal_rates(sys).map(|k| (k * t).exp());
    Ok(Propagator {
        matrix: real_part(&sandwich(&tm, diag))?,
    })
}

/// `X(∞) = −T K⁻¹ T D`.
pub fn asymptotic_variances(sys: &SystemParams, d: &DiffusionCoeffs) -> Result<VarianceVector> {
    if sys.lambda == 0.0 {
        return Err(Error::NoStationaryState);
    }
    let tm = modal_matrix(sys);
    let inv = modal_rates(sys).map(|k| -k.inv());
    let x = real_vector(mat_vec(&sandwich(&tm, inv), d.drive_vector(sys)))?;
    Ok(VarianceVector::from_array(x))
}

/// Variance vector at time `t`.
///
/// For λ > 0 this is `P(t)(X(0) − X(∞)) + X(∞)`. At λ = 0 there is no
/// stationary point and the equivalent `P(t)X(0) + T Φ(t) T D` is used, with
/// `Φ = diag((e^{k t} − 1)/k)` and `Φ = t` on the zero mode.
pub fn evolve_variances(
    sys: &SystemParams,
    d: &DiffusionCoeffs,
    x0: &VarianceVector,
    t: f64,
) -> Result<VarianceVector> {
    let p = propagator(sys, t)?;
    if sys.lambda > 0.0 {
        let inf = asymptotic_variances(sys, d)?.as_array();
        let x0 = x0.as_array();
        let dev = p.apply(std::array::from_fn(|i| x0[i] - inf[i]));
        return Ok(VarianceVector::from_array(std::array::from_fn(|i| {
            dev[i] + inf[i]
        })));
    }
    let phi = modal_rates(sys).map(|k| {
        if k.norm() == 0.0 {
            Complex64::new(t, 0.0)
        } else {
            ((k * t).exp() - 1.0) / k
        }
    });
    let forced = real_vector(mat_vec(
        &sandwich(&modal_matrix(sys), phi),
        d.drive_vector(sys),
    ))?;
    let free = p.apply(x0.as_array());
    Ok(VarianceVector::from_array(std::array::from_fn(|i| {
        free[i] + forced[i]
    })))
}

/// Evolves both moments of `state` to time `t`.
pub fn evolve_state(
    sys: &SystemParams,
    d: &DiffusionCoeffs,
    state: &GaussianState,
    t: f64,
) -> Result<GaussianState> {
    if state.hbar() != sys.hbar {
        return Err(Error::HbarMismatch(state.hbar(), sys.hbar));
    }
    let (q, p) = evolve_means(sys, state.mean_q(), state.mean_p(), t)?;
    let x = evolve_variances(sys, d, &VarianceVector::from_state(sys, state), t)?;
    let (qq, pp, pq) = x.moments(sys);
    GaussianState::new(q, p, qq, pp, pq, sys.hbar)
}

/// σ = σ_qq σ_pp − σ_pq² of a state.
pub fn uncertainty_sigma(state: &GaussianState) -> f64 {
    state.uncertainty_sigma()
}

/// `‖T·T − I‖_max` for the modal matrix of `sys`.
pub fn involution_defect(sys: &SystemParams) -> f64 {
    let tt = sandwich(&modal_matrix(sys), [Complex64::new(1.0, 0.0); 3]);
    let mut worst = 0.0f64;
    for (i, row) in tt.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((z - want).norm());
        }
    }
    worst
}

/// Largest imaginary part of `T e^{Kt} T` before truncation, relative to its
/// largest real entry (at least 1).
pub fn propagator_residue(sys: &SystemParams, t: f64) -> f64 {
    let m = sandwich(&modal_matrix(sys), modal_rates(sys).map(|k| (k * t).exp()));
    let scale = m
        .iter()
        .flatten()
        .fold(1.0f64, |acc, z| acc.max(z.re.abs()));
    m.iter()
        .flatten()
        .fold(0.0f64, |acc, z| acc.max(z.im.abs()))
        / scale
}
