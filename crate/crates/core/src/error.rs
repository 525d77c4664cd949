use thiserror::Error;

/// Everything that can go wrong when building states, parameters or trajectories.
///
/// Each variant carries a stable kebab-case code (see [`Error::code`]) that the
/// command-line front end prints verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive-variance: {name} = {value} must be > 0")]
    NonPositiveVariance { name: &'static str, value: f64 },

    #[error("uncertainty-violation: var_qq*var_pp - cov_pq^2 = {sigma} < hbar^2/4 = {bound}")]
    UncertaintyViolation { sigma: f64, bound: f64 },

    #[error("non-positive-hbar: hbar = {0} must be > 0")]
    NonPositiveHbar(f64),

    #[error("hbar-mismatch: states use hbar = {0} and hbar = {1}")]
    HbarMismatch(f64, f64),

    #[error("not-pure: |det A - 1| = {0} exceeds the purity tolerance")]
    NotPure(f64),

    #[error("singular-matrix: det(A1 + A2) = {0}")]
    SingularMatrix(f64),

    #[error("invalid-parameter: {name} = {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("not-underdamped: omega = {omega} must exceed |mu| = {mu}")]
    NotUnderdamped { omega: f64, mu: f64 },

    #[error("gibbs-requires-lambda-gt-mu: lambda = {lambda}, mu = {mu}")]
    GibbsRequiresLambdaGtMu { lambda: f64, mu: f64 },

    #[error("thermal-constraint-violated: (lambda^2 - mu^2) C^2 = {lhs} < lambda^2 = {rhs}")]
    ThermalConstraintViolated { lhs: f64, rhs: f64 },

    #[error("diffusion-constraint-violated: {0}")]
    DiffusionConstraintViolated(String),

    #[error("no-stationary-state: lambda = 0 has no asymptotic covariance")]
    NoStationaryState,

    #[error("imaginary-residue: propagator imaginary part {0:e} exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("mu-nonzero: closed form requires mu = 0, got {0}")]
    MuNonZero(f64),
}

impl Error {
    /// Stable machine-readable identifier for this error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPositiveVariance { .. } => "non-positive-variance",
            Error::UncertaintyViolation { .. } => "uncertainty-violation",
            Error::NonPositiveHbar(_) => "non-positive-hbar",
            Error::HbarMismatch(..) => "hbar-mismatch",
            Error::NotPure(_) => "not-pure",
            Error::SingularMatrix(_) => "singular-matrix",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::NotUnderdamped { .. } => "not-underdamped",
            Error::GibbsRequiresLambdaGtMu { .. } => "gibbs-requires-lambda-gt-mu",
            Error::ThermalConstraintViolated { .. } => "thermal-constraint-violated",
            Error::DiffusionConstraintViolated(_) => "diffusion-constraint-violated",
            Error::NoStationaryState => "no-stationary-state",
            Error::ImaginaryResidue(_) => "imaginary-residue",
            Error::MuNonZero(_) => "mu-nonzero",
        }
    }

    /// Internal errors signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::SingularMatrix(_) | Error::ImaginaryResidue(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_starts_with_code() {
        let errs = [
            Error::NoStationaryState,
            Error::GibbsRequiresLambdaGtMu {
                lambda: 0.1,
                mu: 0.2,
            },
            Error::UncertaintyViolation {
                sigma: 0.1,
                bound: 0.25,
            },
            Error::MuNonZero(0.1),
        ];
        for e in errs {
            assert!(e.to_string().starts_with(e.code()), "{e}");
        }
    }
}
