//! Flag resolution: explicit flag > preset > default.

use clap::{Args, ValueEnum};
use gaussfid::{Bath, DiffusionCoeffs, InitialParams, SystemParams, ThermalSpec};

use crate::presets::{self, Preset};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    #[value(name = "C")]
    C,
    #[value(name = "delta")]
    Delta,
    #[value(name = "lambda")]
    Lambda,
    #[value(name = "r")]
    R,
    #[value(name = "mu")]
    Mu,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::C => "C",
            Axis::Delta => "delta",
            Axis::Lambda => "lambda",
            Axis::R => "r",
            Axis::Mu => "mu",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Named parameter set: fig1a, fig1b, fig2a, fig2b, fig3a, fig3b, fig4a, fig4b
    #[arg(long)]
    pub preset: Option<String>,
    /// Mass
    #[arg(long)]
    pub m: Option<f64>,
    /// Oscillator frequency ω
    #[arg(long)]
    pub omega: Option<f64>,
    /// Reduced Planck constant
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Dissipation constant λ
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Friction asymmetry μ (must satisfy |μ| < ω)
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Bath temperature as C = coth(ħω/2kT) ≥ 1 (thermal bath; default 1)
    #[arg(long = "C", conflicts_with_all = ["temperature", "dpp"])]
    pub c: Option<f64>,
    /// Bath temperature T; needs --energy-scale
    #[arg(long, requires = "energy_scale", conflicts_with = "dpp")]
    pub temperature: Option<f64>,
    /// Energy scale ħω/2k in the units of --temperature
    #[arg(long, requires = "temperature")]
    pub energy_scale: Option<f64>,
    /// Explicit diffusion coefficient D_pp (with --dqq and --dpq, replaces the thermal bath)
    #[arg(long, requires_all = ["dqq", "dpq"])]
    pub dpp: Option<f64>,
    /// Explicit diffusion coefficient D_qq
    #[arg(long, requires_all = ["dpp", "dpq"])]
    pub dqq: Option<f64>,
    /// Explicit diffusion coefficient D_pq (may be negative)
    #[arg(long, requires_all = ["dpp", "dqq"], allow_negative_numbers = true)]
    pub dpq: Option<f64>,
    /// Squeezing parameter δ > 0 of the initial state
    #[arg(long)]
    pub delta: Option<f64>,
    /// Correlation coefficient |r| < 1 of the initial state
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Initial mean position
    #[arg(long, allow_negative_numbers = true)]
    pub q0: Option<f64>,
    /// Initial mean momentum
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// End of the time grid
    #[arg(long, default_value_t = 16.0)]
    pub t_max: f64,
    /// Number of uniform time samples on [0, t-max]
    #[arg(long, default_value_t = 401)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RawBath {
    Thermal(f64),
    Explicit { d_pp: f64, d_qq: f64, d_pq: f64 },
}

/// Unvalidated model parameters, so sweeps can vary one and validate per point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawModel {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
    pub lambda: f64,
    pub mu: f64,
    pub bath: RawBath,
    pub delta: f64,
    pub r: f64,
    pub q0: f64,
    pub p0: f64,
}

pub struct Model {
    pub sys: SystemParams,
    pub bath: Bath,
    pub init: InitialParams,
}

impl RawModel {
    pub fn with(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::C => self.bath = RawBath::Thermal(value),
            Axis::Delta => self.delta = value,
            Axis::Lambda => self.lambda = value,
            Axis::R => self.r = value,
            Axis::Mu => self.mu = value,
        }
        self
    }

    pub fn build(&self) -> gaussfid::Result<Model> {
        let sys = SystemParams::new(self.m, self.omega, self.hbar, self.lambda, self.mu)?;
        let bath = match self.bath {
            RawBath::Thermal(c) => Bath::Thermal(ThermalSpec::new(c)?),
            RawBath::Explicit { d_pp, d_qq, d_pq } => {
                Bath::Explicit(DiffusionCoeffs { d_pp, d_qq, d_pq })
            }
        };
        let init = InitialParams::new(self.delta, self.r, self.q0, self.p0)?;
        Ok(Model { sys, bath, init })
    }

    /// `# key=value` provenance line.
    pub fn describe(&self) -> String {
        let bath = match self.bath {
            RawBath::Thermal(c) => format!("bath=thermal C={c}"),
            RawBath::Explicit { d_pp, d_qq, d_pq } => {
                format!("bath=explicit d_pp={d_pp} d_qq={d_qq} d_pq={d_pq}")
            }
        };
        format!(
            "m={} omega={} hbar={} lambda={} mu={} {} delta={} r={} q0={} p0={}",
            self.m,
            self.omega,
            self.hbar,
            self.lambda,
            self.mu,
            bath,
            self.delta,
            self.r,
            self.q0,
            self.p0
        )
    }
}

impl ModelArgs {
    pub fn preset(&self) -> Result<Preset, CliError> {
        match &self.preset {
            None => Ok(Preset::default()),
            Some(name) => presets::lookup(name).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown preset '{name}' (expected one of {})",
                    presets::NAMES.join(", ")
                ))
            }),
        }
    }

    pub fn resolve(&self) -> Result<RawModel, CliError> {
        let p = self.preset()?;
        let pick = |flag: Option<f64>, preset: Option<f64>, default: f64| {
            flag.or(preset).unwrap_or(default)
        };
        let bath = match (self.dpp, self.dqq, self.dpq) {
            (Some(d_pp), Some(d_qq), Some(d_pq)) => RawBath::Explicit { d_pp, d_qq, d_pq },
            _ => match (self.temperature, self.energy_scale) {
                (Some(t), Some(e)) => RawBath::Thermal(ThermalSpec::from_temperature(e, t)?.c()),
                _ => RawBath::Thermal(pick(self.c, p.c, 1.0)),
            },
        };
        Ok(RawModel {
            m: pick(self.m, None, 1.0),
            omega: pick(self.omega, p.omega, 1.0),
            hbar: pick(self.hbar, None, 1.0),
            lambda: pick(self.lambda, p.lambda, 0.1),
            mu: pick(self.mu, p.mu, 0.0),
            bath,
            delta: pick(self.delta, p.delta, 1.0),
            r: pick(self.r, p.r, 0.0),
            q0: pick(self.q0, None, 0.0),
            p0: pick(self.p0, None, 0.0),
        })
    }

    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) || self.points == 0 {
            return Err(CliError::Usage(
                "--t-max must be >= 0 and --points >= 1".into(),
            ));
        }
        Ok(gaussfid::uniform_times(self.t_max, self.points))
    }
}
