//! Fixed-step RK4 integration of the moment equations.
//!
//! Used as the brute-force reference for the closed forms in
//! [`crate::dynamics`]; it integrates the raw σ equations directly and never
//! touches the modal matrix or the propagator.

use crate::dynamics::{DiffusionCoeffs, SystemParams, VarianceVector};
use crate::error::{Error, Result};

pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub step: f64,
    pub t_end: f64,
}

impl OdeConfig {
    pub fn new(step: f64, t_end: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "step",
                value: step,
                reason: "must be > 0",
            });
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_end",
                value: t_end,
                reason: "must be finite and >= 0",
            });
        }
        Ok(Self { step, t_end })
    }

    /// Default step `min(1e-3, t_end/1000, 0.01/max(λ, ω, |μ|, 1))`.
    pub fn for_horizon(sys: &SystemParams, t_end: f64) -> Result<Self> {
        let rate = sys.lambda().max(sys.omega()).max(sys.mu().abs()).max(1.0);
        let mut step = DEFAULT_STEP.min(0.01 / rate);
        if t_end > 0.0 {
            step = step.min(t_end / 1000.0);
        }
        Self::new(step, t_end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSample {
    pub t: f64,
    pub q: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceSample {
    pub t: f64,
    pub x: VarianceVector,
}

fn rk4_step<const N: usize>(f: &impl Fn(&[f64; N]) -> [f64; N], y: &[f64; N], h: f64) -> [f64; N] {
    let shift = |base: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        std::array::from_fn(|i| base[i] + s * k[i])
    };
    let k1 = f(y);
    let k2 = f(&shift(y, &k1, 0.5 * h));
    let k3 = f(&shift(y, &k2, 0.5 * h));
    let k4 = f(&shift(y, &k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates from `t0` to `t1` in `ceil((t1 − t0)/step)` equal steps, calling
/// `visit` after each one.
fn march<const N: usize>(
    f: &impl Fn(&[f64; N]) -> [f64; N],
    mut y: [f64; N],
    t0: f64,
    t1: f64,
    step: f64,
    mut visit: impl FnMut(f64, &[f64; N]),
) -> [f64; N] {
    let span = t1 - t0;
    if span <= 0.0 {
        return y;
    }
    let n = (span / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    for i in 1..=n {
        y = rk4_step(f, &y, h);
        visit(t0 + i as f64 * h, &y);
    }
    y
}

fn mean_rhs(sys: &SystemParams) -> impl Fn(&[f64; 2]) -> [f64; 2] {
    let (m, w, lam, mu) = (sys.m(), sys.omega(), sys.lambda(), sys.mu());
    move |y: &[f64; 2]| {
        let (q, p) = (y[0], y[1]);
        [-(lam - mu) * q + p / m, -m * w * w * q - (lam + mu) * p]
    }
}

/// RHS in raw `(σ_qq, σ_pp, σ_pq)` coordinates.
fn variance_rhs(sys: &SystemParams, d: &DiffusionCoeffs) -> impl Fn(&[f64; 3]) -> [f64; 3] {
    let (m, w, lam, mu) = (sys.m(), sys.omega(), sys.lambda(), sys.mu());
    let DiffusionCoeffs { d_pp, d_qq, d_pq } = *d;
    move |y: &[f64; 3]| {
        let (qq, pp, pq) = (y[0], y[1], y[2]);
        [
            -2.0 * (lam - mu) * qq + 2.0 / m * pq + 2.0 * d_qq,
            -2.0 * (lam + mu) * pp - 2.0 * m * w * w * pq + 2.0 * d_pp,
            -m * w * w * qq + pp / m - 2.0 * lam * pq + 2.0 * d_pq,
        ]
    }
}

fn to_raw(sys: &SystemParams, x: &VarianceVector) -> [f64; 3] {
    let (qq, pp, pq) = x.moments(sys);
    [qq, pp, pq]
}

fn from_raw(sys: &SystemParams, y: &[f64; 3]) -> VarianceVector {
    VarianceVector::from_moments(sys, y[0], y[1], y[2])
}

/// Mean trajectory sampled at every step boundary, starting with `t = 0`.
pub fn integrate_means(sys: &SystemParams, q0: f64, p0: f64, cfg: &OdeConfig) -> Vec<MeanSample> {
    let f = mean_rhs(sys);
    let mut out = vec![MeanSample {
        t: 0.0,
        q: q0,
        p: p0,
    }];
    march(&f, [q0, p0], 0.0, cfg.t_end, cfg.step, |t, y| {
        out.push(MeanSample {
            t,
            q: y[0],
            p: y[1],
        })
    });
    out
}

/// Variance trajectory sampled at every step boundary, starting with `t = 0`.
pub fn integrate_variances(
    sys: &SystemParams,
    d: &DiffusionCoeffs,
    x0: &VarianceVector,
    cfg: &OdeConfig,
) -> Vec<VarianceSample> {
    let f = variance_rhs(sys, d);
    let mut out = vec![VarianceSample { t: 0.0, x: *x0 }];
    march(&f, to_raw(sys, x0), 0.0, cfg.t_end, cfg.step, |t, y| {
        out.push(VarianceSample {
            t,
            x: from_raw(sys, y),
        })
    });
    out
}

fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for &t in times {
        if !(t >= prev && t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "times",
                value: t,
                reason: "must be finite, nonnegative and nondecreasing",
            });
        }
        prev = t;
    }
    Ok(())
}

/// Means at the requested (nondecreasing) times, with at most `step` between RK4 nodes.
pub fn integrate_means_at(
    sys: &SystemParams,
    q0: f64,
    p0: f64,
    times: &[f64],
    step: f64,
) -> Result<Vec<MeanSample>> {
    OdeConfig::new(step, 0.0)?;
    check_times(times)?;
    let f = mean_rhs(sys);
    let (mut y, mut t_prev) = ([q0, p0], 0.0);
    Ok(times
        .iter()
        .map(|&t| {
            y = march(&f, y, t_prev, t, step, |_, _| {});
            t_prev = t;
            MeanSample {
                t,
                q: y[0],
                p: y[1],
            }
        })
        .collect())
}

/// Variances at the requested (nondecreasing) times.
pub fn integrate_variances_at(
    sys: &SystemParams,
    d: &DiffusionCoeffs,
    x0: &VarianceVector,
    times: &[f64],
    step: f64,
) -> Result<Vec<VarianceSample>> {
    OdeConfig::new(step, 0.0)?;
    check_times(times)?;
    let f = variance_rhs(sys, d);
    let (mut y, mut t_prev) = (to_raw(sys, x0), 0.0);
    Ok(times
        .iter()
        .map(|&t| {
            y = march(&f, y, t_prev, t, step, |_, _| {});
            t_prev = t;
            VarianceSample {
                t,
                x: from_raw(sys, &y),
            }
        })
        .collect())
}
