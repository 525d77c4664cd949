use rayon::prelude::*;

use gaussfid::verify::{self, VerifyOptions};
use gaussfid::{
    asymptotic_fidelity, asymptotic_fidelity_displaced, displaced_exponent_asymptotic,
    fidelity_trajectory, thermal_diffusion, trajectory_point, Bath, Error,
};

use crate::output::{num, CsvTable};
use crate::params::{Axis, ModelArgs, RawBath, RawModel};
use crate::{CliError, SweepArgs};

fn provenance(table: &mut CsvTable, command: &str, raw: &RawModel) {
    table.comment(format!("gaussfid {command}"));
    table.comment(raw.describe());
}

pub fn evolve(args: &ModelArgs) -> Result<CsvTable, CliError> {
    let raw = args.resolve()?;
    let model = raw.build()?;
    let traj = fidelity_trajectory(&model.sys, &model.bath, &model.init, &args.times()?)?;
    let mut t = CsvTable::new(&[
        "t", "q_mean", "p_mean", "var_qq", "var_pp", "cov_pq", "sigma_t",
    ]);
    provenance(&mut t, "evolve", &raw);
    for p in &traj.points {
        let s = &p.state;
        t.push(
            [
                p.t,
                s.mean_q(),
                s.mean_p(),
                s.var_qq(),
                s.var_pp(),
                s.cov_pq(),
                p.sigma,
            ]
            .map(num)
            .to_vec(),
        );
    }
    Ok(t)
}

pub fn fidelity(args: &ModelArgs) -> Result<CsvTable, CliError> {
    let raw = args.resolve()?;
    let model = raw.build()?;
    let traj = fidelity_trajectory(&model.sys, &model.bath, &model.init, &args.times()?)?;
    let mut t = CsvTable::new(&["t", "F", "sigma_t", "q_mean", "p_mean"]);
    provenance(&mut t, "fidelity", &raw);
    for p in &traj.points {
        t.push(
            [p.t, p.fidelity, p.sigma, p.state.mean_q(), p.state.mean_p()]
                .map(num)
                .to_vec(),
        );
    }
    Ok(t)
}

pub fn asymptote(args: &ModelArgs) -> Result<CsvTable, CliError> {
    let raw = args.resolve()?;
    let model = raw.build()?;
    let diff = model.bath.diffusion(&model.sys)?;
    if model.sys.lambda() == 0.0 {
        return Err(Error::NoStationaryState.into());
    }
    let late = trajectory_point(&model.sys, &diff, &model.init, 60.0 / model.sys.lambda())?;
    let (c, f_inf, e_inf, f_disp) = match model.bath {
        Bath::Thermal(th) => (
            th.c(),
            asymptotic_fidelity(model.init.delta(), model.init.r(), &th)?,
            displaced_exponent_asymptotic(&model.sys, &th, &model.init)?,
            asymptotic_fidelity_displaced(&model.sys, &th, &model.init)?,
        ),
        // Closed forms exist only for the Gibbs bath.
        Bath::Explicit(_) => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
    };
    let mut t = CsvTable::new(&[
        "delta",
        "r",
        "C",
        "q0",
        "p0",
        "F_inf",
        "E_inf",
        "F_inf_displaced",
        "F_late_pipeline",
    ]);
    provenance(&mut t, "asymptote", &raw);
    t.comment(format!(
        "F_late_pipeline evaluated at t = 60/lambda = {}",
        60.0 / model.sys.lambda()
    ));
    let i = &model.init;
    t.push(
        [
            i.delta(),
            i.r(),
            c,
            i.q0(),
            i.p0(),
            f_inf,
            e_inf,
            f_disp,
            late.fidelity,
        ]
        .map(num)
        .to_vec(),
    );
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct AxisSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub primary: AxisSpec,
    pub secondary: Option<AxisSpec>,
    pub asymptote: bool,
}

fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl SweepSpec {
    pub fn resolve(a: &SweepArgs) -> Result<Self, CliError> {
        let preset = a.model.preset()?;
        let axis_spec = |axis: Option<Axis>,
                         min: Option<f64>,
                         max: Option<f64>,
                         points: usize,
                         preset: Option<crate::presets::AxisRange>|
         -> Option<Result<AxisSpec, CliError>> {
            let axis = axis.or(preset.map(|p| p.axis))?;
            let from_preset = preset.filter(|p| p.axis == axis);
            let min = min.or(from_preset.map(|p| p.min));
            let max = max.or(from_preset.map(|p| p.max));
            Some(match (min, max) {
                (Some(lo), Some(hi)) if points > 0 && lo.is_finite() && hi.is_finite() => {
                    Ok(AxisSpec {
                        axis,
                        values: linspace(lo, hi, points),
                    })
                }
                _ => Err(CliError::Usage(format!(
                    "axis {} needs finite min/max and at least one point",
                    axis.name()
                ))),
            })
        };
        let primary = axis_spec(a.axis, a.axis_min, a.axis_max, a.axis_points, preset.axis)
            .ok_or_else(|| CliError::Usage("sweep needs --axis or a --preset".into()))??;
        let asymptote = a.asymptote || preset.asymptote;
        let secondary = if asymptote {
            axis_spec(
                a.axis2,
                a.axis2_min,
                a.axis2_max,
                a.axis2_points,
                preset.axis2,
            )
            .transpose()?
        } else if a.axis2.is_some() {
            return Err(CliError::Usage(
                "--axis2 is only meaningful with --asymptote".into(),
            ));
        } else {
            None
        };
        Ok(Self {
            primary,
            secondary,
            asymptote,
        })
    }
}

fn status(r: &Result<f64, Error>) -> (String, String) {
    match r {
        Ok(f) => (num(*f), "ok".to_string()),
        Err(e) => (num(f64::NAN), format!("invalid:{}", e.code())),
    }
}

fn asymptote_value(raw: &RawModel) -> Result<f64, Error> {
    let model = raw.build()?;
    let th = match model.bath {
        Bath::Thermal(th) => th,
        Bath::Explicit(_) => unreachable!("rejected before the sweep"),
    };
    thermal_diffusion(&model.sys, &th)?;
    if model.sys.lambda() == 0.0 {
        return Err(Error::NoStationaryState);
    }
    asymptotic_fidelity_displaced(&model.sys, &th, &model.init)
}

fn trajectory_values(raw: &RawModel, times: &[f64]) -> Result<Vec<f64>, Error> {
    let model = raw.build()?;
    let traj = fidelity_trajectory(&model.sys, &model.bath, &model.init, times)?;
    Ok(traj.values().collect())
}

pub fn sweep(args: &ModelArgs, spec: &SweepSpec) -> Result<CsvTable, CliError> {
    let raw = args.resolve()?;
    let axis = spec.primary.axis;
    if spec.asymptote {
        if matches!(raw.bath, RawBath::Explicit { .. }) {
            return Err(CliError::Usage(
                "asymptote sweeps need a thermal bath".into(),
            ));
        }
        let mut header = vec![axis.name()];
        if let Some(s) = &spec.secondary {
            header.push(s.axis.name());
        }
        header.extend(["F_inf", "status"]);
        let mut t = CsvTable::new(&header);
        provenance(&mut t, "sweep --asymptote", &raw);
        let grid: Vec<(f64, Option<f64>)> = match &spec.secondary {
            None => spec.primary.values.iter().map(|&v| (v, None)).collect(),
            Some(s) => spec
                .primary
                .values
                .iter()
                .flat_map(|&v| s.values.iter().map(move |&w| (v, Some(w))))
                .collect(),
        };
        let results: Vec<Result<f64, Error>> = grid
            .par_iter()
            .map(|&(v, w)| {
                let mut point = raw.with(axis, v);
                if let (Some(w), Some(s)) = (w, &spec.secondary) {
                    point = point.with(s.axis, w);
                }
                asymptote_value(&point)
            })
            .collect();
        for ((v, w), r) in grid.iter().zip(&results) {
            let mut row = vec![num(*v)];
            if let Some(w) = w {
                row.push(num(*w));
            }
            let (f, s) = status(r);
            row.extend([f, s]);
            t.push(row);
        }
        return Ok(t);
    }

    let times = args.times()?;
    let mut t = CsvTable::new(&["t", axis.name(), "F", "status"]);
    provenance(&mut t, "sweep", &raw);
    t.comment(format!(
        "axis {} swept; rows ordered t outer, axis inner",
        axis.name()
    ));
    let columns: Vec<Result<Vec<f64>, Error>> = spec
        .primary
        .values
        .par_iter()
        .map(|&v| trajectory_values(&raw.with(axis, v), &times))
        .collect();
    for (i, &time) in times.iter().enumerate() {
        for (&v, col) in spec.primary.values.iter().zip(&columns) {
            let (f, s) = status(&col.as_ref().map(|c| c[i]).map_err(Clone::clone));
            t.push(vec![num(time), num(v), f, s]);
        }
    }
    Ok(t)
}

/// Prints the report; true iff every check passed.
pub fn verify(opts: &VerifyOptions) -> bool {
    let report = verify::run(opts);
    println!(
        "# gaussfid verify: {} samples, seed {}",
        opts.samples, opts.seed
    );
    for c in &report.checks {
        println!(
            "{} {:<30} tolerance={:.1e} observed={:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.tolerance,
            c.observed
        );
    }
    report.passed()
}
