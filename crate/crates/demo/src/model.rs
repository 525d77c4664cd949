use gaussfid::{
    asymptotic_fidelity, fidelity_trajectory, uniform_times, Bath, FidelityTrajectory,
    InitialParams, Result, SystemParams, ThermalSpec,
};

/// Parameters as entered on the page.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub omega: f64,
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
    pub delta: f64,
    pub r: f64,
    pub q0: f64,
    pub p0: f64,
}

impl Setup {
    pub fn build(&self) -> Result<(SystemParams, Bath, InitialParams)> {
        let sys = SystemParams::new(1.0, self.omega, 1.0, self.lambda, self.mu)?;
        let bath = Bath::Thermal(ThermalSpec::new(self.c)?);
        bath.diffusion(&sys)?;
        let init = InitialParams::new(self.delta, self.r, self.q0, self.p0)?;
        Ok((sys, bath, init))
    }

    fn trajectory(&self, t_max: f64, points: usize) -> Result<FidelityTrajectory> {
        let (sys, bath, init) = self.build()?;
        fidelity_trajectory(&sys, &bath, &init, &uniform_times(t_max, points))
    }
}

pub fn fidelity_curve(setup: &Setup, t_max: f64, points: usize) -> Result<Vec<f64>> {
    Ok(setup.trajectory(t_max, points)?.values().collect())
}

fn axis((lo, hi, n): (f64, f64, usize)) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn asymptote_grid(
    r: f64,
    deltas: (f64, f64, usize),
    cs: (f64, f64, usize),
) -> Result<Vec<f64>> {
    let deltas = axis(deltas);
    let mut out = Vec::with_capacity(deltas.len() * cs.2);
    for c in axis(cs) {
        let th = ThermalSpec::new(c)?;
        for &d in &deltas {
            out.push(asymptotic_fidelity(d, r, &th)?);
        }
    }
    Ok(out)
}

pub fn phase_trajectory(setup: &Setup, t_max: f64, points: usize) -> Result<Vec<f64>> {
    let traj = setup.trajectory(t_max, points)?;
    Ok(traj
        .points
        .iter()
        .flat_map(|p| {
            let s = &p.state;
            [s.mean_q(), s.mean_p(), s.var_qq(), s.var_pp(), s.cov_pq()]
        })
        .collect())
}
