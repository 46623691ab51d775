//! geometry -> wall and pressures -> expansion fields, for one configuration.

use anyhow::{Context, Result};
use curvepipe::coupling::{
    advance_time_step, apply_wall_law, initial_state, CouplingSettings, ElasticLaw, WallLaw,
    WallState,
};
use curvepipe::expansion::{ExpansionFields, StationData};
use curvepipe::geometry::{CenterCurve, Frame, RadiusSample, TubeMap};
use curvepipe::grid::UniformGrid;
use curvepipe::params::{BodyForce, FluidParams};
use curvepipe::pressure::{solve_p0, PressureExpansion, PressureProblem, TimeMode};

use crate::config::{LawName, RunConfig};

pub struct Pipeline {
    pub curve: CenterCurve,
    pub fluid: FluidParams,
    pub body: BodyForce,
    pub grid: UniformGrid,
    pub frames: Vec<Frame>,
    pub wall: WallState,
    pub pressure: PressureExpansion,
    pub mode: TimeMode,
    /// Largest `eps * kappa * R` along the pipe.
    pub stretch: f64,
}

impl Pipeline {
    /// Runs the configuration, optionally on another center curve.
    pub fn run(cfg: &RunConfig, steady: bool, curve: Option<CenterCurve>) -> Result<Self> {
        let curve = match curve {
            Some(c) => c,
            None => cfg.curve().context("geometry")?,
        };
        let grid = UniformGrid::new(cfg.grid.n_s1, curve.length()).context("geometry")?;
        let frames = grid
            .nodes()
            .iter()
            .map(|s| curve.frenet_frame(*s))
            .collect::<Result<Vec<_>, _>>()
            .context("geometry")?;
        let fluid = cfg.fluid()?;
        let body = cfg.body()?;
        let mode = if steady {
            TimeMode::Steady
        } else {
            TimeMode::Unsteady
        };
        let problem = PressureProblem {
            fluid,
            bc: cfg.pressure_bc(),
            body,
            kappa: frames.iter().map(|f| f.kappa).collect(),
            mode,
        };
        let (wall, pressure) = match cfg.wall.law {
            LawName::Rigid | LawName::Prescribed => prescribed(cfg, grid, &problem, steady)?,
            LawName::Elastic => elastic(cfg, grid, &problem, steady)?,
        };

        let profile = |_t: f64, s: f64| RadiusSample {
            r: grid.interpolate(&wall.r, s),
            dr_ds: 0.0,
            dr_dt: 0.0,
        };
        let map = TubeMap::new(cfg.eps, &curve, &profile, wall.t, 4 * grid.len())
            .context("geometry: tube map")?;
        let stretch = map.worst_station(wall.t, 4 * grid.len()).1;

        Ok(Self {
            curve,
            fluid,
            body,
            grid,
            frames,
            wall,
            pressure,
            mode,
            stretch,
        })
    }

    pub fn station(&self, i: usize) -> StationData<f64> {
        StationData::from_solution(
            i,
            &self.wall,
            &self.pressure,
            &self.frames[i],
            &self.fluid,
            &self.body,
        )
    }

    pub fn fields(&self, i: usize) -> Result<ExpansionFields<f64>> {
        ExpansionFields::build(&self.station(i))
            .with_context(|| format!("expansion at s1 = {}", self.grid.node(i)))
    }

    /// Grid nodes nearest to the requested arc lengths, deduplicated;
    /// the midpoint when none are given.
    pub fn station_indices(&self, requested: Option<&[f64]>) -> Vec<usize> {
        let h = self.grid.spacing();
        let last = self.grid.len() - 1;
        let mid = [self.grid.length() / 2.0];
        let mut idx: Vec<usize> = requested
            .unwrap_or(&mid)
            .iter()
            .map(|s| ((s / h).round().max(0.0) as usize).min(last))
            .collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}

fn prescribed_wall(cfg: &RunConfig, grid: UniformGrid, t: f64) -> Result<WallState> {
    let alpha = cfg.wall.rate;
    let scale = 1.0 + alpha * t;
    let rows: Vec<_> = grid.nodes().iter().map(|s| cfg.wall.rest(*s)).collect();
    let wall = WallState::with_derivatives(
        grid,
        t,
        rows.iter().map(|r| r.0 * scale).collect(),
        rows.iter().map(|r| r.1 * scale).collect(),
        rows.iter().map(|r| r.2 * scale).collect(),
        rows.iter().map(|r| r.0 * alpha).collect(),
    )?;
    Ok(wall)
}

/// Rigid or prescribed motion: the pressures at `t_end` do not depend on
/// history, and the mixed time derivative is a backward difference over `dt`.
fn prescribed(
    cfg: &RunConfig,
    grid: UniformGrid,
    problem: &PressureProblem,
    steady: bool,
) -> Result<(WallState, PressureExpansion)> {
    if steady {
        anyhow::ensure!(
            cfg.wall.rate == 0.0,
            "coupling: steady mode needs a still wall, wall.rate = {}",
            cfg.wall.rate
        );
    }
    let t = if steady { 0.0 } else { cfg.time.t_end };
    let wall = prescribed_wall(cfg, grid, t).context("coupling")?;
    let pressure = if steady {
        problem.solve(&wall, None)
    } else {
        let dt = cfg.time.dt;
        let before = prescribed_wall(cfg, grid, t - dt).context("coupling")?;
        let prev = solve_p0(&before, &problem.fluid, &problem.bc).context("pressure")?;
        problem.solve(&wall, Some((&prev, dt)))
    }
    .context("pressure")?;
    Ok((wall, pressure))
}

fn elastic(
    cfg: &RunConfig,
    grid: UniformGrid,
    problem: &PressureProblem,
    steady: bool,
) -> Result<(WallState, PressureExpansion)> {
    let rest: Vec<f64> = grid.nodes().iter().map(|s| cfg.wall.rest(*s).0).collect();
    let law = ElasticLaw::new(
        cfg.wall.young.unwrap_or_default(),
        cfg.wall.thickness.unwrap_or_default(),
        rest,
        cfg.wall.external_pressure,
    )
    .context("coupling")?;
    let settings = CouplingSettings::default();
    if steady {
        return steady_elastic(&law, grid, problem, &settings);
    }
    let law = WallLaw::AlgebraicElastic(law);
    let steps = ((cfg.time.t_end / cfg.time.dt).ceil() as usize).max(1);
    let mut state = initial_state(grid, &law, &[]).context("coupling")?;
    let mut previous = None;
    let mut last = None;
    for _ in 0..steps {
        let step = advance_time_step(
            &state,
            &law,
            problem,
            cfg.time.dt,
            previous.as_ref(),
            &settings,
        )
        .with_context(|| format!("coupling at t = {}", state.t + cfg.time.dt))?;
        state = step.wall.clone();
        previous = Some(step.pressure.p0.clone());
        last = Some(step);
    }
    let step = last.expect("at least one step");
    Ok((step.wall, step.pressure))
}

/// Still wall satisfying the tube law: relaxed fixed point on `R`.
fn steady_elastic(
    law: &ElasticLaw,
    grid: UniformGrid,
    problem: &PressureProblem,
    settings: &CouplingSettings,
) -> Result<(WallState, PressureExpansion)> {
    let n = grid.len();
    let mut r = law.rest_radius.clone();
    for _ in 0..settings.max_iterations {
        let wall = WallState::new(grid, 0.0, r.clone(), vec![0.0; n]).context("coupling")?;
        let p0 = solve_p0(&wall, &problem.fluid, &problem.bc).context("pressure")?;
        let target = apply_wall_law(law, &p0.p).context("coupling")?;
        let change = target
            .iter()
            .zip(&r)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if change <= settings.tolerance * wall.max_radius() {
            let pressure = problem.complete(&wall, p0, None).context("pressure")?;
            return Ok((wall, pressure));
        }
        for (ri, ti) in r.iter_mut().zip(&target) {
            *ri += settings.relaxation * (ti - *ri);
        }
    }
    anyhow::bail!(
        "coupling: steady elastic wall did not converge in {} iterations",
        settings.max_iterations
    )
}
