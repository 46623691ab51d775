//! Wall laws and the implicit coupling of the wall radius to `p0`.

use thiserror::Error;

use crate::geometry::{RadiusProfile, RadiusSample};
use crate::grid::{first_derivative, second_derivative, GridError, UniformGrid};
use crate::pressure::{solve_p0, P0Solution, PressureError, PressureExpansion, PressureProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("wall collapsed: R = {value} at node {index}")]
    Collapse { index: usize, value: f64 },
    #[error("invalid wall law: {0}")]
    InvalidLaw(String),
    #[error("time step must be positive, got {0}")]
    BadTimeStep(f64),
    #[error("coupling did not converge in {iterations} iterations; residual history {history:?}")]
    Divergence {
        iterations: usize,
        history: Vec<f64>,
    },
    #[error(transparent)]
    Pressure(#[from] PressureError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Wall radius and its derivatives on the axial grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WallState {
    pub grid: UniformGrid,
    pub t: f64,
    pub r: Vec<f64>,
    pub dr_ds: Vec<f64>,
    pub d2r_ds2: Vec<f64>,
    pub dr_dt: Vec<f64>,
}

impl WallState {
    /// Spatial derivatives come from the grid stencils.
    pub fn new(
        grid: UniformGrid,
        t: f64,
        r: Vec<f64>,
        dr_dt: Vec<f64>,
    ) -> Result<Self, CouplingError> {
        grid.check(&r)?;
        let h = grid.spacing();
        let dr_ds = first_derivative(&r, h);
        let d2r_ds2 = second_derivative(&r, h);
        Self::with_derivatives(grid, t, r, dr_ds, d2r_ds2, dr_dt)
    }

    pub fn with_derivatives(
        grid: UniformGrid,
        t: f64,
        r: Vec<f64>,
        dr_ds: Vec<f64>,
        d2r_ds2: Vec<f64>,
        dr_dt: Vec<f64>,
    ) -> Result<Self, CouplingError> {
        for v in [&r, &dr_ds, &d2r_ds2, &dr_dt] {
            grid.check(v)?;
        }
        if let Some((index, &value)) = r
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(CouplingError::Collapse { index, value });
        }
        Ok(Self {
            grid,
            t,
            r,
            dr_ds,
            d2r_ds2,
            dr_dt,
        })
    }

    /// `R = r0` everywhere, moving at the uniform rate `rate`.
    pub fn uniform(grid: UniformGrid, t: f64, r0: f64, rate: f64) -> Result<Self, CouplingError> {
        let n = grid.len();
        Self::with_derivatives(
            grid,
            t,
            vec![r0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![rate; n],
        )
    }

    /// Radius and wall speed from `f(s1) = (R, dR/dt)`.
    pub fn from_fn(
        grid: UniformGrid,
        t: f64,
        f: impl Fn(f64) -> (f64, f64),
    ) -> Result<Self, CouplingError> {
        let (r, rt): (Vec<f64>, Vec<f64>) = grid.nodes().into_iter().map(f).unzip();
        Self::new(grid, t, r, rt)
    }

    pub fn max_radius(&self) -> f64 {
        self.r.iter().copied().fold(0.0, f64::max)
    }
}

impl RadiusProfile for WallState {
    /// Interpolates the stored state; `t` is ignored since a state holds a
    /// single time level.
    fn radius(&self, _t: f64, s1: f64) -> RadiusSample {
        RadiusSample {
            r: self.grid.interpolate(&self.r, s1),
            dr_ds: self.grid.interpolate(&self.dr_ds, s1),
            dr_dt: self.grid.interpolate(&self.dr_dt, s1),
        }
    }
}

/// `p0 - pe = (E h0 / R0^2) (R - R0)` pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticLaw {
    pub young: f64,
    pub thickness: f64,
    /// Rest radius at each grid node.
    pub rest_radius: Vec<f64>,
    pub external_pressure: f64,
}

impl ElasticLaw {
    pub fn new(
        young: f64,
        thickness: f64,
        rest_radius: Vec<f64>,
        external_pressure: f64,
    ) -> Result<Self, CouplingError> {
        if !(young > 0.0 && young.is_finite()) {
            return Err(CouplingError::InvalidLaw(format!(
                "Young modulus must be positive, got {young}"
            )));
        }
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(CouplingError::InvalidLaw(format!(
                "wall thickness must be positive, got {thickness}"
            )));
        }
        if rest_radius.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(CouplingError::InvalidLaw(
                "rest radius must be positive".into(),
            ));
        }
        if !external_pressure.is_finite() {
            return Err(CouplingError::InvalidLaw(
                "external pressure must be finite".into(),
            ));
        }
        Ok(Self {
            young,
            thickness,
            rest_radius,
            external_pressure,
        })
    }

    /// Wall stiffness `E h0 / R0^2` at node `i`.
    pub fn stiffness(&self, i: usize) -> f64 {
        self.young * self.thickness / self.rest_radius[i].powi(2)
    }

    /// Max of `|R - R0 - (p0 - pe) / stiffness|` relative to `max R`.
    pub fn residual(&self, p0: &[f64], r: &[f64]) -> f64 {
        let scale = r.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
        (0..r.len())
            .map(|i| {
                (r[i] - self.rest_radius[i] - (p0[i] - self.external_pressure) / self.stiffness(i))
                    .abs()
            })
            .fold(0.0, f64::max)
            / scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WallLaw {
    Rigid,
    AlgebraicElastic(ElasticLaw),
}

pub fn apply_wall_law(law: &ElasticLaw, p0: &[f64]) -> Result<Vec<f64>, CouplingError> {
    p0.iter()
        .enumerate()
        .map(|(i, p)| {
            let r = law.rest_radius[i] + (p - law.external_pressure) / law.stiffness(i);
            if r > 0.0 && r.is_finite() {
                Ok(r)
            } else {
                Err(CouplingError::Collapse { index: i, value: r })
            }
        })
        .collect()
}

/// Iteration controls of the implicit step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSettings {
    pub relaxation: f64,
    pub max_iterations: usize,
    /// Stop when `max |R_law - R| <= tolerance * max R`.
    pub tolerance: f64,
}

impl Default for CouplingSettings {
    fn default() -> Self {
        Self {
            relaxation: 0.5,
            max_iterations: 100,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub wall: WallState,
    pub pressure: PressureExpansion,
    pub iterations: usize,
    /// Fixed-point residual `max |R_law - R| / max R` per iteration.
    pub history: Vec<f64>,
    pub final_relaxation: f64,
}

/// Advances the wall and the pressures from `state` to `state.t + dt`.
///
/// `previous` is the `p0` of `state`, used for the mixed time derivative in
/// unsteady runs.
pub fn advance_time_step(
    state: &WallState,
    law: &WallLaw,
    problem: &PressureProblem,
    dt: f64,
    previous: Option<&P0Solution>,
    settings: &CouplingSettings,
) -> Result<StepOutcome, CouplingError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CouplingError::BadTimeStep(dt));
    }
    let t_new = state.t + dt;
    let grid = state.grid;
    let n = grid.len();
    let prev = previous.map(|p| (p, dt));

    let law = match law {
        WallLaw::Rigid => {
            let wall = WallState::with_derivatives(
                grid,
                t_new,
                state.r.clone(),
                state.dr_ds.clone(),
                state.d2r_ds2.clone(),
                vec![0.0; n],
            )?;
            let pressure = problem.solve(&wall, prev)?;
            return Ok(StepOutcome {
                wall,
                pressure,
                iterations: 1,
                history: vec![0.0],
                final_relaxation: settings.relaxation,
            });
        }
        WallLaw::AlgebraicElastic(law) => law,
    };
    grid.check(&law.rest_radius)?;

    let build = |r: &[f64]| {
        let rt = r.iter().zip(&state.r).map(|(a, b)| (a - b) / dt).collect();
        WallState::new(grid, t_new, r.to_vec(), rt)
    };

    let mut omega = settings.relaxation;
    let mut r = state.r.clone();
    let mut history = Vec::new();
    // Best iterate so far: (residual, radius, law target).
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for iteration in 1..=settings.max_iterations {
        let wall = build(&r)?;
        let p0 = solve_p0(&wall, &problem.fluid, &problem.bc)?;
        let target = apply_wall_law(law, &p0.p)?;
        let scale = wall.max_radius();
        let residual = target
            .iter()
            .zip(&r)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            / scale;
        history.push(residual);
        if residual <= settings.tolerance {
            let pressure = problem.complete(&wall, p0, prev)?;
            return Ok(StepOutcome {
                wall,
                pressure,
                iterations: iteration,
                history,
                final_relaxation: omega,
            });
        }
        match &best {
            Some((best_res, best_r, best_target)) if residual > *best_res => {
                // Overshoot: step again from the best iterate, half as far.
                omega *= 0.5;
                r = relax(best_r, best_target, omega);
            }
            _ => {
                r = relax(&r, &target, omega);
                best = Some((residual, wall.r, target));
            }
        }
    }
    Err(CouplingError::Divergence {
        iterations: settings.max_iterations,
        history,
    })
}

fn relax(r: &[f64], target: &[f64], omega: f64) -> Vec<f64> {
    r.iter()
        .zip(target)
        .map(|(ri, ti)| ri + omega * (ti - ri))
        .collect()
}

/// Wall state at rest before the first step.
pub fn initial_state(
    grid: UniformGrid,
    law: &WallLaw,
    rigid_radius: &[f64],
) -> Result<WallState, CouplingError> {
    let r = match law {
        WallLaw::Rigid => rigid_radius.to_vec(),
        WallLaw::AlgebraicElastic(l) => l.rest_radius.clone(),
    };
    let n = grid.len();
    WallState::new(grid, 0.0, r, vec![0.0; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(young: f64) -> ElasticLaw {
        ElasticLaw::new(young, 1.0, vec![1.0; 9], 0.0).unwrap()
    }

    #[test]
    fn rest_state_at_external_pressure() {
        let r = apply_wall_law(&law(10.0), &[0.0; 9]).unwrap();
        assert!(r.iter().all(|v| *v == 1.0));
    }

    #[test]
    fn direct_formula() {
        let r = apply_wall_law(&law(10.0), &[1.0; 9]).unwrap();
        assert!(r.iter().all(|v| (v - 1.1).abs() < 1e-15));
    }

    #[test]
    fn stiff_limit_recovers_rest_radius() {
        let r = apply_wall_law(&law(1e12), &[1.0; 9]).unwrap();
        assert!(r.iter().all(|v| (v - 1.0).abs() <= 1e-9));
    }

    #[test]
    fn collapse_is_reported() {
        let err = apply_wall_law(&law(1.0), &[-2.0; 9]);
        assert!(matches!(err, Err(CouplingError::Collapse { index: 0, .. })));
    }

    #[test]
    fn invalid_law_parameters() {
        assert!(ElasticLaw::new(0.0, 1.0, vec![1.0], 0.0).is_err());
        assert!(ElasticLaw::new(1.0, 1.0, vec![-1.0], 0.0).is_err());
    }
}
