//! The three axial boundary value problems for `p0`, `p1` and `p02`.
//!
//! Each has the flux form `(R^4 p')' = f` on a uniform grid and is
//! discretized conservatively:
//!
//! ```text
//! (a_{i+1/2} (p_{i+1} - p_i) - a_{i-1/2} (p_i - p_{i-1})) / h^2 = f_i
//! ```
//!
//! with `a_{i+1/2}` the mean of the nodal `R^4` values.

use thiserror::Error;

use crate::coupling::WallState;
use crate::grid::{first_derivative, GridError, UniformGrid};
use crate::linalg::{solve_tridiagonal, LinalgError};
use crate::params::{BodyForce, FluidParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PressureError {
    #[error("radius must be positive, got R = {value} at node {index}")]
    NonPositiveRadius { index: usize, value: f64 },
    #[error("tridiagonal solve failed: {0}")]
    Solver(#[from] LinalgError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("boundary series for {0} is empty or not increasing in time")]
    BadSeries(&'static str),
    #[error("unsteady run is missing the mixed derivative d2p0/dt ds1")]
    MissingTimeDerivative,
}

/// A Dirichlet value, constant or tabulated in time.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryValue {
    Constant(f64),
    /// `(t, value)` pairs, linearly interpolated and held constant outside.
    Series(Vec<(f64, f64)>),
}

impl BoundaryValue {
    pub fn at(&self, t: f64) -> f64 {
        match self {
            BoundaryValue::Constant(v) => *v,
            BoundaryValue::Series(points) => {
                let first = points[0];
                let last = points[points.len() - 1];
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let k = points.partition_point(|p| p.0 <= t);
                let (t0, v0) = points[k - 1];
                let (t1, v1) = points[k];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    fn validate(&self, name: &'static str) -> Result<(), PressureError> {
        match self {
            BoundaryValue::Constant(v) if v.is_finite() => Ok(()),
            BoundaryValue::Series(points)
                if !points.is_empty()
                    && points.iter().all(|(t, v)| t.is_finite() && v.is_finite())
                    && points.windows(2).all(|w| w[1].0 > w[0].0) =>
            {
                Ok(())
            }
            _ => Err(PressureError::BadSeries(name)),
        }
    }
}

impl From<f64> for BoundaryValue {
    fn from(v: f64) -> Self {
        BoundaryValue::Constant(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dirichlet {
    pub inlet: BoundaryValue,
    pub outlet: BoundaryValue,
}

impl Dirichlet {
    pub fn constant(inlet: f64, outlet: f64) -> Self {
        Self {
            inlet: inlet.into(),
            outlet: outlet.into(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0, 0.0)
    }

    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.inlet.at(t), self.outlet.at(t))
    }
}

/// Boundary data for the three pressure unknowns. `p1` and `p02` default to
/// homogeneous values.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureBC {
    pub p0: Dirichlet,
    pub p1: Dirichlet,
    pub p02: Dirichlet,
}

impl PressureBC {
    pub fn new(p0: Dirichlet) -> Self {
        Self {
            p0,
            p1: Dirichlet::zero(),
            p02: Dirichlet::zero(),
        }
    }

    pub fn validate(&self) -> Result<(), PressureError> {
        for (name, d) in [("p0", &self.p0), ("p1", &self.p1), ("p02", &self.p02)] {
            d.inlet.validate(name)?;
            d.outlet.validate(name)?;
        }
        Ok(())
    }
}

/// Whether time derivatives of the pressure are part of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMode {
    Steady,
    Unsteady,
}

/// Leading-order pressure and the derivatives the velocity terms consume.
#[derive(Debug, Clone, PartialEq)]
pub struct P0Solution {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
    pub d3p: Vec<f64>,
    /// `d2p0/dt ds1`; `None` until a previous time level is attached.
    pub dtdp: Option<Vec<f64>>,
}

impl P0Solution {
    /// Backward difference in time of `dp0/ds1` against `previous`.
    pub fn attach_time_derivative(&mut self, previous: &P0Solution, dt: f64) {
        self.dtdp = Some(
            self.dp
                .iter()
                .zip(&previous.dp)
                .map(|(a, b)| (a - b) / dt)
                .collect(),
        );
    }

    pub fn zero_time_derivative(&mut self) {
        self.dtdp = Some(vec![0.0; self.p.len()]);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct P1Solution {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct P02Solution {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    /// Nodal values of the bracket whose derivative drives the equation.
    pub bracket: Vec<f64>,
}

/// All pressure data on one grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureExpansion {
    pub grid: UniformGrid,
    pub t: f64,
    pub p0: P0Solution,
    pub p1: P1Solution,
    pub p02: P02Solution,
}

fn r4(wall: &WallState) -> Result<Vec<f64>, PressureError> {
    wall.r
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            if r > 0.0 && r.is_finite() {
                Ok(r.powi(4))
            } else {
                Err(PressureError::NonPositiveRadius { index: i, value: r })
            }
        })
        .collect()
}

/// `R^4` at half nodes: arithmetic mean of the neighbouring nodal values.
pub fn half_node_coefficients(r4_nodal: &[f64]) -> Vec<f64> {
    r4_nodal.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Solves `(a p')' = f` with Dirichlet ends; `a_half[i]` sits between nodes
/// `i` and `i+1`.
pub fn solve_flux_form(
    a_half: &[f64],
    f: &[f64],
    h: f64,
    (left, right): (f64, f64),
) -> Result<Vec<f64>, PressureError> {
    let n = f.len();
    let h2 = h * h;
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    diag[0] = 1.0;
    rhs[0] = left;
    diag[n - 1] = 1.0;
    rhs[n - 1] = right;
    for i in 1..n - 1 {
        lower[i] = a_half[i - 1] / h2;
        upper[i] = a_half[i] / h2;
        diag[i] = -(a_half[i - 1] + a_half[i]) / h2;
        rhs[i] = f[i];
    }
    // Eliminate the known boundary values so the interior block stays
    // symmetric and well scaled.
    rhs[1] -= lower[1] * left;
    lower[1] = 0.0;
    rhs[n - 2] -= upper[n - 2] * right;
    upper[n - 2] = 0.0;
    let inner = solve_tridiagonal(
        &lower[1..n - 1],
        &diag[1..n - 1],
        &upper[1..n - 1],
        &rhs[1..n - 1],
    )?;
    let mut p = Vec::with_capacity(n);
    p.push(left);
    p.extend(inner);
    p.push(right);
    Ok(p)
}

/// Max over interior nodes of `|(a p')'_h - f|`, divided by
/// `max(|f|, |a p'| / L)`.
pub fn flux_residual(a_half: &[f64], p: &[f64], f: &[f64], h: f64) -> f64 {
    let n = p.len();
    let flux: Vec<f64> = (0..n - 1)
        .map(|i| a_half[i] * (p[i + 1] - p[i]) / h)
        .collect();
    let length = h * (n - 1) as f64;
    let scale = f
        .iter()
        .map(|v| v.abs())
        .chain(flux.iter().map(|q| q.abs() / length))
        .fold(f64::MIN_POSITIVE, f64::max);
    (1..n - 1)
        .map(|i| ((flux[i] - flux[i - 1]) / h - f[i]).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Source of the `p0` equation, `16 nu rho0 R dR/dt`.
pub fn p0_source(wall: &WallState, fluid: &FluidParams) -> Vec<f64> {
    wall.r
        .iter()
        .zip(&wall.dr_dt)
        .map(|(r, rt)| 16.0 * fluid.mu() * r * rt)
        .collect()
}

pub fn solve_p0(
    wall: &WallState,
    fluid: &FluidParams,
    bc: &PressureBC,
) -> Result<P0Solution, PressureError> {
    bc.validate()?;
    let r4 = r4(wall)?;
    let a = half_node_coefficients(&r4);
    let h = wall.grid.spacing();
    let f = p0_source(wall, fluid);
    let p = solve_flux_form(&a, &f, h, bc.p0.at(wall.t))?;
    let dp = first_derivative(&p, h);
    // The second derivative follows from the equation itself,
    // R^4 p'' = 16 mu R R_t - 4 R^3 R' p', which keeps the identities
    // that hold for the continuous solution exact at the nodes.
    let d2p: Vec<f64> = (0..p.len())
        .map(|i| {
            let r = wall.r[i];
            (16.0 * fluid.mu() * r * wall.dr_dt[i] - 4.0 * r.powi(3) * wall.dr_ds[i] * dp[i])
                / r4[i]
        })
        .collect();
    let d3p = first_derivative(&d2p, h);
    Ok(P0Solution {
        p,
        dp,
        d2p,
        d3p,
        dtdp: None,
    })
}

pub fn solve_p1(wall: &WallState, bc: &PressureBC) -> Result<P1Solution, PressureError> {
    bc.validate()?;
    let r4 = r4(wall)?;
    let a = half_node_coefficients(&r4);
    let h = wall.grid.spacing();
    let f = vec![0.0; wall.r.len()];
    let p = solve_flux_form(&a, &f, h, bc.p1.at(wall.t))?;
    let dp = first_derivative(&p, h);
    let d2p = (0..p.len())
        .map(|i| -4.0 * wall.dr_ds[i] * dp[i] / wall.r[i])
        .collect();
    Ok(P1Solution { p, dp, d2p })
}

/// The bracket `B` of `(R^4 p02')' = B'` at one node.
#[allow(clippy::too_many_arguments)]
pub fn p02_bracket_at(
    fluid: &FluidParams,
    r: f64,
    dr: f64,
    d2r: f64,
    rt: f64,
    kappa: f64,
    dp: f64,
    d2p: f64,
    d3p: f64,
    dtdp: f64,
    b1: f64,
) -> f64 {
    let (rho, nu) = (fluid.rho0(), fluid.nu());
    -3.0 * r.powi(8) / (64.0 * rho * nu * nu) * dp * d2p
        - r.powi(6) / 12.0 * d3p
        - kappa * kappa * r.powi(6) / 48.0 * dp
        + r.powi(5) / (2.0 * nu) * rt * dp
        - r.powi(7) / (8.0 * rho * nu * nu) * dr * dp * dp
        - r.powi(4) / 2.0 * dr * dr * dp
        - r.powi(5) / 2.0 * d2r * dp
        - r.powi(5) * dr * d2p
        + r.powi(6) / (6.0 * nu) * dtdp
        + r.powi(4) * rho * b1
}

/// Nodal bracket values; `kappa` holds the curvature at each node.
pub fn p02_bracket(
    wall: &WallState,
    fluid: &FluidParams,
    p0: &P0Solution,
    kappa: &[f64],
    body: &BodyForce,
    mode: TimeMode,
) -> Result<Vec<f64>, PressureError> {
    wall.grid.check(kappa)?;
    let dtdp = match (&p0.dtdp, mode) {
        (Some(v), _) => v.clone(),
        (None, TimeMode::Steady) => vec![0.0; p0.p.len()],
        (None, TimeMode::Unsteady) => return Err(PressureError::MissingTimeDerivative),
    };
    Ok((0..p0.p.len())
        .map(|i| {
            p02_bracket_at(
                fluid,
                wall.r[i],
                wall.dr_ds[i],
                wall.d2r_ds2[i],
                wall.dr_dt[i],
                kappa[i],
                p0.dp[i],
                p0.d2p[i],
                p0.d3p[i],
                dtdp[i],
                body.b1,
            )
        })
        .collect())
}

/// Right side `B'` of the `p02` equation at interior nodes, as the
/// difference of half-node bracket averages.
pub fn p02_source(bracket: &[f64], h: f64) -> Vec<f64> {
    let n = bracket.len();
    (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                0.0
            } else {
                (bracket[i + 1] - bracket[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

pub fn solve_p02(
    wall: &WallState,
    fluid: &FluidParams,
    p0: &P0Solution,
    kappa: &[f64],
    body: &BodyForce,
    bc: &PressureBC,
    mode: TimeMode,
) -> Result<P02Solution, PressureError> {
    bc.validate()?;
    let r4 = r4(wall)?;
    let a = half_node_coefficients(&r4);
    let h = wall.grid.spacing();
    let bracket = p02_bracket(wall, fluid, p0, kappa, body, mode)?;
    let f = p02_source(&bracket, h);
    let p = solve_flux_form(&a, &f, h, bc.p02.at(wall.t))?;
    let dp = first_derivative(&p, h);
    Ok(P02Solution { p, dp, bracket })
}

/// The inputs shared by every pressure solve of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureProblem {
    pub fluid: FluidParams,
    pub bc: PressureBC,
    pub body: BodyForce,
    /// Curvature at the grid nodes.
    pub kappa: Vec<f64>,
    pub mode: TimeMode,
}

impl PressureProblem {
    /// Solves `p1` and `p02` on top of an already solved `p0`. In unsteady
    /// mode `previous` supplies the time level for `d2p0/dt ds1`; without it
    /// the mixed derivative is taken as zero (first step).
    pub fn complete(
        &self,
        wall: &WallState,
        mut p0: P0Solution,
        previous: Option<(&P0Solution, f64)>,
    ) -> Result<PressureExpansion, PressureError> {
        match (self.mode, previous) {
            (TimeMode::Unsteady, Some((prev, dt))) => p0.attach_time_derivative(prev, dt),
            _ => p0.zero_time_derivative(),
        }
        let p1 = solve_p1(wall, &self.bc)?;
        let p02 = solve_p02(
            wall,
            &self.fluid,
            &p0,
            &self.kappa,
            &self.body,
            &self.bc,
            self.mode,
        )?;
        Ok(PressureExpansion {
            grid: wall.grid,
            t: wall.t,
            p0,
            p1,
            p02,
        })
    }

    pub fn solve(
        &self,
        wall: &WallState,
        previous: Option<(&P0Solution, f64)>,
    ) -> Result<PressureExpansion, PressureError> {
        let p0 = solve_p0(wall, &self.fluid, &self.bc)?;
        self.complete(wall, p0, previous)
    }
}

impl PressureExpansion {
    /// Residuals of the three discrete equations, relative as in
    /// [`flux_residual`].
    pub fn residuals(&self, wall: &WallState, fluid: &FluidParams) -> [f64; 3] {
        let h = self.grid.spacing();
        let a = half_node_coefficients(&wall.r.iter().map(|r| r.powi(4)).collect::<Vec<_>>());
        [
            flux_residual(&a, &self.p0.p, &p0_source(wall, fluid), h),
            flux_residual(&a, &self.p1.p, &vec![0.0; self.p1.p.len()], h),
            flux_residual(&a, &self.p02.p, &p02_source(&self.p02.bracket, h), h),
        ]
    }
}
