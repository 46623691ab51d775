//! Flow rates, conservation and compatibility checks, residual oracles and
//! grid convergence.

use std::f64::consts::PI;

use crate::coupling::{CouplingError, WallState};
use crate::expansion::{
    eval_g, eval_u1_0, eval_u1_1, g1, rhs_u1_0, rhs_u1_1, rhs_u1_2, ExpansionError,
    ExpansionFields, StationData,
};
use crate::geometry::Frame;
use crate::grid::{second_derivative, UniformGrid};
use crate::params::{BodyForce, FluidParams};
use crate::polydisc::{DiscPoly, DiscVector, TrigSeries};
use crate::pressure::{
    half_node_coefficients, solve_p0, Dirichlet, PressureBC, PressureError, PressureExpansion,
};
use crate::scalar::Scalar;

/// Axial flow of each order and the leading cross-section area, per node.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRates {
    pub q: [Vec<f64>; 3],
    pub area: Vec<f64>,
}

/// `Q^k = R^2 * integral of u1_k over the unit disc`, `A = pi R^2`.
pub fn flow_rates(fields: &[ExpansionFields<f64>], r: &[f64]) -> FlowRates {
    let q = |k: usize| -> Vec<f64> {
        fields
            .iter()
            .zip(r)
            .map(|(f, r)| {
                let u = f.axial(k).expect("orders 0..=2 exist");
                r * r * u.disc_integral().to_f64()
            })
            .collect()
    };
    FlowRates {
        q: [q(0), q(1), q(2)],
        area: r.iter().map(|r| PI * r * r).collect(),
    }
}

/// Interior-node residuals of the two flow relations.
#[derive(Debug, Clone, PartialEq)]
pub struct MassReport {
    /// `dQ0/ds1 + dA/dt`.
    pub q0: Vec<f64>,
    /// `dQ1/ds1`.
    pub q1: Vec<f64>,
}

impl MassReport {
    pub fn max_q0(&self) -> f64 {
        self.q0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_q1(&self) -> f64 {
        self.q1.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn flux_station(fluid: &FluidParams, r: f64, dp0: f64, dp1: f64) -> StationData<f64> {
    StationData {
        rho0: fluid.rho0(),
        nu: fluid.nu(),
        r,
        dr: 0.0,
        d2r: 0.0,
        r_t: 0.0,
        kappa: 0.0,
        dkappa: 0.0,
        tau: 0.0,
        p0: 0.0,
        dp0,
        d2p0: 0.0,
        d3p0: 0.0,
        dp0_t: None,
        p1: 0.0,
        dp1,
        d2p1: 0.0,
        p02: 0.0,
        dp02: 0.0,
        b1: 0.0,
        b2: 0.0,
        b3: 0.0,
    }
}

/// Flow between nodes `i` and `i+1`, from the axial profiles built on the
/// half-node radius and the one-sided pressure slope the solver uses.
fn staggered_flows(
    wall: &WallState,
    pressure: &PressureExpansion,
    fluid: &FluidParams,
) -> (Vec<f64>, Vec<f64>) {
    let h = wall.grid.spacing();
    let r4: Vec<f64> = wall.r.iter().map(|r| r.powi(4)).collect();
    let a = half_node_coefficients(&r4);
    let mut q0 = Vec::with_capacity(a.len());
    let mut q1 = Vec::with_capacity(a.len());
    for (i, a) in a.iter().enumerate() {
        let r = a.powf(0.25);
        let dp0 = (pressure.p0.p[i + 1] - pressure.p0.p[i]) / h;
        let dp1 = (pressure.p1.p[i + 1] - pressure.p1.p[i]) / h;
        let s = flux_station(fluid, r, dp0, dp1);
        q0.push(r * r * eval_u1_0(&s).disc_integral().to_f64());
        q1.push(r * r * eval_u1_1(&s).disc_integral().to_f64());
    }
    (q0, q1)
}

pub fn check_mass_conservation(
    wall: &WallState,
    pressure: &PressureExpansion,
    fluid: &FluidParams,
) -> MassReport {
    let h = wall.grid.spacing();
    let (q0, q1) = staggered_flows(wall, pressure, fluid);
    let n = wall.r.len();
    let q0_res = (1..n - 1)
        .map(|i| (q0[i] - q0[i - 1]) / h + 2.0 * PI * wall.r[i] * wall.dr_dt[i])
        .collect();
    let q1_res = (1..n - 1).map(|i| (q1[i] - q1[i - 1]) / h).collect();
    MassReport {
        q0: q0_res,
        q1: q1_res,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    /// Boundary flux of the first-order transverse problem minus
    /// `2 pi dR/dt`, with `p0''` differenced from the nodal `p0` instead of
    /// taken from the equation.
    pub u1: Vec<f64>,
    /// Integral of `g` over the disc.
    pub g: Vec<f64>,
    pub spacing: f64,
}

impl CompatibilityReport {
    pub fn max_u1(&self) -> f64 {
        self.u1.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_g(&self) -> f64 {
        self.g.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn check_compatibility(
    wall: &WallState,
    pressure: &PressureExpansion,
    fluid: &FluidParams,
    frames: &[Frame],
    body: &BodyForce,
) -> CompatibilityReport {
    let h = wall.grid.spacing();
    let mu = fluid.mu();
    let d2p = second_derivative(&pressure.p0.p, h);
    let u1 = (0..wall.r.len())
        .map(|i| {
            let (r, dr, dp) = (wall.r[i], wall.dr_ds[i], pressure.p0.dp[i]);
            let d1 = 2.0 * r * dr * dp + r * r * d2p[i];
            2.0 * PI * r / (16.0 * mu) * (2.0 * d1 - r * r * d2p[i]) - 2.0 * PI * wall.dr_dt[i]
        })
        .collect();
    let g = frames
        .iter()
        .enumerate()
        .map(|(i, frame)| {
            let s = StationData::from_solution(i, wall, pressure, frame, fluid, body);
            eval_g(&s).disc_integral().to_f64()
        })
        .collect();
    CompatibilityReport { u1, g, spacing: h }
}

/// One grouped-order problem checked on a station.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualCheck {
    pub problem: &'static str,
    /// Largest coefficient of the interior residual polynomials.
    pub interior: f64,
    /// Largest Fourier coefficient of the boundary-trace defect.
    pub boundary: f64,
    /// Size of the terms entering the check, for relative comparisons.
    pub scale: f64,
    pub exact_zero: bool,
}

impl ResidualCheck {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.exact_zero || self.interior.max(self.boundary) <= rel_tol * self.scale.max(1.0)
    }
}

fn check<T: Scalar>(
    problem: &'static str,
    interior: &[DiscPoly<T>],
    boundary: &[TrigSeries<T>],
    inputs: &[f64],
) -> ResidualCheck {
    let exact_zero =
        interior.iter().all(DiscPoly::is_zero) && boundary.iter().all(TrigSeries::is_zero);
    ResidualCheck {
        problem,
        interior: interior
            .iter()
            .map(DiscPoly::max_abs_coeff)
            .fold(0.0, f64::max),
        boundary: boundary
            .iter()
            .map(TrigSeries::max_abs_coeff)
            .fold(0.0, f64::max),
        scale: inputs.iter().copied().fold(0.0, f64::max),
        exact_zero,
    }
}

fn vec_scale<T: Scalar>(v: &DiscVector<T>) -> f64 {
    v.max_abs_coeff()
}

fn trace_minus<T: Scalar>(a: &DiscPoly<T>, b: &DiscPoly<T>) -> TrigSeries<T> {
    (a.clone() - b.clone()).restrict_to_boundary()
}

/// Every cross-section problem evaluated on the built fields: interior
/// equations, divergence constraints and boundary traces.
pub fn grouped_residuals<T: Scalar>(
    s: &StationData<T>,
    f: &ExpansionFields<T>,
) -> Result<Vec<ResidualCheck>, ExpansionError> {
    let zero = DiscPoly::<T>::zero();
    let r_over_mu = s.r.clone() / s.mu();
    let mut out = Vec::new();

    let lhs = f.u1_0.laplacian();
    let rhs = rhs_u1_0(s);
    out.push(check(
        "axial order 0",
        &[lhs.clone() - rhs.clone()],
        &[f.u1_0.restrict_to_boundary()],
        &[lhs.max_abs_coeff(), rhs.max_abs_coeff()],
    ));

    let lhs = f.u1_1.laplacian();
    let rhs = rhs_u1_1(s);
    out.push(check(
        "axial order 1",
        &[lhs.clone() - rhs.clone()],
        &[f.u1_1.restrict_to_boundary()],
        &[lhs.max_abs_coeff(), rhs.max_abs_coeff()],
    ));

    let u = &f.transverse1;
    let grad = f.p2.gradient().scale(&r_over_mu);
    let lap = u.laplacian();
    let div = u.divergence();
    let g = g1(s);
    let wall2 = DiscPoly::z2().scale(&s.r_t);
    let wall3 = DiscPoly::z3().scale(&s.r_t);
    out.push(check(
        "transverse order 1",
        &[
            (lap.clone() - grad.clone()).c2,
            (lap.clone() - grad.clone()).c3,
            div - g.clone(),
            (u.clone() - f.phi_a.gradient()).c2,
            (u.clone() - f.phi_a.gradient()).c3,
        ],
        &[trace_minus(&u.c2, &wall2), trace_minus(&u.c3, &wall3)],
        &[
            vec_scale(&lap),
            vec_scale(&grad),
            g.max_abs_coeff(),
            vec_scale(u),
        ],
    ));

    let lhs = f.u1_2.laplacian();
    let rhs = rhs_u1_2(s)?;
    out.push(check(
        "axial order 2",
        &[lhs.clone() - rhs.clone()],
        &[f.u1_2.restrict_to_boundary()],
        &[lhs.max_abs_coeff(), rhs.max_abs_coeff()],
    ));

    let u = &f.transverse2;
    let grad = f.p3.gradient().scale(&r_over_mu);
    let lap = u.laplacian();
    let mom = lap.clone() - grad.clone() - f.force.clone();
    out.push(check(
        "transverse order 2",
        &[mom.c2, mom.c3, u.divergence() - f.g.clone()],
        &[trace_minus(&u.c2, &zero), trace_minus(&u.c3, &zero)],
        &[
            vec_scale(&lap),
            vec_scale(&grad),
            vec_scale(&f.force),
            f.g.max_abs_coeff(),
        ],
    ));
    Ok(out)
}

/// A rigid pipe of given radius profile, driven by fixed end pressures.
pub struct ConvergenceCase {
    pub length: f64,
    pub p_in: f64,
    pub p_out: f64,
    pub radius: Box<dyn Fn(f64) -> f64>,
}

impl ConvergenceCase {
    /// Exact `p0` for a rigid wall: `p` is affine in `int_0^s R^-4`.
    /// The integral is taken by composite Simpson on each cell.
    pub fn oracle(&self, nodes: &[f64]) -> Vec<f64> {
        const PANELS: usize = 64;
        let w = |s: f64| (self.radius)(s).powi(-4);
        let mut cumulative = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for &s in nodes {
            let h = (s - prev) / (2 * PANELS) as f64;
            let mut sum = w(prev) + w(s);
            for k in 1..2 * PANELS {
                let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
                sum += weight * w(prev + k as f64 * h);
            }
            acc += sum * h / 3.0;
            cumulative.push(acc);
            prev = s;
        }
        let total = *cumulative.last().unwrap_or(&1.0);
        cumulative
            .iter()
            .map(|c| self.p_in + (self.p_out - self.p_in) * c / total)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub spacing: f64,
    pub error: f64,
    /// Observed order against the previous row.
    pub order: Option<f64>,
    /// The error is at round-off level, so the order means nothing.
    pub at_floor: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn reached_floor(&self) -> bool {
        self.rows.iter().any(|r| r.at_floor)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error(transparent)]
    Pressure(#[from] PressureError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// Max nodal error of the `p0` solver against [`ConvergenceCase::oracle`]
/// on each grid size.
pub fn run_convergence_study(
    case: &ConvergenceCase,
    sizes: &[usize],
) -> Result<ConvergenceTable, StudyError> {
    let fluid = FluidParams::new(1.0, 1.0).expect("unit fluid is valid");
    let bc = PressureBC::new(Dirichlet::constant(case.p_in, case.p_out));
    let floor = 1e3 * f64::EPSILON * case.p_in.abs().max(case.p_out.abs()).max(1.0);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in sizes {
        let grid = UniformGrid::new(n, case.length)?;
        let wall = WallState::from_fn(grid, 0.0, |s| ((case.radius)(s), 0.0))?;
        let p = solve_p0(&wall, &fluid, &bc)?.p;
        let exact = case.oracle(&grid.nodes());
        let error = p
            .iter()
            .zip(&exact)
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
        let at_floor = error <= floor;
        let order = rows.last().and_then(|prev| {
            (!at_floor && !prev.at_floor)
                .then(|| (prev.error / error).ln() / (prev.spacing / grid.spacing()).ln())
        });
        rows.push(ConvergenceRow {
            nodes: n,
            spacing: grid.spacing(),
            error,
            order,
            at_floor,
        });
    }
    Ok(ConvergenceTable { rows })
}
