use crate::coupling::WallState;
use crate::geometry::Frame;
use crate::params::{BodyForce, FluidParams};
use crate::pressure::PressureExpansion;
use crate::scalar::Scalar;

/// Everything the closed-form terms need at one axial station.
///
/// Derivatives are with respect to `s1` unless named `*_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationData<T> {
    pub rho0: T,
    pub nu: T,
    pub r: T,
    pub dr: T,
    pub d2r: T,
    pub r_t: T,
    pub kappa: T,
    pub dkappa: T,
    pub tau: T,
    pub p0: T,
    pub dp0: T,
    pub d2p0: T,
    pub d3p0: T,
    /// `d2p0/dt ds1`; required by the second-order axial velocity.
    pub dp0_t: Option<T>,
    pub p1: T,
    pub dp1: T,
    pub d2p1: T,
    pub p02: T,
    pub dp02: T,
    pub b1: T,
    pub b2: T,
    pub b3: T,
}

impl<T: Scalar> StationData<T> {
    pub fn mu(&self) -> T {
        self.rho0.clone() * self.nu.clone()
    }

    /// `(R^2 p0')'`.
    pub fn d1(&self) -> T {
        T::int(2) * self.r.clone() * self.dr.clone() * self.dp0.clone()
            + self.r.pown(2) * self.d2p0.clone()
    }

    /// `(R^2 p0')''`.
    pub fn d2(&self) -> T {
        let (r, dr, d2r) = (self.r.clone(), self.dr.clone(), self.d2r.clone());
        T::int(2) * dr.pown(2) * self.dp0.clone()
            + T::int(2) * r.clone() * d2r * self.dp0.clone()
            + T::int(4) * r.clone() * dr * self.d2p0.clone()
            + r.pown(2) * self.d3p0.clone()
    }

    /// `d/dt (R^2 p0')`, with a missing mixed derivative read as zero.
    pub fn dt_flux(&self) -> T {
        T::int(2) * self.r.clone() * self.r_t.clone() * self.dp0.clone()
            + self.r.pown(2) * self.dp0_t.clone().unwrap_or_else(T::zero)
    }

    /// `(R^2 p1')'`.
    pub fn e1(&self) -> T {
        T::int(2) * self.r.clone() * self.dr.clone() * self.dp1.clone()
            + self.r.pown(2) * self.d2p1.clone()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> StationData<U> {
        StationData {
            rho0: f(&self.rho0),
            nu: f(&self.nu),
            r: f(&self.r),
            dr: f(&self.dr),
            d2r: f(&self.d2r),
            r_t: f(&self.r_t),
            kappa: f(&self.kappa),
            dkappa: f(&self.dkappa),
            tau: f(&self.tau),
            p0: f(&self.p0),
            dp0: f(&self.dp0),
            d2p0: f(&self.d2p0),
            d3p0: f(&self.d3p0),
            dp0_t: self.dp0_t.as_ref().map(&f),
            p1: f(&self.p1),
            dp1: f(&self.dp1),
            d2p1: f(&self.d2p1),
            p02: f(&self.p02),
            dp02: f(&self.dp02),
            b1: f(&self.b1),
            b2: f(&self.b2),
            b3: f(&self.b3),
        }
    }

    /// `p0''` from `(R^4 p0')' = 16 mu R R_t`.
    pub fn p0_curvature_from_ode(&self) -> T {
        (T::int(16) * self.mu() * self.r.clone() * self.r_t.clone()
            - T::int(4) * self.r.pown(3) * self.dr.clone() * self.dp0.clone())
            / self.r.pown(4)
    }

    /// `p1''` from `(R^4 p1')' = 0`.
    pub fn p1_curvature_from_ode(&self) -> T {
        -(T::int(4) * self.dr.clone() * self.dp1.clone()) / self.r.clone()
    }
}

impl StationData<f64> {
    /// Data at grid node `i` of a solved pipeline state.
    pub fn from_solution(
        i: usize,
        wall: &WallState,
        pressure: &PressureExpansion,
        frame: &Frame,
        fluid: &FluidParams,
        body: &BodyForce,
    ) -> Self {
        let p0 = &pressure.p0;
        let p1 = &pressure.p1;
        Self {
            rho0: fluid.rho0(),
            nu: fluid.nu(),
            r: wall.r[i],
            dr: wall.dr_ds[i],
            d2r: wall.d2r_ds2[i],
            r_t: wall.dr_dt[i],
            kappa: frame.kappa,
            dkappa: frame.dkappa,
            tau: frame.tau,
            p0: p0.p[i],
            dp0: p0.dp[i],
            d2p0: p0.d2p[i],
            d3p0: p0.d3p[i],
            dp0_t: p0.dtdp.as_ref().map(|v| v[i]),
            p1: p1.p[i],
            dp1: p1.dp[i],
            d2p1: p1.d2p[i],
            p02: pressure.p02.p[i],
            dp02: pressure.p02.dp[i],
            b1: body.b1,
            b2: body.b2,
            b3: body.b3,
        }
    }

    /// Exact rational copy; every finite float is a dyadic rational.
    pub fn to_exact(&self) -> StationData<crate::scalar::Rational> {
        self.map(|x| <crate::scalar::Rational as Scalar>::from_f64(*x))
    }
}
