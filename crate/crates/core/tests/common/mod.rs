#![allow(dead_code)]

use curvepipe::expansion::StationData;
use curvepipe::scalar::{r, Rational};

/// A station with every input distinct and nonzero; the second derivatives
/// of `p0` and `p1` satisfy their axial equations.
pub fn generic_station() -> StationData<Rational> {
    let mut s = StationData {
        rho0: r(3, 2),
        nu: r(2, 5),
        r: r(7, 8),
        dr: r(-1, 9),
        d2r: r(2, 7),
        r_t: r(1, 3),
        kappa: r(5, 4),
        dkappa: r(-2, 3),
        tau: r(3, 5),
        p0: r(11, 2),
        dp0: r(-13, 6),
        d2p0: r(0, 1),
        d3p0: r(17, 5),
        dp0_t: Some(r(-3, 7)),
        p1: r(1, 4),
        dp1: r(2, 9),
        d2p1: r(0, 1),
        p02: r(-5, 11),
        dp02: r(4, 13),
        b1: r(1, 6),
        b2: r(-3, 8),
        b3: r(5, 12),
    };
    s.d2p0 = s.p0_curvature_from_ode();
    s.d2p1 = s.p1_curvature_from_ode();
    s
}

pub fn straight_rigid_station() -> StationData<Rational> {
    StationData {
        rho0: r(1, 1),
        nu: r(1, 1),
        r: r(1, 1),
        dr: r(0, 1),
        d2r: r(0, 1),
        r_t: r(0, 1),
        kappa: r(0, 1),
        dkappa: r(0, 1),
        tau: r(0, 1),
        p0: r(1, 1),
        dp0: r(-1, 1),
        d2p0: r(0, 1),
        d3p0: r(0, 1),
        dp0_t: Some(r(0, 1)),
        p1: r(0, 1),
        dp1: r(0, 1),
        d2p1: r(0, 1),
        p02: r(0, 1),
        dp02: r(0, 1),
        b1: r(0, 1),
        b2: r(0, 1),
        b3: r(0, 1),
    }
}
