//! Closed-form cross-section terms and the right sides of the problems
//! that define them.

use crate::polydisc::{DiscPoly, DiscVector};
use crate::scalar::Scalar;

use super::station::StationData;
use super::ExpansionError;

fn c<T: Scalar>(x: T) -> DiscPoly<T> {
    DiscPoly::constant(x)
}

fn q<T: Scalar>(n: i64, d: i64) -> T {
    T::ratio(n, d)
}

fn rho2<T: Scalar>() -> DiscPoly<T> {
    DiscPoly::rho2()
}

fn z2<T: Scalar>() -> DiscPoly<T> {
    DiscPoly::z2()
}

fn z3<T: Scalar>() -> DiscPoly<T> {
    DiscPoly::z3()
}

/// `rho^(2k) - 1`.
fn rho_pow_minus_one<T: Scalar>(k: u32) -> DiscPoly<T> {
    rho2::<T>().pow(k) - c(T::one())
}

pub fn eval_u1_0<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    DiscPoly::boundary_factor().scale(&(s.r.pown(2) * s.dp0.clone() / (q::<T>(4, 1) * s.mu())))
}

pub fn eval_u1_1<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let mu = s.mu();
    let skew = q::<T>(3, 16) * s.r.pown(3) * s.kappa.clone() * s.dp0.clone() / mu.clone();
    let mean = s.r.pown(2) * s.dp1.clone() / (q::<T>(4, 1) * mu);
    &(z2::<T>().scale(&skew) + c(mean)) * &DiscPoly::boundary_factor()
}

/// Radial factor `f` of `U1 = f (z2, z3)`.
fn u1_radial<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let pre = s.r.clone() / (q::<T>(16, 1) * s.mu());
    (c(T::int(2) * s.d1()) - rho2::<T>().scale(&(s.r.pown(2) * s.d2p0.clone()))).scale(&pre)
}

pub fn eval_u_transverse1<T: Scalar>(s: &StationData<T>) -> DiscVector<T> {
    let f = u1_radial(s);
    DiscVector::new(&f * &z2(), &f * &z3())
}

/// Potential whose gradient is the first-order transverse velocity, with
/// its additive gauge fixed to `p02`.
pub fn eval_phi_a<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let pre = s.r.clone() / (q::<T>(16, 1) * s.mu());
    let inner = c(s.d1()) - rho2::<T>().scale(&(s.r.pown(2) * s.d2p0.clone() / q(4, 1)));
    (&rho2::<T>() * &inner).scale(&pre) + c(s.p02.clone())
}

pub fn eval_p2<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    rho2::<T>().scale(&(-(s.r.pown(2) * s.d2p0.clone()) / q(4, 1))) + c(s.p02.clone())
}

pub fn eval_u1_2<T: Scalar>(s: &StationData<T>) -> Result<DiscPoly<T>, ExpansionError> {
    let dp0_t = s
        .dp0_t
        .clone()
        .ok_or(ExpansionError::MissingInput("d2p0/dt ds1"))?;
    let (rho, nu, mu) = (s.rho0.clone(), s.nu.clone(), s.mu());
    let r2 = s.r.pown(2);
    let (dp, d2p, d3p) = (s.dp0.clone(), s.d2p0.clone(), s.d3p0.clone());
    let k2 = s.kappa.pown(2);
    let rho2nu3 = rho.pown(2) * nu.pown(3);
    let rhonu2 = rho.clone() * nu.pown(2);

    let x = r2.clone() * dp0_t / (q::<T>(4, 1) * rhonu2.clone())
        - s.r.pown(4) * dp.clone() * d2p.clone() / (q::<T>(16, 1) * rho2nu3.clone())
        - r2.clone() * d3p / (q::<T>(2, 1) * mu.clone())
        + q::<T>(11, 8) * k2.clone() * r2.clone() * dp.clone() / mu.clone();
    let y = -s.dt_flux() / (q::<T>(4, 1) * rhonu2)
        + r2.clone() * dp.clone() * s.d1() / (q::<T>(16, 1) * rho2nu3.clone())
        + s.d2() / (q::<T>(4, 1) * mu.clone())
        - q::<T>(7, 16) * k2.clone() * r2.clone() * dp.clone() / mu.clone()
        + s.dp02.clone() / mu.clone()
        - s.b1.clone() / nu;

    let bf = DiscPoly::<T>::boundary_factor();
    let term1 = rho_pow_minus_one::<T>(2).scale(&(r2.clone() / q(16, 1) * x));
    let term2 = bf.scale(&(r2.clone() / q(4, 1) * y));
    let term3 = rho_pow_minus_one::<T>(3)
        .scale(&(s.r.pown(6) * dp.clone() * d2p / (q::<T>(1152, 1) * rho2nu3)));
    let term4 = (&bf * &z2())
        .scale(&(q::<T>(3, 16) * s.kappa.clone() * s.r.pown(3) * s.dp1.clone() / mu.clone()));
    let saddle = DiscPoly::monomial(T::one(), 2, 0) - DiscPoly::monomial(T::one(), 0, 2);
    let term5 = (&bf * &saddle).scale(&(q::<T>(5, 64) * k2 * s.r.pown(4) * dp / mu));
    Ok(term1 + term2 + term3 + term4 + term5)
}

/// Right side of `Delta u1_0 = R^2 p0' / mu`.
pub fn rhs_u1_0<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    c(s.r.pown(2) * s.dp0.clone() / s.mu())
}

/// Right side of `Delta u1_1 = (R^2/mu) (p1' + (3 R kappa / 2) z2 p0')`.
pub fn rhs_u1_1<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let pre = s.r.pown(2) / s.mu();
    (c(s.dp1.clone())
        + z2::<T>().scale(&(q::<T>(3, 2) * s.r.clone() * s.kappa.clone() * s.dp0.clone())))
    .scale(&pre)
}

/// Divergence data of the first-order transverse problem.
pub fn g1<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let pre = s.r.clone() / (q::<T>(4, 1) * s.mu());
    (c(s.d1()) - rho2::<T>().scale(&(s.r.pown(2) * s.d2p0.clone()))).scale(&pre)
}

/// Right side of the Poisson problem for `u1_2`.
pub fn rhs_u1_2<T: Scalar>(s: &StationData<T>) -> Result<DiscPoly<T>, ExpansionError> {
    let dp0_t = s
        .dp0_t
        .clone()
        .ok_or(ExpansionError::MissingInput("d2p0/dt ds1"))?;
    let (rho, nu, mu) = (s.rho0.clone(), s.nu.clone(), s.mu());
    let (r2, r4, r6) = (s.r.pown(2), s.r.pown(4), s.r.pown(6));
    let (dp, d2p) = (s.dp0.clone(), s.d2p0.clone());
    let k2 = s.kappa.pown(2);
    let rho2nu3 = rho.pown(2) * nu.pown(3);
    let rhonu2 = rho * nu.pown(2);

    let a2 = r4.clone() * dp0_t / (q::<T>(4, 1) * rhonu2.clone())
        - r6.clone() * dp.clone() * d2p.clone() / (q::<T>(16, 1) * rho2nu3.clone())
        - r4.clone() * s.d3p0.clone() / (q::<T>(2, 1) * mu.clone())
        + q::<T>(7, 16) * k2.clone() * r4.clone() * dp.clone() / mu.clone();
    let a4 = r6 * dp.clone() * d2p / (q::<T>(32, 1) * rho2nu3.clone());
    let a0 = -(r2.clone() * s.dt_flux()) / (q::<T>(4, 1) * rhonu2)
        + r4.clone() * dp.clone() * s.d1() / (q::<T>(16, 1) * rho2nu3)
        + r2.clone() * s.d2() / (q::<T>(4, 1) * mu.clone())
        - q::<T>(7, 16) * k2.clone() * r4.clone() * dp.clone() / mu.clone()
        + r2.clone() * s.dp02.clone() / mu.clone()
        - r2 * s.b1.clone() / s.nu.clone();
    let a_z2 = q::<T>(3, 2) * s.kappa.clone() * s.r.pown(3) * s.dp1.clone() / mu.clone();
    let a_z2z2 = q::<T>(15, 8) * k2 * r4 * dp / mu;
    Ok(rho2::<T>().scale(&a2)
        + rho2::<T>().pow(2).scale(&a4)
        + c(a0)
        + z2::<T>().scale(&a_z2)
        + DiscPoly::monomial(a_z2z2, 2, 0))
}

/// Divergence data `g` of the second-order transverse problem.
pub fn eval_g<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let mu = s.mu();
    let (r3, r4) = (s.r.pown(3), s.r.pown(4));
    let (k, dk, tau) = (s.kappa.clone(), s.dkappa.clone(), s.tau.clone());
    let (dp, d2p) = (s.dp0.clone(), s.d2p0.clone());
    let rho2 = rho2::<T>();

    let a3 = -(k.clone() * r4.clone() * d2p.clone()) / (q::<T>(2, 1) * mu.clone())
        - q::<T>(3, 16) * dk.clone() * r4.clone() * dp.clone() / mu.clone();
    let b3 = -(q::<T>(3, 16) * k.clone() * tau.clone() * r4.clone() * dp.clone()) / mu.clone();
    let a1 = q::<T>(9, 8) * k.clone() * r3.clone() * s.dr.clone() * dp.clone() / mu.clone()
        + q::<T>(9, 16) * k.clone() * r4.clone() * d2p / mu.clone()
        + q::<T>(3, 16) * dk * r4.clone() * dp.clone() / mu.clone();
    let b1 = q::<T>(3, 16) * k * tau * r4 * dp / mu.clone();
    let c2 = -(r3 * s.d2p1.clone()) / (q::<T>(4, 1) * mu.clone());
    let c0 = s.r.clone() * s.e1() / (q::<T>(4, 1) * mu);

    (&(z2::<T>().scale(&a3) + z3::<T>().scale(&b3)) * &rho2)
        + z2::<T>().scale(&a1)
        + z3::<T>().scale(&b1)
        + rho2.scale(&c2)
        + c(c0)
}

/// Momentum forcing `F = (F2, F3)` of the second-order transverse problem.
pub fn eval_force<T: Scalar>(s: &StationData<T>) -> DiscVector<T> {
    let mu = s.mu();
    let rho2nu3 = s.rho0.pown(2) * s.nu.pown(3);
    let (r2, r4, r6) = (s.r.pown(2), s.r.pown(4), s.r.pown(6));
    let (k, dk, tau) = (s.kappa.clone(), s.dkappa.clone(), s.tau.clone());
    let (dp, d2p) = (s.dp0.clone(), s.d2p0.clone());
    let rho2 = rho2::<T>();

    let quartic = k.clone() * r6.clone() * dp.pown(2) / (q::<T>(16, 1) * rho2nu3.clone());
    let f2_const = quartic.clone()
        + dk.clone() * r4.clone() * dp.clone() / (q::<T>(4, 1) * mu.clone())
        + q::<T>(5, 8) * r2.clone() * k.clone() * s.d1() / mu.clone()
        - r2.clone() * s.b2.clone() / s.nu.clone();
    let f2_rho2 = -(k.clone() * r6 * dp.pown(2)) / (q::<T>(8, 1) * rho2nu3)
        - q::<T>(9, 16) * r4.clone() * k.clone() * d2p.clone() / mu.clone()
        - dk * r4.clone() * dp.clone() / (q::<T>(4, 1) * mu.clone());
    let f2_z2z2 = -(k.clone() * r4.clone() * d2p.clone()) / (q::<T>(8, 1) * mu.clone());
    let f2 = rho2.pow(2).scale(&quartic)
        + c(f2_const)
        + rho2.scale(&f2_rho2)
        + DiscPoly::monomial(f2_z2z2, 2, 0);

    let f3_swirl = -(k.clone() * tau * r4.clone() * dp) / (q::<T>(4, 1) * mu.clone());
    let f3_z2z3 = -(q::<T>(2, 16) * r4 * k * d2p) / mu;
    let f3 = DiscPoly::boundary_factor().scale(&f3_swirl) + DiscPoly::monomial(f3_z2z3, 1, 1)
        - c(r2 * s.b3.clone() / s.nu.clone());
    DiscVector::new(f2, f3)
}

/// Potential with `Delta phi = g` and zero normal derivative on the circle,
/// gauge constant set to zero. The boundary condition relies on the `p1`
/// equation.
pub fn eval_phi_b<T: Scalar>(s: &StationData<T>) -> DiscPoly<T> {
    let mu = s.mu();
    let (r3, r4) = (s.r.pown(3), s.r.pown(4));
    let (k, dk, tau) = (s.kappa.clone(), s.dkappa.clone(), s.tau.clone());
    let (dp, d2p, dr) = (s.dp0.clone(), s.d2p0.clone(), s.dr.clone());
    let rho2 = rho2::<T>();

    // 8 kappa p0'' + 3 kappa' p0'
    let lead = q::<T>(8, 1) * k.clone() * d2p.clone() + q::<T>(3, 1) * dk.clone() * dp.clone();
    // 6 kappa R' p0' + 3 kappa R p0'' + kappa' R p0'
    let mid = q::<T>(6, 1) * k.clone() * dr * dp.clone()
        + q::<T>(3, 1) * k.clone() * s.r.clone() * d2p
        + dk * s.r.clone() * dp.clone();
    let swirl = k * tau * r4.clone() * dp / mu.clone();

    let a5 = -(r4.clone() * lead.clone()) / (q::<T>(384, 1) * mu.clone());
    let b5 = -swirl.clone() / q(128, 1);
    let c4 = -(r3.clone() * s.d2p1.clone()) / (q::<T>(64, 1) * mu.clone());
    let a3 = q::<T>(3, 128) * r3.clone() * mid.clone() / mu.clone();
    let b3 = q::<T>(3, 128) * swirl.clone();
    let c2 = s.r.clone() * s.e1() / (q::<T>(16, 1) * mu.clone());
    let a1 = q::<T>(5, 384) * r4 * lead / mu.clone() - q::<T>(9, 128) * r3 * mid / mu;
    let b1 = -(q::<T>(4, 128) * swirl);

    (&(z2::<T>().scale(&a5) + z3::<T>().scale(&b5) + c(c4)) * &rho2.pow(2))
        + (&(z2::<T>().scale(&a3) + z3::<T>().scale(&b3) + c(c2)) * &rho2)
        + z2::<T>().scale(&a1)
        + z3::<T>().scale(&b1)
}

/// Stream-function amplitudes `(psi2, psi3)`.
pub fn eval_psi_coeffs<T: Scalar>(s: &StationData<T>) -> (T, T) {
    let mu = s.mu();
    let psi2 = -(s.kappa.clone() * s.tau.clone() * s.r.pown(4) * s.dp0.clone())
        / (q::<T>(64, 1) * mu.clone());
    let psi3 = s.r.pown(3)
        * (q::<T>(22, 1) * s.kappa.clone() * s.r.clone() * s.d2p0.clone()
            + q::<T>(6, 1) * s.dkappa.clone() * s.r.clone() * s.dp0.clone()
            + q::<T>(108, 1) * s.kappa.clone() * s.dr.clone() * s.dp0.clone())
        / (q::<T>(384, 1) * mu);
    (psi2, psi3)
}

/// `psi = (psi2 z2 + psi3 z3) (rho^2 - 1) / 2`.
pub fn eval_psi<T: Scalar>(psi2: &T, psi3: &T) -> DiscPoly<T> {
    let lin = z2::<T>().scale(psi2) + z3::<T>().scale(psi3);
    (&lin * &DiscPoly::boundary_factor()).scale(&q(1, 2))
}
