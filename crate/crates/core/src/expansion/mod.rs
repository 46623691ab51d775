//! Cross-section fields of the asymptotic solution at one axial station.
//!
//! Every field is a [`DiscPoly`] in the unit-disc coordinates `(z2, z3)`.
//! Evaluation is generic over the coefficient domain so the same code runs
//! on floats and on exact rationals.

mod assemble;
mod station;
mod stokes;
mod terms;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::polydisc::{DiscPoly, DiscVector};
use crate::scalar::Scalar;

pub use assemble::{assemble_solution, TruncatedSolution, MAX_ORDER};
pub use station::StationData;
pub use stokes::{
    ansatz_unknowns, apply_tables, compatibility_defect, f_name, forcing_coefficients,
    solve_ansatz, solve_u2, symbolic_solution, verify_appendix_tables, TableCheck, TableEntry,
    TableReport, U2Solution, Unknown, COMPATIBILITY_TOLERANCE, F_BASIS, TABLE,
};
pub use terms::{
    eval_force, eval_g, eval_p2, eval_phi_a, eval_phi_b, eval_psi, eval_psi_coeffs, eval_u1_0,
    eval_u1_1, eval_u1_2, eval_u_transverse1, g1, rhs_u1_0, rhs_u1_1, rhs_u1_2,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpansionError {
    #[error("missing input {0}")]
    MissingInput(&'static str),
    #[error("compatibility violated: integral of g over the disc is {integral:e}")]
    Incompatible { integral: f64 },
    #[error("order {0} is not available (maximum is 2)")]
    UnsupportedOrder(usize),
    #[error("forcing outside the polynomial ansatz: {0}")]
    UnsupportedForcing(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// All closed-form terms at one station.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFields<T: Scalar> {
    pub u1_0: DiscPoly<T>,
    pub u1_1: DiscPoly<T>,
    pub u1_2: DiscPoly<T>,
    pub transverse1: DiscVector<T>,
    pub transverse2: DiscVector<T>,
    pub p2: DiscPoly<T>,
    pub p3: DiscPoly<T>,
    pub phi_a: DiscPoly<T>,
    pub phi_b: DiscPoly<T>,
    pub psi: DiscPoly<T>,
    pub psi2: T,
    pub psi3: T,
    pub force: DiscVector<T>,
    pub g: DiscPoly<T>,
    pub w: DiscVector<T>,
    pub q2: DiscPoly<T>,
}

impl<T: Scalar> ExpansionFields<T> {
    pub fn build(s: &StationData<T>) -> Result<Self, ExpansionError> {
        let force = eval_force(s);
        let g = eval_g(s);
        let u2 = solve_u2(s, &force, &g)?;
        Ok(Self {
            u1_0: eval_u1_0(s),
            u1_1: eval_u1_1(s),
            u1_2: eval_u1_2(s)?,
            transverse1: eval_u_transverse1(s),
            transverse2: u2.u,
            p2: eval_p2(s),
            p3: u2.p3,
            phi_a: eval_phi_a(s),
            phi_b: u2.phi,
            psi: u2.psi,
            psi2: u2.psi2,
            psi3: u2.psi3,
            force,
            g,
            w: u2.w,
            q2: u2.q2,
        })
    }

    /// Axial velocity coefficient of order `k`.
    pub fn axial(&self, k: usize) -> Result<&DiscPoly<T>, ExpansionError> {
        match k {
            0 => Ok(&self.u1_0),
            1 => Ok(&self.u1_1),
            2 => Ok(&self.u1_2),
            _ => Err(ExpansionError::UnsupportedOrder(k)),
        }
    }

    /// Transverse velocity coefficient of order `k`; order zero vanishes.
    pub fn transverse(&self, k: usize) -> Result<DiscVector<T>, ExpansionError> {
        match k {
            0 => Ok(DiscVector::zero()),
            1 => Ok(self.transverse1.clone()),
            2 => Ok(self.transverse2.clone()),
            _ => Err(ExpansionError::UnsupportedOrder(k)),
        }
    }
}
