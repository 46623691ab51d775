//! The second-order transverse Stokes problem on the unit disc.
//!
//! `U2 = W + grad phi + rot psi`, where `phi` absorbs the divergence `g`,
//! `psi` corrects the tangential trace, and `(W, q)` solves a homogeneous
//! Stokes problem forced by `F`. `W` and `q` are linear in the ten
//! coefficients `f_a^{mn}` of `F`; [`TABLE`] lists that map.

use std::fmt;

use crate::linalg::solve_dense;
use crate::polydisc::{DiscPoly, DiscVector, Var};
use crate::scalar::{Rational, Scalar};

use super::station::StationData;
use super::terms::{eval_phi_b, eval_psi, eval_psi_coeffs};
use super::ExpansionError;

/// The monomials `(component, m, n)` a forcing may contain.
pub const F_BASIS: [(u8, u32, u32); 10] = [
    (2, 0, 0),
    (2, 2, 0),
    (2, 0, 2),
    (2, 2, 2),
    (2, 4, 0),
    (2, 0, 4),
    (3, 0, 0),
    (3, 1, 1),
    (3, 2, 0),
    (3, 0, 2),
];

const F2_00: usize = 0;
const F2_20: usize = 1;
const F2_02: usize = 2;
const F2_22: usize = 3;
const F2_40: usize = 4;
const F2_04: usize = 5;
const F3_00: usize = 6;
const F3_11: usize = 7;
const F3_20: usize = 8;
const F3_02: usize = 9;

pub fn f_name(i: usize) -> String {
    let (c, m, n) = F_BASIS[i];
    format!("f{c}_{m}{n}")
}

/// A coefficient of the polynomial ansatz.
///
/// `W2 = (sum w2_{mn} z2^m z3^n) (rho^2 - 1)` for `m + n <= 4`, likewise
/// `W3`, and `q = sum q_{mn} z2^m z3^n` for `1 <= m + n <= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    W2(u32, u32),
    W3(u32, u32),
    Q(u32, u32),
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::W2(m, n) => write!(f, "w2_{m}{n}"),
            Unknown::W3(m, n) => write!(f, "w3_{m}{n}"),
            Unknown::Q(m, n) => write!(f, "q_{m}{n}"),
        }
    }
}

fn monomials(min_deg: u32, max_deg: u32) -> impl Iterator<Item = (u32, u32)> {
    (min_deg..=max_deg).flat_map(|d| (0..=d).rev().map(move |m| (m, d - m)))
}

/// All 50 unknowns in a fixed order.
pub fn ansatz_unknowns() -> Vec<Unknown> {
    let mut out: Vec<Unknown> = monomials(0, 4).map(|(m, n)| Unknown::W2(m, n)).collect();
    out.extend(monomials(0, 4).map(|(m, n)| Unknown::W3(m, n)));
    out.extend(monomials(1, 5).map(|(m, n)| Unknown::Q(m, n)));
    out
}

/// One linear map entry: `unknown = sum coeff * f[index]`.
#[derive(Debug, Clone, Copy)]
pub struct TableEntry {
    pub unknown: Unknown,
    pub terms: &'static [(usize, i64, i64)],
}

impl TableEntry {
    pub fn coefficients(&self) -> [Rational; 10] {
        let mut out: [Rational; 10] = std::array::from_fn(|_| Rational::from_integer(0.into()));
        for &(i, n, d) in self.terms {
            out[i] = out[i].clone() + <Rational as Scalar>::ratio(n, d);
        }
        out
    }
}

macro_rules! entry {
    ($u:expr) => {
        TableEntry { unknown: $u, terms: &[] }
    };
    ($u:expr, $([$i:expr, $n:expr, $d:expr]),+) => {
        TableEntry { unknown: $u, terms: &[$(($i, $n, $d)),+] }
    };
}

use Unknown::{Q, W2, W3};

/// Closed-form solution of the forced Stokes ansatz, one entry per unknown.
pub static TABLE: &[TableEntry] = &[
    entry!(
        W2(0, 0),
        [F2_02, -1, 96],
        [F2_04, -1, 192],
        [F2_22, -1, 1152],
        [F3_11, 1, 192]
    ),
    entry!(
        W2(2, 0),
        [F2_02, 1, 96],
        [F2_04, 7, 960],
        [F2_22, -11, 5760],
        [F3_11, -1, 192]
    ),
    entry!(
        W2(0, 2),
        [F2_02, 5, 96],
        [F2_04, 13, 960],
        [F2_22, 31, 5760],
        [F3_11, -5, 192]
    ),
    entry!(W2(1, 1), [F3_20, -1, 24]),
    entry!(W2(4, 0), [F2_04, -1, 480], [F2_22, 1, 360]),
    entry!(W2(2, 2), [F2_04, 1, 480], [F2_22, 37, 2880]),
    entry!(W2(0, 4), [F2_04, 7, 240], [F2_22, -7, 2880]),
    entry!(W2(0, 1)),
    entry!(W2(0, 3)),
    entry!(W2(1, 0)),
    entry!(W2(1, 2)),
    entry!(W2(1, 3)),
    entry!(W2(2, 1)),
    entry!(W2(3, 0)),
    entry!(W2(3, 1)),
    entry!(W3(0, 0), [F3_20, -1, 96]),
    entry!(W3(2, 0), [F3_20, 5, 96]),
    entry!(W3(0, 2), [F3_20, 1, 96]),
    entry!(
        W3(1, 1),
        [F2_02, -1, 24],
        [F2_04, -1, 40],
        [F2_22, 1, 480],
        [F3_11, 1, 48]
    ),
    entry!(W3(3, 1), [F2_04, 1, 80], [F2_22, -1, 60]),
    entry!(W3(1, 3), [F2_04, -1, 80], [F2_22, -1, 240]),
    entry!(W3(0, 1)),
    entry!(W3(0, 3)),
    entry!(W3(0, 4)),
    entry!(W3(1, 0)),
    entry!(W3(1, 2)),
    entry!(W3(2, 1)),
    entry!(W3(2, 2)),
    entry!(W3(3, 0)),
    entry!(W3(4, 0)),
    entry!(
        Q(1, 0),
        [F2_00, -1, 1],
        [F2_02, -1, 6],
        [F2_04, -1, 16],
        [F2_22, -1, 96],
        [F3_11, 1, 12]
    ),
    entry!(Q(0, 1), [F3_00, -1, 1], [F3_20, -1, 6]),
    entry!(
        Q(3, 0),
        [F2_02, 1, 12],
        [F2_04, 1, 20],
        [F2_20, -1, 3],
        [F2_22, -1, 40],
        [F3_11, -1, 24]
    ),
    entry!(Q(2, 1), [F3_20, -1, 4]),
    entry!(
        Q(1, 2),
        [F2_02, -1, 4],
        [F2_04, -3, 20],
        [F2_22, 3, 40],
        [F3_11, -3, 8]
    ),
    entry!(Q(0, 3), [F3_02, -1, 3], [F3_20, 1, 12]),
    entry!(Q(5, 0), [F2_04, -1, 80], [F2_22, 11, 480], [F2_40, -1, 5]),
    entry!(Q(3, 2), [F2_04, 1, 8], [F2_22, -11, 48]),
    entry!(Q(1, 4), [F2_04, -1, 16], [F2_22, -5, 96]),
    entry!(Q(0, 2)),
    entry!(Q(0, 4)),
    entry!(Q(0, 5)),
    entry!(Q(1, 1)),
    entry!(Q(1, 3)),
    entry!(Q(2, 0)),
    entry!(Q(2, 2)),
    entry!(Q(2, 3)),
    entry!(Q(3, 1)),
    entry!(Q(4, 0)),
    entry!(Q(4, 1)),
];

/// Contribution of a unit unknown to
/// `(Delta W2 - dq/dz2, Delta W3 - dq/dz3, div W)`.
fn unit_response<T: Scalar>(u: Unknown) -> [DiscPoly<T>; 3] {
    let bf = DiscPoly::<T>::boundary_factor();
    match u {
        Unknown::W2(m, n) => {
            let w = &DiscPoly::monomial(T::one(), m, n) * &bf;
            [w.laplacian(), DiscPoly::zero(), w.differentiate(Var::Z2)]
        }
        Unknown::W3(m, n) => {
            let w = &DiscPoly::monomial(T::one(), m, n) * &bf;
            [DiscPoly::zero(), w.laplacian(), w.differentiate(Var::Z3)]
        }
        Unknown::Q(m, n) => {
            let q = DiscPoly::monomial(T::one(), m, n);
            [
                -q.differentiate(Var::Z2),
                -q.differentiate(Var::Z3),
                DiscPoly::zero(),
            ]
        }
    }
}

/// `(equation kind, monomial)` labels of the equation rows.
type RowLabels = Vec<(usize, (u32, u32))>;

/// Equation rows and the coefficient matrix.
fn ansatz_matrix<T: Scalar>(unknowns: &[Unknown]) -> (RowLabels, Vec<Vec<T>>) {
    let responses: Vec<[DiscPoly<T>; 3]> = unknowns.iter().map(|u| unit_response(*u)).collect();
    let mut rows: RowLabels = Vec::new();
    for resp in &responses {
        for (k, poly) in resp.iter().enumerate() {
            for (&mono, _) in poly.terms() {
                if !rows.contains(&(k, mono)) {
                    rows.push((k, mono));
                }
            }
        }
    }
    // Forcing monomials must have a row even when no unknown reaches them,
    // so an out-of-ansatz forcing is reported as inconsistent.
    for &(c, m, n) in &F_BASIS {
        let key = (usize::from(c - 2), (m, n));
        if !rows.contains(&key) {
            rows.push(key);
        }
    }
    rows.sort();
    let a = rows
        .iter()
        .map(|(k, mono)| {
            responses
                .iter()
                .map(|resp| resp[*k].coeff(mono.0, mono.1))
                .collect()
        })
        .collect();
    (rows, a)
}

/// Solves the ansatz system for a concrete forcing by elimination.
pub fn solve_ansatz<T: Scalar>(
    force: &DiscVector<T>,
) -> Result<(DiscVector<T>, DiscPoly<T>), ExpansionError> {
    check_forcing_shape(force)?;
    let unknowns = ansatz_unknowns();
    let (rows, a) = ansatz_matrix::<T>(&unknowns);
    let b = rows
        .iter()
        .map(|(k, (m, n))| match k {
            0 => vec![force.c2.coeff(*m, *n)],
            1 => vec![force.c3.coeff(*m, *n)],
            _ => vec![T::zero()],
        })
        .collect();
    let x = solve_dense(a, b)?;
    let values: Vec<T> = x.into_iter().map(|row| row[0].clone()).collect();
    Ok(assemble_w_q(&unknowns, &values))
}

fn assemble_w_q<T: Scalar>(unknowns: &[Unknown], values: &[T]) -> (DiscVector<T>, DiscPoly<T>) {
    let mut w2 = DiscPoly::zero();
    let mut w3 = DiscPoly::zero();
    let mut q = DiscPoly::zero();
    for (u, v) in unknowns.iter().zip(values) {
        match *u {
            Unknown::W2(m, n) => w2.add_term(m, n, v.clone()),
            Unknown::W3(m, n) => w3.add_term(m, n, v.clone()),
            Unknown::Q(m, n) => q.add_term(m, n, v.clone()),
        }
    }
    let bf = DiscPoly::boundary_factor();
    (DiscVector::new(&w2 * &bf, &w3 * &bf), q)
}

/// Solves the ansatz once per forcing coefficient, giving every unknown as
/// an exact linear combination of the ten `f` coefficients.
pub fn symbolic_solution() -> Result<Vec<(Unknown, [Rational; 10])>, ExpansionError> {
    let unknowns = ansatz_unknowns();
    let (rows, a) = ansatz_matrix::<Rational>(&unknowns);
    let b = rows
        .iter()
        .map(|(k, (m, n))| {
            F_BASIS
                .iter()
                .map(|&(c, fm, fn_)| {
                    if usize::from(c - 2) == *k && (fm, fn_) == (*m, *n) {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::from_integer(0.into())
                    }
                })
                .collect()
        })
        .collect();
    let x = solve_dense(a, b)?;
    Ok(unknowns
        .into_iter()
        .zip(x)
        .map(|(u, row)| (u, std::array::from_fn(|j| row[j].clone())))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableCheck {
    pub unknown: Unknown,
    pub tabulated: [Rational; 10],
    pub derived: [Rational; 10],
}

impl TableCheck {
    pub fn matches(&self) -> bool {
        self.tabulated == self.derived
    }
}

/// Per-coefficient comparison of [`TABLE`] against the elimination result.
#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub checks: Vec<TableCheck>,
    /// Unknowns produced by elimination but absent from the table.
    pub missing: Vec<Unknown>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.missing.is_empty() && self.checks.iter().all(TableCheck::matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &TableCheck> {
        self.checks.iter().filter(|c| !c.matches())
    }
}

fn linear_combination(coeffs: &[Rational; 10]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| format!("({c}) {}", f_name(i)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.matches() { "match" } else { "MISMATCH" };
            writeln!(
                f,
                "{} = {} : {status}",
                c.unknown,
                linear_combination(&c.derived)
            )?;
            if !c.matches() {
                writeln!(f, "  tabulated {}", linear_combination(&c.tabulated))?;
            }
        }
        for u in &self.missing {
            writeln!(f, "{u} : MISSING from table")?;
        }
        Ok(())
    }
}

pub fn verify_appendix_tables() -> Result<TableReport, ExpansionError> {
    let derived = symbolic_solution()?;
    let mut checks = Vec::new();
    let mut missing = Vec::new();
    for (u, coeffs) in derived {
        match TABLE.iter().find(|e| e.unknown == u) {
            Some(e) => checks.push(TableCheck {
                unknown: u,
                tabulated: e.coefficients(),
                derived: coeffs,
            }),
            None => missing.push(u),
        }
    }
    Ok(TableReport { checks, missing })
}

fn check_forcing_shape<T: Scalar>(force: &DiscVector<T>) -> Result<(), ExpansionError> {
    for (c, poly) in [(2u8, &force.c2), (3u8, &force.c3)] {
        for (&(m, n), _) in poly.terms() {
            if !F_BASIS.contains(&(c, m, n)) {
                return Err(ExpansionError::UnsupportedForcing(format!(
                    "F{c} has a z2^{m} z3^{n} term"
                )));
            }
        }
    }
    Ok(())
}

/// The ten forcing coefficients in [`F_BASIS`] order.
pub fn forcing_coefficients<T: Scalar>(force: &DiscVector<T>) -> [T; 10] {
    std::array::from_fn(|i| {
        let (c, m, n) = F_BASIS[i];
        if c == 2 {
            force.c2.coeff(m, n)
        } else {
            force.c3.coeff(m, n)
        }
    })
}

/// `(W, q)` from the closed-form table.
pub fn apply_tables<T: Scalar>(
    force: &DiscVector<T>,
) -> Result<(DiscVector<T>, DiscPoly<T>), ExpansionError> {
    check_forcing_shape(force)?;
    let f = forcing_coefficients(force);
    let unknowns: Vec<Unknown> = TABLE.iter().map(|e| e.unknown).collect();
    let values: Vec<T> = TABLE
        .iter()
        .map(|e| {
            e.terms.iter().fold(T::zero(), |acc, &(i, n, d)| {
                acc + T::ratio(n, d) * f[i].clone()
            })
        })
        .collect();
    Ok(assemble_w_q(&unknowns, &values))
}

/// The second-order transverse velocity, the third-order pressure and the
/// pieces they are built from.
#[derive(Debug, Clone, PartialEq)]
pub struct U2Solution<T: Scalar> {
    pub u: DiscVector<T>,
    pub p3: DiscPoly<T>,
    pub w: DiscVector<T>,
    pub q2: DiscPoly<T>,
    pub phi: DiscPoly<T>,
    pub psi: DiscPoly<T>,
    pub psi2: T,
    pub psi3: T,
}

/// Largest `|integral of g| / pi` accepted in floating point, relative to
/// the size of `g`.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-10;

pub fn compatibility_defect<T: Scalar>(g: &DiscPoly<T>) -> (T, bool) {
    let integral = g.disc_integral().0;
    let ok = if T::EXACT {
        integral.is_zero()
    } else {
        integral.magnitude() <= COMPATIBILITY_TOLERANCE * (1.0 + g.max_abs_coeff())
    };
    (integral, ok)
}

pub fn solve_u2<T: Scalar>(
    s: &StationData<T>,
    force: &DiscVector<T>,
    g: &DiscPoly<T>,
) -> Result<U2Solution<T>, ExpansionError> {
    let (integral, ok) = compatibility_defect(g);
    if !ok {
        return Err(ExpansionError::Incompatible {
            integral: integral.to_f64() * std::f64::consts::PI,
        });
    }
    let (w, q2) = apply_tables(force)?;
    let phi = eval_phi_b(s);
    let (psi2, psi3) = eval_psi_coeffs(s);
    let psi = eval_psi(&psi2, &psi3);
    let u = w.clone() + phi.gradient() + psi.curl();
    let four = T::int(4);
    let p3 = (q2.clone() + g.clone() + DiscPoly::monomial(four.clone() * psi3.clone(), 1, 0)
        - DiscPoly::monomial(four * psi2.clone(), 0, 1))
    .scale(&(s.mu() / s.r.clone()));
    Ok(U2Solution {
        u,
        p3,
        w,
        q2,
        phi,
        psi,
        psi2,
        psi3,
    })
}
