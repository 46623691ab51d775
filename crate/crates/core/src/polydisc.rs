//! Exact calculus for bivariate polynomials on the unit disc.
//!
//! Cross-section fields are polynomials in the local cartesian coordinates
//! `(z2, z3) = (s3 cos s2, s3 sin s2)`. [`DiscPoly`] stores them as a sparse
//! monomial map and provides derivatives, disc integrals, boundary traces and
//! the polar (Fourier-in-`s2`) decomposition used by the shape checks.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::scalar::Scalar;

/// Cartesian coordinate of the cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z2,
    Z3,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polar term r^{power} of angular mode {mode} is not a polynomial in (z2, z3)")]
    NotPolynomial { mode: usize, power: u32 },
}

/// Polynomial `sum c_{mn} z2^m z3^n`.
///
/// Canonical: no zero coefficient is ever stored.
#[derive(Clone, PartialEq)]
pub struct DiscPoly<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Scalar> Default for DiscPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> DiscPoly<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: T, m: u32, n: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(m, n, c);
        p
    }

    pub fn z2() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    pub fn z3() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    /// `z2^2 + z3^2`, the squared polar radius.
    pub fn rho2() -> Self {
        Self::monomial(T::one(), 2, 0) + Self::monomial(T::one(), 0, 2)
    }

    /// `z2^2 + z3^2 - 1`, which vanishes on the unit circle.
    pub fn boundary_factor() -> Self {
        Self::rho2() - Self::constant(T::one())
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), T)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for ((m, n), c) in terms {
            p.add_term(m, n, c);
        }
        p
    }

    /// Adds `c z2^m z3^n`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: u32, n: u32, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(m, n)) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&(m, n));
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert((m, n), c);
            }
        }
    }

    pub fn coeff(&self, m: u32, n: u32) -> T {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, n)| m + n).max()
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DiscPoly<U> {
        DiscPoly::from_terms(self.terms.iter().map(|(k, v)| (*k, f(v))))
    }

    pub fn evaluate(&self, z2: &T, z3: &T) -> T {
        let mut acc = T::zero();
        for (&(m, n), c) in &self.terms {
            acc = acc + c.clone() * z2.pown(m) * z3.pown(n);
        }
        acc
    }

    pub fn eval_f64(&self, z2: f64, z3: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(m, n), c)| c.to_f64() * z2.powi(m as i32) * z3.powi(n as i32))
            .sum()
    }

    /// Value at polar coordinates `(s3, s2)`.
    pub fn eval_polar(&self, s3: f64, s2: f64) -> f64 {
        self.eval_f64(s3 * s2.cos(), s3 * s2.sin())
    }

    pub fn differentiate(&self, var: Var) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.terms {
            match var {
                Var::Z2 if m > 0 => out.add_term(m - 1, n, c.clone() * T::int(m as i64)),
                Var::Z3 if n > 0 => out.add_term(m, n - 1, c.clone() * T::int(n as i64)),
                _ => {}
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        self.differentiate(Var::Z2).differentiate(Var::Z2)
            + self.differentiate(Var::Z3).differentiate(Var::Z3)
    }

    pub fn gradient(&self) -> DiscVector<T> {
        DiscVector::new(self.differentiate(Var::Z2), self.differentiate(Var::Z3))
    }

    /// `(dp/dz3, -dp/dz2)`, the divergence-free field with stream function `p`.
    pub fn curl(&self) -> DiscVector<T> {
        DiscVector::new(self.differentiate(Var::Z3), -self.differentiate(Var::Z2))
    }

    /// `z . grad p`, i.e. `s3 dp/ds3`; on the unit circle this is the outward
    /// normal derivative.
    pub fn radial_derivative(&self) -> Self {
        &Self::z2() * &self.differentiate(Var::Z2) + &Self::z3() * &self.differentiate(Var::Z3)
    }

    /// `dp/ds2 = z2 dp/dz3 - z3 dp/dz2`.
    pub fn angular_derivative(&self) -> Self {
        &Self::z2() * &self.differentiate(Var::Z3) - &Self::z3() * &self.differentiate(Var::Z2)
    }

    /// Exact integral over the unit disc, as a multiple of pi.
    pub fn disc_integral(&self) -> PiMultiple<T> {
        let mut acc = T::zero();
        for (&(m, n), c) in &self.terms {
            if let Some(moment) = disc_moment_over_pi::<T>(m, n) {
                acc = acc + c.clone() * moment;
            }
        }
        PiMultiple(acc)
    }

    /// Trace on the unit circle as a finite Fourier series in `s2`.
    pub fn restrict_to_boundary(&self) -> TrigSeries<T> {
        self.polar().on_circle(&T::one())
    }

    /// Decomposition into `sum_k a_k(s3) cos(k s2) + b_k(s3) sin(k s2)`.
    pub fn polar(&self) -> PolarForm<T> {
        let mut out = PolarForm::default();
        for (&(m, n), c) in &self.terms {
            let trig = TrigSeries::<T>::cos_sin_power(m, n);
            for (k, a) in trig.cos.iter().enumerate() {
                out.add(k, Phase::Cos, m + n, c.clone() * a.clone());
            }
            for (k, b) in trig.sin.iter().enumerate() {
                out.add(k, Phase::Sin, m + n, c.clone() * b.clone());
            }
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }
}

impl DiscPoly<f64> {
    /// Drops coefficients below `tol` in magnitude.
    pub fn prune(&self, tol: f64) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(_, c)| c.abs() > tol)
                .map(|(k, c)| (*k, *c)),
        )
    }
}

/// `(1/pi) * integral over the unit disc of z2^m z3^n`; `None` when odd.
fn disc_moment_over_pi<T: Scalar>(m: u32, n: u32) -> Option<T> {
    if m % 2 == 1 || n % 2 == 1 {
        return None;
    }
    let (a, b) = (m / 2, n / 2);
    // (2a)! (2b)! / (4^(a+b) a! b! (a+b+1)!)
    let fact = |k: u32| (1..=k as i64).fold(T::one(), |acc, i| acc * T::int(i));
    let num = fact(2 * a) * fact(2 * b);
    let den = T::int(4).pown(a + b) * fact(a) * fact(b) * fact(a + b + 1);
    Some(num / den)
}

impl<T: Scalar> Add for DiscPoly<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<T: Scalar> Add<&DiscPoly<T>> for &DiscPoly<T> {
    type Output = DiscPoly<T>;
    fn add(self, rhs: &DiscPoly<T>) -> DiscPoly<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Scalar> AddAssign<&DiscPoly<T>> for DiscPoly<T> {
    fn add_assign(&mut self, rhs: &DiscPoly<T>) {
        for (&(m, n), c) in &rhs.terms {
            self.add_term(m, n, c.clone());
        }
    }
}

impl<T: Scalar> Sub for DiscPoly<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<T: Scalar> Sub<&DiscPoly<T>> for &DiscPoly<T> {
    type Output = DiscPoly<T>;
    fn sub(self, rhs: &DiscPoly<T>) -> DiscPoly<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Scalar> SubAssign<&DiscPoly<T>> for DiscPoly<T> {
    fn sub_assign(&mut self, rhs: &DiscPoly<T>) {
        for (&(m, n), c) in &rhs.terms {
            self.add_term(m, n, -c.clone());
        }
    }
}

impl<T: Scalar> Neg for DiscPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_terms(self.terms.into_iter().map(|(k, c)| (k, -c)))
    }
}

impl<T: Scalar> Mul<&DiscPoly<T>> for &DiscPoly<T> {
    type Output = DiscPoly<T>;
    fn mul(self, rhs: &DiscPoly<T>) -> DiscPoly<T> {
        let mut out = DiscPoly::zero();
        for (&(m1, n1), c1) in &self.terms {
            for (&(m2, n2), c2) in &rhs.terms {
                out.add_term(m1 + m2, n1 + n2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Mul for DiscPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> fmt::Debug for DiscPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Scalar> fmt::Display for DiscPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(m, n), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            match m {
                0 => {}
                1 => write!(f, " z2")?,
                _ => write!(f, " z2^{m}")?,
            }
            match n {
                0 => {}
                1 => write!(f, " z3")?,
                _ => write!(f, " z3^{n}")?,
            }
        }
        Ok(())
    }
}

/// A pair `(v2, v3)` of polynomials: an in-plane vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscVector<T: Scalar> {
    pub c2: DiscPoly<T>,
    pub c3: DiscPoly<T>,
}

impl<T: Scalar> Default for DiscVector<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> DiscVector<T> {
    pub fn new(c2: DiscPoly<T>, c3: DiscPoly<T>) -> Self {
        Self { c2, c3 }
    }

    pub fn zero() -> Self {
        Self::new(DiscPoly::zero(), DiscPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c2.is_zero() && self.c3.is_zero()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.c2.scale(c), self.c3.scale(c))
    }

    pub fn laplacian(&self) -> Self {
        Self::new(self.c2.laplacian(), self.c3.laplacian())
    }

    pub fn divergence(&self) -> DiscPoly<T> {
        self.c2.differentiate(Var::Z2) + self.c3.differentiate(Var::Z3)
    }

    /// Scalar curl `dv3/dz2 - dv2/dz3`.
    pub fn vorticity(&self) -> DiscPoly<T> {
        self.c3.differentiate(Var::Z2) - self.c2.differentiate(Var::Z3)
    }

    /// `z . v = s3 * (radial component)`.
    pub fn radial_part(&self) -> DiscPoly<T> {
        &DiscPoly::z2() * &self.c2 + &DiscPoly::z3() * &self.c3
    }

    /// `z2 v3 - z3 v2 = s3 * (azimuthal component)`.
    pub fn azimuthal_part(&self) -> DiscPoly<T> {
        &DiscPoly::z2() * &self.c3 - &DiscPoly::z3() * &self.c2
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.c2.max_abs_coeff().max(self.c3.max_abs_coeff())
    }

    pub fn eval_f64(&self, z2: f64, z3: f64) -> (f64, f64) {
        (self.c2.eval_f64(z2, z3), self.c3.eval_f64(z2, z3))
    }
}

impl<T: Scalar> Add for DiscVector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c2 + rhs.c2, self.c3 + rhs.c3)
    }
}

impl<T: Scalar> Sub for DiscVector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c2 - rhs.c2, self.c3 - rhs.c3)
    }
}

/// A value `c * pi`, kept symbolic so exact fields stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PiMultiple<T>(pub T);

impl<T: Scalar> PiMultiple<T> {
    pub fn coefficient(&self) -> &T {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64() * std::f64::consts::PI
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Finite Fourier series `sum_k cos[k] cos(k s2) + sin[k] sin(k s2)`.
///
/// `sin[0]` is always zero. Trailing zero modes are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries<T> {
    pub cos: Vec<T>,
    pub sin: Vec<T>,
}

impl<T: Scalar> TrigSeries<T> {
    pub fn zero() -> Self {
        Self {
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        let mut s = Self {
            cos: vec![c],
            sin: vec![T::zero()],
        };
        s.trim();
        s
    }

    /// Expansion of `cos^m(s2) sin^n(s2)`.
    pub fn cos_sin_power(m: u32, n: u32) -> Self {
        let mut s = Self::constant(T::one());
        for _ in 0..m {
            s = s.times_cos();
        }
        for _ in 0..n {
            s = s.times_sin();
        }
        s
    }

    fn ensure_len(&mut self, len: usize) {
        while self.cos.len() < len {
            self.cos.push(T::zero());
        }
        while self.sin.len() < len {
            self.sin.push(T::zero());
        }
    }

    fn trim(&mut self) {
        let len = self.cos.len().max(self.sin.len());
        self.ensure_len(len);
        while let (Some(a), Some(b)) = (self.cos.last(), self.sin.last()) {
            if a.is_zero() && b.is_zero() {
                self.cos.pop();
                self.sin.pop();
            } else {
                break;
            }
        }
    }

    fn times_cos(&self) -> Self {
        let half = T::ratio(1, 2);
        let mut out = Self::zero();
        out.ensure_len(self.cos.len() + 1);
        for k in 0..self.cos.len() {
            let a = self.cos[k].clone();
            let b = self.sin[k].clone();
            if k == 0 {
                out.cos[1] = out.cos[1].clone() + a;
                continue;
            }
            // cos*cos(k) = (cos(k+1) + cos(k-1))/2, cos*sin(k) = (sin(k+1) + sin(k-1))/2
            out.cos[k + 1] = out.cos[k + 1].clone() + half.clone() * a.clone();
            out.cos[k - 1] = out.cos[k - 1].clone() + half.clone() * a;
            out.sin[k + 1] = out.sin[k + 1].clone() + half.clone() * b.clone();
            out.sin[k - 1] = out.sin[k - 1].clone() + half.clone() * b;
        }
        out.sin[0] = T::zero();
        out.trim();
        out
    }

    fn times_sin(&self) -> Self {
        let half = T::ratio(1, 2);
        let mut out = Self::zero();
        out.ensure_len(self.cos.len() + 1);
        for k in 0..self.cos.len() {
            let a = self.cos[k].clone();
            let b = self.sin[k].clone();
            if k == 0 {
                out.sin[1] = out.sin[1].clone() + a;
                continue;
            }
            // sin*cos(k) = (sin(k+1) - sin(k-1))/2, sin*sin(k) = (cos(k-1) - cos(k+1))/2
            out.sin[k + 1] = out.sin[k + 1].clone() + half.clone() * a.clone();
            out.sin[k - 1] = out.sin[k - 1].clone() - half.clone() * a;
            out.cos[k - 1] = out.cos[k - 1].clone() + half.clone() * b.clone();
            out.cos[k + 1] = out.cos[k + 1].clone() - half.clone() * b;
        }
        out.sin[0] = T::zero();
        out.trim();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cos.iter().chain(self.sin.iter()).all(|c| c.is_zero())
    }

    /// Highest mode index present, `None` when zero.
    pub fn max_mode(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.cos.len() - 1)
        }
    }

    /// `(cos, sin)` coefficients of mode `k`.
    pub fn mode(&self, k: usize) -> (T, T) {
        (
            self.cos.get(k).cloned().unwrap_or_else(T::zero),
            self.sin.get(k).cloned().unwrap_or_else(T::zero),
        )
    }

    /// `(1/pi) * integral over [0, 2pi)`.
    pub fn integral_over_pi(&self) -> T {
        T::int(2) * self.mode(0).0
    }

    pub fn eval_f64(&self, s2: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.cos.len() {
            let x = k as f64 * s2;
            acc += self.cos[k].to_f64() * x.cos() + self.sin[k].to_f64() * x.sin();
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.cos
            .iter()
            .chain(self.sin.iter())
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }
}

/// Cosine or sine phase of an angular mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Cos,
    Sin,
}

/// `sum_{k, phase} (sum_p c_p s3^p) * phase(k s2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarForm<T> {
    modes: BTreeMap<(usize, Phase), BTreeMap<u32, T>>,
}

impl<T> Default for PolarForm<T> {
    fn default() -> Self {
        Self {
            modes: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> PolarForm<T> {
    /// Adds `c s3^power phase(k s2)`.
    pub fn add(&mut self, k: usize, phase: Phase, power: u32, c: T) {
        if c.is_zero() || (k == 0 && phase == Phase::Sin) {
            return;
        }
        let radial = self.modes.entry((k, phase)).or_default();
        let sum = radial.get(&power).cloned().unwrap_or_else(T::zero) + c;
        if sum.is_zero() {
            radial.remove(&power);
        } else {
            radial.insert(power, sum);
        }
        if radial.is_empty() {
            self.modes.remove(&(k, phase));
        }
    }

    /// Radial profile of one mode as `power -> coefficient`.
    pub fn mode(&self, k: usize, phase: Phase) -> BTreeMap<u32, T> {
        self.modes.get(&(k, phase)).cloned().unwrap_or_default()
    }

    /// The `(mode, phase)` pairs that are not identically zero.
    pub fn active_modes(&self) -> Vec<(usize, Phase)> {
        self.modes.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Restriction to the circle `s3 = r`.
    pub fn on_circle(&self, r: &T) -> TrigSeries<T> {
        let len = self.modes.keys().map(|(k, _)| k + 1).max().unwrap_or(0);
        let mut out: TrigSeries<T> = TrigSeries::zero();
        out.ensure_len(len);
        for (&(k, phase), radial) in &self.modes {
            let v = radial
                .iter()
                .fold(T::zero(), |acc, (&p, c)| acc + c.clone() * r.pown(p));
            match phase {
                Phase::Cos => out.cos[k] = out.cos[k].clone() + v,
                Phase::Sin => out.sin[k] = out.sin[k].clone() + v,
            }
        }
        out.trim();
        out
    }

    /// Back to cartesian form; each term `s3^p phase(k s2)` must have
    /// `p >= k` with `p - k` even.
    pub fn to_cartesian(&self) -> Result<DiscPoly<T>, PolyError> {
        let mut out = DiscPoly::zero();
        for (&(k, phase), radial) in &self.modes {
            let harmonic = harmonic(k, phase);
            for (&power, c) in radial {
                if (power as usize) < k || (power as usize - k) % 2 == 1 {
                    return Err(PolyError::NotPolynomial { mode: k, power });
                }
                let lift = DiscPoly::rho2().pow((power - k as u32) / 2);
                out += &(&harmonic * &lift).scale(c);
            }
        }
        Ok(out)
    }
}

/// `Re` or `Im` of `(z2 + i z3)^k`, i.e. `s3^k cos(k s2)` or `s3^k sin(k s2)`.
fn harmonic<T: Scalar>(k: usize, phase: Phase) -> DiscPoly<T> {
    let mut out = DiscPoly::zero();
    let mut binom = 1_i64;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k - j + 1) as i64 / j as i64;
        }
        let keep = match phase {
            Phase::Cos => j % 2 == 0,
            Phase::Sin => j % 2 == 1,
        };
        if keep {
            let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
            out.add_term((k - j) as u32, j as u32, T::int(sign * binom));
        }
    }
    out
}
