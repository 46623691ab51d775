//! Pipe center curve, Frenet apparatus and the tube map.
//!
//! The physical pipe is the image of the reference cylinder
//! `[0, L] x [0, 2pi) x [0, 1]` under
//! `x = c(s1) + eps s3 R(t, s1) (cos s2 N(s1) + sin s2 B(s1))`.

use std::io::Read;

use nalgebra::{Matrix3, Point3, Vector3};
use thiserror::Error;

use crate::linalg::solve_tridiagonal;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("arc length {s1} outside [0, {length}]")]
    OutOfRange { s1: f64, length: f64 },
    #[error("invalid curve parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate sampled curve: {0}")]
    Degenerate(String),
    #[error("sample file: {0}")]
    Parse(String),
    #[error("tube map not invertible at s1 = {s1}: eps*kappa*s3*R = {value}")]
    NotInvertible { s1: f64, value: f64 },
    #[error("the s2 row of the inverse jacobian is singular on the axis s3 = 0")]
    SingularAxis,
}

/// Frenet apparatus at one arc-length station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub position: Point3<f64>,
    pub t: Vector3<f64>,
    pub n: Vector3<f64>,
    pub b: Vector3<f64>,
    pub kappa: f64,
    pub dkappa: f64,
    pub tau: f64,
    pub dtau: f64,
}

impl Frame {
    /// Columns `T, N, B`; maps reference-frame components to world components.
    pub fn basis(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.t, self.n, self.b])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// Unit-speed line along `x`, frame `(e_x, e_y, e_z)`.
    Straight,
    /// Circle of the given radius in the `xy` plane.
    CircularArc {
        radius: f64,
    },
    /// `(a cos th, a sin th, b th)` with `th = s / sqrt(a^2 + b^2)`.
    Helix {
        a: f64,
        b: f64,
    },
    Sampled(SampledCurve),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterCurve {
    kind: CurveKind,
    length: f64,
}

impl CenterCurve {
    pub fn straight(length: f64) -> Result<Self, GeometryError> {
        Self::new(CurveKind::Straight, length)
    }

    pub fn circular_arc(radius: f64, length: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "arc radius must be positive, got {radius}"
            )));
        }
        Self::new(CurveKind::CircularArc { radius }, length)
    }

    pub fn helix(a: f64, b: f64, length: f64) -> Result<Self, GeometryError> {
        if !(a > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "helix needs a > 0 and finite b, got a = {a}, b = {b}"
            )));
        }
        Self::new(CurveKind::Helix { a, b }, length)
    }

    pub fn sampled(curve: SampledCurve) -> Self {
        let length = curve.length();
        Self {
            kind: CurveKind::Sampled(curve),
            length,
        }
    }

    fn new(kind: CurveKind, length: f64) -> Result<Self, GeometryError> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "curve length must be positive, got {length}"
            )));
        }
        Ok(Self { kind, length })
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn frenet_frame(&self, s1: f64) -> Result<Frame, GeometryError> {
        let slack = 1e-12 * self.length;
        if !(s1 >= -slack && s1 <= self.length + slack) {
            return Err(GeometryError::OutOfRange {
                s1,
                length: self.length,
            });
        }
        let s1 = s1.clamp(0.0, self.length);
        Ok(match &self.kind {
            CurveKind::Straight => Frame {
                position: Point3::new(s1, 0.0, 0.0),
                t: Vector3::x(),
                n: Vector3::y(),
                b: Vector3::z(),
                kappa: 0.0,
                dkappa: 0.0,
                tau: 0.0,
                dtau: 0.0,
            },
            CurveKind::CircularArc { radius } => {
                let th = s1 / radius;
                let (s, c) = th.sin_cos();
                Frame {
                    position: Point3::new(radius * c, radius * s, 0.0),
                    t: Vector3::new(-s, c, 0.0),
                    n: Vector3::new(-c, -s, 0.0),
                    b: Vector3::z(),
                    kappa: 1.0 / radius,
                    dkappa: 0.0,
                    tau: 0.0,
                    dtau: 0.0,
                }
            }
            CurveKind::Helix { a, b } => {
                let c2 = a * a + b * b;
                let c = c2.sqrt();
                let th = s1 / c;
                let (sn, cs) = th.sin_cos();
                Frame {
                    position: Point3::new(a * cs, a * sn, b * th),
                    t: Vector3::new(-a * sn, a * cs, *b) / c,
                    n: Vector3::new(-cs, -sn, 0.0),
                    b: Vector3::new(b * sn, -b * cs, *a) / c,
                    kappa: a / c2,
                    dkappa: 0.0,
                    tau: b / c2,
                    dtau: 0.0,
                }
            }
            CurveKind::Sampled(curve) => curve.frame(s1),
        })
    }

    /// Largest curvature over `n` uniform stations (exact for the presets).
    pub fn max_curvature(&self, n: usize) -> f64 {
        let n = n.max(2);
        (0..n)
            .filter_map(|i| {
                self.frenet_frame(self.length * i as f64 / (n - 1) as f64)
                    .ok()
            })
            .map(|f| f.kappa)
            .fold(0.0, f64::max)
    }
}

/// Below this curvature a sampled frame is treated as straight.
const FLAT_CURVATURE: f64 = 1e-10;

/// Natural cubic spline through `(s_i, x_i, y_i, z_i)` samples.
///
/// The `s` column is taken as the arc-length parameter; curvature and torsion
/// use the parametrization-invariant formulas, so small departures from unit
/// speed do not bias them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    s: Vec<f64>,
    points: Vec<Vector3<f64>>,
    second: Vec<Vector3<f64>>,
}

impl SampledCurve {
    pub fn new(s: Vec<f64>, points: Vec<Vector3<f64>>) -> Result<Self, GeometryError> {
        if s.len() != points.len() {
            return Err(GeometryError::Degenerate(
                "parameter and point counts differ".into(),
            ));
        }
        if s.len() < 3 {
            return Err(GeometryError::Degenerate(format!(
                "need at least 3 samples, got {}",
                s.len()
            )));
        }
        for i in 1..s.len() {
            if s[i].partial_cmp(&s[i - 1]) != Some(std::cmp::Ordering::Greater) {
                return Err(GeometryError::Degenerate(format!(
                    "parameter not strictly increasing at row {i}"
                )));
            }
            if (points[i] - points[i - 1]).norm() <= 1e-14 * (s[i] - s[i - 1]).abs().max(1.0) {
                return Err(GeometryError::Degenerate(format!(
                    "repeated point at row {i}"
                )));
            }
        }
        let second = natural_second_derivatives(&s, &points)?;
        Ok(Self { s, points, second })
    }

    /// Reads comma-separated `s,x,y,z` rows with a header row.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, GeometryError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| GeometryError::Parse(e.to_string()))?
            .clone();
        let want = ["s", "x", "y", "z"];
        let cols: Vec<usize> = want
            .iter()
            .map(|name| {
                headers
                    .iter()
                    .position(|h| h.eq_ignore_ascii_case(name))
                    .ok_or_else(|| GeometryError::Parse(format!("missing column '{name}'")))
            })
            .collect::<Result<_, _>>()?;
        let mut s = Vec::new();
        let mut points = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| GeometryError::Parse(e.to_string()))?;
            let field = |c: usize| -> Result<f64, GeometryError> {
                let raw = record.get(c).unwrap_or("");
                raw.parse::<f64>().map_err(|_| {
                    GeometryError::Parse(format!("row {}: cannot parse '{raw}'", i + 2))
                })
            };
            s.push(field(cols[0])?);
            points.push(Vector3::new(
                field(cols[1])?,
                field(cols[2])?,
                field(cols[3])?,
            ));
        }
        Self::new(s, points)
    }

    pub fn length(&self) -> f64 {
        self.s[self.s.len() - 1] - self.s[0]
    }

    /// Position and its first three parameter derivatives.
    fn jet(&self, u: f64) -> [Vector3<f64>; 4] {
        let u = u.clamp(self.s[0], self.s[self.s.len() - 1]);
        let i = match self.s.partition_point(|&x| x <= u) {
            0 => 0,
            k => (k - 1).min(self.s.len() - 2),
        };
        let h = self.s[i + 1] - self.s[i];
        let (p0, p1) = (self.points[i], self.points[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let a = (self.s[i + 1] - u) / h;
        let b = (u - self.s[i]) / h;
        let pos = p0 * a + p1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0);
        let d1 = (p1 - p0) / h + (m1 * (3.0 * b * b - 1.0) - m0 * (3.0 * a * a - 1.0)) * (h / 6.0);
        let d2 = m0 * a + m1 * b;
        let d3 = (m1 - m0) / h;
        [pos, d1, d2, d3]
    }

    fn curvature_torsion(&self, u: f64) -> (f64, f64, f64) {
        let [_, d1, d2, d3] = self.jet(u);
        let cross = d1.cross(&d2);
        let speed = d1.norm();
        let kappa = cross.norm() / speed.powi(3);
        let tau = if kappa > FLAT_CURVATURE {
            cross.dot(&d3) / cross.norm_squared()
        } else {
            0.0
        };
        (kappa, tau, speed)
    }

    fn frame(&self, s1: f64) -> Frame {
        let u = self.s[0] + s1;
        let [pos, d1, d2, _] = self.jet(u);
        let t = d1.normalize();
        let (kappa, tau, speed) = self.curvature_torsion(u);
        let n = if kappa > FLAT_CURVATURE {
            (d2 - t * d2.dot(&t)).normalize()
        } else {
            // Straight stretch: project a fixed axis, which gives a constant
            // frame along straight segments.
            let axis = [Vector3::z(), Vector3::y(), Vector3::x()]
                .into_iter()
                .min_by(|a, b| a.dot(&t).abs().total_cmp(&b.dot(&t).abs()))
                .unwrap();
            (axis - t * axis.dot(&t)).normalize()
        };
        let b = t.cross(&n);

        let lo = self.s[0];
        let hi = self.s[self.s.len() - 1];
        let h = 1e-5 * (hi - lo);
        let (ua, ub) = ((u - h).max(lo), (u + h).min(hi));
        let (ka, ta, _) = self.curvature_torsion(ua);
        let (kb, tb, _) = self.curvature_torsion(ub);
        let du = (ub - ua) * speed;
        Frame {
            position: Point3::from(pos),
            t,
            n,
            b,
            kappa,
            dkappa: (kb - ka) / du,
            tau,
            dtau: (tb - ta) / du,
        }
    }
}

fn natural_second_derivatives(
    s: &[f64],
    points: &[Vector3<f64>],
) -> Result<Vec<Vector3<f64>>, GeometryError> {
    let n = s.len();
    let mut out = vec![Vector3::zeros(); n];
    if n < 3 {
        return Ok(out);
    }
    let m = n - 2;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    for j in 0..m {
        let i = j + 1;
        let h0 = s[i] - s[i - 1];
        let h1 = s[i + 1] - s[i];
        lower[j] = h0 / 6.0;
        diag[j] = (h0 + h1) / 3.0;
        upper[j] = h1 / 6.0;
    }
    for axis in 0..3 {
        let rhs: Vec<f64> = (1..n - 1)
            .map(|i| {
                let h0 = s[i] - s[i - 1];
                let h1 = s[i + 1] - s[i];
                (points[i + 1][axis] - points[i][axis]) / h1
                    - (points[i][axis] - points[i - 1][axis]) / h0
            })
            .collect();
        let m2 = solve_tridiagonal(&lower, &diag, &upper, &rhs)
            .map_err(|e| GeometryError::Degenerate(e.to_string()))?;
        for (j, v) in m2.into_iter().enumerate() {
            out[j + 1][axis] = v;
        }
    }
    Ok(out)
}

/// Radius data at one `(t, s1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSample {
    pub r: f64,
    pub dr_ds: f64,
    pub dr_dt: f64,
}

/// A source of `R(t, s1)` for the tube map.
pub trait RadiusProfile {
    fn radius(&self, t: f64, s1: f64) -> RadiusSample;
}

impl<F: Fn(f64, f64) -> RadiusSample> RadiusProfile for F {
    fn radius(&self, t: f64, s1: f64) -> RadiusSample {
        self(t, s1)
    }
}

/// `R(t) = r0 + rate * t`, uniform along the pipe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformRadius {
    pub r0: f64,
    pub rate: f64,
}

impl RadiusProfile for UniformRadius {
    fn radius(&self, t: f64, _s1: f64) -> RadiusSample {
        RadiusSample {
            r: self.r0 + self.rate * t,
            dr_ds: 0.0,
            dr_dt: self.rate,
        }
    }
}

/// Rows of `ds/dx` in world coordinates, plus `ds3/dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseJacobian {
    pub ds1_dx: Vector3<f64>,
    pub ds2_dx: Vector3<f64>,
    pub ds3_dx: Vector3<f64>,
    /// `ds1/dt = ds2/dt = 0`; only the `s3` component moves with the wall.
    pub ds3_dt: f64,
}

impl InverseJacobian {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_rows(&[
            self.ds1_dx.transpose(),
            self.ds2_dx.transpose(),
            self.ds3_dx.transpose(),
        ])
    }
}

/// Coefficients of the `eps` expansion of the inverse jacobian rows:
/// `ds1/dx = sum_k eps^k d1[k]`,
/// `ds2/dx = d2_minus1 / eps + sum_k eps^k d2[k]`,
/// `ds3/dx = d3_minus1 / eps + sum_k eps^k d3[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSeries {
    pub d1: Vec<Vector3<f64>>,
    pub d2_minus1: Vector3<f64>,
    pub d2: Vec<Vector3<f64>>,
    pub d3_minus1: Vector3<f64>,
    pub d3: Vec<Vector3<f64>>,
}

impl EpsSeries {
    /// Partial sums of the three rows at `eps`.
    pub fn evaluate(&self, eps: f64) -> [Vector3<f64>; 3] {
        let sum = |terms: &[Vector3<f64>]| {
            terms
                .iter()
                .enumerate()
                .fold(Vector3::zeros(), |acc, (k, v)| acc + v * eps.powi(k as i32))
        };
        [
            sum(&self.d1),
            self.d2_minus1 / eps + sum(&self.d2),
            self.d3_minus1 / eps + sum(&self.d3),
        ]
    }
}

/// The reference-to-physical map for a given curve, radius and `eps`.
pub struct TubeMap<'a, P: RadiusProfile> {
    pub eps: f64,
    pub curve: &'a CenterCurve,
    pub wall: &'a P,
}

impl<'a, P: RadiusProfile> TubeMap<'a, P> {
    /// Checks `eps * max(kappa) * max(R) < 1` over `samples` stations at time `t`.
    pub fn new(
        eps: f64,
        curve: &'a CenterCurve,
        wall: &'a P,
        t: f64,
        samples: usize,
    ) -> Result<Self, GeometryError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(GeometryError::InvalidParameter(format!(
                "eps must be positive, got {eps}"
            )));
        }
        let map = Self { eps, curve, wall };
        let (s1, value) = map.worst_station(t, samples);
        if value >= 1.0 {
            return Err(GeometryError::NotInvertible { s1, value });
        }
        Ok(map)
    }

    /// Station and value of the largest `eps * kappa * R`.
    pub fn worst_station(&self, t: f64, samples: usize) -> (f64, f64) {
        let n = samples.max(2);
        let max_r = (0..n)
            .map(|i| self.curve.length() * i as f64 / (n - 1) as f64)
            .map(|s| self.wall.radius(t, s).r)
            .fold(0.0, f64::max);
        let mut worst = (0.0, 0.0);
        for i in 0..n {
            let s = self.curve.length() * i as f64 / (n - 1) as f64;
            if let Ok(f) = self.curve.frenet_frame(s) {
                let v = self.eps * f.kappa * max_r;
                if v > worst.1 {
                    worst = (s, v);
                }
            }
        }
        worst
    }

    /// True when the map is valid but outside the small-`eps` regime.
    pub fn is_marginal(&self, t: f64, samples: usize) -> bool {
        self.worst_station(t, samples).1 > 0.5
    }

    fn stretch(&self, f: &Frame, r: f64, s1: f64, s2: f64, s3: f64) -> Result<f64, GeometryError> {
        let value = self.eps * f.kappa * s3 * r;
        if value >= 1.0 {
            return Err(GeometryError::NotInvertible { s1, value });
        }
        Ok(1.0 - value * s2.cos())
    }

    pub fn map_to_physical(
        &self,
        t: f64,
        s1: f64,
        s2: f64,
        s3: f64,
    ) -> Result<Point3<f64>, GeometryError> {
        let f = self.curve.frenet_frame(s1)?;
        let r = self.wall.radius(t, s1).r;
        self.stretch(&f, r, s1, s2, s3)?;
        Ok(f.position + (f.n * s2.cos() + f.b * s2.sin()) * (self.eps * s3 * r))
    }

    /// Columns `dx/ds1, dx/ds2, dx/ds3`.
    pub fn forward_jacobian(
        &self,
        t: f64,
        s1: f64,
        s2: f64,
        s3: f64,
    ) -> Result<Matrix3<f64>, GeometryError> {
        let f = self.curve.frenet_frame(s1)?;
        let rs = self.wall.radius(t, s1);
        let a = self.stretch(&f, rs.r, s1, s2, s3)?;
        let (sn, cs) = s2.sin_cos();
        let radial = f.n * cs + f.b * sn;
        let angular = f.b * cs - f.n * sn;
        let e = self.eps;
        let d1 = f.t * a + radial * (e * s3 * rs.dr_ds) + angular * (e * s3 * rs.r * f.tau);
        let d2 = angular * (e * s3 * rs.r);
        let d3 = radial * (e * rs.r);
        Ok(Matrix3::from_columns(&[d1, d2, d3]))
    }

    pub fn inverse_jacobian_rows(
        &self,
        t: f64,
        s1: f64,
        s2: f64,
        s3: f64,
    ) -> Result<InverseJacobian, GeometryError> {
        if s3 == 0.0 {
            return Err(GeometryError::SingularAxis);
        }
        let f = self.curve.frenet_frame(s1)?;
        let rs = self.wall.radius(t, s1);
        let a = self.stretch(&f, rs.r, s1, s2, s3)?;
        let (sn, cs) = s2.sin_cos();
        let e = self.eps;
        let ds1_dx = f.t / a;
        let ds2_dx = -f.t * (f.tau / a) + (f.b * cs - f.n * sn) / (e * s3 * rs.r);
        let ds3_dx = -f.t * (s3 * rs.dr_ds / (rs.r * a)) + (f.n * cs + f.b * sn) / (e * rs.r);
        Ok(InverseJacobian {
            ds1_dx,
            ds2_dx,
            ds3_dx,
            ds3_dt: -s3 * rs.dr_dt / rs.r,
        })
    }

    /// Expansion coefficients of the inverse jacobian rows for `k = 0..=kmax`.
    pub fn eps_series(
        &self,
        t: f64,
        s1: f64,
        s2: f64,
        s3: f64,
        kmax: usize,
    ) -> Result<EpsSeries, GeometryError> {
        if s3 == 0.0 {
            return Err(GeometryError::SingularAxis);
        }
        let f = self.curve.frenet_frame(s1)?;
        let rs = self.wall.radius(t, s1);
        let (sn, cs) = s2.sin_cos();
        let x = f.kappa * s3 * rs.r * cs;
        let powers: Vec<f64> = (0..=kmax).map(|k| x.powi(k as i32)).collect();
        Ok(EpsSeries {
            d1: powers.iter().map(|p| f.t * *p).collect(),
            d2_minus1: (f.b * cs - f.n * sn) / (rs.r * s3),
            d2: powers.iter().map(|p| -f.t * (f.tau * p)).collect(),
            d3_minus1: (f.n * cs + f.b * sn) / rs.r,
            d3: powers
                .iter()
                .map(|p| -f.t * (s3 * rs.dr_ds / rs.r * p))
                .collect(),
        })
    }
}
