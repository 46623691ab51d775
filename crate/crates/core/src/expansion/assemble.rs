use nalgebra::Vector3;

use crate::geometry::Frame;

use super::{ExpansionError, ExpansionFields};

pub const MAX_ORDER: usize = 2;

/// Velocity and pressure truncated at a fixed order, at one station.
#[derive(Debug, Clone)]
pub struct TruncatedSolution<'a> {
    pub eps: f64,
    pub order: usize,
    pub fields: &'a ExpansionFields<f64>,
    pub frame: Frame,
    /// Cross-sectionally constant pressure terms `p0`, `p1` at the station.
    pub p0: f64,
    pub p1: f64,
    /// Add `eps p3` to the pressure.
    pub with_p3: bool,
}

pub fn assemble_solution<'a>(
    eps: f64,
    fields: &'a ExpansionFields<f64>,
    frame: Frame,
    p0: f64,
    p1: f64,
    order: usize,
) -> Result<TruncatedSolution<'a>, ExpansionError> {
    if order > MAX_ORDER {
        return Err(ExpansionError::UnsupportedOrder(order));
    }
    Ok(TruncatedSolution {
        eps,
        order,
        fields,
        frame,
        p0,
        p1,
        with_p3: false,
    })
}

impl TruncatedSolution<'_> {
    pub fn with_p3(mut self, on: bool) -> Self {
        self.with_p3 = on;
        self
    }

    /// Components along `(T, N, B)`.
    pub fn velocity_reference(&self, z2: f64, z3: f64) -> Vector3<f64> {
        let mut out = Vector3::zeros();
        let mut scale = 1.0;
        for k in 0..=self.order {
            // order was checked on construction
            let axial = self
                .fields
                .axial(k)
                .expect("order checked")
                .eval_f64(z2, z3);
            let (v2, v3) = self
                .fields
                .transverse(k)
                .expect("order checked")
                .eval_f64(z2, z3);
            out += scale * Vector3::new(axial, v2, v3);
            scale *= self.eps;
        }
        out
    }

    pub fn velocity_world(&self, z2: f64, z3: f64) -> Vector3<f64> {
        self.frame.basis() * self.velocity_reference(z2, z3)
    }

    /// `p0 / eps^2 + p1 / eps + p2 (+ eps p3)`, cut at the requested order.
    pub fn pressure(&self, z2: f64, z3: f64) -> f64 {
        let e = self.eps;
        let mut p = self.p0 / (e * e);
        if self.order >= 1 {
            p += self.p1 / e;
        }
        if self.order >= 2 {
            p += self.fields.p2.eval_f64(z2, z3);
            if self.with_p3 {
                p += e * self.fields.p3.eval_f64(z2, z3);
            }
        }
        p
    }
}
