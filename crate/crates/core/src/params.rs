//! Physical parameters shared by the pressure and expansion stages.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid parameter {name} = {value}: {reason}")]
pub struct ParamError {
    pub name: &'static str,
    pub value: f64,
    pub reason: &'static str,
}

/// Density `rho0` (kg/m^3) and kinematic viscosity `nu` (m^2/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    rho0: f64,
    nu: f64,
}

impl FluidParams {
    pub fn new(rho0: f64, nu: f64) -> Result<Self, ParamError> {
        for (name, value) in [("rho0", rho0), ("nu", nu)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError {
                    name,
                    value,
                    reason: "must be positive and finite",
                });
            }
        }
        Ok(Self { rho0, nu })
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Dynamic viscosity `rho0 * nu`.
    pub fn mu(&self) -> f64 {
        self.rho0 * self.nu
    }
}

/// Zeroth-order body force components along `T`, `N`, `B` (m/s^2).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyForce {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl BodyForce {
    pub fn new(b1: f64, b2: f64, b3: f64) -> Result<Self, ParamError> {
        for (name, value) in [("b1", b1), ("b2", b2), ("b3", b3)] {
            if !value.is_finite() {
                return Err(ParamError {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(Self { b1, b2, b3 })
    }
}
