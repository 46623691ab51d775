//! Run configuration read from TOML with dotted sections.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use curvepipe::geometry::{CenterCurve, SampledCurve};
use curvepipe::params::{BodyForce, FluidParams};
use curvepipe::pressure::{BoundaryValue, Dirichlet, PressureBC};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub eps: f64,
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub fluid: FluidConfig,
    #[serde(default)]
    pub wall: WallConfig,
    pub bc: BcConfig,
    #[serde(default)]
    pub body: BodyConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeometryConfig {
    Straight {
        length: f64,
    },
    Arc {
        radius: f64,
        length: f64,
    },
    Helix {
        a: f64,
        b: f64,
        length: f64,
    },
    /// `s,x,y,z` rows; a relative path is taken from the config file's directory.
    Sampled {
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluidConfig {
    pub rho0: f64,
    pub nu: f64,
}

impl Default for FluidConfig {
    fn default() -> Self {
        Self { rho0: 1.0, nu: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawName {
    Rigid,
    /// Rigid in shape, dilating at a prescribed relative rate.
    Prescribed,
    Elastic,
}

/// Rest (or rigid) radius `R0(s) = radius * (1 + amplitude * sin(wavenumber * s))`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WallConfig {
    pub law: LawName,
    pub radius: f64,
    pub amplitude: f64,
    pub wavenumber: f64,
    /// `R = R0 (1 + rate * t)` for the prescribed law.
    pub rate: f64,
    pub young: Option<f64>,
    pub thickness: Option<f64>,
    pub external_pressure: f64,
}

impl Default for WallConfig {
    fn default() -> Self {
        Self {
            law: LawName::Rigid,
            radius: 1.0,
            amplitude: 0.0,
            wavenumber: 0.0,
            rate: 0.0,
            young: None,
            thickness: None,
            external_pressure: 0.0,
        }
    }
}

impl WallConfig {
    /// `(R0, R0', R0'')` at `s`.
    pub fn rest(&self, s: f64) -> (f64, f64, f64) {
        let (a, k) = (self.amplitude, self.wavenumber);
        let r = self.radius * (1.0 + a * (k * s).sin());
        let dr = self.radius * a * k * (k * s).cos();
        let d2r = -self.radius * a * k * k * (k * s).sin();
        (r, dr, d2r)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BoundaryInput {
    Value(f64),
    /// `[[t, value], ...]`, linear in between.
    Series(Vec<[f64; 2]>),
}

impl From<&BoundaryInput> for BoundaryValue {
    fn from(b: &BoundaryInput) -> Self {
        match b {
            BoundaryInput::Value(v) => BoundaryValue::Constant(*v),
            BoundaryInput::Series(pts) => {
                BoundaryValue::Series(pts.iter().map(|[t, v]| (*t, *v)).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndsConfig {
    pub inlet: BoundaryInput,
    pub outlet: BoundaryInput,
}

impl From<&EndsConfig> for Dirichlet {
    fn from(e: &EndsConfig) -> Self {
        Dirichlet {
            inlet: (&e.inlet).into(),
            outlet: (&e.outlet).into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcConfig {
    pub p0: EndsConfig,
    pub p1: Option<EndsConfig>,
    pub p02: Option<EndsConfig>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyConfig {
    #[serde(default)]
    pub b1: f64,
    #[serde(default)]
    pub b2: f64,
    #[serde(default)]
    pub b3: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n_s1: usize,
    pub n_disc: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_s1: 41,
            n_disc: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeConfig {
    pub t_end: f64,
    pub dt: f64,
    pub steady: bool,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_end: 0.0,
            dt: 0.1,
            steady: false,
        }
    }
}

pub const FIELD_NAMES: [&str; 7] = ["u1_0", "u1_1", "u1_2", "U1", "U2", "p2", "p3"];

/// Lowest truncation order at which a field appears.
pub fn field_order(name: &str) -> usize {
    match name {
        "u1_0" => 0,
        "u1_1" | "U1" | "p2" => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub fields: Vec<String>,
    /// Arc-length positions; each snaps to the nearest grid node.
    pub stations: Option<Vec<f64>>,
    pub order: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            fields: FIELD_NAMES.iter().map(|s| s.to_string()).collect(),
            stations: None,
            order: 2,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub eps: Vec<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg =
            Self::from_toml(&text).with_context(|| format!("config {}", path.display()))?;
        if let GeometryConfig::Sampled { file } = &mut cfg.geometry {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(
            self.eps > 0.0 && self.eps.is_finite(),
            "eps must be positive, got {}",
            self.eps
        );
        ensure!(self.grid.n_s1 >= 8, "grid.n_s1 must be at least 8");
        ensure!(self.grid.n_disc >= 8, "grid.n_disc must be at least 8");
        ensure!(self.time.dt > 0.0, "time.dt must be positive");
        ensure!(self.time.t_end >= 0.0, "time.t_end must be non-negative");
        ensure!(self.output.order <= 2, "output.order must be 0, 1 or 2");
        for f in &self.output.fields {
            ensure!(
                FIELD_NAMES.contains(&f.as_str()),
                "unknown field {f:?} in output.fields"
            );
        }
        ensure!(self.wall.radius > 0.0, "wall.radius must be positive");
        ensure!(
            self.wall.amplitude.abs() < 1.0,
            "wall.amplitude must be below 1 in magnitude"
        );
        if self.wall.law == LawName::Elastic {
            ensure!(
                self.wall.young.is_some(),
                "wall.young is required for the elastic law"
            );
            ensure!(
                self.wall.thickness.is_some(),
                "wall.thickness is required for the elastic law"
            );
        }
        if self.wall.law != LawName::Prescribed && self.wall.rate != 0.0 {
            bail!("wall.rate only applies to the prescribed law");
        }
        FluidParams::new(self.fluid.rho0, self.fluid.nu)?;
        self.body()?;
        self.pressure_bc().validate()?;
        Ok(())
    }

    pub fn fluid(&self) -> Result<FluidParams> {
        Ok(FluidParams::new(self.fluid.rho0, self.fluid.nu)?)
    }

    pub fn body(&self) -> Result<BodyForce> {
        Ok(BodyForce::new(self.body.b1, self.body.b2, self.body.b3)?)
    }

    pub fn pressure_bc(&self) -> PressureBC {
        let mut bc = PressureBC::new((&self.bc.p0).into());
        if let Some(p1) = &self.bc.p1 {
            bc.p1 = p1.into();
        }
        if let Some(p02) = &self.bc.p02 {
            bc.p02 = p02.into();
        }
        bc
    }

    pub fn curve(&self) -> Result<CenterCurve> {
        Ok(match &self.geometry {
            GeometryConfig::Straight { length } => CenterCurve::straight(*length)?,
            GeometryConfig::Arc { radius, length } => CenterCurve::circular_arc(*radius, *length)?,
            GeometryConfig::Helix { a, b, length } => CenterCurve::helix(*a, *b, *length)?,
            GeometryConfig::Sampled { file } => {
                let f = std::fs::File::open(file)
                    .with_context(|| format!("opening {}", file.display()))?;
                CenterCurve::sampled(SampledCurve::from_reader(f)?)
            }
        })
    }
}

/// Helix with the given curvature and torsion, or a line when `kappa = 0`.
pub fn helix_with(kappa: f64, tau: f64, length: f64) -> Result<CenterCurve> {
    ensure!(
        kappa >= 0.0,
        "sweep curvature must be non-negative, got {kappa}"
    );
    if kappa == 0.0 {
        return Ok(CenterCurve::straight(length)?);
    }
    let d = kappa * kappa + tau * tau;
    Ok(CenterCurve::helix(kappa / d, tau / d, length)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
eps = 0.1
geometry.kind = "straight"
geometry.length = 1.0
bc.p0.inlet = 1.0
bc.p0.outlet = 0.0
"#;

    #[test]
    fn defaults_fill_in() {
        let cfg = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.grid.n_s1, 41);
        assert_eq!(cfg.wall.law, LawName::Rigid);
        assert_eq!(cfg.output.order, 2);
        assert!(cfg.bc.p1.is_none());
    }

    #[test]
    fn series_boundary_values() {
        let text = MINIMAL.replace(
            "bc.p0.inlet = 1.0",
            "bc.p0.inlet = [[0.0, 1.0], [1.0, 2.0]]",
        );
        let cfg = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg.pressure_bc().p0.at(0.5), (1.5, 0.0));
    }

    #[test]
    fn rejects_small_disc_grid_and_unknown_keys() {
        let err = RunConfig::from_toml(&format!("{MINIMAL}grid.n_disc = 4\n")).unwrap_err();
        assert!(err.to_string().contains("n_disc"), "{err}");
        assert!(RunConfig::from_toml(&format!("{MINIMAL}fluid.viscosity = 2.0\n")).is_err());
        let elastic = format!("{MINIMAL}wall.law = \"elastic\"\n");
        assert!(RunConfig::from_toml(&elastic).is_err());
    }

    #[test]
    fn helix_from_curvature_and_torsion() {
        let c = helix_with(0.5, 0.2, 3.0).unwrap();
        let f = c.frenet_frame(1.0).unwrap();
        assert!((f.kappa - 0.5).abs() < 1e-14 && (f.tau - 0.2).abs() < 1e-14);
    }
}
