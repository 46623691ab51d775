//! Asymptotic reduced-order model for unsteady viscous flow in a curved pipe
//! with moving walls.
//!
//! The pipeline runs geometry -> pressure -> expansion -> verify, with
//! [`coupling`] closing the loop between wall radius and leading-order
//! pressure.

pub mod coupling;
pub mod expansion;
pub mod geometry;
pub mod grid;
pub mod linalg;
pub mod params;
pub mod polydisc;
pub mod pressure;
pub mod scalar;
pub mod verify;

pub use polydisc::{DiscPoly, DiscVector, Phase, PiMultiple, PolarForm, TrigSeries, Var};
pub use scalar::{Rational, Scalar};
