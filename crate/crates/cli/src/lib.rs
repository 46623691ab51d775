//! Configuration, orchestration and file output for the `curvepipe` binary.

pub mod commands;
pub mod config;
pub mod export;
pub mod pipeline;
pub mod plot;
