//! Cargo-screening port simulation and decision analysis.
//!
//! * [`kernel`]: discrete-event engine, random streams, samplers, statistics.
//! * [`model`]: the screening pipeline in process- and object-oriented modes.
//! * [`decision`]: scenario analysis, cost-benefit analysis and sensitivity sweeps.
//! * [`harness`]: configuration, experiment runner, calibration and reports.

pub mod decision;
pub mod harness;
pub mod kernel;
pub mod model;
