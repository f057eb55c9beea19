//! Screening model of the port: French-side detectors, UK sheds, the berth
//! and ferry departures.

pub mod config;
pub mod kpi;
pub mod lorry;
pub mod sensor;
pub mod sim;
pub mod trace;

pub use config::{
    ArrivalConfig, FerryConfig, Interventions, Mode, ModelConfig, ProfileConfig, RoutingProportions,
    SearchStationConfig, SensorConfig, Sensors, SpeedUp, StationConfig, Stations, YEAR_DAYS,
};
pub use kpi::{fit_routing, service_problem_fraction, KpiReport};
pub use lorry::{admit_lorry, Disposition, Draws, Lorry, LorryStreams, Side, Stage};
pub use sensor::{Outcome, Pace};
pub use sim::{simulate, ScreeningModel};
pub use trace::{write_trace, TraceRecord};

use crate::kernel::KernelError;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid configuration `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl ModelError {
    pub fn invalid(key: &str, message: impl std::fmt::Display) -> Self {
        ModelError::Invalid {
            key: key.to_string(),
            message: message.to_string(),
        }
    }
}
