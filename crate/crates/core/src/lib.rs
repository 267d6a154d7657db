//! Analytics for threshold model selection on a Gaussian slope: selector
//! power, post-selection prediction risk, distances between the competing
//! laws, drift-sequence diagnostics, and a scenario lab that sweeps the
//! asymptotics over finite grids.

// Reference constants (distribution tables, frozen expected values) keep
// their published digit counts even where f64 cannot hold them all.
#![allow(clippy::excessive_precision)]

pub mod distance;
pub mod error;
pub mod gauss;
pub mod lab;
mod mc;
pub mod risk;
pub mod selector;
pub mod sequences;

pub use distance::{GaussianShiftPair, SeparationClass};
pub use error::{Error, Result};
pub use gauss::{Probability, ZScore};
pub use lab::{
    LimitTag, LimitThresholds, LimitVerdict, McSettings, Scenario, ScenarioConfig,
    ScenarioOutput, SweepRow, SweepTable,
};
pub use risk::{BetaGrid, RiskMethod, RiskReport, SupScanResult};
pub use selector::{DesignKind, DesignSpec, SelectionOutcome, SelectorCalibration};
pub use sequences::{AlternativeSequence, ConfusionMargin, LlrParams, RootNCoefficient};
