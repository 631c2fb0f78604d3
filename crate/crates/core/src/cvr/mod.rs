//! Continuously variable rate decoding and the behavioural pipeline model.

mod engine;
mod pipeline;

pub use engine::{
    decode_cvr, default_schedule, validate_schedule, Attempt, CvrEngine, CvrOutcome, CvrWorker,
    RateController, RatePolicy, DEFAULT_THRESHOLD_DB,
};
pub use pipeline::{
    activity_power_proxy, first_frame_latency, latency_reduction, throughput_model,
    ActivityReport, FrameLatency, LatencyReduction, PipelineConfig, REFERENCE_POWER_SAVING,
    REFERENCE_THROUGHPUT_FULL, REFERENCE_THROUGHPUT_SHORT,
};

use crate::extension::ExtensionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CvrError {
    #[error("schedule {schedule:?} must be strictly increasing and end at {max}")]
    InvalidSchedule { schedule: Vec<usize>, max: usize },
    #[error("invalid rate policy: {0}")]
    InvalidPolicy(String),
    #[error("LLR frame has length {got}, expected {expected}")]
    FrameLength { expected: usize, got: usize },
    #[error("invalid pipeline parameters: {0}")]
    InvalidPipeline(String),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}
