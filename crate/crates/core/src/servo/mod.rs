//! Visual servoing of a camera onto an object sliding down an incline.
//!
//! Three nodes: the world `N0` (object and camera), a fixed-gain filter
//! `N1` that commands the camera, and a physics node `N2` that predicts the
//! object one step ahead. In [`Mode::Context`] `N2` feeds its prediction back
//! to `N1` as context; in [`Mode::NoContext`] `N1` only has its own filter.

mod build;
mod episode;
mod experiment;
mod world;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::KernelError;

pub use build::{
    build_servo_hierarchy, filter_node, physics_node, register_servo, servo_world, Physics,
    COMMAND_TAG, PHYSICS_TAG, POSITION_TAG, WORLD_TAG,
};
pub use episode::{run_episode, ServoEpisode, ServoStep};
pub use experiment::{round_sig, run_experiment, ExperimentSummary, ModeStats, TrialRecord};
pub use world::ServoWorld;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Context,
    NoContext,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::NoContext, Mode::Context];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Context => "context",
            Mode::NoContext => "no_context",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ServoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "context" => Ok(Mode::Context),
            "no_context" | "no-context" => Ok(Mode::NoContext),
            other => Err(ServoError::InvalidParams(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServoParams {
    /// acceleration along the incline, m/s²
    pub k: f64,
    /// time step, s
    pub dt: f64,
    /// episode length, s
    pub duration: f64,
    /// standard deviation of the position measurement, m
    pub noise_sigma: f64,
    pub kalman_gain: f64,
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
}

impl Default for ServoParams {
    fn default() -> Self {
        ServoParams {
            k: 8.49,
            dt: 0.05,
            duration: 3.0,
            noise_sigma: 0.1,
            kalman_gain: 0.25,
            mode: Mode::Context,
            seed: 42,
            trials: 100,
        }
    }
}

impl ServoParams {
    pub fn validate(&self) -> Result<(), ServoError> {
        let bad = |m: &str| Err(ServoError::InvalidParams(m.to_owned()));
        if !self.k.is_finite() {
            return bad("k must be finite");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if !(self.duration >= self.dt && self.duration.is_finite()) {
            return bad("duration must be at least dt");
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad("noise_sigma must be non-negative");
        }
        if !(0.0..=1.0).contains(&self.kalman_gain) {
            return bad("kalman_gain must lie in [0, 1]");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        Ok(())
    }

    /// Number of ticks in one episode, `duration / dt` rounded.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        ServoParams {
            mode,
            ..self.clone()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ServoParams {
            seed,
            ..self.clone()
        }
    }
}

#[derive(Debug, Error)]
pub enum ServoError {
    #[error("invalid servo parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
