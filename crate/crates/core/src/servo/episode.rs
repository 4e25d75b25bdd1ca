use serde::Serialize;

use super::build::{build_servo_hierarchy, Physics};
use super::world::ServoWorld;
use super::{ServoError, ServoParams};
use crate::kernel::{init_active, ActiveHierarchy, NodeId, OperatorError};

/// State after one tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ServoStep {
    pub t: f64,
    pub true_position: f64,
    pub camera_position: f64,
    pub n1_belief: f64,
    pub n2_belief: Physics,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ServoEpisode {
    pub steps: Vec<ServoStep>,
    pub mean_error: f64,
}

fn read<T: Copy + 'static>(ah: &ActiveHierarchy, id: &str) -> Result<T, OperatorError> {
    let v = ah
        .belief(&NodeId::new(id))
        .ok_or_else(|| OperatorError::Domain(format!("no node {id}")))?;
    v.expect_ref::<T>().copied()
}

fn world_of(ah: &ActiveHierarchy) -> Result<&ServoWorld, OperatorError> {
    ah.world_state().expect_ref::<ServoWorld>()
}

/// Runs `duration / dt` ticks. Each tick advances the world, runs one
/// process update (which moves the camera) and then measures the error.
pub fn run_episode(params: &ServoParams) -> Result<ServoEpisode, ServoError> {
    params.validate()?;
    let world = ServoWorld::new(params.k, params.noise_sigma, params.seed);
    let mut ah = init_active(build_servo_hierarchy(params), world.into_value())?;
    let n = params.steps();
    let mut steps = Vec::with_capacity(n);
    let internal = |e: OperatorError| ServoError::InvalidParams(e.to_string());

    for _ in 0..n {
        let advanced = world_of(&ah).map_err(internal)?.advance(params.dt);
        ah = ah.with_world_state(advanced.into_value())?.tick()?;
        let w = world_of(&ah).map_err(internal)?;
        steps.push(ServoStep {
            t: w.t,
            true_position: w.true_position,
            camera_position: w.camera_position,
            n1_belief: read(&ah, "N1").map_err(internal)?,
            n2_belief: read(&ah, "N2").map_err(internal)?,
            abs_error: w.tracking_error(),
        });
    }
    let mean_error = steps.iter().map(|s| s.abs_error).sum::<f64>() / steps.len() as f64;
    Ok(ServoEpisode { steps, mean_error })
}
