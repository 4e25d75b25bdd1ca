use serde::Deserialize;
use serde_json::Value as Json;

use super::world::ServoWorld;
use super::{Mode, ServoParams};
use crate::kernel::document::Registry;
use crate::kernel::{
    CognitiveNodeSpec, EdgeTriple, Hierarchy, NodeId, NodeValueSpaces, OpResult, OperatorError,
    Value, WorldSpec,
};

pub const WORLD_TAG: &str = "servo.world";
pub const POSITION_TAG: &str = "servo.position";
pub const PHYSICS_TAG: &str = "servo.physics";
/// Task parameters from `N2` to `N1`; nothing is ever sent.
pub const COMMAND_TAG: &str = "servo.command";

/// Belief of the physics node.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, serde::Serialize)]
pub struct Physics {
    pub x: f64,
    pub v: f64,
}

fn position(v: f64) -> Value {
    Value::new(POSITION_TAG, v)
}

fn one_position(values: &[Value], what: &str) -> OpResult<f64> {
    match values {
        [v] => v.expect_ref::<f64>().copied(),
        _ => Err(OperatorError::Domain(format!(
            "expected one {what}, got {}",
            values.len()
        ))),
    }
}

impl ServoWorld {
    pub fn into_value(self) -> Value {
        Value::new(WORLD_TAG, self)
    }
}

/// `N0`: a camera that jumps to the commanded position.
pub fn servo_world(id: impl Into<NodeId>) -> WorldSpec {
    WorldSpec::inert(id, WORLD_TAG).with_actuation(POSITION_TAG, |commands, w| {
        let world = w.expect_ref::<ServoWorld>()?;
        match commands {
            [] => Ok(w.clone()),
            _ => {
                let x = one_position(commands, "camera command")?;
                let mut next = world.clone();
                next.camera_position = x;
                Ok(next.into_value())
            }
        }
    })
}

/// `N1`: fixed-gain filter over the measured position. Its single policy
/// commands the camera to the filtered estimate; the prediction step takes
/// the context from above when there is one and the commanded action
/// otherwise.
pub fn filter_node(id: impl Into<NodeId>, gain: f64) -> CognitiveNodeSpec {
    let spaces = NodeValueSpaces {
        belief: POSITION_TAG.into(),
        action: POSITION_TAG.into(),
        task_param: COMMAND_TAG.into(),
        observation: POSITION_TAG.into(),
        context: POSITION_TAG.into(),
    };
    CognitiveNodeSpec::new(id, spaces, position(0.0))
        .with_single_policy("track", |b| Ok(vec![b.clone()]))
        .with_observation_update(move |obs, b| {
            let x = one_position(obs, "measurement")?;
            let y = *b.expect_ref::<f64>()?;
            Ok(position((1.0 - gain) * y + gain * x))
        })
        .with_prediction_update(|ctx, actions, _| match ctx {
            [] => Ok(position(one_position(actions, "action")?)),
            _ => Ok(position(one_position(ctx, "context value")?)),
        })
}

/// `N2`: takes the filtered position, keeps its velocity, and integrates
/// one step of constant acceleration.
pub fn physics_node(id: impl Into<NodeId>, k: f64, dt: f64) -> CognitiveNodeSpec {
    let spaces = NodeValueSpaces {
        belief: PHYSICS_TAG.into(),
        action: COMMAND_TAG.into(),
        task_param: COMMAND_TAG.into(),
        observation: POSITION_TAG.into(),
        context: PHYSICS_TAG.into(),
    };
    CognitiveNodeSpec::new(
        id,
        spaces,
        Value::new(PHYSICS_TAG, Physics { x: 0.0, v: 0.0 }),
    )
    .with_observation_update(|obs, b| {
        let x = one_position(obs, "position")?;
        let p = b.expect_ref::<Physics>()?;
        Ok(Value::new(PHYSICS_TAG, Physics { x, v: p.v }))
    })
    .with_prediction_update(move |_, _, b| {
        let p = b.expect_ref::<Physics>()?;
        Ok(Value::new(
            PHYSICS_TAG,
            Physics {
                x: p.x + p.v * dt + 0.5 * k * dt * dt,
                v: p.v + k * dt,
            },
        ))
    })
}

fn measure(w: &Value) -> OpResult<Vec<Value>> {
    Ok(vec![position(w.expect_ref::<ServoWorld>()?.measurement())])
}

fn pass_position(b: &Value) -> OpResult<Vec<Value>> {
    Ok(vec![position(*b.expect_ref::<f64>()?)])
}

fn predicted_position(b: &Value) -> OpResult<Vec<Value>> {
    Ok(vec![position(b.expect_ref::<Physics>()?.x)])
}

fn command(actions: &[Value]) -> OpResult<Vec<Value>> {
    Ok(actions.to_vec())
}

/// `N0 → N1 → N2`, with `N2`'s prediction passed down to `N1` as context in
/// [`Mode::Context`].
pub fn build_servo_hierarchy(params: &ServoParams) -> Hierarchy {
    let down = EdgeTriple::new("N1", "N2").with_sensing(pass_position);
    let down = match params.mode {
        Mode::Context => down.with_context(predicted_position),
        Mode::NoContext => down,
    };
    Hierarchy::new(servo_world("N0"))
        .with_node(filter_node("N1", params.kalman_gain))
        .with_node(physics_node("N2", params.k, params.dt))
        .with_edge(
            EdgeTriple::new("N0", "N1")
                .with_sensing(measure)
                .with_task_params(command),
        )
        .with_edge(down)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterParams {
    #[serde(default = "default_gain")]
    gain: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicsParams {
    #[serde(default = "default_k")]
    k: f64,
    #[serde(default = "default_dt")]
    dt: f64,
}

fn default_gain() -> f64 {
    ServoParams::default().kalman_gain
}

fn default_k() -> f64 {
    ServoParams::default().k
}

fn default_dt() -> f64 {
    ServoParams::default().dt
}

fn params_of<T: for<'de> Deserialize<'de>>(p: &Json) -> Result<T, String> {
    let p = if p.is_null() {
        Json::Object(Default::default())
    } else {
        p.clone()
    };
    serde_json::from_value(p).map_err(|e| e.to_string())
}

/// Makes the servo operators available to hierarchy documents: world
/// `servo.world`, nodes `servo.filter` (`gain`) and `servo.physics`
/// (`k`, `dt`), sensing `servo.measure` and `servo.position`, context
/// `servo.prediction`, task parameters `servo.command`.
pub fn register_servo(registry: &mut Registry) {
    registry.register_world("servo.world", |id, _| Ok(servo_world(id.clone())));
    registry.register_node("servo.filter", |id, p| {
        let FilterParams { gain } = params_of(p)?;
        if !(0.0..=1.0).contains(&gain) {
            return Err(format!("gain {gain} outside [0, 1]"));
        }
        Ok(filter_node(id.clone(), gain))
    });
    registry.register_node("servo.physics", |id, p| {
        let PhysicsParams { k, dt } = params_of(p)?;
        Ok(physics_node(id.clone(), k, dt))
    });
    registry.register_sensing("servo.measure", measure);
    registry.register_sensing("servo.position", pass_position);
    registry.register_context("servo.prediction", predicted_position);
    registry.register_task_param("servo.command", command);
}
