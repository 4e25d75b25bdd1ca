//! Generic cognitive-hierarchy model and process model.
//!
//! A [`Hierarchy`] is a set of [`CognitiveNodeSpec`]s over a world node,
//! linked by [`EdgeTriple`]s. Sensing edges point from lower to upper and
//! must form a DAG whose unique source is the world node; task parameters and
//! context travel the same edges in the opposite direction.
//!
//! [`init_active`] turns a valid hierarchy into an [`ActiveHierarchy`] and
//! [`process_update`] advances it one tick.

mod active;
pub mod document;
mod error;
mod hierarchy;
mod node;
mod process;
mod schedule;
mod validate;
mod value;

pub use active::{init_active, ActiveHierarchy, ActiveNode};
pub use error::{KernelError, Site, Stage};
pub use hierarchy::{ContextFn, EdgeTriple, Hierarchy, SensingFn, TaskParamFn};
pub use node::{
    ActuationFn, CognitiveNodeSpec, NodeId, NodeValueSpaces, ObservationUpdateFn, OpResult,
    OperatorError, PolicyFn, PolicyId, PredictionUpdateFn, SelectorFn, WorldSpec,
};
pub use process::{
    prediction_node_update, prediction_process_update, prediction_process_update_in_order,
    process_update, sensing_node_update, sensing_process_update, sensing_process_update_in_order,
    single,
};
pub use schedule::{linear_extensions, Topology};
pub use validate::{validate, ValidationReport, Violation};
pub use value::{Payload, Tag, Value, ValueSet};
