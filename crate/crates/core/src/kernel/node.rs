use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::value::{Tag, Value, ValueSet};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PolicyId(String);

impl PolicyId {
    pub fn new(id: impl Into<String>) -> Self {
        PolicyId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PolicyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PolicyId {
    fn from(s: &str) -> Self {
        PolicyId::new(s)
    }
}

/// Failure raised by a node operator or an edge function.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    /// A normalisation hit an all-zero vector (contradictory evidence).
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("domain error: {0}")]
    Domain(String),
    /// The payload did not have the expected Rust type.
    #[error("payload: {0}")]
    Payload(String),
}

pub type OpResult<T> = Result<T, OperatorError>;

/// belief → action set
pub type PolicyFn = Arc<dyn Fn(&Value) -> OpResult<ValueSet> + Send + Sync>;
/// task-parameter set → policy
pub type SelectorFn = Arc<dyn Fn(&[Value]) -> OpResult<PolicyId> + Send + Sync>;
/// (observations, belief) → belief
pub type ObservationUpdateFn = Arc<dyn Fn(&[Value], &Value) -> OpResult<Value> + Send + Sync>;
/// (context, actions, belief) → belief
pub type PredictionUpdateFn =
    Arc<dyn Fn(&[Value], &[Value], &Value) -> OpResult<Value> + Send + Sync>;
/// (task parameters, world state) → world state
pub type ActuationFn = Arc<dyn Fn(&[Value], &Value) -> OpResult<Value> + Send + Sync>;

/// The five value kinds of a node's language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeValueSpaces {
    pub belief: Tag,
    pub action: Tag,
    pub task_param: Tag,
    pub observation: Tag,
    pub context: Tag,
}

impl NodeValueSpaces {
    /// All five slots share one tag. Handy for toy nodes.
    pub fn uniform(tag: impl Into<Tag>) -> Self {
        let tag = tag.into();
        NodeValueSpaces {
            belief: tag.clone(),
            action: tag.clone(),
            task_param: tag.clone(),
            observation: tag.clone(),
            context: tag,
        }
    }
}

/// A cognitive node: language, policies, selector, the two update operators,
/// and initial belief/policy.
///
/// Built with [`CognitiveNodeSpec::new`] and the `with_*` methods. Unset
/// operators default to: one policy (the initial one) that returns no actions,
/// a selector that always returns the initial policy, and identity updates.
#[derive(Clone)]
pub struct CognitiveNodeSpec {
    pub(crate) id: NodeId,
    pub(crate) spaces: NodeValueSpaces,
    pub(crate) policies: BTreeMap<PolicyId, PolicyFn>,
    pub(crate) policy_selector: SelectorFn,
    pub(crate) observation_update: ObservationUpdateFn,
    pub(crate) prediction_update: PredictionUpdateFn,
    pub(crate) initial_belief: Value,
    pub(crate) initial_policy: PolicyId,
}

impl CognitiveNodeSpec {
    pub fn new(id: impl Into<NodeId>, spaces: NodeValueSpaces, initial_belief: Value) -> Self {
        let initial_policy = PolicyId::new("default");
        let selected = initial_policy.clone();
        let mut policies: BTreeMap<PolicyId, PolicyFn> = BTreeMap::new();
        policies.insert(initial_policy.clone(), Arc::new(|_| Ok(Vec::new())));
        CognitiveNodeSpec {
            id: id.into(),
            spaces,
            policies,
            policy_selector: Arc::new(move |_| Ok(selected.clone())),
            observation_update: Arc::new(|_, s| Ok(s.clone())),
            prediction_update: Arc::new(|_, _, s| Ok(s.clone())),
            initial_belief,
            initial_policy,
        }
    }

    /// Replaces the policy set with a single policy, which becomes initial,
    /// and resets the selector to always pick it.
    pub fn with_single_policy<F>(mut self, id: impl Into<PolicyId>, policy: F) -> Self
    where
        F: Fn(&Value) -> OpResult<ValueSet> + Send + Sync + 'static,
    {
        let id = id.into();
        self.policies.clear();
        self.policies.insert(id.clone(), Arc::new(policy));
        self.initial_policy = id.clone();
        self.policy_selector = Arc::new(move |_| Ok(id.clone()));
        self
    }

    pub fn with_policy<F>(mut self, id: impl Into<PolicyId>, policy: F) -> Self
    where
        F: Fn(&Value) -> OpResult<ValueSet> + Send + Sync + 'static,
    {
        self.policies.insert(id.into(), Arc::new(policy));
        self
    }

    pub fn with_initial_policy(mut self, id: impl Into<PolicyId>) -> Self {
        self.initial_policy = id.into();
        self
    }

    pub fn with_selector<F>(mut self, selector: F) -> Self
    where
        F: Fn(&[Value]) -> OpResult<PolicyId> + Send + Sync + 'static,
    {
        self.policy_selector = Arc::new(selector);
        self
    }

    pub fn with_observation_update<F>(mut self, update: F) -> Self
    where
        F: Fn(&[Value], &Value) -> OpResult<Value> + Send + Sync + 'static,
    {
        self.observation_update = Arc::new(update);
        self
    }

    pub fn with_prediction_update<F>(mut self, update: F) -> Self
    where
        F: Fn(&[Value], &[Value], &Value) -> OpResult<Value> + Send + Sync + 'static,
    {
        self.prediction_update = Arc::new(update);
        self
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }

    pub fn spaces(&self) -> &NodeValueSpaces {
        &self.spaces
    }

    pub fn initial_belief(&self) -> &Value {
        &self.initial_belief
    }

    pub fn initial_policy(&self) -> &PolicyId {
        &self.initial_policy
    }

    pub fn policy_ids(&self) -> impl Iterator<Item = &PolicyId> {
        self.policies.keys()
    }
}

impl fmt::Debug for CognitiveNodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CognitiveNodeSpec")
            .field("id", &self.id)
            .field("spaces", &self.spaces)
            .field("policies", &self.policies.keys().collect::<Vec<_>>())
            .field("initial_policy", &self.initial_policy)
            .field("initial_belief", &self.initial_belief)
            .finish_non_exhaustive()
    }
}

/// The distinguished world node N₀. Its internals are opaque: the kernel only
/// hands task parameters to `actuate` and world state to sensing functions.
#[derive(Clone)]
pub struct WorldSpec {
    pub(crate) id: NodeId,
    pub(crate) state_tag: Tag,
    pub(crate) task_param_tag: Tag,
    pub(crate) actuate: ActuationFn,
}

impl WorldSpec {
    /// A world that ignores all task parameters.
    pub fn inert(id: impl Into<NodeId>, state_tag: impl Into<Tag>) -> Self {
        let state_tag = state_tag.into();
        WorldSpec {
            id: id.into(),
            task_param_tag: state_tag.clone(),
            state_tag,
            actuate: Arc::new(|_, w| Ok(w.clone())),
        }
    }

    pub fn with_actuation<F>(mut self, task_param_tag: impl Into<Tag>, actuate: F) -> Self
    where
        F: Fn(&[Value], &Value) -> OpResult<Value> + Send + Sync + 'static,
    {
        self.task_param_tag = task_param_tag.into();
        self.actuate = Arc::new(actuate);
        self
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }

    pub fn state_tag(&self) -> &Tag {
        &self.state_tag
    }
}

impl fmt::Debug for WorldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WorldSpec")
            .field("id", &self.id)
            .field("state_tag", &self.state_tag)
            .field("task_param_tag", &self.task_param_tag)
            .finish_non_exhaustive()
    }
}
