use std::collections::BTreeMap;
use std::sync::Arc;

use super::error::{KernelError, Site, Stage};
use super::hierarchy::Hierarchy;
use super::node::{CognitiveNodeSpec, NodeId, PolicyId};
use super::schedule::Topology;
use super::validate::validate;
use super::value::{Value, ValueSet};

/// Dynamic state of one node: belief, current policy and current actions.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveNode {
    pub node: NodeId,
    pub belief: Value,
    pub policy: PolicyId,
    pub actions: ValueSet,
}

/// A hierarchy together with the state of every node and of the world.
///
/// Values are immutable snapshots; every update returns a new
/// `ActiveHierarchy` and leaves its input untouched. Equality compares the
/// dynamic state only (node states and world state).
#[derive(Debug, Clone)]
pub struct ActiveHierarchy {
    pub(crate) hierarchy: Arc<Hierarchy>,
    pub(crate) topology: Arc<Topology>,
    pub(crate) nodes: BTreeMap<NodeId, ActiveNode>,
    pub(crate) world_state: Value,
}

impl PartialEq for ActiveHierarchy {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.world_state == other.world_state
    }
}

impl ActiveHierarchy {
    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hierarchy
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn node(&self, id: &NodeId) -> Option<&ActiveNode> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ActiveNode> {
        self.nodes.values()
    }

    pub fn belief(&self, id: &NodeId) -> Option<&Value> {
        self.nodes.get(id).map(|n| &n.belief)
    }

    pub fn world_state(&self) -> &Value {
        &self.world_state
    }

    /// Replaces the world state between ticks (the environment moving on
    /// its own). The tag must match the world node's state tag.
    pub fn with_world_state(&self, world_state: Value) -> Result<Self, KernelError> {
        let world = self.hierarchy.world();
        check_tag(
            &world_state,
            &world.state_tag,
            Site::node(&world.id, Stage::Actuation),
        )?;
        let mut next = self.clone();
        next.world_state = world_state;
        Ok(next)
    }

    pub(crate) fn spec_in<'h>(
        &self,
        hierarchy: &'h Hierarchy,
        id: &NodeId,
    ) -> Result<&'h CognitiveNodeSpec, KernelError> {
        self.topology
            .node_index
            .get(id)
            .map(|&i| &hierarchy.nodes[i])
            .ok_or_else(|| KernelError::UnknownNode(id.clone()))
    }

    /// Belief of any node; the world node's belief is the world state.
    pub(crate) fn state_of(&self, id: &NodeId) -> &Value {
        if id == &self.topology.world {
            &self.world_state
        } else {
            &self.nodes[id].belief
        }
    }
}

pub(crate) fn check_tag(
    value: &Value,
    expected: &super::value::Tag,
    site: Site,
) -> Result<(), KernelError> {
    if value.tag() == expected {
        Ok(())
    } else {
        Err(KernelError::TagMismatch {
            site,
            expected: expected.clone(),
            found: value.tag().clone(),
        })
    }
}

/// Builds the initial active hierarchy: every node at its initial belief and
/// policy with no actions. Rejects hierarchies that fail validation.
pub fn init_active(
    hierarchy: impl Into<Arc<Hierarchy>>,
    world_state: Value,
) -> Result<ActiveHierarchy, KernelError> {
    let hierarchy = hierarchy.into();
    let report = validate(&hierarchy);
    if !report.is_valid() {
        return Err(KernelError::InvalidHierarchy(report));
    }
    let world = hierarchy.world();
    check_tag(
        &world_state,
        &world.state_tag,
        Site::node(&world.id, Stage::Initialisation),
    )?;

    let mut nodes = BTreeMap::new();
    for spec in &hierarchy.nodes {
        check_tag(
            &spec.initial_belief,
            &spec.spaces.belief,
            Site::node(&spec.id, Stage::Initialisation),
        )?;
        nodes.insert(
            spec.id.clone(),
            ActiveNode {
                node: spec.id.clone(),
                belief: spec.initial_belief.clone(),
                policy: spec.initial_policy.clone(),
                actions: Vec::new(),
            },
        );
    }
    let topology = Arc::new(Topology::new(&hierarchy));
    Ok(ActiveHierarchy {
        hierarchy,
        topology,
        nodes,
        world_state,
    })
}
