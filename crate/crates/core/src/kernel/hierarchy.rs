use std::fmt;
use std::sync::Arc;

use super::node::{CognitiveNodeSpec, NodeId, OpResult, WorldSpec};
use super::value::{Value, ValueSet};

/// lower belief → observations for upper
pub type SensingFn = Arc<dyn Fn(&Value) -> OpResult<ValueSet> + Send + Sync>;
/// upper actions → task parameters for lower
pub type TaskParamFn = Arc<dyn Fn(&[Value]) -> OpResult<ValueSet> + Send + Sync>;
/// upper belief → context for lower
pub type ContextFn = Arc<dyn Fn(&Value) -> OpResult<ValueSet> + Send + Sync>;

/// Sensing, task-parameter and context functions linking `lower` to `upper`.
/// All three default to the empty-set function.
#[derive(Clone)]
pub struct EdgeTriple {
    pub(crate) lower: NodeId,
    pub(crate) upper: NodeId,
    pub(crate) sensing: SensingFn,
    pub(crate) task_param: TaskParamFn,
    pub(crate) context: ContextFn,
}

impl EdgeTriple {
    pub fn new(lower: impl Into<NodeId>, upper: impl Into<NodeId>) -> Self {
        EdgeTriple {
            lower: lower.into(),
            upper: upper.into(),
            sensing: Arc::new(|_| Ok(Vec::new())),
            task_param: Arc::new(|_| Ok(Vec::new())),
            context: Arc::new(|_| Ok(Vec::new())),
        }
    }

    pub fn with_sensing<F>(mut self, f: F) -> Self
    where
        F: Fn(&Value) -> OpResult<ValueSet> + Send + Sync + 'static,
    {
        self.sensing = Arc::new(f);
        self
    }

    pub fn with_task_params<F>(mut self, f: F) -> Self
    where
        F: Fn(&[Value]) -> OpResult<ValueSet> + Send + Sync + 'static,
    {
        self.task_param = Arc::new(f);
        self
    }

    pub fn with_context<F>(mut self, f: F) -> Self
    where
        F: Fn(&Value) -> OpResult<ValueSet> + Send + Sync + 'static,
    {
        self.context = Arc::new(f);
        self
    }

    pub(crate) fn with_shared(
        mut self,
        sensing: Option<SensingFn>,
        task_param: Option<TaskParamFn>,
        context: Option<ContextFn>,
    ) -> Self {
        if let Some(f) = sensing {
            self.sensing = f;
        }
        if let Some(f) = task_param {
            self.task_param = f;
        }
        if let Some(f) = context {
            self.context = f;
        }
        self
    }

    pub fn lower(&self) -> &NodeId {
        &self.lower
    }

    pub fn upper(&self) -> &NodeId {
        &self.upper
    }
}

impl fmt::Debug for EdgeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeTriple({} -> {})", self.lower, self.upper)
    }
}

/// Nodes, the world node and the function triples between them.
///
/// Construction never fails; structural problems are reported by
/// [`validate`](super::validate) and rejected by
/// [`init_active`](super::init_active).
#[derive(Clone, Debug)]
pub struct Hierarchy {
    pub(crate) world: WorldSpec,
    pub(crate) nodes: Vec<CognitiveNodeSpec>,
    pub(crate) edges: Vec<EdgeTriple>,
}

impl Hierarchy {
    pub fn new(world: WorldSpec) -> Self {
        Hierarchy {
            world,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn with_node(mut self, node: CognitiveNodeSpec) -> Self {
        self.add_node(node);
        self
    }

    pub fn with_edge(mut self, edge: EdgeTriple) -> Self {
        self.add_edge(edge);
        self
    }

    pub fn add_node(&mut self, node: CognitiveNodeSpec) {
        self.nodes.push(node);
    }

    pub fn add_edge(&mut self, edge: EdgeTriple) {
        self.edges.push(edge);
    }

    pub fn world(&self) -> &WorldSpec {
        &self.world
    }

    pub fn world_id(&self) -> &NodeId {
        &self.world.id
    }

    pub fn nodes(&self) -> &[CognitiveNodeSpec] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeTriple] {
        &self.edges
    }

    pub fn node(&self, id: &NodeId) -> Option<&CognitiveNodeSpec> {
        self.nodes.iter().find(|n| &n.id == id)
    }

    /// Sensing-graph edges as (lower, upper) pairs, in declaration order.
    pub fn sensing_edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> {
        self.edges.iter().map(|e| (&e.lower, &e.upper))
    }
}
