//! The process model: a sensing sweep up the hierarchy followed by a
//! prediction sweep down it.
//!
//! Every public function takes the hierarchy by reference and returns a new
//! one, so a failing tick leaves the caller's state exactly as it was.
//! Within a sweep each node reads its neighbours' current values, including
//! those already updated earlier in the same sweep.

use std::sync::Arc;

use super::active::{check_tag, ActiveHierarchy};
use super::error::{KernelError, Site, Stage};
use super::node::NodeId;
use super::value::{Value, ValueSet};

fn op_err(site: Site) -> impl FnOnce(super::node::OperatorError) -> KernelError {
    move |source| KernelError::Operator { site, source }
}

impl ActiveHierarchy {
    fn sense_in_place(&mut self, id: &NodeId) -> Result<(), KernelError> {
        if id == &self.topology.world {
            return Err(KernelError::WorldSensing(id.clone()));
        }
        let (hierarchy, topology) = (Arc::clone(&self.hierarchy), Arc::clone(&self.topology));
        let spec = self.spec_in(&hierarchy, id)?;
        let mut observations: ValueSet = Vec::new();
        for &ei in &topology.lowers_of[id] {
            let edge = &hierarchy.edges[ei];
            let site = || Site::edge(id, &edge.lower, &edge.upper, Stage::Sensing);
            let out = (edge.sensing)(self.state_of(&edge.lower)).map_err(op_err(site()))?;
            for v in &out {
                check_tag(v, &spec.spaces.observation, site())?;
            }
            observations.extend(out);
        }
        let current = &self.nodes[id].belief;
        let site = Site::node(id, Stage::ObservationUpdate);
        let belief =
            (spec.observation_update)(&observations, current).map_err(op_err(site.clone()))?;
        check_tag(&belief, &spec.spaces.belief, site)?;
        self.nodes.get_mut(id).expect("known node").belief = belief;
        Ok(())
    }

    fn predict_in_place(&mut self, id: &NodeId) -> Result<(), KernelError> {
        if id == &self.topology.world {
            return self.actuate_in_place();
        }
        let (hierarchy, topology) = (Arc::clone(&self.hierarchy), Arc::clone(&self.topology));
        let spec = self.spec_in(&hierarchy, id)?;
        let state = &self.nodes[id];
        let uppers = &topology.uppers_of[id];

        let (policy_id, context) = if uppers.is_empty() {
            (state.policy.clone(), Vec::new())
        } else {
            let mut task_params: ValueSet = Vec::new();
            let mut context: ValueSet = Vec::new();
            for &ei in uppers {
                let edge = &hierarchy.edges[ei];
                let upper = &self.nodes[&edge.upper];
                let site = |stage| Site::edge(id, &edge.lower, &edge.upper, stage);
                let t =
                    (edge.task_param)(&upper.actions).map_err(op_err(site(Stage::TaskParams)))?;
                for v in &t {
                    check_tag(v, &spec.spaces.task_param, site(Stage::TaskParams))?;
                }
                task_params.extend(t);
                let c = (edge.context)(&upper.belief).map_err(op_err(site(Stage::Context)))?;
                for v in &c {
                    check_tag(v, &spec.spaces.context, site(Stage::Context))?;
                }
                context.extend(c);
            }
            let selected = (spec.policy_selector)(&task_params)
                .map_err(op_err(Site::node(id, Stage::PolicySelection)))?;
            (selected, context)
        };

        let policy = spec
            .policies
            .get(&policy_id)
            .ok_or_else(|| KernelError::UnknownPolicy {
                node: id.clone(),
                policy: policy_id.clone(),
            })?;
        let actions = policy(&state.belief).map_err(op_err(Site::node(id, Stage::Policy)))?;
        for a in &actions {
            check_tag(a, &spec.spaces.action, Site::node(id, Stage::Policy))?;
        }
        let site = Site::node(id, Stage::PredictionUpdate);
        let belief = (spec.prediction_update)(&context, &actions, &state.belief)
            .map_err(op_err(site.clone()))?;
        check_tag(&belief, &spec.spaces.belief, site)?;

        let node = self.nodes.get_mut(id).expect("known node");
        node.belief = belief;
        node.policy = policy_id;
        node.actions = actions;
        Ok(())
    }

    /// The world node's prediction update: collect task parameters from the
    /// nodes above it and hand them to the actuation function.
    fn actuate_in_place(&mut self) -> Result<(), KernelError> {
        let hierarchy = Arc::clone(&self.hierarchy);
        let world = hierarchy.world();
        let mut task_params: ValueSet = Vec::new();
        for &ei in &self.topology.uppers_of[&world.id] {
            let edge = &hierarchy.edges[ei];
            let site = || Site::edge(&world.id, &edge.lower, &edge.upper, Stage::TaskParams);
            let t = (edge.task_param)(&self.nodes[&edge.upper].actions).map_err(op_err(site()))?;
            for v in &t {
                check_tag(v, &world.task_param_tag, site())?;
            }
            task_params.extend(t);
        }
        let site = Site::node(&world.id, Stage::Actuation);
        let next =
            (world.actuate)(&task_params, &self.world_state).map_err(op_err(site.clone()))?;
        check_tag(&next, &world.state_tag, site)?;
        self.world_state = next;
        Ok(())
    }

    fn sensing_sweep(&mut self, order: &[NodeId]) -> Result<(), KernelError> {
        order.iter().try_for_each(|n| self.sense_in_place(n))
    }

    fn prediction_sweep(&mut self, order: &[NodeId]) -> Result<(), KernelError> {
        order.iter().try_for_each(|n| self.predict_in_place(n))
    }

    /// One full tick; shorthand for [`process_update`].
    pub fn tick(&self) -> Result<ActiveHierarchy, KernelError> {
        process_update(self)
    }
}

/// Folds the observations from every incoming sensing edge into `node`'s
/// belief. Only that node changes.
pub fn sensing_node_update(
    ah: &ActiveHierarchy,
    node: &NodeId,
) -> Result<ActiveHierarchy, KernelError> {
    let mut next = ah.clone();
    next.sense_in_place(node)?;
    Ok(next)
}

/// Prediction update of a single node: select a policy from the uppers'
/// task parameters (or keep the current one at the top), fire it on the
/// current belief, then fold in context and actions. For the world node this
/// only actuates.
pub fn prediction_node_update(
    ah: &ActiveHierarchy,
    node: &NodeId,
) -> Result<ActiveHierarchy, KernelError> {
    let mut next = ah.clone();
    next.predict_in_place(node)?;
    Ok(next)
}

pub fn sensing_process_update(ah: &ActiveHierarchy) -> Result<ActiveHierarchy, KernelError> {
    let topology = ah.topology.clone();
    let mut next = ah.clone();
    next.sensing_sweep(topology.sensing_order())?;
    Ok(next)
}

/// Sensing sweep in a caller-chosen order, which must respect the sensing
/// graph.
pub fn sensing_process_update_in_order(
    ah: &ActiveHierarchy,
    order: &[NodeId],
) -> Result<ActiveHierarchy, KernelError> {
    ah.topology
        .check_sensing_order(order)
        .map_err(|reason| KernelError::InvalidOrder {
            sweep: "sensing",
            reason,
        })?;
    let mut next = ah.clone();
    next.sensing_sweep(order)?;
    Ok(next)
}

pub fn prediction_process_update(ah: &ActiveHierarchy) -> Result<ActiveHierarchy, KernelError> {
    let topology = ah.topology.clone();
    let mut next = ah.clone();
    next.prediction_sweep(topology.prediction_order())?;
    Ok(next)
}

pub fn prediction_process_update_in_order(
    ah: &ActiveHierarchy,
    order: &[NodeId],
) -> Result<ActiveHierarchy, KernelError> {
    ah.topology
        .check_prediction_order(order)
        .map_err(|reason| KernelError::InvalidOrder {
            sweep: "prediction",
            reason,
        })?;
    let mut next = ah.clone();
    next.prediction_sweep(order)?;
    Ok(next)
}

/// One tick: sensing sweep, then prediction sweep. All or nothing.
pub fn process_update(ah: &ActiveHierarchy) -> Result<ActiveHierarchy, KernelError> {
    let topology = ah.topology.clone();
    let mut next = ah.clone();
    next.sensing_sweep(topology.sensing_order())?;
    next.prediction_sweep(topology.prediction_order())?;
    Ok(next)
}

/// Helper for operators: the single value in a set, if there is exactly one.
pub fn single(values: &[Value]) -> Option<&Value> {
    match values {
        [v] => Some(v),
        _ => None,
    }
}
