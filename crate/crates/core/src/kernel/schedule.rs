//! Update orders for the two sweeps.
//!
//! The sensing sweep visits non-world nodes in an order compatible with the
//! sensing graph (lowers first). The prediction sweep visits every node,
//! world node included, in an order compatible with the prediction graph
//! (uppers first); the world node, being the unique sink, always comes last.

use std::collections::{BTreeMap, BTreeSet};

use super::hierarchy::Hierarchy;
use super::node::NodeId;

/// Precomputed adjacency for a validated hierarchy.
#[derive(Debug, Clone)]
pub struct Topology {
    pub(crate) world: NodeId,
    /// node id → index into `Hierarchy::nodes`
    pub(crate) node_index: BTreeMap<NodeId, usize>,
    /// node → indices of edges where it is the upper end (its sensing inputs)
    pub(crate) lowers_of: BTreeMap<NodeId, Vec<usize>>,
    /// node → indices of edges where it is the lower end (its prediction inputs)
    pub(crate) uppers_of: BTreeMap<NodeId, Vec<usize>>,
    sensing_order: Vec<NodeId>,
    prediction_order: Vec<NodeId>,
    /// (before, after) constraints of the sensing sweep, world edges excluded
    sensing_constraints: Vec<(NodeId, NodeId)>,
    prediction_constraints: Vec<(NodeId, NodeId)>,
}

impl Topology {
    /// Assumes `hierarchy` passed validation.
    pub(crate) fn new(hierarchy: &Hierarchy) -> Self {
        let world = hierarchy.world_id().clone();
        let node_index: BTreeMap<NodeId, usize> = hierarchy
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();
        let all = std::iter::once(world.clone()).chain(node_index.keys().cloned());
        let mut lowers_of: BTreeMap<NodeId, Vec<usize>> =
            all.clone().map(|n| (n, vec![])).collect();
        let mut uppers_of: BTreeMap<NodeId, Vec<usize>> = all.map(|n| (n, vec![])).collect();
        let mut sensing_constraints = Vec::new();
        let mut prediction_constraints = Vec::new();
        for (i, e) in hierarchy.edges.iter().enumerate() {
            lowers_of.get_mut(&e.upper).expect("validated").push(i);
            uppers_of.get_mut(&e.lower).expect("validated").push(i);
            if e.lower != world {
                sensing_constraints.push((e.lower.clone(), e.upper.clone()));
            }
            prediction_constraints.push((e.upper.clone(), e.lower.clone()));
        }

        let cognitive: Vec<NodeId> = node_index.keys().cloned().collect();
        let mut everything = cognitive.clone();
        everything.push(world.clone());
        let sensing_order = kahn(&cognitive, &sensing_constraints);
        let prediction_order = kahn(&everything, &prediction_constraints);

        Topology {
            world,
            node_index,
            lowers_of,
            uppers_of,
            sensing_order,
            prediction_order,
            sensing_constraints,
            prediction_constraints,
        }
    }

    pub fn world(&self) -> &NodeId {
        &self.world
    }

    /// The default sensing order: lexicographically smallest ready node first.
    pub fn sensing_order(&self) -> &[NodeId] {
        &self.sensing_order
    }

    /// The default prediction order, ending with the world node.
    pub fn prediction_order(&self) -> &[NodeId] {
        &self.prediction_order
    }

    pub fn check_sensing_order(&self, order: &[NodeId]) -> Result<(), String> {
        check_order(&self.sensing_order, &self.sensing_constraints, order)
    }

    pub fn check_prediction_order(&self, order: &[NodeId]) -> Result<(), String> {
        check_order(&self.prediction_order, &self.prediction_constraints, order)
    }

    /// Every valid sensing order. Exponential; meant for small fixtures.
    pub fn all_sensing_orders(&self) -> Vec<Vec<NodeId>> {
        linear_extensions(&self.sensing_order, &self.sensing_constraints)
    }

    /// Every valid prediction order. Exponential; meant for small fixtures.
    pub fn all_prediction_orders(&self) -> Vec<Vec<NodeId>> {
        linear_extensions(&self.prediction_order, &self.prediction_constraints)
    }
}

fn kahn(nodes: &[NodeId], constraints: &[(NodeId, NodeId)]) -> Vec<NodeId> {
    let mut indeg: BTreeMap<&NodeId, usize> = nodes.iter().map(|n| (n, 0)).collect();
    let mut succ: BTreeMap<&NodeId, Vec<&NodeId>> = BTreeMap::new();
    for (a, b) in constraints {
        *indeg.get_mut(b).expect("constraint endpoint") += 1;
        succ.entry(a).or_default().push(b);
    }
    let mut ready: BTreeSet<&NodeId> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    let mut out = Vec::with_capacity(nodes.len());
    while let Some(n) = ready.pop_first() {
        out.push(n.clone());
        for m in succ.get(n).into_iter().flatten() {
            let d = indeg.get_mut(m).expect("known");
            *d -= 1;
            if *d == 0 {
                ready.insert(m);
            }
        }
    }
    debug_assert_eq!(out.len(), nodes.len(), "constraints must be acyclic");
    out
}

fn check_order(
    expected: &[NodeId],
    constraints: &[(NodeId, NodeId)],
    order: &[NodeId],
) -> Result<(), String> {
    let want: BTreeSet<&NodeId> = expected.iter().collect();
    let mut pos: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for (i, n) in order.iter().enumerate() {
        if !want.contains(n) {
            return Err(format!("`{n}` does not belong in this sweep"));
        }
        if pos.insert(n, i).is_some() {
            return Err(format!("`{n}` appears twice"));
        }
    }
    if let Some(missing) = want.iter().find(|n| !pos.contains_key(*n)) {
        return Err(format!("`{missing}` is missing"));
    }
    for (a, b) in constraints {
        if pos[a] > pos[b] {
            return Err(format!("`{a}` must come before `{b}`"));
        }
    }
    Ok(())
}

/// All orderings of `nodes` that respect every `(before, after)` pair.
pub fn linear_extensions(nodes: &[NodeId], constraints: &[(NodeId, NodeId)]) -> Vec<Vec<NodeId>> {
    let idx: BTreeMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut preds = vec![Vec::new(); nodes.len()];
    for (a, b) in constraints {
        preds[idx[b]].push(idx[a]);
    }

    fn go(
        nodes: &[NodeId],
        preds: &[Vec<usize>],
        placed: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if cur.len() == nodes.len() {
            out.push(cur.iter().map(|&i| nodes[i].clone()).collect());
            return;
        }
        for i in 0..nodes.len() {
            if placed[i] || preds[i].iter().any(|&p| !placed[p]) {
                continue;
            }
            placed[i] = true;
            cur.push(i);
            go(nodes, preds, placed, cur, out);
            cur.pop();
            placed[i] = false;
        }
    }

    let mut out = Vec::new();
    go(
        nodes,
        &preds,
        &mut vec![false; nodes.len()],
        &mut Vec::new(),
        &mut out,
    );
    out
}
