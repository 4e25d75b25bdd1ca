//! Causal tree → cognitive hierarchy.
//!
//! Every processor with `m` children becomes a node whose belief is
//! `⟨⟨d_E, d_1, …, d_m⟩, c⟩`. Observations are tuples of the same shape;
//! the observation update sums them, so each sender fills exactly one slot
//! and zeroes the rest. The world node carries the external evidence of
//! every processor and injects it into slot `d_E`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::propagate::{hadamard_into, normalize};
use super::tree::{CausalTree, Matrix};
use crate::kernel::{
    CognitiveNodeSpec, EdgeTriple, Hierarchy, NodeId, NodeValueSpaces, OpResult, OperatorError,
    Value, WorldSpec,
};

pub const STATE_TAG: &str = "bp.state";
pub const OBSERVATION_TAG: &str = "bp.diagnostic";
pub const CONTEXT_TAG: &str = "bp.causal";
pub const ACTION_TAG: &str = "bp.action";
pub const TASK_TAG: &str = "bp.task";
pub const EVIDENCE_TAG: &str = "bp.evidence";

/// Belief of an encoded node.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportState {
    /// `[d_E, d_1, …, d_m]`
    pub diagnostic: Vec<Vec<f64>>,
    /// causal support `c`
    pub causal: Vec<f64>,
}

/// An observation tuple `⟨d_E, d_1, …, d_m⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticTuple(pub Vec<Vec<f64>>);

/// World state of an encoded tree: external input per processor.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence(pub BTreeMap<NodeId, Vec<f64>>);

impl Evidence {
    pub fn from_tree(tree: &CausalTree) -> Self {
        Evidence(
            tree.processors()
                .map(|p| (p.id.clone(), p.external_input.clone()))
                .collect(),
        )
    }

    pub fn into_value(self) -> Value {
        Value::new(EVIDENCE_TAG, self)
    }
}

fn alpha(v: Vec<f64>, what: &str) -> OpResult<Vec<f64>> {
    normalize(&v).ok_or_else(|| OperatorError::Degenerate(format!("{what} is all zero")))
}

/// Normalized `∏ d_j · c`, all diagnostic slots included.
pub fn node_belief(state: &SupportState) -> OpResult<Vec<f64>> {
    let mut b = state.causal.clone();
    for d in &state.diagnostic {
        if d.len() != b.len() {
            return Err(OperatorError::Domain(
                "support vectors differ in length".into(),
            ));
        }
        hadamard_into(&mut b, d);
    }
    alpha(b, "belief product")
}

/// [`node_belief`] on a kernel value.
pub fn node_belief_of(value: &Value) -> OpResult<Vec<f64>> {
    node_belief(value.expect_ref::<SupportState>()?)
}

fn tuple_with(slots: usize, n: usize, slot: usize, v: Vec<f64>) -> Value {
    let mut t = vec![vec![0.0; n]; slots];
    t[slot] = v;
    Value::new(OBSERVATION_TAG, DiagnosticTuple(t))
}

fn node_for(
    id: &NodeId,
    n: usize,
    children: usize,
    causal: Vec<f64>,
    diagnostic: Vec<f64>,
) -> CognitiveNodeSpec {
    let spaces = NodeValueSpaces {
        belief: STATE_TAG.into(),
        action: ACTION_TAG.into(),
        task_param: TASK_TAG.into(),
        observation: OBSERVATION_TAG.into(),
        context: CONTEXT_TAG.into(),
    };
    let slots = children + 1;
    let initial = SupportState {
        diagnostic: vec![diagnostic; slots],
        causal,
    };
    CognitiveNodeSpec::new(id.clone(), spaces, Value::new(STATE_TAG, initial))
        .with_observation_update(move |obs, s| {
            let state = s.expect_ref::<SupportState>()?;
            // one tuple from the world plus one per child, every tick
            if obs.len() != slots {
                return Err(OperatorError::Domain(format!(
                    "expected {slots} observation tuples, got {}",
                    obs.len()
                )));
            }
            let mut sum = vec![vec![0.0; n]; slots];
            for o in obs {
                let DiagnosticTuple(t) = o.expect_ref::<DiagnosticTuple>()?;
                if t.len() != slots || t.iter().any(|d| d.len() != n) {
                    return Err(OperatorError::Domain(
                        "observation tuple has the wrong shape".into(),
                    ));
                }
                for (acc, d) in sum.iter_mut().zip(t) {
                    for (a, x) in acc.iter_mut().zip(d) {
                        *a += x;
                    }
                }
            }
            Ok(Value::new(
                STATE_TAG,
                SupportState {
                    diagnostic: sum,
                    causal: state.causal.clone(),
                },
            ))
        })
        .with_prediction_update(move |ctx, _actions, s| match ctx {
            [] => Ok(s.clone()),
            [c] => {
                let state = s.expect_ref::<SupportState>()?;
                let c = c.expect_ref::<Vec<f64>>()?;
                if c.len() != n {
                    return Err(OperatorError::Domain("context has the wrong length".into()));
                }
                Ok(Value::new(
                    STATE_TAG,
                    SupportState {
                        diagnostic: state.diagnostic.clone(),
                        causal: c.clone(),
                    },
                ))
            }
            _ => Err(OperatorError::Domain(format!(
                "expected at most one context value, got {}",
                ctx.len()
            ))),
        })
}

/// Builds the hierarchy for `tree`. Node ids equal processor ids; the world
/// node is `world`. Pair it with [`Evidence::from_tree`] as world state.
pub fn encode(tree: &CausalTree, world: &NodeId) -> Hierarchy {
    let mut h = Hierarchy::new(WorldSpec::inert(world.clone(), EVIDENCE_TAG));

    for p in tree.processors() {
        let uniform = vec![1.0 / p.n as f64; p.n];
        h.add_node(node_for(
            &p.id,
            p.n,
            p.children.len(),
            p.causal.clone(),
            uniform,
        ));
    }

    for p in tree.processors() {
        let (id, n, slots) = (p.id.clone(), p.n, p.children.len() + 1);
        h.add_edge(
            EdgeTriple::new(world.clone(), p.id.clone()).with_sensing(move |w| {
                let Evidence(map) = w.expect_ref::<Evidence>()?;
                let d_e = map
                    .get(&id)
                    .ok_or_else(|| OperatorError::Domain(format!("no evidence for `{id}`")))?;
                if d_e.len() != n {
                    return Err(OperatorError::Domain(format!(
                        "evidence for `{id}` has the wrong length"
                    )));
                }
                Ok(vec![tuple_with(slots, n, 0, d_e.clone())])
            }),
        );
    }

    for p in tree.processors() {
        let parent_slots = p.children.len() + 1;
        for (k, child_id) in p.children.iter().enumerate() {
            let child = tree.processor(child_id).expect("tree child");
            let m: Arc<Matrix> = Arc::new(child.matrix.clone().expect("non-root has matrix"));
            let slot = k + 1;
            let parent_n = p.n;
            let m_up = Arc::clone(&m);
            let edge = EdgeTriple::new(child_id.clone(), p.id.clone())
                .with_sensing(move |s| {
                    let state = s.expect_ref::<SupportState>()?;
                    let mut prod = vec![1.0; m_up.cols()];
                    for d in &state.diagnostic {
                        hadamard_into(&mut prod, d);
                    }
                    let d_k = alpha(m_up.apply(&prod), "diagnostic message")?;
                    Ok(vec![tuple_with(parent_slots, parent_n, slot, d_k)])
                })
                .with_context(move |s| {
                    let state = s.expect_ref::<SupportState>()?;
                    let mut v = state.causal.clone();
                    for (h, d) in state.diagnostic.iter().enumerate() {
                        if h != slot {
                            hadamard_into(&mut v, d);
                        }
                    }
                    let c = alpha(m.apply_left(&alpha(v, "causal message")?), "causal support")?;
                    Ok(vec![Value::new(CONTEXT_TAG, c)])
                });
            h.add_edge(edge);
        }
    }
    h
}
