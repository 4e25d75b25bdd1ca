//! Pearl causal trees and their embedding as cognitive hierarchies.

mod encode;
mod equivalence;
pub mod fixtures;
mod propagate;
pub mod random;
mod tree;

pub use encode::{
    encode, node_belief, node_belief_of, DiagnosticTuple, Evidence, SupportState, CONTEXT_TAG,
    EVIDENCE_TAG, OBSERVATION_TAG, STATE_TAG,
};
pub use equivalence::{
    equivalence_check, hierarchy_beliefs, initial_active, world_id_for, EquivalenceReport, Outcome,
    FIXPOINT_TOL,
};
pub use propagate::{bp_propagate, normalize, BeliefTable};
pub use tree::{
    CausalTree, Matrix, Processor, ProcessorSpec, TreeDocument, TreeError, STOCHASTIC_TOL,
};
