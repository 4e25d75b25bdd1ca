use std::fmt;

use thiserror::Error;

use super::node::{NodeId, OperatorError, PolicyId};
use super::validate::ValidationReport;
use super::value::Tag;

/// Which step of a node update was running.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Sensing,
    ObservationUpdate,
    TaskParams,
    PolicySelection,
    Policy,
    Context,
    PredictionUpdate,
    Actuation,
    Initialisation,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Sensing => "sensing function",
            Stage::ObservationUpdate => "observation update",
            Stage::TaskParams => "task-parameter function",
            Stage::PolicySelection => "policy selection",
            Stage::Policy => "policy",
            Stage::Context => "context function",
            Stage::PredictionUpdate => "prediction update",
            Stage::Actuation => "world actuation",
            Stage::Initialisation => "initialisation",
        };
        f.write_str(s)
    }
}

/// Where a failure happened: the node being updated, the edge involved (if
/// any) and the stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub node: NodeId,
    pub edge: Option<(NodeId, NodeId)>,
    pub stage: Stage,
}

impl Site {
    pub(crate) fn node(node: &NodeId, stage: Stage) -> Self {
        Site {
            node: node.clone(),
            edge: None,
            stage,
        }
    }

    pub(crate) fn edge(node: &NodeId, lower: &NodeId, upper: &NodeId, stage: Stage) -> Self {
        Site {
            node: node.clone(),
            edge: Some((lower.clone(), upper.clone())),
            stage,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node `{}`", self.node)?;
        if let Some((lower, upper)) = &self.edge {
            write!(f, ", edge {lower} -> {upper}")?;
        }
        write!(f, ", {}", self.stage)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("invalid hierarchy:\n{0}")]
    InvalidHierarchy(ValidationReport),
    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),
    #[error("`{0}` is the world node; it has no sensing update")]
    WorldSensing(NodeId),
    #[error("tag mismatch at {site}: expected `{expected}`, found `{found}`")]
    TagMismatch {
        site: Site,
        expected: Tag,
        found: Tag,
    },
    #[error("operator failed at {site}: {source}")]
    Operator {
        site: Site,
        #[source]
        source: OperatorError,
    },
    #[error("`{node}` selected unknown policy `{policy}`")]
    UnknownPolicy { node: NodeId, policy: PolicyId },
    #[error("invalid {sweep} order: {reason}")]
    InvalidOrder { sweep: &'static str, reason: String },
}

impl KernelError {
    pub fn site(&self) -> Option<&Site> {
        match self {
            KernelError::TagMismatch { site, .. } | KernelError::Operator { site, .. } => {
                Some(site)
            }
            _ => None,
        }
    }
}
