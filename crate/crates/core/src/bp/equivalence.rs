//! Runs an encoded tree through the process model and compares every
//! node's belief with [`bp_propagate`].

use serde::Serialize;

use super::encode::{encode, node_belief_of, Evidence};
use super::propagate::{bp_propagate, BeliefTable};
use super::tree::CausalTree;
use crate::kernel::{init_active, ActiveHierarchy, KernelError, NodeId, OperatorError};

/// Largest belief change tolerated between the last two ticks.
pub const FIXPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Match,
    ToleranceExceeded,
    /// contradictory evidence; beliefs undefined
    Degenerate {
        detail: String,
    },
    NoFixpoint {
        change: f64,
    },
    Kernel {
        detail: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub nodes: usize,
    pub depth: usize,
    /// ticks run before the state stopped changing
    pub ticks: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub outcome: Outcome,
}

/// A world-node id not used by any processor.
pub fn world_id_for(tree: &CausalTree) -> NodeId {
    let mut id = String::from("N0");
    while tree.processor(&NodeId::new(id.clone())).is_some() {
        id.push('\'');
    }
    NodeId::new(id)
}

/// Beliefs of every encoded node, in processor order.
pub fn hierarchy_beliefs(
    ah: &ActiveHierarchy,
    tree: &CausalTree,
) -> Result<BeliefTable, OperatorError> {
    let mut table = BeliefTable::default();
    for p in tree.processors() {
        let v = ah.belief(&p.id).expect("encoded node");
        match node_belief_of(v) {
            Ok(b) => {
                table.beliefs.insert(p.id.clone(), b);
            }
            Err(OperatorError::Degenerate(_)) => {
                table.degenerate.insert(p.id.clone());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(table)
}

fn max_diff(a: &BeliefTable, b: &BeliefTable) -> f64 {
    a.beliefs
        .iter()
        .map(|(id, x)| {
            b.beliefs.get(id).map_or(f64::INFINITY, |y| {
                x.iter()
                    .zip(y)
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max)
            })
        })
        .fold(0.0, f64::max)
}

/// Encoded tree after its initial state; evidence comes from the tree.
pub fn initial_active(tree: &CausalTree) -> Result<ActiveHierarchy, KernelError> {
    let world = world_id_for(tree);
    init_active(encode(tree, &world), Evidence::from_tree(tree).into_value())
}

/// Ticks the encoded hierarchy until its beliefs stop changing (at most
/// `depth + 1` ticks plus one confirming tick) and compares against the
/// reference engine.
pub fn equivalence_check(tree: &CausalTree, tolerance: f64) -> EquivalenceReport {
    let depth = tree.depth();
    let mut report = EquivalenceReport {
        nodes: tree.len(),
        depth,
        ticks: 0,
        max_deviation: f64::NAN,
        tolerance,
        passed: false,
        outcome: Outcome::Match,
    };

    let oracle = bp_propagate(tree);
    if oracle.is_degenerate() {
        let ids: Vec<String> = oracle.degenerate.iter().map(ToString::to_string).collect();
        report.outcome = Outcome::Degenerate {
            detail: format!("reference beliefs undefined at {}", ids.join(", ")),
        };
        return report;
    }

    let fail = |mut report: EquivalenceReport, e: KernelError| {
        report.outcome = match &e {
            KernelError::Operator {
                source: OperatorError::Degenerate(_),
                ..
            } => Outcome::Degenerate {
                detail: e.to_string(),
            },
            _ => Outcome::Kernel {
                detail: e.to_string(),
            },
        };
        report
    };
    let beliefs = |ah: &ActiveHierarchy| {
        hierarchy_beliefs(ah, tree).map_err(|e| Outcome::Kernel {
            detail: e.to_string(),
        })
    };

    let mut ah = match initial_active(tree) {
        Ok(ah) => ah,
        Err(e) => return fail(report, e),
    };
    let mut prev = match beliefs(&ah) {
        Ok(b) => b,
        Err(o) => {
            report.outcome = o;
            return report;
        }
    };
    // depth + 1 ticks to settle, one more to confirm nothing moves
    let max_ticks = depth + 2;
    let mut run = 0;
    loop {
        ah = match ah.tick() {
            Ok(next) => next,
            Err(e) => return fail(report, e),
        };
        run += 1;
        let cur = match beliefs(&ah) {
            Ok(b) => b,
            Err(o) => {
                report.outcome = o;
                return report;
            }
        };
        let change = max_diff(&cur, &prev).max(max_diff(&prev, &cur));
        prev = cur;
        if run >= 2 && change <= FIXPOINT_TOL {
            report.ticks = run - 1;
            break;
        }
        if run == max_ticks {
            report.outcome = Outcome::NoFixpoint { change };
            return report;
        }
    }
    if prev.is_degenerate() {
        report.outcome = Outcome::Degenerate {
            detail: "hierarchy belief product is zero".into(),
        };
        return report;
    }

    report.max_deviation = max_diff(&prev, &oracle).max(max_diff(&oracle, &prev));
    report.passed = report.max_deviation < tolerance;
    report.outcome = if report.passed {
        Outcome::Match
    } else {
        Outcome::ToleranceExceeded
    };
    report
}
