use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::hierarchy::Hierarchy;
use super::node::NodeId;

/// One structural problem with a hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateNode {
        node: NodeId,
    },
    /// A cognitive node uses the world node's id.
    WorldIdReused {
        node: NodeId,
    },
    UnknownEndpoint {
        lower: NodeId,
        upper: NodeId,
        missing: NodeId,
    },
    SelfLoop {
        node: NodeId,
    },
    DuplicateEdge {
        lower: NodeId,
        upper: NodeId,
    },
    Cycle {
        nodes: Vec<NodeId>,
    },
    /// The world node has an incoming sensing edge, so it is not a source.
    WorldNotSource {
        lower: NodeId,
    },
    /// A non-world node without incoming sensing edges: a second source.
    ExtraSource {
        node: NodeId,
    },
    Unreachable {
        node: NodeId,
    },
    InitialPolicyMissing {
        node: NodeId,
        policy: String,
    },
    /// `policy_selector(∅)` did not return the initial policy.
    SelectorDefault {
        node: NodeId,
        expected: String,
        got: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateNode { node } => write!(f, "duplicate node id `{node}`"),
            Violation::WorldIdReused { node } => {
                write!(f, "cognitive node `{node}` reuses the world node id")
            }
            Violation::UnknownEndpoint {
                lower,
                upper,
                missing,
            } => {
                write!(
                    f,
                    "edge {lower} -> {upper} references unknown node `{missing}`"
                )
            }
            Violation::SelfLoop { node } => write!(f, "self-loop on `{node}`"),
            Violation::DuplicateEdge { lower, upper } => {
                write!(f, "duplicate edge {lower} -> {upper}")
            }
            Violation::Cycle { nodes } => {
                let path: Vec<&str> = nodes.iter().map(NodeId::as_str).collect();
                write!(
                    f,
                    "cycle in sensing graph: {} -> {}",
                    path.join(" -> "),
                    path[0]
                )
            }
            Violation::WorldNotSource { lower } => {
                write!(
                    f,
                    "world node is not a source: sensing edge {lower} -> world"
                )
            }
            Violation::ExtraSource { node } => {
                write!(
                    f,
                    "`{node}` has no incoming sensing edge (world node is not the unique source)"
                )
            }
            Violation::Unreachable { node } => {
                write!(f, "`{node}` is not reachable from the world node")
            }
            Violation::InitialPolicyMissing { node, policy } => {
                write!(
                    f,
                    "`{node}`: initial policy `{policy}` is not among its policies"
                )
            }
            Violation::SelectorDefault {
                node,
                expected,
                got,
            } => write!(
                f,
                "`{node}`: policy selector on the empty set gave `{got}`, expected `{expected}`"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_cycle(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Cycle { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok: hierarchy is well-formed");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Checks the structural conditions on a hierarchy. Never fails; every
/// problem found is returned in the report.
pub fn validate(hierarchy: &Hierarchy) -> ValidationReport {
    let mut violations = Vec::new();
    let world = hierarchy.world_id();

    let mut known: BTreeSet<&NodeId> = BTreeSet::new();
    known.insert(world);
    for node in &hierarchy.nodes {
        if &node.id == world {
            violations.push(Violation::WorldIdReused {
                node: node.id.clone(),
            });
        } else if !known.insert(&node.id) {
            violations.push(Violation::DuplicateNode {
                node: node.id.clone(),
            });
        }
    }

    // adjacency over edges whose endpoints exist; duplicates and self-loops dropped
    let mut seen_pairs = BTreeSet::new();
    let mut succ: BTreeMap<&NodeId, Vec<&NodeId>> =
        known.iter().map(|n| (*n, Vec::new())).collect();
    let mut indeg: BTreeMap<&NodeId, usize> = known.iter().map(|n| (*n, 0)).collect();
    for edge in &hierarchy.edges {
        let (lower, upper) = (&edge.lower, &edge.upper);
        let mut ok = true;
        for end in [lower, upper] {
            if !known.contains(end) {
                violations.push(Violation::UnknownEndpoint {
                    lower: lower.clone(),
                    upper: upper.clone(),
                    missing: end.clone(),
                });
                ok = false;
            }
        }
        if lower == upper {
            violations.push(Violation::SelfLoop {
                node: lower.clone(),
            });
            ok = false;
        }
        if !seen_pairs.insert((lower, upper)) {
            violations.push(Violation::DuplicateEdge {
                lower: lower.clone(),
                upper: upper.clone(),
            });
            ok = false;
        }
        if !ok {
            continue;
        }
        if upper == world {
            violations.push(Violation::WorldNotSource {
                lower: lower.clone(),
            });
        }
        succ.get_mut(lower).expect("known").push(upper);
        *indeg.get_mut(upper).expect("known") += 1;
    }

    for cycle in find_cycles(&succ, &indeg) {
        violations.push(Violation::Cycle { nodes: cycle });
    }

    let mut reached = BTreeSet::new();
    let mut queue = VecDeque::from([world]);
    reached.insert(world);
    while let Some(n) = queue.pop_front() {
        for &m in &succ[n] {
            if reached.insert(m) {
                queue.push_back(m);
            }
        }
    }
    for node in &hierarchy.nodes {
        let id = &node.id;
        if id == world {
            continue;
        }
        if indeg.get(id).copied().unwrap_or(0) == 0 {
            violations.push(Violation::ExtraSource { node: id.clone() });
        } else if !reached.contains(id) {
            violations.push(Violation::Unreachable { node: id.clone() });
        }
    }

    for node in &hierarchy.nodes {
        if !node.policies.contains_key(&node.initial_policy) {
            violations.push(Violation::InitialPolicyMissing {
                node: node.id.clone(),
                policy: node.initial_policy.to_string(),
            });
        }
        let got = match (node.policy_selector)(&[]) {
            Ok(p) if p == node.initial_policy => continue,
            Ok(p) => p.to_string(),
            Err(e) => format!("error: {e}"),
        };
        violations.push(Violation::SelectorDefault {
            node: node.id.clone(),
            expected: node.initial_policy.to_string(),
            got,
        });
    }

    ValidationReport { violations }
}

/// Kahn's algorithm; whatever cannot be scheduled lies on or behind a cycle.
/// Walks predecessors inside the leftover set to extract concrete cycles.
fn find_cycles(
    succ: &BTreeMap<&NodeId, Vec<&NodeId>>,
    indeg: &BTreeMap<&NodeId, usize>,
) -> Vec<Vec<NodeId>> {
    let mut indeg = indeg.clone();
    let mut ready: Vec<&NodeId> = indeg
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    while let Some(n) = ready.pop() {
        for &m in &succ[n] {
            let d = indeg.get_mut(m).expect("known");
            *d -= 1;
            if *d == 0 {
                ready.push(m);
            }
        }
        indeg.remove(n);
    }
    let mut left: BTreeSet<&NodeId> = indeg.keys().copied().collect();

    let mut pred: BTreeMap<&NodeId, &NodeId> = BTreeMap::new();
    for (&from, tos) in succ {
        if !left.contains(from) {
            continue;
        }
        for &to in tos {
            if left.contains(to) {
                pred.entry(to).or_insert(from);
            }
        }
    }

    let mut cycles = Vec::new();
    while let Some(&start) = left.iter().next() {
        let mut path = vec![start];
        let mut pos: BTreeMap<&NodeId, usize> = BTreeMap::from([(start, 0)]);
        let mut cur = start;
        let found = loop {
            match pred.get(cur) {
                Some(&p) if left.contains(p) => {
                    if let Some(&i) = pos.get(p) {
                        break Some(i);
                    }
                    pos.insert(p, path.len());
                    path.push(p);
                    cur = p;
                }
                _ => break None,
            }
        };
        for n in &path {
            left.remove(*n);
        }
        if let Some(i) = found {
            // path walks predecessors; reverse to get edge direction
            let mut cycle: Vec<NodeId> = path[i..].iter().map(|n| (*n).clone()).collect();
            cycle.reverse();
            cycles.push(cycle);
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{CognitiveNodeSpec, EdgeTriple, NodeValueSpaces, Value, WorldSpec};

    fn node(id: &str) -> CognitiveNodeSpec {
        CognitiveNodeSpec::new(id, NodeValueSpaces::uniform("t"), Value::new("t", 0.0_f64))
    }

    fn world() -> WorldSpec {
        WorldSpec::inert("N0", "w")
    }

    #[test]
    fn chain_is_valid() {
        let h = Hierarchy::new(world())
            .with_node(node("N1"))
            .with_edge(EdgeTriple::new("N0", "N1"));
        assert!(validate(&h).is_valid());
    }

    #[test]
    fn two_cycle_reported() {
        let h = Hierarchy::new(world())
            .with_node(node("N1"))
            .with_node(node("N2"))
            .with_edge(EdgeTriple::new("N1", "N2"))
            .with_edge(EdgeTriple::new("N2", "N1"));
        let r = validate(&h);
        assert!(r.has_cycle(), "{r}");
        let cycles: Vec<_> = r
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::Cycle { nodes } => Some(nodes.len()),
                _ => None,
            })
            .collect();
        assert_eq!(cycles, vec![2]);
        assert!(r.to_string().contains("cycle"));
    }

    #[test]
    fn cycle_behind_a_chain() {
        // N0 -> A -> B -> C -> B
        let h = Hierarchy::new(world())
            .with_node(node("A"))
            .with_node(node("B"))
            .with_node(node("C"))
            .with_edge(EdgeTriple::new("N0", "A"))
            .with_edge(EdgeTriple::new("A", "B"))
            .with_edge(EdgeTriple::new("B", "C"))
            .with_edge(EdgeTriple::new("C", "B"));
        let r = validate(&h);
        let cycles: Vec<_> = r
            .violations
            .iter()
            .filter_map(|v| match v {
                Violation::Cycle { nodes } => Some(nodes.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(cycles.len(), 1);
        let mut c = cycles[0].clone();
        c.sort();
        assert_eq!(c, vec![NodeId::from("B"), NodeId::from("C")]);
    }

    #[test]
    fn duplicate_and_dangling_edges() {
        let h = Hierarchy::new(world())
            .with_node(node("N1"))
            .with_edge(EdgeTriple::new("N0", "N1"))
            .with_edge(EdgeTriple::new("N0", "N1"))
            .with_edge(EdgeTriple::new("N1", "N9"))
            .with_edge(EdgeTriple::new("N1", "N1"));
        let r = validate(&h);
        assert!(r.violations.contains(&Violation::DuplicateEdge {
            lower: "N0".into(),
            upper: "N1".into()
        }));
        assert!(r.violations.contains(&Violation::UnknownEndpoint {
            lower: "N1".into(),
            upper: "N9".into(),
            missing: "N9".into()
        }));
        assert!(r
            .violations
            .contains(&Violation::SelfLoop { node: "N1".into() }));
    }

    #[test]
    fn world_must_be_unique_source() {
        let h = Hierarchy::new(world())
            .with_node(node("N1"))
            .with_node(node("N2"))
            .with_edge(EdgeTriple::new("N0", "N1"))
            .with_edge(EdgeTriple::new("N1", "N0"));
        let r = validate(&h);
        assert!(r
            .violations
            .contains(&Violation::WorldNotSource { lower: "N1".into() }));
        assert!(r
            .violations
            .contains(&Violation::ExtraSource { node: "N2".into() }));
    }

    #[test]
    fn selector_default_checked() {
        let bad = node("N1")
            .with_policy("other", |_| Ok(vec![]))
            .with_selector(|_| Ok("other".into()));
        let missing = node("N2").with_initial_policy("ghost");
        let h = Hierarchy::new(world())
            .with_node(bad)
            .with_node(missing)
            .with_edge(EdgeTriple::new("N0", "N1"))
            .with_edge(EdgeTriple::new("N0", "N2"));
        let r = validate(&h);
        assert!(r.violations.iter().any(
            |v| matches!(v, Violation::SelectorDefault { node, .. } if node.as_str() == "N1")
        ));
        assert!(r.violations.iter().any(
            |v| matches!(v, Violation::InitialPolicyMissing { node, .. } if node.as_str() == "N2")
        ));
    }

    #[test]
    fn duplicate_node_ids() {
        let h = Hierarchy::new(world())
            .with_node(node("N1"))
            .with_node(node("N1"))
            .with_node(node("N0"))
            .with_edge(EdgeTriple::new("N0", "N1"));
        let r = validate(&h);
        assert!(r
            .violations
            .contains(&Violation::DuplicateNode { node: "N1".into() }));
        assert!(r
            .violations
            .contains(&Violation::WorldIdReused { node: "N0".into() }));
    }
}
