//! Reference engine: Pearl's two-pass message passing on a causal tree.
//!
//! Upward, each processor sends its parent `α·M·λᵀ` where `λ` is the
//! elementwise product of its external input and its children's messages.
//! Downward, a parent sends its k-th child `α·(π ⊙ d_E ⊙ ∏_{h≠k} λ_h)·M_k`.
//! Beliefs are `α·λ ⊙ π`. Nothing here touches the kernel.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::tree::CausalTree;
use crate::kernel::NodeId;

/// Divides by the sum. `None` if the sum is zero (or not finite).
pub fn normalize(v: &[f64]) -> Option<Vec<f64>> {
    let sum: f64 = v.iter().sum();
    (sum > 0.0 && sum.is_finite()).then(|| v.iter().map(|x| x / sum).collect())
}

pub(crate) fn hadamard_into(acc: &mut [f64], v: &[f64]) {
    debug_assert_eq!(acc.len(), v.len());
    for (a, x) in acc.iter_mut().zip(v) {
        *a *= x;
    }
}

/// Normalizes when possible; keeps the zero vector otherwise.
fn normalize_or_keep(v: Vec<f64>, degenerate: &mut bool) -> Vec<f64> {
    match normalize(&v) {
        Some(n) => n,
        None => {
            *degenerate = true;
            v
        }
    }
}

/// Per-processor beliefs. Processors whose belief is undefined
/// (contradictory evidence) are listed in `degenerate` and absent from
/// `beliefs`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BeliefTable {
    pub beliefs: BTreeMap<NodeId, Vec<f64>>,
    pub degenerate: BTreeSet<NodeId>,
}

impl BeliefTable {
    pub fn get(&self, id: &NodeId) -> Option<&[f64]> {
        self.beliefs.get(id).map(Vec::as_slice)
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degenerate.is_empty()
    }

    /// `{ id: vector | null }`
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (id, b) in &self.beliefs {
            map.insert(id.to_string(), serde_json::json!(b));
        }
        for id in &self.degenerate {
            map.insert(id.to_string(), serde_json::Value::Null);
        }
        serde_json::Value::Object(map)
    }
}

/// One upward and one downward pass over the tree.
pub fn bp_propagate(tree: &CausalTree) -> BeliefTable {
    let pre = tree.preorder();
    let mut zero = false;

    // upward: lambda per processor and the message it sends to its parent
    let mut lambda: BTreeMap<&NodeId, Vec<f64>> = BTreeMap::new();
    let mut up_msg: BTreeMap<&NodeId, Vec<f64>> = BTreeMap::new();
    for id in pre.iter().rev() {
        let p = tree.processor(id).expect("preorder id");
        let mut l = p.external_input.clone();
        for c in &p.children {
            hadamard_into(&mut l, &up_msg[c]);
        }
        if let Some(m) = &p.matrix {
            up_msg.insert(id, normalize_or_keep(m.apply(&l), &mut zero));
        }
        lambda.insert(id, l);
    }

    // downward: pi per processor
    let mut pi: BTreeMap<&NodeId, Vec<f64>> = BTreeMap::new();
    pi.insert(tree.root(), tree.prior().to_vec());
    for id in &pre {
        let p = tree.processor(id).expect("preorder id");
        for (k, c) in p.children.iter().enumerate() {
            let mut v = pi[id].clone();
            hadamard_into(&mut v, &p.external_input);
            for (h, sib) in p.children.iter().enumerate() {
                if h != k {
                    hadamard_into(&mut v, &up_msg[sib]);
                }
            }
            let child = tree.processor(c).expect("child id");
            let m = child.matrix.as_ref().expect("non-root has matrix");
            let ctx = normalize_or_keep(v, &mut zero);
            pi.insert(c, normalize_or_keep(m.apply_left(&ctx), &mut zero));
        }
    }

    let mut table = BeliefTable::default();
    for id in &pre {
        let mut b = lambda[id].clone();
        hadamard_into(&mut b, &pi[id]);
        match normalize(&b) {
            Some(b) => {
                table.beliefs.insert((*id).clone(), b);
            }
            None => {
                table.degenerate.insert((*id).clone());
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::fixtures::the_cat;
    use crate::bp::tree::ProcessorSpec;

    #[test]
    fn the_cat_reads_cat_and_a() {
        let t = bp_propagate(&the_cat());
        let cat = t.get(&"N4".into()).unwrap();
        let a = t.get(&"N2".into()).unwrap();
        assert!((cat[0] - 0.0).abs() < 1e-12 && (cat[1] - 1.0).abs() < 1e-12);
        assert!((a[0] - 0.0).abs() < 1e-12 && (a[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_everything_gives_uniform() {
        let mut tree = the_cat();
        for id in ["N1", "N2", "N3", "N4"] {
            tree.set_external_input(&id.into(), vec![1.0, 1.0]).unwrap();
        }
        let t = bp_propagate(&tree);
        for b in t.beliefs.values() {
            assert_eq!(b, &vec![0.5, 0.5]);
        }
    }

    #[test]
    fn contradictory_evidence_is_degenerate() {
        let tree = CausalTree::from_specs(&[
            ProcessorSpec {
                id: "r".into(),
                n: 2,
                parent: None,
                matrix: None,
                prior: None,
                external_input: Some(vec![1.0, 0.0]),
            },
            ProcessorSpec {
                id: "c".into(),
                n: 2,
                parent: Some("r".into()),
                matrix: Some(vec![1.0, 0.0, 0.0, 1.0]),
                prior: None,
                external_input: Some(vec![0.0, 1.0]),
            },
        ])
        .unwrap();
        let t = bp_propagate(&tree);
        assert_eq!(t.degenerate.len(), 2);
        assert!(t.beliefs.is_empty());
        assert_eq!(t.to_json()["r"], serde_json::Value::Null);
    }
}
