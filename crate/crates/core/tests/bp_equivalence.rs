mod common;

use cogh_core::bp::fixtures::the_cat;
use cogh_core::bp::random::{random_tree, RandomTreeConfig};
use cogh_core::bp::{
    bp_propagate, equivalence_check, hierarchy_beliefs, initial_active, node_belief_of, CausalTree,
    Evidence, Outcome, ProcessorSpec, SupportState, TreeDocument,
};
use cogh_core::kernel::NodeId;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn id(s: &str) -> NodeId {
    NodeId::new(s)
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    max_abs_diff(a, b) < tol
}

#[test]
fn the_cat_one_tick() {
    let tree = the_cat();
    let ah = initial_active(&tree).unwrap();
    let n2 = ah
        .belief(&id("N2"))
        .unwrap()
        .downcast_ref::<SupportState>()
        .unwrap();
    assert_eq!(n2.diagnostic, vec![vec![0.5, 0.5]]);
    assert_eq!(n2.causal, vec![0.5, 0.5]);

    let ah = ah.tick().unwrap();
    let n2 = ah
        .belief(&id("N2"))
        .unwrap()
        .downcast_ref::<SupportState>()
        .unwrap();
    assert_eq!(n2.diagnostic, vec![vec![0.5, 0.5]]);
    assert!(close(&n2.causal, &[0.0, 1.0], 1e-12));

    let n4 = ah
        .belief(&id("N4"))
        .unwrap()
        .downcast_ref::<SupportState>()
        .unwrap();
    assert_eq!(
        n4.diagnostic[1..],
        [vec![0.0, 1.0], vec![0.5, 0.5], vec![0.0, 1.0]]
    );
    assert_eq!(n4.diagnostic[0], vec![1.0, 1.0]);

    for node in ["N2", "N4"] {
        let b = node_belief_of(ah.belief(&id(node)).unwrap()).unwrap();
        assert!(close(&b, &[0.0, 1.0], 1e-9), "{node}: {b:?}");
    }
}

#[test]
fn the_cat_oracle_and_brute_force_agree() {
    let tree = the_cat();
    let oracle = bp_propagate(&tree);
    let brute = brute_force_marginals(&tree).unwrap();
    for (node, b) in &brute {
        assert!(close(oracle.get(node).unwrap(), b, 1e-12));
    }
    assert!(close(oracle.get(&id("N2")).unwrap(), &[0.0, 1.0], 1e-12));
}

#[test]
fn oracle_matches_enumeration_on_all_small_trees() {
    let mut checked = 0;
    for n in 1..=5 {
        for (si, parents) in parent_arrays(n).iter().enumerate() {
            for (di, dims) in dim_assignments(n, 2, 3).iter().enumerate() {
                let seed = (n * 100_000 + si * 1000 + di) as u64;
                let tree = tree_from_shape(parents, dims, seed);
                let oracle = bp_propagate(&tree);
                let brute = brute_force_marginals(&tree).expect("positive parameters");
                for (node, b) in &brute {
                    let got = oracle.get(node).unwrap();
                    let d = max_abs_diff(got, b);
                    assert!(
                        d < 1e-12,
                        "shape {parents:?} dims {dims:?} node {node}: {d:e}"
                    );
                }
                checked += 1;
            }
        }
    }
    // 1·2 + 1·4 + 2·8 + 6·16 + 24·32
    assert_eq!(checked, 886);
}

#[test]
fn hierarchy_matches_oracle_on_all_small_trees() {
    for n in 1..=5 {
        for (si, parents) in parent_arrays(n).iter().enumerate() {
            for di in [0, 7, 19] {
                let dims = &dim_assignments(n, 2, 3)[di % (1 << n)];
                let tree = tree_from_shape(parents, dims, (si * 31 + di) as u64);
                let r = equivalence_check(&tree, 1e-9);
                assert!(r.passed, "shape {parents:?} dims {dims:?}: {r:?}");
                assert!(r.ticks <= tree.depth() + 1);
            }
        }
    }
}

#[test]
fn hundred_random_trees_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = RandomTreeConfig::default();
    let mut largest = 0;
    for i in 0..100 {
        let tree = random_tree(&mut rng, &cfg);
        largest = largest.max(tree.len());
        let r = equivalence_check(&tree, 1e-9);
        assert!(r.passed, "tree {i}: {r:?}");
        assert!(r.depth <= 4);
    }
    assert!(largest > 5);
}

#[test]
fn random_trees_agree_with_enumeration_when_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = RandomTreeConfig {
        max_depth: 2,
        max_branch: 2,
        min_dim: 2,
        max_dim: 4,
    };
    for _ in 0..50 {
        let tree = random_tree(&mut rng, &cfg);
        let brute = brute_force_marginals(&tree).unwrap();
        let ah = initial_active(&tree).unwrap();
        let mut ah = ah;
        for _ in 0..=tree.depth() {
            ah = ah.tick().unwrap();
        }
        let hier = hierarchy_beliefs(&ah, &tree).unwrap();
        for (node, b) in &brute {
            assert!(close(hier.get(node).unwrap(), b, 1e-9));
        }
    }
}

#[test]
fn new_evidence_propagates_through_running_hierarchy() {
    let mut tree = the_cat();
    let mut ah = initial_active(&tree).unwrap();
    for _ in 0..3 {
        ah = ah.tick().unwrap();
    }
    // the first letter now looks like a T, the word becomes ambiguous
    tree.set_external_input(&id("N1"), vec![0.8, 0.2]).unwrap();
    tree.set_external_input(&id("N3"), vec![0.6, 0.4]).unwrap();
    ah = ah
        .with_world_state(Evidence::from_tree(&tree).into_value())
        .unwrap();
    for _ in 0..=tree.depth() {
        ah = ah.tick().unwrap();
    }
    let oracle = bp_propagate(&tree);
    let hier = hierarchy_beliefs(&ah, &tree).unwrap();
    for (node, b) in &oracle.beliefs {
        assert!(close(hier.get(node).unwrap(), b, 1e-12), "{node}");
    }
    assert!(hier.get(&id("N4")).unwrap()[0] > 0.5);
}

#[test]
fn contradictory_evidence_is_reported() {
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
    assert!(brute_force_marginals(&tree).is_none());
    let r = equivalence_check(&tree, 1e-9);
    assert!(!r.passed);
    assert!(matches!(r.outcome, Outcome::Degenerate { .. }));
}

#[test]
fn document_round_trip_preserves_beliefs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tree = random_tree(&mut rng, &RandomTreeConfig::default());
    let text = serde_json::to_string(&tree.to_document()).unwrap();
    let doc: TreeDocument = serde_json::from_str(&text).unwrap();
    let back = CausalTree::from_document(&doc).unwrap();
    assert_eq!(bp_propagate(&tree), bp_propagate(&back));
}

#[test]
fn rectangular_matrices_supported() {
    let tree = tree_from_shape(&[0, 0, 1], &[3, 2, 3, 2], 99);
    let r = equivalence_check(&tree, 1e-9);
    assert!(r.passed, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beliefs_are_distributions(seed in any::<u64>(), depth in 1usize..4, branch in 1usize..4, dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = RandomTreeConfig { max_depth: depth, max_branch: branch, min_dim: 2, max_dim: dim };
        let tree = random_tree(&mut rng, &cfg);
        let oracle = bp_propagate(&tree);
        let mut ah = initial_active(&tree).unwrap();
        for _ in 0..=tree.depth() {
            ah = ah.tick().unwrap();
        }
        let hier = hierarchy_beliefs(&ah, &tree).unwrap();
        for table in [&oracle, &hier] {
            prop_assert!(!table.is_degenerate());
            for b in table.beliefs.values() {
                let s: f64 = b.iter().sum();
                prop_assert!((s - 1.0).abs() <= 1e-9);
                prop_assert!(b.iter().all(|x| *x >= 0.0));
            }
        }
        for n in ah.nodes() {
            let s = n.belief.downcast_ref::<SupportState>().unwrap();
            let c: f64 = s.causal.iter().sum();
            prop_assert!((c - 1.0).abs() <= 1e-9);
        }
    }
}
