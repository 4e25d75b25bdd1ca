//! The THE/CAT word-recognition tree.
//!
//! Three letter processors `N1`, `N2`, `N3` feed the word processor `N4`.
//! Word values are ⟨THE, CAT⟩; letter values ⟨T, C⟩, ⟨H, A⟩, ⟨E, T⟩, so the
//! identity matrix links each letter to its word. The first and last letters
//! are read unambiguously as C and T; the middle glyph could be H or A.

use super::tree::{CausalTree, ProcessorSpec};

pub fn the_cat_specs() -> Vec<ProcessorSpec> {
    let identity = vec![1.0, 0.0, 0.0, 1.0];
    let letter = |id: &str, evidence: [f64; 2]| ProcessorSpec {
        id: id.into(),
        n: 2,
        parent: Some("N4".into()),
        matrix: Some(identity.clone()),
        prior: None,
        external_input: Some(evidence.to_vec()),
    };
    vec![
        letter("N1", [0.0, 1.0]),
        letter("N2", [0.5, 0.5]),
        letter("N3", [0.0, 1.0]),
        ProcessorSpec {
            id: "N4".into(),
            n: 2,
            parent: None,
            matrix: None,
            prior: Some(vec![0.5, 0.5]),
            external_input: None,
        },
    ]
}

pub fn the_cat() -> CausalTree {
    CausalTree::from_specs(&the_cat_specs()).expect("fixture is valid")
}
