//! Seeded random causal trees for the equivalence suite.

use rand::Rng;

use super::tree::{CausalTree, ProcessorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomTreeConfig {
    /// edges on the longest root-to-leaf path, at most
    pub max_depth: usize,
    pub max_branch: usize,
    pub min_dim: usize,
    pub max_dim: usize,
}

impl Default for RandomTreeConfig {
    fn default() -> Self {
        RandomTreeConfig {
            max_depth: 4,
            max_branch: 3,
            min_dim: 2,
            max_dim: 5,
        }
    }
}

fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

fn random_evidence<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    if rng.random_bool(0.3) {
        vec![1.0; n]
    } else {
        (0..n).map(|_| rng.random_range(0.05..1.0)).collect()
    }
}

/// One dimension for the whole tree, drawn from `min_dim..=max_dim`. The
/// root has at least one child; every other node below `max_depth` has
/// `0..=max_branch`. Matrices, prior and evidence are strictly positive.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, config: &RandomTreeConfig) -> CausalTree {
    let n = rng.random_range(config.min_dim..=config.max_dim);
    let mut specs = vec![ProcessorSpec {
        id: "P0".into(),
        n,
        parent: None,
        matrix: None,
        prior: Some(random_distribution(rng, n)),
        external_input: Some(random_evidence(rng, n)),
    }];
    let mut frontier = vec![(0usize, 0usize)];
    while let Some((idx, depth)) = frontier.pop() {
        if depth >= config.max_depth {
            continue;
        }
        let lo = usize::from(idx == 0 && config.max_branch > 0);
        let kids = rng.random_range(lo..=config.max_branch);
        let parent = specs[idx].id.clone();
        for _ in 0..kids {
            let matrix: Vec<f64> = (0..n).flat_map(|_| random_distribution(rng, n)).collect();
            let id = format!("P{}", specs.len());
            frontier.push((specs.len(), depth + 1));
            specs.push(ProcessorSpec {
                id: id.as_str().into(),
                n,
                parent: Some(parent.clone()),
                matrix: Some(matrix),
                prior: None,
                external_input: Some(random_evidence(rng, n)),
            });
        }
    }
    CausalTree::from_specs(&specs).expect("generated tree is valid")
}
