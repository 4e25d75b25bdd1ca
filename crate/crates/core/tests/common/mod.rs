#![allow(dead_code)]

use std::collections::BTreeMap;

use cogh_core::bp::{CausalTree, ProcessorSpec};
use cogh_core::kernel::{
    CognitiveNodeSpec, EdgeTriple, Hierarchy, NodeId, NodeValueSpaces, OperatorError, Value,
    WorldSpec,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const NUM: &str = "num";

pub fn num(x: f64) -> Value {
    Value::new(NUM, x)
}

pub fn as_num(v: &Value) -> f64 {
    *v.downcast_ref::<f64>().expect("numeric payload")
}

fn nums(vs: &[Value]) -> Result<Vec<f64>, OperatorError> {
    vs.iter().map(|v| v.expect_ref::<f64>().copied()).collect()
}

/// A node whose every operator depends on its inputs and their order, so
/// that schedule mistakes show up as different numbers.
pub fn mixer(id: &str, a: f64, start: f64) -> CognitiveNodeSpec {
    CognitiveNodeSpec::new(id, NodeValueSpaces::uniform(NUM), num(start))
        .with_single_policy("lo", |b| Ok(vec![num(as_num(b) * 0.9)]))
        .with_policy("hi", |b| {
            Ok(vec![num(as_num(b) * 1.1 + 1.0), num(-as_num(b))])
        })
        .with_selector(|t| {
            let s: f64 = nums(t)?.iter().sum();
            Ok(if s > 1.0 { "hi".into() } else { "lo".into() })
        })
        .with_observation_update(move |obs, b| {
            let weighted: f64 = nums(obs)?
                .iter()
                .enumerate()
                .map(|(i, o)| (i as f64 + 1.0) * o)
                .sum();
            Ok(num(0.5 * as_num(b) + a * weighted))
        })
        .with_prediction_update(|ctx, acts, b| {
            let c: f64 = nums(ctx)?
                .iter()
                .enumerate()
                .map(|(i, x)| (i as f64 + 1.0) * x)
                .sum();
            let s: f64 = nums(acts)?.iter().sum();
            Ok(num(as_num(b) + 0.1 * c + 0.01 * s))
        })
}

pub fn mix_edge(lower: &str, upper: &str, w: f64) -> EdgeTriple {
    EdgeTriple::new(lower, upper)
        .with_sensing(move |b| Ok(vec![num(b.expect_ref::<f64>()? + w)]))
        .with_task_params(move |acts| Ok(nums(acts)?.into_iter().map(|x| num(x * w)).collect()))
        .with_context(move |b| Ok(vec![num(b.expect_ref::<f64>()? * w)]))
}

/// A world whose state accumulates every task parameter sent to it.
pub fn accumulating_world(id: &str) -> WorldSpec {
    WorldSpec::inert(id, NUM).with_actuation(NUM, |t, w| {
        Ok(num(w.expect_ref::<f64>()? + nums(t)?.iter().sum::<f64>()))
    })
}

/// `W → {A, B} → C`
pub fn diamond() -> Hierarchy {
    Hierarchy::new(accumulating_world("W"))
        .with_node(mixer("A", 0.3, 0.2))
        .with_node(mixer("B", 0.7, -1.0))
        .with_node(mixer("C", 0.4, 2.0))
        .with_edge(mix_edge("W", "A", 0.5))
        .with_edge(mix_edge("W", "B", 1.5))
        .with_edge(mix_edge("A", "C", 2.0))
        .with_edge(mix_edge("B", "C", -0.5))
}

/// `W → {A, B}`, `{A, B} → C`, `A → D`, `{C, D} → E`: five cognitive nodes.
pub fn five_node() -> Hierarchy {
    Hierarchy::new(accumulating_world("W"))
        .with_node(mixer("A", 0.3, 0.2))
        .with_node(mixer("B", 0.7, -1.0))
        .with_node(mixer("C", 0.4, 2.0))
        .with_node(mixer("D", 0.9, 0.5))
        .with_node(mixer("E", 0.2, 3.0))
        .with_edge(mix_edge("W", "A", 0.5))
        .with_edge(mix_edge("W", "B", 1.5))
        .with_edge(mix_edge("A", "C", 2.0))
        .with_edge(mix_edge("B", "C", -0.5))
        .with_edge(mix_edge("A", "D", 0.8))
        .with_edge(mix_edge("C", "E", 1.2))
        .with_edge(mix_edge("D", "E", -0.3))
}

/// Marginal of every processor by summing the full joint
/// `prior(x_root) · ∏ M_c[x_parent][x_c] · ∏ e_i[x_i]`.
/// `None` for every processor when the evidence has zero probability.
pub fn brute_force_marginals(tree: &CausalTree) -> Option<BTreeMap<NodeId, Vec<f64>>> {
    let procs: Vec<_> = tree.processors().collect();
    let index: BTreeMap<&NodeId, usize> =
        procs.iter().enumerate().map(|(i, p)| (&p.id, i)).collect();
    let dims: Vec<usize> = procs.iter().map(|p| p.n).collect();
    let mut sums: Vec<Vec<f64>> = dims.iter().map(|&n| vec![0.0; n]).collect();
    let mut total = 0.0;
    let mut x = vec![0usize; procs.len()];
    loop {
        let mut w = 1.0;
        for (i, p) in procs.iter().enumerate() {
            w *= p.external_input[x[i]];
            w *= match (&p.parent, &p.matrix) {
                (Some(parent), Some(m)) => m.get(x[index[parent]], x[i]),
                _ => tree.prior()[x[i]],
            };
        }
        total += w;
        for (i, s) in sums.iter_mut().enumerate() {
            s[x[i]] += w;
        }
        // odometer
        let mut k = 0;
        while k < x.len() {
            x[k] += 1;
            if x[k] < dims[k] {
                break;
            }
            x[k] = 0;
            k += 1;
        }
        if k == x.len() {
            break;
        }
    }
    if total <= 0.0 {
        return None;
    }
    Some(
        procs
            .iter()
            .zip(sums)
            .map(|(p, s)| (p.id.clone(), s.into_iter().map(|v| v / total).collect()))
            .collect(),
    )
}

/// Every parent array of an `n`-node tree rooted at 0 with `parent[i] < i`;
/// together these cover every rooted tree shape.
pub fn parent_arrays(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 1..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..i).map(move |j| {
                    let mut q = p.clone();
                    q.push(j);
                    q
                })
            })
            .collect();
    }
    out
}

fn distribution(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// A tree with the given shape and per-node dimensions; parameters and
/// evidence drawn from `seed`.
pub fn tree_from_shape(parents: &[usize], dims: &[usize], seed: u64) -> CausalTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::new();
    for (i, &n) in dims.iter().enumerate() {
        let parent = (i > 0).then(|| parents[i - 1]);
        let evidence = if rng.random_bool(0.3) {
            vec![1.0; n]
        } else {
            (0..n).map(|_| rng.random_range(0.05..1.0)).collect()
        };
        specs.push(ProcessorSpec {
            id: format!("X{i}").as_str().into(),
            n,
            parent: parent.map(|p| format!("X{p}").as_str().into()),
            matrix: parent.map(|p| {
                (0..dims[p])
                    .flat_map(|_| distribution(&mut rng, n))
                    .collect()
            }),
            prior: parent.is_none().then(|| distribution(&mut rng, n)),
            external_input: Some(evidence),
        });
    }
    CausalTree::from_specs(&specs).expect("valid generated tree")
}

/// Every dimension assignment with entries in `lo..=hi`.
pub fn dim_assignments(n: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|d: Vec<usize>| {
                (lo..=hi).map(move |k| {
                    let mut e = d.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
