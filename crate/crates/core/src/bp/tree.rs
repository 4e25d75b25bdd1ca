use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::NodeId;

/// Tolerance on row sums of a conditional probability matrix.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Dense row-major matrix. For a child processor, rows are indexed by the
/// parent's values and columns by the child's: `m[u][x] = P(x | u)`, so
/// every row sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Matrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `M · vᵀ`: takes a column-space (child) vector to row space (parent).
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// `v · M`: takes a row-space (parent) vector to column space (child).
    pub fn apply_left(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (r, &w) in v.iter().enumerate() {
            for (o, m) in out.iter_mut().zip(self.row(r)) {
                *o += w * m;
            }
        }
        out
    }
}

/// One processor of a causal tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Processor {
    pub id: NodeId,
    /// number of hypothesis values
    pub n: usize,
    /// initial diagnostic support
    pub diagnostic: Vec<f64>,
    /// initial causal support (the prior at the root)
    pub causal: Vec<f64>,
    /// `P(self | parent)`, parent values × own values; `None` at the root
    pub matrix: Option<Matrix>,
    pub parent: Option<NodeId>,
    /// fixed order; a child's position here is its slot in the parent
    pub children: Vec<NodeId>,
    /// externally set diagnostic component; all ones means no evidence
    pub external_input: Vec<f64>,
}

/// A validated causal tree.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalTree {
    processors: BTreeMap<NodeId, Processor>,
    /// document order, also the numbering used for children
    order: Vec<NodeId>,
    root: NodeId,
}

/// Serialized form of one processor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessorSpec {
    pub id: NodeId,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<NodeId>,
    /// row-major, parent.n rows × n columns, row-stochastic; omitted at the root
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<f64>>,
    /// root only; uniform if omitted
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<f64>>,
    /// all ones if omitted
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_input: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub processors: Vec<ProcessorSpec>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("tree has no processors")]
    Empty,
    #[error("duplicate processor `{0}`")]
    Duplicate(NodeId),
    #[error("no root (every processor has a parent)")]
    NoRoot,
    #[error("more than one root: `{0}` and `{1}`")]
    MultipleRoots(NodeId, NodeId),
    #[error("`{child}` names unknown parent `{parent}`")]
    UnknownParent { child: NodeId, parent: NodeId },
    #[error("`{0}` is not connected to the root (parent links form a cycle)")]
    Disconnected(NodeId),
    #[error("`{0}`: feature dimension must be at least 2")]
    DimensionTooSmall(NodeId),
    #[error("`{id}`: {what} has length {got}, expected {expected}")]
    Dimension {
        id: NodeId,
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("`{0}`: non-root processor needs a matrix")]
    MissingMatrix(NodeId),
    #[error("`{0}`: the root has no parent and takes no matrix")]
    RootMatrix(NodeId),
    #[error("`{0}`: only the root takes a prior")]
    PriorOnChild(NodeId),
    #[error("`{id}`: {what} has a negative or non-finite entry")]
    Negative { id: NodeId, what: &'static str },
    #[error("`{id}`: matrix row {row} sums to {sum}, not 1")]
    NotStochastic { id: NodeId, row: usize, sum: f64 },
}

fn check_entries(id: &NodeId, what: &'static str, v: &[f64]) -> Result<(), TreeError> {
    if v.iter().all(|x| x.is_finite() && *x >= 0.0) {
        Ok(())
    } else {
        Err(TreeError::Negative {
            id: id.clone(),
            what,
        })
    }
}

fn check_len(
    id: &NodeId,
    what: &'static str,
    expected: usize,
    got: usize,
) -> Result<(), TreeError> {
    if expected == got {
        Ok(())
    } else {
        Err(TreeError::Dimension {
            id: id.clone(),
            what,
            expected,
            got,
        })
    }
}

impl CausalTree {
    /// Validates and assembles a tree from processor specs. Children are
    /// numbered in the order they appear.
    pub fn from_specs(specs: &[ProcessorSpec]) -> Result<Self, TreeError> {
        if specs.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut dims: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for s in specs {
            if dims.insert(&s.id, s.n).is_some() {
                return Err(TreeError::Duplicate(s.id.clone()));
            }
            if s.n < 2 {
                return Err(TreeError::DimensionTooSmall(s.id.clone()));
            }
        }
        let mut root: Option<&NodeId> = None;
        for s in specs {
            match &s.parent {
                None => {
                    if let Some(r) = root {
                        return Err(TreeError::MultipleRoots(r.clone(), s.id.clone()));
                    }
                    root = Some(&s.id);
                }
                Some(p) if !dims.contains_key(p) => {
                    return Err(TreeError::UnknownParent {
                        child: s.id.clone(),
                        parent: p.clone(),
                    })
                }
                Some(_) => {}
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?.clone();

        let mut processors = BTreeMap::new();
        for s in specs {
            let id = &s.id;
            let uniform = vec![1.0 / s.n as f64; s.n];
            let external_input = s.external_input.clone().unwrap_or_else(|| vec![1.0; s.n]);
            check_len(id, "external_input", s.n, external_input.len())?;
            check_entries(id, "external_input", &external_input)?;

            let (matrix, causal) = match &s.parent {
                None => {
                    if s.matrix.is_some() {
                        return Err(TreeError::RootMatrix(id.clone()));
                    }
                    let prior = s.prior.clone().unwrap_or_else(|| uniform.clone());
                    check_len(id, "prior", s.n, prior.len())?;
                    check_entries(id, "prior", &prior)?;
                    (None, prior)
                }
                Some(p) => {
                    if s.prior.is_some() {
                        return Err(TreeError::PriorOnChild(id.clone()));
                    }
                    let data = s
                        .matrix
                        .clone()
                        .ok_or_else(|| TreeError::MissingMatrix(id.clone()))?;
                    let rows = dims[p];
                    check_len(id, "matrix", rows * s.n, data.len())?;
                    check_entries(id, "matrix", &data)?;
                    let m = Matrix::new(rows, s.n, data).expect("length checked");
                    for r in 0..rows {
                        let sum: f64 = m.row(r).iter().sum();
                        if (sum - 1.0).abs() > STOCHASTIC_TOL {
                            return Err(TreeError::NotStochastic {
                                id: id.clone(),
                                row: r,
                                sum,
                            });
                        }
                    }
                    (Some(m), uniform.clone())
                }
            };
            processors.insert(
                id.clone(),
                Processor {
                    id: id.clone(),
                    n: s.n,
                    diagnostic: uniform,
                    causal,
                    matrix,
                    parent: s.parent.clone(),
                    children: Vec::new(),
                    external_input,
                },
            );
        }
        for s in specs {
            if let Some(p) = &s.parent {
                processors
                    .get_mut(p)
                    .expect("checked")
                    .children
                    .push(s.id.clone());
            }
        }

        let tree = CausalTree {
            processors,
            order: specs.iter().map(|s| s.id.clone()).collect(),
            root,
        };
        let reached = tree.preorder();
        if reached.len() != specs.len() {
            let missing = specs
                .iter()
                .find(|s| !reached.contains(&s.id))
                .expect("some processor unreached");
            return Err(TreeError::Disconnected(missing.id.clone()));
        }
        Ok(tree)
    }

    pub fn from_document(doc: &TreeDocument) -> Result<Self, TreeError> {
        Self::from_specs(&doc.processors)
    }

    pub fn to_document(&self) -> TreeDocument {
        let processors = self
            .order
            .iter()
            .map(|id| {
                let p = &self.processors[id];
                ProcessorSpec {
                    id: id.clone(),
                    n: p.n,
                    parent: p.parent.clone(),
                    matrix: p.matrix.as_ref().map(|m| m.data().to_vec()),
                    prior: p.parent.is_none().then(|| p.causal.clone()),
                    external_input: Some(p.external_input.clone()),
                }
            })
            .collect();
        TreeDocument { processors }
    }

    pub fn root(&self) -> &NodeId {
        &self.root
    }

    pub fn processor(&self, id: &NodeId) -> Option<&Processor> {
        self.processors.get(id)
    }

    pub fn processors(&self) -> impl Iterator<Item = &Processor> {
        self.order.iter().map(|id| &self.processors[id])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn prior(&self) -> &[f64] {
        &self.processors[&self.root].causal
    }

    /// Root first, parents before children, children in slot order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.processors.len());
        let mut stack = vec![self.root.clone()];
        while let Some(id) = stack.pop() {
            if out.len() > self.processors.len() {
                break;
            }
            let p = &self.processors[&id];
            stack.extend(p.children.iter().rev().cloned());
            out.push(id);
        }
        out
    }

    /// Edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        let mut depth: BTreeMap<&NodeId, usize> = BTreeMap::new();
        let mut max = 0;
        for id in self.preorder() {
            let p = &self.processors[&id];
            let d = p.parent.as_ref().map_or(0, |q| depth[q] + 1);
            max = max.max(d);
            depth.insert(&self.processors[&id].id, d);
        }
        max
    }

    /// Slot of `child` among its parent's children (0-based).
    pub fn child_slot(&self, child: &NodeId) -> Option<usize> {
        let parent = self.processors.get(child)?.parent.as_ref()?;
        self.processors[parent]
            .children
            .iter()
            .position(|c| c == child)
    }

    /// Replaces a processor's external evidence.
    pub fn set_external_input(&mut self, id: &NodeId, input: Vec<f64>) -> Result<(), TreeError> {
        let p = self
            .processors
            .get_mut(id)
            .ok_or_else(|| TreeError::Disconnected(id.clone()))?;
        check_len(id, "external_input", p.n, input.len())?;
        check_entries(id, "external_input", &input)?;
        p.external_input = input;
        Ok(())
    }
}
