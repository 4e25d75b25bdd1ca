//! Declarative hierarchy documents.
//!
//! Operators are code, registered in a [`Registry`] under string keys; a
//! JSON document only binds those keys into a topology:
//!
//! ```json
//! {
//!   "world_node": "N0",
//!   "world_bundle": "inert",
//!   "nodes": [ { "id": "N1", "bundle": "identity", "params": {} } ],
//!   "edges": [ { "lower": "N0", "upper": "N1", "sensing": "empty" } ]
//! }
//! ```
//!
//! `world_bundle`, `params` and the three edge function keys are optional;
//! a missing edge function is the empty-set function.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value as Json;
use thiserror::Error;

use super::hierarchy::{ContextFn, EdgeTriple, Hierarchy, SensingFn, TaskParamFn};
use super::node::{CognitiveNodeSpec, NodeId, NodeValueSpaces, WorldSpec};
use super::value::Value;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchyDocument {
    pub world_node: NodeId,
    #[serde(default)]
    pub world_bundle: Option<String>,
    #[serde(default)]
    pub world_params: Json,
    pub nodes: Vec<NodeEntry>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: NodeId,
    pub bundle: String,
    #[serde(default)]
    pub params: Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub lower: NodeId,
    pub upper: NodeId,
    #[serde(default)]
    pub sensing: Option<String>,
    #[serde(default)]
    pub task_param: Option<String>,
    #[serde(default)]
    pub context: Option<String>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("no {kind} registered under `{key}`")]
    UnknownKey { kind: &'static str, key: String },
    #[error("bundle `{key}` rejected its parameters: {message}")]
    Bundle { key: String, message: String },
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub fn parse_hierarchy_document(text: &str) -> Result<HierarchyDocument, DocumentError> {
    Ok(serde_json::from_str(text)?)
}

pub type NodeFactory =
    Arc<dyn Fn(&NodeId, &Json) -> Result<CognitiveNodeSpec, String> + Send + Sync>;
pub type WorldFactory = Arc<dyn Fn(&NodeId, &Json) -> Result<WorldSpec, String> + Send + Sync>;

/// Operator bundles and edge functions addressable from documents.
#[derive(Clone, Default)]
pub struct Registry {
    nodes: BTreeMap<String, NodeFactory>,
    worlds: BTreeMap<String, WorldFactory>,
    sensing: BTreeMap<String, SensingFn>,
    task_params: BTreeMap<String, TaskParamFn>,
    contexts: BTreeMap<String, ContextFn>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// A registry with the generic bundles: node `identity` (unit belief,
    /// identity updates), world `inert`, and the `empty` edge function for
    /// every slot.
    pub fn with_builtins() -> Self {
        let mut r = Registry::new();
        r.register_node("identity", |id, _| {
            Ok(CognitiveNodeSpec::new(
                id.clone(),
                NodeValueSpaces::uniform("unit"),
                Value::new("unit", ()),
            ))
        });
        r.register_world("inert", |id, _| Ok(WorldSpec::inert(id.clone(), "unit")));
        r.register_sensing("empty", |_| Ok(Vec::new()));
        r.register_task_param("empty", |_| Ok(Vec::new()));
        r.register_context("empty", |_| Ok(Vec::new()));
        r
    }

    pub fn register_node<F>(&mut self, key: &str, factory: F)
    where
        F: Fn(&NodeId, &Json) -> Result<CognitiveNodeSpec, String> + Send + Sync + 'static,
    {
        self.nodes.insert(key.to_owned(), Arc::new(factory));
    }

    pub fn register_world<F>(&mut self, key: &str, factory: F)
    where
        F: Fn(&NodeId, &Json) -> Result<WorldSpec, String> + Send + Sync + 'static,
    {
        self.worlds.insert(key.to_owned(), Arc::new(factory));
    }

    pub fn register_sensing<F>(&mut self, key: &str, f: F)
    where
        F: Fn(&Value) -> super::OpResult<Vec<Value>> + Send + Sync + 'static,
    {
        self.sensing.insert(key.to_owned(), Arc::new(f));
    }

    pub fn register_task_param<F>(&mut self, key: &str, f: F)
    where
        F: Fn(&[Value]) -> super::OpResult<Vec<Value>> + Send + Sync + 'static,
    {
        self.task_params.insert(key.to_owned(), Arc::new(f));
    }

    pub fn register_context<F>(&mut self, key: &str, f: F)
    where
        F: Fn(&Value) -> super::OpResult<Vec<Value>> + Send + Sync + 'static,
    {
        self.contexts.insert(key.to_owned(), Arc::new(f));
    }

    /// Resolves every key in `doc`. The result is not validated.
    pub fn build(&self, doc: &HierarchyDocument) -> Result<Hierarchy, DocumentError> {
        let world_key = doc.world_bundle.as_deref().unwrap_or("inert");
        let world = match self.worlds.get(world_key) {
            Some(f) => {
                f(&doc.world_node, &doc.world_params).map_err(|message| DocumentError::Bundle {
                    key: world_key.to_owned(),
                    message,
                })?
            }
            None if doc.world_bundle.is_none() => WorldSpec::inert(doc.world_node.clone(), "unit"),
            None => {
                return Err(DocumentError::UnknownKey {
                    kind: "world bundle",
                    key: world_key.to_owned(),
                })
            }
        };

        let mut h = Hierarchy::new(world);
        for entry in &doc.nodes {
            let factory =
                self.nodes
                    .get(&entry.bundle)
                    .ok_or_else(|| DocumentError::UnknownKey {
                        kind: "node bundle",
                        key: entry.bundle.clone(),
                    })?;
            let spec =
                factory(&entry.id, &entry.params).map_err(|message| DocumentError::Bundle {
                    key: entry.bundle.clone(),
                    message,
                })?;
            h.add_node(spec);
        }
        for entry in &doc.edges {
            let sensing = lookup(&self.sensing, "sensing function", &entry.sensing)?;
            let task_param = lookup(
                &self.task_params,
                "task-parameter function",
                &entry.task_param,
            )?;
            let context = lookup(&self.contexts, "context function", &entry.context)?;
            h.add_edge(
                EdgeTriple::new(entry.lower.clone(), entry.upper.clone())
                    .with_shared(sensing, task_param, context),
            );
        }
        Ok(h)
    }
}

fn lookup<T: Clone>(
    map: &BTreeMap<String, T>,
    kind: &'static str,
    key: &Option<String>,
) -> Result<Option<T>, DocumentError> {
    match key {
        None => Ok(None),
        Some(k) => map
            .get(k)
            .cloned()
            .map(Some)
            .ok_or_else(|| DocumentError::UnknownKey {
                kind,
                key: k.clone(),
            }),
    }
}
