use std::path::PathBuf;

use cogh_core::bp::{encode, world_id_for, CausalTree, TreeDocument};
use cogh_core::kernel::document::{parse_hierarchy_document, DocumentError, Registry};
use cogh_core::kernel::{validate, Hierarchy, ValidationReport};
use cogh_core::servo::register_servo;
use serde_json::{json, Value as Json};

use crate::{read_file, InputError, Outcome};

#[derive(clap::Args)]
pub struct Args {
    /// JSON hierarchy document (`world_node`, `nodes`, `edges`) or causal
    /// tree document (`processors`)
    pub path: PathBuf,
    /// Print the report as JSON
    #[arg(long)]
    pub json: bool,
}

fn located(e: serde_json::Error) -> InputError {
    InputError(format!(
        "parse error at line {}, column {}: {e}",
        e.line(),
        e.column()
    ))
}

/// Registry with the generic and servo operators.
pub fn registry() -> Registry {
    let mut r = Registry::with_builtins();
    register_servo(&mut r);
    r
}

enum Checked {
    Hierarchy(Hierarchy),
    /// the tree itself was rejected
    BadTree(String),
    Tree(CausalTree),
}

fn load(text: &str) -> Result<Checked, InputError> {
    let raw: Json = serde_json::from_str(text).map_err(located)?;
    let is_tree = raw.get("processors").is_some();
    let is_hierarchy = raw.get("world_node").is_some();
    if is_tree {
        let doc: TreeDocument = serde_json::from_str(text).map_err(located)?;
        return Ok(match CausalTree::from_document(&doc) {
            Ok(tree) => Checked::Tree(tree),
            Err(e) => Checked::BadTree(e.to_string()),
        });
    }
    if !is_hierarchy {
        return Err(InputError(
            "not a hierarchy document (no `world_node`) or tree document (no `processors`)".into(),
        ));
    }
    let doc = parse_hierarchy_document(text).map_err(|e| match e {
        DocumentError::Parse {
            line,
            column,
            message,
        } => InputError(format!(
            "parse error at line {line}, column {column}: {message}"
        )),
        other => InputError(other.to_string()),
    })?;
    registry()
        .build(&doc)
        .map(Checked::Hierarchy)
        .map_err(|e| InputError(e.to_string()))
}

fn print(
    args: &Args,
    kind: &str,
    summary: &str,
    report: Option<&ValidationReport>,
    error: Option<&str>,
) {
    let valid = error.is_none() && report.is_none_or(|r| r.is_valid());
    if args.json {
        let out = json!({
            "path": args.path.display().to_string(),
            "kind": kind,
            "valid": valid,
            "error": error,
            "violations": report.map(|r| &r.violations),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("report serializes")
        );
        return;
    }
    if let Some(e) = error {
        println!("invalid {kind} {}: {e}", args.path.display());
        return;
    }
    let report = report.expect("report when no error");
    if report.is_valid() {
        println!("valid {kind} {} ({summary})", args.path.display());
    } else {
        println!("invalid {kind} {}:", args.path.display());
        for v in &report.violations {
            println!("  - {v}");
        }
    }
}

pub fn run(args: &Args) -> Outcome {
    let text = read_file(&args.path)?;
    match load(&text)? {
        Checked::Hierarchy(h) => {
            let report = validate(&h);
            let summary = format!("{} nodes, {} edges", h.nodes().len() + 1, h.edges().len());
            print(args, "hierarchy", &summary, Some(&report), None);
            Ok(report.is_valid())
        }
        Checked::BadTree(e) => {
            print(args, "tree", "", None, Some(&e));
            Ok(false)
        }
        Checked::Tree(tree) => {
            let h = encode(&tree, &world_id_for(&tree));
            let report = validate(&h);
            let summary = format!("{} processors, depth {}", tree.len(), tree.depth());
            print(args, "tree", &summary, Some(&report), None);
            Ok(report.is_valid())
        }
    }
}
