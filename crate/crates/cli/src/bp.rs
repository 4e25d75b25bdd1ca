use std::path::PathBuf;

use cogh_core::bp::fixtures::the_cat;
use cogh_core::bp::random::{random_tree, RandomTreeConfig};
use cogh_core::bp::{
    equivalence_check, hierarchy_beliefs, initial_active, CausalTree, EquivalenceReport,
    Outcome as Status, TreeDocument,
};
use cogh_core::servo::round_sig;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{read_file, write_file, InputError, Outcome};

#[derive(clap::Args)]
pub struct Args {
    /// Causal-tree document; the built-in THE/CAT tree when omitted
    pub path: Option<PathBuf>,
    /// Largest accepted deviation from the reference beliefs
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Check this many random trees instead of a document
    #[arg(long, value_name = "N", conflicts_with = "path")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 3)]
    pub max_branch: usize,
    #[arg(long, default_value_t = 2)]
    pub min_dim: usize,
    #[arg(long, default_value_t = 5)]
    pub max_dim: usize,
    /// Write per-tree reports as JSON
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

fn trees(args: &Args) -> Result<Vec<(String, CausalTree)>, InputError> {
    if let Some(n) = args.random {
        if args.min_dim < 2 || args.max_dim < args.min_dim {
            return Err(InputError("need 2 <= --min-dim <= --max-dim".into()));
        }
        let cfg = RandomTreeConfig {
            max_depth: args.max_depth,
            max_branch: args.max_branch,
            min_dim: args.min_dim,
            max_dim: args.max_dim,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        return Ok((0..n)
            .map(|i| (format!("tree {i}"), random_tree(&mut rng, &cfg)))
            .collect());
    }
    match &args.path {
        None => Ok(vec![("THE/CAT".into(), the_cat())]),
        Some(path) => {
            let text = read_file(path)?;
            let doc: TreeDocument = serde_json::from_str(&text).map_err(|e| {
                InputError(format!(
                    "parse error at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ))
            })?;
            let tree = CausalTree::from_document(&doc)
                .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Ok(vec![(path.display().to_string(), tree)])
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| round_sig(*x, 12).to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn print_beliefs(tree: &CausalTree, report: &EquivalenceReport) {
    let Ok(mut ah) = initial_active(tree) else {
        return;
    };
    for _ in 0..report.ticks.max(1) {
        match ah.tick() {
            Ok(next) => ah = next,
            Err(_) => return,
        }
    }
    if let Ok(table) = hierarchy_beliefs(&ah, tree) {
        for p in tree.processors() {
            match table.get(&p.id) {
                Some(b) => println!("  BEL({}) = {}", p.id, fmt_vec(b)),
                None => println!("  BEL({}) undefined", p.id),
            }
        }
    }
}

pub fn run(args: &Args) -> Outcome {
    if args.tolerance.is_nan() || args.tolerance < 0.0 {
        return Err(InputError(
            "--tolerance must be a non-negative number".into(),
        ));
    }
    let trees = trees(args)?;
    let single = args.random.is_none();
    let mut reports = Vec::with_capacity(trees.len());
    let mut passed = 0;
    for (label, tree) in &trees {
        let r = equivalence_check(tree, args.tolerance);
        log::info!("{label}: {:?}", r.outcome);
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        let why = match &r.outcome {
            Status::Match | Status::ToleranceExceeded => String::new(),
            Status::Degenerate { detail } => format!(", degenerate evidence: {detail}"),
            Status::NoFixpoint { change } => format!(", no fixed point (last change {change:.3e})"),
            Status::Kernel { detail } => format!(", kernel error: {detail}"),
        };
        println!(
            "{label}: {verdict} max deviation {:.3e} (processors {}, depth {}, ticks {}){why}",
            r.max_deviation, r.nodes, r.depth, r.ticks
        );
        if single {
            print_beliefs(tree, &r);
        }
        passed += usize::from(r.passed);
        reports.push(json!({ "tree": label, "report": r }));
    }
    println!(
        "{passed}/{} trees pass at tolerance {:e}",
        trees.len(),
        args.tolerance
    );
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
        write_file(path, text.as_bytes())?;
    }
    Ok(passed == trees.len())
}
