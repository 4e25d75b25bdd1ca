use std::path::PathBuf;

use cogh_core::servo::{run_experiment, Mode, ServoParams};

use crate::{read_file, write_file, InputError, Outcome};

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Context,
    #[value(name = "no_context", alias = "no-context")]
    NoContext,
    Both,
}

#[derive(clap::Args)]
pub struct Args {
    /// JSON file with any of the parameter fields; flags override it
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Acceleration along the incline, m/s²
    #[arg(long)]
    pub k: Option<f64>,
    /// Time step, s
    #[arg(long)]
    pub dt: Option<f64>,
    /// Episode length, s
    #[arg(long)]
    pub duration: Option<f64>,
    /// Measurement noise standard deviation, m
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    #[arg(long)]
    pub kalman_gain: Option<f64>,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
    #[arg(long)]
    pub trials: Option<usize>,
    /// First seed; trial i uses seed + i
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-trial CSV (`trial,mode,mean_error`)
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Summary JSON
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
}

fn params(args: &Args) -> Result<ServoParams, InputError> {
    let mut p = match &args.config {
        Some(path) => serde_json::from_str(&read_file(path)?).map_err(|e| {
            InputError(format!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?,
        None => ServoParams::default(),
    };
    macro_rules! set {
        ($($f:ident),*) => { $( if let Some(v) = args.$f { p.$f = v; } )* };
    }
    set!(k, dt, duration, noise_sigma, kalman_gain, trials, seed);
    p.validate().map_err(|e| InputError(e.to_string()))?;
    Ok(p)
}

pub fn run(args: &Args) -> Outcome {
    let p = params(args)?;
    let modes: Vec<Mode> = match args.mode {
        ModeArg::Context => vec![Mode::Context],
        ModeArg::NoContext => vec![Mode::NoContext],
        ModeArg::Both => Mode::ALL.to_vec(),
    };
    log::info!("servo: {p:?}, modes {modes:?}");
    let summary = run_experiment(&p, &modes).map_err(|e| InputError(e.to_string()))?;

    if let Some(path) = &args.csv {
        let mut buf = Vec::new();
        summary
            .write_csv(&mut buf)
            .map_err(|e| InputError(e.to_string()))?;
        write_file(path, &buf)?;
    }
    let json = serde_json::to_string_pretty(&summary.to_json()).expect("summary serializes");
    if let Some(path) = &args.summary {
        write_file(path, format!("{json}\n").as_bytes())?;
    }
    println!("{json}");

    for (mode, s) in &summary.stats {
        println!(
            "{mode}: mean error {:.4} m (std {:.4}, n {})",
            s.mean, s.std, s.n
        );
    }
    if let Some(r) = summary.reduction_percent {
        println!("reduction: {r:.2}%");
    }
    match summary.context_dominates() {
        Some(true) => {
            println!("context dominance: holds on every trial");
            Ok(true)
        }
        Some(false) => {
            println!("context dominance: FAILS on at least one trial");
            Ok(false)
        }
        None => Ok(true),
    }
}
