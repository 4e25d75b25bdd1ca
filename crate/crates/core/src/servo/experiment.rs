use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::episode::run_episode;
use super::{Mode, ServoError, ServoParams};

/// One row of the per-trial CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub mode: Mode,
    pub mean_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeStats {
    pub mean: f64,
    /// sample standard deviation (0 for a single trial)
    pub std: f64,
    pub n: usize,
}

impl ModeStats {
    fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        ModeStats { mean, std, n }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub trials: Vec<TrialRecord>,
    pub stats: BTreeMap<Mode, ModeStats>,
    /// `100·(1 − context/no_context)`, when both modes ran
    pub reduction_percent: Option<f64>,
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

impl ExperimentSummary {
    pub fn errors(&self, mode: Mode) -> Vec<f64> {
        self.trials
            .iter()
            .filter(|r| r.mode == mode)
            .map(|r| r.mean_error)
            .collect()
    }

    /// Whether context beat no-context on every trial. `None` unless both
    /// modes ran.
    pub fn context_dominates(&self) -> Option<bool> {
        let ctx = self.errors(Mode::Context);
        let plain = self.errors(Mode::NoContext);
        if ctx.is_empty() || plain.is_empty() {
            return None;
        }
        Some(ctx.iter().zip(&plain).all(|(c, p)| c < p))
    }

    /// `{ mode: {mean, std, n}, reduction_percent }`, numbers to 12
    /// significant digits.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (mode, s) in &self.stats {
            map.insert(
                mode.to_string(),
                serde_json::json!({
                    "mean": round_sig(s.mean, 12),
                    "std": round_sig(s.std, 12),
                    "n": s.n,
                }),
            );
        }
        map.insert(
            "reduction_percent".into(),
            serde_json::json!(self.reduction_percent.map(|r| round_sig(r, 12))),
        );
        serde_json::Value::Object(map)
    }

    /// Columns `trial,mode,mean_error`, one row per episode.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ServoError> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.trials {
            w.serialize(TrialRecord {
                mean_error: round_sig(r.mean_error, 12),
                ..r.clone()
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `params.trials` episodes per mode with seeds `seed, seed+1, …`;
/// `params.mode` is ignored in favour of `modes`.
pub fn run_experiment(
    params: &ServoParams,
    modes: &[Mode],
) -> Result<ExperimentSummary, ServoError> {
    params.validate()?;
    let mut trials = Vec::new();
    let mut stats = BTreeMap::new();
    for &mode in modes {
        let mut errors = Vec::with_capacity(params.trials);
        for i in 0..params.trials {
            let p = params
                .with_mode(mode)
                .with_seed(params.seed.wrapping_add(i as u64));
            let ep = run_episode(&p)?;
            errors.push(ep.mean_error);
            trials.push(TrialRecord {
                trial: i,
                mode,
                mean_error: ep.mean_error,
            });
        }
        stats.insert(mode, ModeStats::of(&errors));
    }
    let reduction_percent = match (stats.get(&Mode::Context), stats.get(&Mode::NoContext)) {
        (Some(c), Some(n)) => Some(100.0 * (1.0 - c.mean / n.mean)),
        _ => None,
    };
    Ok(ExperimentSummary {
        trials,
        stats,
        reduction_percent,
    })
}
