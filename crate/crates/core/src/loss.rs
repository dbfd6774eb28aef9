//! Receiver-side random multiplicative loss.
//!
//! Each air-concentration sample is scaled by an i.i.d. Beta variate whose
//! distribution is moment-matched to a configured mean and coefficient of
//! variation. Each (receiver, molecule) pair draws from its own named
//! substream so toggling one never perturbs another.

use crate::error::{GlvError, Result};
use crate::rng::substream;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossModel {
    /// Mean of the multiplicative factor, in (0, 1].
    pub mean: f64,
    /// Coefficient of variation; 0 degenerates to a deterministic multiplier.
    pub cv: f64,
}

impl LossModel {
    pub fn validate(&self) -> Result<()> {
        beta_params_from_mean_cv(self.mean, self.cv).map(|_| ())
    }
}

/// Moment-matched Beta parameters, or `None` for the deterministic cv = 0 case.
///
/// σ² = (mean·cv)², ν = mean(1−mean)/σ² − 1, α = mean·ν, β = (1−mean)·ν.
pub fn beta_params_from_mean_cv(mean: f64, cv: f64) -> Result<Option<(f64, f64)>> {
    if !(mean > 0.0 && mean <= 1.0) {
        return Err(GlvError::Parameter(format!(
            "loss mean must be in (0, 1], got {mean}"
        )));
    }
    if cv < 0.0 {
        return Err(GlvError::Parameter(format!("loss cv must be >= 0, got {cv}")));
    }
    if cv == 0.0 {
        return Ok(None);
    }
    // Beta feasibility: cv² < (1 − mean)/mean, otherwise α or β would be ≤ 0.
    let bound = (1.0 - mean) / mean;
    if cv * cv >= bound {
        return Err(GlvError::Parameter(format!(
            "infeasible Beta loss: cv² = {} must be < (1 − mean)/mean = {bound}",
            cv * cv
        )));
    }
    let variance = (mean * cv).powi(2);
    let nu = mean * (1.0 - mean) / variance - 1.0;
    Ok(Some((mean * nu, (1.0 - mean) * nu)))
}

/// Multiply a trace by per-sample Beta loss factors from the named substream.
pub fn apply_loss(
    trace: &[f64],
    model: &LossModel,
    master_seed: u64,
    stream_name: &str,
) -> Result<Vec<f64>> {
    match beta_params_from_mean_cv(model.mean, model.cv)? {
        None => Ok(trace.iter().map(|c| c * model.mean).collect()),
        Some((alpha, beta)) => {
            let dist = Beta::new(alpha, beta)
                .map_err(|e| GlvError::Parameter(format!("beta sampling: {e}")))?;
            let mut rng = substream(master_seed, stream_name);
            Ok(trace
                .iter()
                .map(|c| {
                    let factor: f64 = dist.sample(&mut rng);
                    c * factor
                })
                .collect())
        }
    }
}
