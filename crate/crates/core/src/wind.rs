//! Discrete-time stochastic wind shared by every molecule and receiver.
//!
//! Velocities are i.i.d. Gaussian per axis in x and y with no z wind, held
//! constant over each channel sample (zero-order hold). The channel only ever
//! consumes the cumulative displacement, so the path is generated once per
//! scenario and shared read-only.

use crate::error::{GlvError, Result};
use crate::rng::substream;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindModel {
    /// Mean velocity (x, y) in m/s.
    pub mean_mps: [f64; 2],
    /// Standard deviation (x, y) in m/s.
    pub std_mps: [f64; 2],
    pub sample_rate_hz: f64,
}

impl WindModel {
    /// The tabulated regimes: directed, non-directed strong, non-directed weak.
    pub fn regime(name: &str, sample_rate_hz: f64) -> Result<Self> {
        let (mean, std) = match name {
            "directed" => ([0.2, 0.0], [0.01, 0.01]),
            "nondirected_strong" => ([0.0, 0.0], [0.5, 0.5]),
            "nondirected_weak" => ([0.0, 0.0], [0.01, 0.01]),
            other => {
                return Err(GlvError::Config(format!(
                    "unknown wind regime {other:?}; expected directed, nondirected_strong, or nondirected_weak"
                )))
            }
        };
        Ok(Self { mean_mps: mean, std_mps: std, sample_rate_hz })
    }

    pub fn validate(&self) -> Result<()> {
        if self.std_mps.iter().any(|&s| s < 0.0) {
            return Err(GlvError::Parameter("wind std must be >= 0".into()));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(GlvError::Parameter("wind sample rate must be > 0".into()));
        }
        Ok(())
    }
}

/// One seeded realization of the wind process.
#[derive(Debug, Clone)]
pub struct WindPath {
    /// Velocity per sample, z component identically zero.
    pub velocities: Vec<[f64; 3]>,
    /// W[n] = Σ_{k<n} v[k]·Δt; same length as `velocities`, W[0] = 0.
    pub cumulative_displacement: Vec<[f64; 3]>,
    pub sample_rate_hz: f64,
}

/// Generate a wind path from the "wind" substream of `master_seed`.
pub fn sample_wind_path(model: &WindModel, master_seed: u64, n_samples: usize) -> Result<WindPath> {
    model.validate()?;
    if n_samples == 0 {
        return Err(GlvError::Parameter("n_samples must be >= 1".into()));
    }
    let mut rng = substream(master_seed, "wind");
    let dt = 1.0 / model.sample_rate_hz;
    let mut velocities = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let mut v = [0.0f64; 3];
        for axis in 0..2 {
            v[axis] = if model.std_mps[axis] > 0.0 {
                let dist = Normal::new(model.mean_mps[axis], model.std_mps[axis])
                    .map_err(|e| GlvError::Parameter(e.to_string()))?;
                dist.sample(&mut rng)
            } else {
                model.mean_mps[axis]
            };
        }
        velocities.push(v);
    }
    let mut cumulative_displacement = Vec::with_capacity(n_samples);
    let mut w = [0.0f64; 3];
    for v in &velocities {
        cumulative_displacement.push(w);
        for axis in 0..3 {
            w[axis] += v[axis] * dt;
        }
    }
    Ok(WindPath { velocities, cumulative_displacement, sample_rate_hz: model.sample_rate_hz })
}
