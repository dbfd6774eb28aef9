//! Diffusion–advection channel.
//!
//! With spatially uniform time-varying wind the point-source solution is the
//! free-space diffusion Gaussian recentered by the cumulative wind
//! displacement between emission and observation. The receiver trace is the
//! superposition of one kernel per emitted source sample, which is exact and
//! mesh-free at O(N²) cost per receiver.
//!
//! A Monte Carlo random-walk estimator of the same field lives here as an
//! independent validation path; it never shares code with the analytic route.

use crate::error::{GlvError, Result};
use crate::rng::substream;
use crate::wind::WindPath;
use rand_distr::{Distribution, StandardNormal};

/// Minimum Tx–Rx separation; closer receivers sit in the Δt→0 singularity.
pub const EPSILON_GEOM_M: f64 = 1e-3;

/// Relative cutoff for the optional source-sample truncation.
const TRUNCATION_REL: f64 = 1e-18;

/// Strided quadrature over the old part of the source history.
///
/// Source samples older than `lag_threshold_s` are grouped into runs of
/// `stride` consecutive emitted samples; each run contributes once with its
/// summed mass and the run midpoint's release time and displacement. The
/// kernel varies slowly at long lags, so the grouping error stays small while
/// the superposition cost drops by the stride. `stride = 1` reproduces the
/// reference path exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarDecimation {
    pub lag_threshold_s: f64,
    pub stride: usize,
}

#[derive(Debug, Clone)]
pub struct ChannelConfig {
    pub tx_position: [f64; 3],
    pub sample_rate_hz: f64,
    pub horizon_s: f64,
    /// Skip source samples whose kernel contribution is below 1e-18 of the
    /// running maximum. Off by default; bit-identical output is only
    /// guaranteed with it off.
    pub truncation: bool,
    /// Far-history decimation; `None` keeps the exact O(N²) superposition.
    pub far_decimation: Option<FarDecimation>,
}

impl ChannelConfig {
    pub fn n_samples(&self) -> usize {
        (self.horizon_s * self.sample_rate_hz).round() as usize
    }

    fn validate(&self, diffusivity: f64) -> Result<()> {
        if !(diffusivity > 0.0) {
            return Err(GlvError::Parameter(format!("diffusivity must be > 0, got {diffusivity}")));
        }
        if !(self.horizon_s > 0.0) || !(self.sample_rate_hz > 0.0) {
            return Err(GlvError::Parameter("horizon and sample rate must be > 0".into()));
        }
        if let Some(fd) = &self.far_decimation {
            if !(fd.lag_threshold_s > 0.0) || fd.stride == 0 {
                return Err(GlvError::Parameter(
                    "far decimation needs lag_threshold_s > 0 and stride >= 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Free-space Gaussian kernel: concentration per unit released mass (1/m³).
///
/// `offset` is the receiver position relative to the recentered source,
/// x_rx − x_tx − (W(t) − W(τ)).
pub fn impulse_response(delta_t: f64, offset: [f64; 3], diffusivity: f64) -> Result<f64> {
    if !(delta_t > 0.0) {
        return Err(GlvError::Domain(format!("delta_t must be > 0, got {delta_t}")));
    }
    let four_dt = 4.0 * diffusivity * delta_t;
    let r2 = offset[0] * offset[0] + offset[1] * offset[1] + offset[2] * offset[2];
    Ok((std::f64::consts::PI * four_dt).powf(-1.5) * (-r2 / four_dt).exp())
}

/// Air concentration (mol/m³) of one molecule at one receiver over the
/// horizon, by superposing the kernel of every emitted source sample.
pub fn propagate(
    emission: &[f64],
    wind: &WindPath,
    diffusivity: f64,
    cfg: &ChannelConfig,
    rx_position: [f64; 3],
) -> Result<Vec<f64>> {
    cfg.validate(diffusivity)?;
    if (wind.sample_rate_hz - cfg.sample_rate_hz).abs() > 1e-12 {
        return Err(GlvError::Parameter("wind and channel sample rates differ".into()));
    }
    let n_out = cfg.n_samples();
    if wind.cumulative_displacement.len() < n_out {
        return Err(GlvError::Parameter(format!(
            "wind path too short: {} samples for a {}-sample horizon",
            wind.cumulative_displacement.len(),
            n_out
        )));
    }
    let sep: f64 = (0..3)
        .map(|i| (rx_position[i] - cfg.tx_position[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    if sep <= EPSILON_GEOM_M {
        return Err(GlvError::Geometry(format!(
            "receiver within {EPSILON_GEOM_M} m of the transmitter (separation {sep} m)"
        )));
    }

    let dt = 1.0 / cfg.sample_rate_hz;
    // Sparse source list: only emitted samples enter the superposition.
    struct Source {
        k: usize,
        mass: f64,
        ln_mass: f64,
        w: [f64; 3],
    }
    let sources: Vec<Source> = emission
        .iter()
        .enumerate()
        .take(n_out)
        .filter(|(_, &q)| q > 0.0)
        .map(|(k, &q)| Source {
            k,
            mass: q * dt,
            ln_mass: (q * dt).ln(),
            w: wind.cumulative_displacement[k],
        })
        .collect();

    // Grouped view of the same list for the decimated far-history path.
    struct Group {
        start: usize,
        k_last: usize,
        k_rep: usize,
        mass: f64,
        ln_mass: f64,
        w_rep: [f64; 3],
    }
    let (groups, lag_threshold): (Vec<Group>, usize) = match &cfg.far_decimation {
        None => (Vec::new(), usize::MAX),
        Some(fd) => {
            let threshold = (fd.lag_threshold_s * cfg.sample_rate_hz).round().max(1.0) as usize;
            let groups = sources
                .chunks(fd.stride)
                .scan(0usize, |start, chunk| {
                    let first = *start;
                    *start += chunk.len();
                    let mass: f64 = chunk.iter().map(|s| s.mass).sum();
                    // representative: the emitted sample nearest the group's
                    // mass centroid (a fixed midpoint is biased across gaps)
                    let centroid =
                        chunk.iter().map(|s| s.mass * s.k as f64).sum::<f64>() / mass;
                    let rep = chunk
                        .iter()
                        .min_by(|a, b| {
                            (a.k as f64 - centroid)
                                .abs()
                                .partial_cmp(&(b.k as f64 - centroid).abs())
                                .unwrap()
                        })
                        .unwrap();
                    Some(Group {
                        start: first,
                        k_last: chunk.last().unwrap().k,
                        k_rep: rep.k,
                        mass,
                        ln_mass: mass.ln(),
                        w_rep: rep.w,
                    })
                })
                .collect();
            (groups, threshold)
        }
    };

    // Per-lag tables so the inner loop is mults, one exp, and a compare.
    let mut coeff = vec![0.0f64; n_out];
    let mut inv_four_dt = vec![0.0f64; n_out];
    let mut ln_coeff = vec![0.0f64; n_out];
    for lag in 1..n_out {
        let four_dt = 4.0 * diffusivity * lag as f64 * dt;
        coeff[lag] = (std::f64::consts::PI * four_dt).powf(-1.5);
        inv_four_dt[lag] = 1.0 / four_dt;
        ln_coeff[lag] = coeff[lag].ln();
    }

    let w = &wind.cumulative_displacement;
    let mut out = vec![0.0f64; n_out];
    // index of the first group not entirely past the lag threshold; monotone in n
    let mut far_end = 0usize;
    for n in 0..n_out {
        let base = [
            rx_position[0] - cfg.tx_position[0] - w[n][0],
            rx_position[1] - cfg.tx_position[1] - w[n][1],
            rx_position[2] - cfg.tx_position[2] - w[n][2],
        ];
        let mut acc = 0.0f64;
        let mut running_max = 0.0f64;
        let mut ln_cut = f64::NEG_INFINITY;
        let far_boundary = n.saturating_sub(lag_threshold);
        while far_end < groups.len() && groups[far_end].k_last < far_boundary {
            far_end += 1;
        }
        for g in &groups[..far_end] {
            let lag = n - g.k_rep;
            let dx = base[0] + g.w_rep[0];
            let dy = base[1] + g.w_rep[1];
            let dz = base[2] + g.w_rep[2];
            let arg = (dx * dx + dy * dy + dz * dz) * inv_four_dt[lag];
            if cfg.truncation && ln_coeff[lag] + g.ln_mass - arg < ln_cut {
                continue;
            }
            let contrib = g.mass * coeff[lag] * (-arg).exp();
            acc += contrib;
            if cfg.truncation && contrib > running_max {
                running_max = contrib;
                ln_cut = (TRUNCATION_REL * running_max).ln();
            }
        }
        let exact_from = if cfg.far_decimation.is_some() {
            groups.get(far_end).map_or(sources.len(), |g| g.start)
        } else {
            0
        };
        for s in &sources[exact_from..] {
            if s.k >= n {
                break; // causality: emission at or after observation contributes zero
            }
            let lag = n - s.k;
            let dx = base[0] + s.w[0];
            let dy = base[1] + s.w[1];
            let dz = base[2] + s.w[2];
            let arg = (dx * dx + dy * dy + dz * dz) * inv_four_dt[lag];
            if cfg.truncation && ln_coeff[lag] + s.ln_mass - arg < ln_cut {
                continue;
            }
            let contrib = s.mass * coeff[lag] * (-arg).exp();
            acc += contrib;
            if cfg.truncation && contrib > running_max {
                running_max = contrib;
                ln_cut = (TRUNCATION_REL * running_max).ln();
            }
        }
        debug_assert!(acc >= 0.0, "negative concentration is a bug");
        out[n] = acc;
    }
    Ok(out)
}

/// Monte Carlo estimate of the trace at one receiver, with standard errors.
#[derive(Debug, Clone)]
pub struct ParticleEstimate {
    pub times_s: Vec<f64>,
    pub concentration: Vec<f64>,
    pub standard_error: Vec<f64>,
}

/// Random-walk particle estimator of the channel output.
///
/// Particles are released over the emission profile in proportion to q(t) and
/// advance with the shared wind plus Brownian steps of the walk step `dt_walk`
/// (a multiple of the channel step is not required; wind is read with
/// zero-order hold). Concentration at a probe time is the particle count in a
/// sphere around the receiver divided by the sphere volume, scaled by the
/// mass each particle carries.
pub fn particle_oracle(
    emission: &[f64],
    wind: &WindPath,
    diffusivity: f64,
    cfg: &ChannelConfig,
    rx_position: [f64; 3],
    n_particles: usize,
    kernel_radius: f64,
    probe_times_s: &[f64],
    dt_walk: f64,
    master_seed: u64,
    stream_name: &str,
) -> Result<ParticleEstimate> {
    cfg.validate(diffusivity)?;
    if n_particles < 10_000 {
        return Err(GlvError::Parameter(format!(
            "need at least 1e4 particles, got {n_particles}"
        )));
    }
    if !(kernel_radius > 0.0) {
        return Err(GlvError::Parameter("kernel_radius must be > 0".into()));
    }
    if !(dt_walk > 0.0) {
        return Err(GlvError::Parameter("dt_walk must be > 0".into()));
    }
    let dt = 1.0 / cfg.sample_rate_hz;
    let total_mass: f64 = emission.iter().map(|q| q * dt).sum();
    if total_mass <= 0.0 {
        let zeros = vec![0.0; probe_times_s.len()];
        return Ok(ParticleEstimate {
            times_s: probe_times_s.to_vec(),
            concentration: zeros.clone(),
            standard_error: zeros,
        });
    }
    let mass_per_particle = total_mass / n_particles as f64;

    // Release times sampled from the emission profile treated as a density.
    let cumulative: Vec<f64> = emission
        .iter()
        .scan(0.0, |acc, &q| {
            *acc += q * dt;
            Some(*acc)
        })
        .collect();

    let mut probes: Vec<f64> = probe_times_s.to_vec();
    probes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let horizon = probes.last().copied().unwrap_or(0.0);
    let n_steps = (horizon / dt_walk).ceil() as usize;

    let mut rng = substream(master_seed, stream_name);
    let step_sigma = (2.0 * diffusivity * dt_walk).sqrt();
    let sphere_volume = 4.0 / 3.0 * std::f64::consts::PI * kernel_radius.powi(3);
    let r2_kernel = kernel_radius * kernel_radius;

    let mut counts = vec![0u64; probes.len()];
    for p in 0..n_particles {
        // Stratified release: particle p carries mass quantile (p + 0.5)/N.
        let target = (p as f64 + 0.5) / n_particles as f64 * total_mass;
        let idx = cumulative.partition_point(|&c| c < target);
        let release_t = idx as f64 * dt;

        let mut pos = cfg.tx_position;
        let mut t = release_t;
        let mut probe_idx = probes.partition_point(|&pt| pt < release_t);
        let max_iters = n_steps + 2 * probes.len() + 4;
        for _ in 0..max_iters {
            if probe_idx >= probes.len() {
                break;
            }
            let step = dt_walk.min(probes[probe_idx] - t).max(0.0);
            if step > 0.0 {
                let wind_idx =
                    ((t * wind.sample_rate_hz) as usize).min(wind.velocities.len() - 1);
                let v = wind.velocities[wind_idx];
                let sigma = if step == dt_walk {
                    step_sigma
                } else {
                    (2.0 * diffusivity * step).sqrt()
                };
                for axis in 0..3 {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    pos[axis] += v[axis] * step + sigma * xi;
                }
                t += step;
            }
            while probe_idx < probes.len() && t + 1e-12 >= probes[probe_idx] {
                let d2: f64 =
                    (0..3).map(|i| (pos[i] - rx_position[i]).powi(2)).sum();
                if d2 <= r2_kernel {
                    counts[probe_idx] += 1;
                }
                probe_idx += 1;
            }
        }
    }

    let n = n_particles as f64;
    let mut concentration = Vec::with_capacity(probes.len());
    let mut standard_error = Vec::with_capacity(probes.len());
    for &c in &counts {
        let p_hat = c as f64 / n;
        concentration.push(p_hat * n * mass_per_particle / sphere_volume);
        // Binomial standard error on the count, propagated to concentration.
        let se_count = (n * p_hat * (1.0 - p_hat)).sqrt();
        standard_error.push(se_count * mass_per_particle / sphere_volume);
    }
    Ok(ParticleEstimate { times_s: probes, concentration, standard_error })
}
