//! The experiment campaigns built on the pipeline: an end-to-end
//! point-to-point run, linearity pilots, frequency response, the enzyme
//! sensitivity heatmap, distance sweeps, population alarm maps, and the
//! single-GLV carbon-budget comparison.
//!
//! Every campaign is a pure function of (config, master seed); independent
//! cells run through `exec::map_items` keyed by index, so output is identical
//! for any worker count.

mod alarm_map;
mod distance;
mod frequency;
mod linearity;
mod point_to_point;
mod single_glv;

pub use alarm_map::{run_alarm_map, AlarmCell, AlarmMapResult};
pub use distance::{run_distance_sweep, DistancePoint};
pub use frequency::{run_frequency_response, FrequencyPoint};
pub use linearity::{
    run_linearity_pilot, run_sensitivity_heatmap, PilotCell, PilotMode, ScaledSet, SensitivityCell,
};
pub use point_to_point::{run_point_to_point, PointToPointResult};
pub use single_glv::{run_single_glv_comparison, SingleGlvResult};

use crate::channel::{propagate, ChannelConfig};
use crate::config::ScenarioConfig;
use crate::error::{GlvError, Result};
use crate::exec::ExecMode;
use crate::loss::apply_loss;
use crate::molecule::{Molecule, PerMolecule};
use crate::output::CsvTable;
use crate::receiver::{integrate_with, IntegrationSummary, ReceiverParams, ReceiverState};
use crate::rng::substream;
use crate::transmitter::{build_emission_signal, parse_bits, random_bits, EmissionConfig, EmissionSignal};
use crate::wind::{sample_wind_path, WindModel, WindPath};

/// Bit sequence for a campaign: the configured string, or random bits sized
/// to cover the horizon when none is given.
pub fn campaign_bits(cfg: &ScenarioConfig, horizon_s: f64) -> Result<Vec<u8>> {
    if !cfg.emission.bits.is_empty() {
        return parse_bits(&cfg.emission.bits);
    }
    let n = if cfg.emission.n_random_bits > 0 {
        cfg.emission.n_random_bits
    } else {
        (horizon_s / cfg.timing.symbol_period_s).ceil().max(1.0) as usize
    };
    let mut rng = substream(cfg.master_seed, "bits");
    Ok(random_bits(&mut rng, n))
}

/// Pulse train covering the horizon with the given per-molecule amplitudes.
pub fn campaign_emission(
    cfg: &ScenarioConfig,
    horizon_s: f64,
    amplitudes: PerMolecule<f64>,
) -> Result<EmissionSignal> {
    build_emission_signal(&EmissionConfig {
        bit_sequence: campaign_bits(cfg, horizon_s)?,
        symbol_period_s: cfg.timing.symbol_period_s,
        amplitudes,
        sample_rate_hz: cfg.timing.sample_rate_hz,
    })
}

/// Shared wind realization long enough for the channel horizon.
pub fn campaign_wind(
    cfg: &ScenarioConfig,
    model: &WindModel,
    chan: &ChannelConfig,
) -> Result<WindPath> {
    sample_wind_path(model, cfg.master_seed, chan.n_samples())
}

/// Per-molecule receiver input at one receiver: channel superposition, then
/// the Beta loss when enabled. `loss_suffix` distinguishes receivers (e.g.
/// ":rx7"); the empty suffix shares one loss stream per molecule.
pub fn receiver_input(
    cfg: &ScenarioConfig,
    emission: &EmissionSignal,
    wind: &WindPath,
    chan: &ChannelConfig,
    rx_position: [f64; 3],
    loss_suffix: &str,
) -> Result<PerMolecule<Vec<f64>>> {
    let diffusivities = cfg.diffusivities();
    let loss = cfg.loss_model();
    let run = |m: Molecule| -> Result<Vec<f64>> {
        let trace =
            propagate(emission.samples.get(m), wind, *diffusivities.get(m), chan, rx_position)?;
        match &loss {
            None => Ok(trace),
            Some(model) => apply_loss(
                &trace,
                model,
                cfg.master_seed,
                &format!("loss:{}{}", m.tag(), loss_suffix),
            ),
        }
    };
    Ok(PerMolecule::new(run(Molecule::Hal)?, run(Molecule::Hol)?, run(Molecule::Hac)?))
}

/// Streaming outcome of one receiver integration: first alarm and first
/// nonlinearity crossing, without retaining the trajectory.
#[derive(Debug, Clone, Copy)]
pub struct LinkOutcome {
    pub alarm_time_s: Option<f64>,
    pub linearity_time_s: Option<f64>,
    pub summary: IntegrationSummary,
}

pub fn integrate_for_times(
    traces: &PerMolecule<Vec<f64>>,
    params: &ReceiverParams,
    sample_rate_hz: f64,
    threshold_micromolar: f64,
    mut cv_sink: Option<&mut Vec<f64>>,
) -> Result<LinkOutcome> {
    let mut alarm = None;
    let mut lin = None;
    let summary =
        integrate_with(traces, params, sample_rate_hz, ReceiverState::default(), |rec| {
            if alarm.is_none() && rec.state.c_v >= threshold_micromolar {
                alarm = Some(rec.time_s);
            }
            if lin.is_none() && rec.r > 0.1 {
                lin = Some(rec.time_s);
            }
            if let Some(sink) = cv_sink.as_deref_mut() {
                sink.push(rec.state.c_v);
            }
        })?;
    Ok(LinkOutcome { alarm_time_s: alarm, linearity_time_s: lin, summary })
}

/// One cell's c_v trajectory as a dump file.
pub(crate) fn cv_dump_table(c_v: &[f64], sample_rate_hz: f64) -> Result<CsvTable> {
    let mut t = CsvTable::new(["time_s", "c_v_um"]);
    t.comment("per-cell HEXVic trajectory dump");
    let dt = 1.0 / sample_rate_hz;
    for (k, &v) in c_v.iter().enumerate() {
        t.push_numeric_row(&[k as f64 * dt, v])?;
    }
    Ok(t)
}

pub(crate) fn opt_time(t: Option<f64>) -> String {
    match t {
        Some(v) => crate::output::sci(v),
        None => String::new(),
    }
}

/// Data files plus a human-readable summary for one campaign execution.
pub struct CampaignRun {
    /// (file name, table) pairs; names are campaign-stable.
    pub files: Vec<(String, CsvTable)>,
    pub summary: String,
}

/// Execute the campaign named by `cfg.scenario`. `dump_cells` additionally
/// emits per-cell c_v trajectories for the sweep and map campaigns.
pub fn run_scenario(cfg: &ScenarioConfig, mode: ExecMode, dump_cells: bool) -> Result<CampaignRun> {
    cfg.validate()?;
    match cfg.scenario.as_str() {
        "point_to_point" => point_to_point::campaign(cfg),
        "linearity_pilot" => linearity::pilot_campaign(cfg, mode),
        "frequency_response" => frequency::campaign(cfg, mode),
        "sensitivity_heatmap" => linearity::sensitivity_campaign(cfg, mode),
        "distance_sweep" => distance::campaign(cfg, mode, dump_cells),
        "alarm_map" => alarm_map::campaign(cfg, mode, dump_cells),
        "single_glv_comparison" => single_glv::campaign(cfg),
        other => Err(GlvError::Config(format!("unknown scenario {other:?}"))),
    }
}

/// Write a campaign's data files, manifest, and human-readable summary into
/// `out_dir`. Returns the paths written.
pub fn write_campaign(
    cfg: &ScenarioConfig,
    run: &CampaignRun,
    out_dir: &std::path::Path,
    wall_time_s: f64,
) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (name, table) in &run.files {
        let path = out_dir.join(name);
        table.write_to(&path)?;
        written.push(path);
    }
    let manifest_path = out_dir.join("manifest.json");
    crate::output::Manifest::new(cfg, wall_time_s)?.write_to(&manifest_path)?;
    written.push(manifest_path);
    let summary_path = out_dir.join("summary.txt");
    std::fs::write(&summary_path, &run.summary)?;
    written.push(summary_path);
    Ok(written)
}
