//! Alarm and linearity onset times versus transmitter-receiver distance.
//!
//! All distances share one wind realization and, per molecule, one loss
//! stream, so the sweep differs only in geometry (common-randomness pairing).
//! Receivers sit on the x axis at the transmitter height.

use super::{campaign_emission, campaign_wind, integrate_for_times, opt_time, receiver_input, CampaignRun};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::exec::{map_items, ExecMode};
use crate::output::{sci, CsvTable};

#[derive(Debug, Clone)]
pub struct DistancePoint {
    pub distance_m: f64,
    pub alarm_time_s: Option<f64>,
    pub linearity_time_s: Option<f64>,
    /// Filled only when the campaign dumps per-cell trajectories.
    pub c_v: Vec<f64>,
}

pub fn run_distance_sweep(cfg: &ScenarioConfig, mode: ExecMode) -> Result<Vec<DistancePoint>> {
    sweep(cfg, mode, false)
}

fn sweep(cfg: &ScenarioConfig, mode: ExecMode, dump: bool) -> Result<Vec<DistancePoint>> {
    let ds = &cfg.campaigns.distance_sweep;
    let chan = cfg.channel_config(ds.horizon_s);
    let emission = campaign_emission(cfg, ds.horizon_s, cfg.emission_amplitudes())?;
    let wind = campaign_wind(cfg, &cfg.wind_model_for(&ds.regime)?, &chan)?;
    let params = cfg.receiver_params()?;
    let threshold = cfg.alarm_threshold_micromolar()?;
    let tx = cfg.geometry.tx_position_m;

    map_items(mode, &ds.distances_m, |&d| -> Result<DistancePoint> {
        let rx = [tx[0] + d, tx[1], tx[2]];
        let traces = receiver_input(cfg, &emission, &wind, &chan, rx, "")?;
        let mut c_v = Vec::new();
        let outcome = integrate_for_times(
            &traces,
            &params,
            cfg.timing.sample_rate_hz,
            threshold,
            dump.then_some(&mut c_v),
        )?;
        Ok(DistancePoint {
            distance_m: d,
            alarm_time_s: outcome.alarm_time_s,
            linearity_time_s: outcome.linearity_time_s,
            c_v,
        })
    })
    .into_iter()
    .collect()
}

pub(super) fn campaign(cfg: &ScenarioConfig, mode: ExecMode, dump: bool) -> Result<CampaignRun> {
    let points = sweep(cfg, mode, dump)?;
    let mut t = CsvTable::new(["distance_m", "alarm_time_s", "linearity_time_s"]);
    t.comment("empty time cells mean the event never occurred within the horizon");
    for p in &points {
        t.push_row([sci(p.distance_m), opt_time(p.alarm_time_s), opt_time(p.linearity_time_s)])?;
    }
    let mut files = vec![("distance_sweep.csv".to_string(), t)];
    if dump {
        for (i, p) in points.iter().enumerate() {
            files.push((
                format!("cell_{i}_trajectory.csv"),
                super::cv_dump_table(&p.c_v, cfg.timing.sample_rate_hz)?,
            ));
        }
    }
    let alarmed = points.iter().filter(|p| p.alarm_time_s.is_some()).count();
    let summary = format!(
        "distance_sweep ({}): {} of {} distances alarmed within {} s\n",
        cfg.campaigns.distance_sweep.regime,
        alarmed,
        points.len(),
        cfg.campaigns.distance_sweep.horizon_s
    );
    Ok(CampaignRun { files, summary })
}
