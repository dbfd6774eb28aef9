//! Population alarm map: a square lattice of receivers around one
//! transmitter, each running the full pipeline once and thresholded at every
//! snapshot time (never re-simulated per snapshot).

use super::{campaign_emission, campaign_wind, integrate_for_times, opt_time, receiver_input, CampaignRun};
use crate::channel::EPSILON_GEOM_M;
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::exec::{map_items, ExecMode};
use crate::output::{sci, CsvTable};

#[derive(Debug, Clone)]
pub struct AlarmCell {
    /// Offset from the transmitter in the x-y plane (m).
    pub x_m: f64,
    pub y_m: f64,
    pub alarm_time_s: Option<f64>,
    /// One flag per snapshot time: alarmed by that time.
    pub alarmed: Vec<bool>,
    /// Filled only when the campaign dumps per-cell trajectories.
    pub c_v: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AlarmMapResult {
    pub snapshot_times_s: Vec<f64>,
    pub cells: Vec<AlarmCell>,
    /// Alarmed-cell count per snapshot.
    pub alarmed_counts: Vec<usize>,
    /// Grid points skipped for sitting within the geometric epsilon of Tx.
    pub skipped_cells: usize,
}

pub fn run_alarm_map(cfg: &ScenarioConfig, mode: ExecMode) -> Result<AlarmMapResult> {
    map(cfg, mode, false)
}

fn map(cfg: &ScenarioConfig, mode: ExecMode, dump: bool) -> Result<AlarmMapResult> {
    let am = &cfg.campaigns.alarm_map;
    let chan = cfg.channel_config(am.horizon_s);
    let emission = campaign_emission(cfg, am.horizon_s, cfg.emission_amplitudes())?;
    let wind = campaign_wind(cfg, &cfg.wind_model_for(&am.regime)?, &chan)?;
    let params = cfg.receiver_params()?;
    let threshold = cfg.alarm_threshold_micromolar()?;
    let tx = cfg.geometry.tx_position_m;

    let p = am.grid_points_per_axis;
    let h = am.grid_half_extent_m;
    let coord = |i: usize| -> f64 {
        if p == 1 {
            0.0
        } else {
            -h + 2.0 * h * i as f64 / (p - 1) as f64
        }
    };
    // lattice index is stable over the full grid so each receiver's loss
    // stream name never depends on which cells were skipped
    let mut sites: Vec<(usize, f64, f64)> = Vec::new();
    let mut skipped = 0usize;
    for iy in 0..p {
        for ix in 0..p {
            let (x, y) = (coord(ix), coord(iy));
            if x.hypot(y) <= EPSILON_GEOM_M {
                skipped += 1;
            } else {
                sites.push((iy * p + ix, x, y));
            }
        }
    }

    let cells: Vec<AlarmCell> = map_items(mode, &sites, |&(idx, x, y)| -> Result<AlarmCell> {
        let rx = [tx[0] + x, tx[1] + y, tx[2]];
        let traces = receiver_input(cfg, &emission, &wind, &chan, rx, &format!(":rx{idx}"))?;
        let mut c_v = Vec::new();
        let outcome = integrate_for_times(
            &traces,
            &params,
            cfg.timing.sample_rate_hz,
            threshold,
            dump.then_some(&mut c_v),
        )?;
        let alarmed = am
            .snapshot_times_s
            .iter()
            .map(|&t| outcome.alarm_time_s.is_some_and(|a| a <= t))
            .collect();
        Ok(AlarmCell { x_m: x, y_m: y, alarm_time_s: outcome.alarm_time_s, alarmed, c_v })
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let alarmed_counts = (0..am.snapshot_times_s.len())
        .map(|s| cells.iter().filter(|c| c.alarmed[s]).count())
        .collect();
    Ok(AlarmMapResult {
        snapshot_times_s: am.snapshot_times_s.clone(),
        cells,
        alarmed_counts,
        skipped_cells: skipped,
    })
}

pub(super) fn campaign(cfg: &ScenarioConfig, mode: ExecMode, dump: bool) -> Result<CampaignRun> {
    let result = map(cfg, mode, dump)?;
    let mut columns = vec!["x_m".to_string(), "y_m".to_string(), "alarm_time_s".to_string()];
    for t in &result.snapshot_times_s {
        columns.push(format!("alarmed_by_{t}_s"));
    }
    let mut table = CsvTable::new(columns);
    table.comment("receiver offsets from the transmitter; empty alarm_time_s = never alarmed");
    for c in &result.cells {
        let mut row = vec![sci(c.x_m), sci(c.y_m), opt_time(c.alarm_time_s)];
        row.extend(c.alarmed.iter().map(|&a| (a as u8).to_string()));
        table.push_row(row)?;
    }
    let counts: Vec<String> = result
        .snapshot_times_s
        .iter()
        .zip(&result.alarmed_counts)
        .map(|(t, n)| format!("{n} @ {t} s"))
        .collect();
    let mut files = vec![("alarm_map.csv".to_string(), table)];
    if dump {
        for (i, c) in result.cells.iter().enumerate() {
            files.push((
                format!("cell_{i}_trajectory.csv"),
                super::cv_dump_table(&c.c_v, cfg.timing.sample_rate_hz)?,
            ));
        }
    }
    let summary = format!(
        "alarm_map ({}): {} receivers ({} skipped at the origin), alarmed counts: {}\n",
        cfg.campaigns.alarm_map.regime,
        result.cells.len(),
        result.skipped_cells,
        counts.join(", ")
    );
    Ok(CampaignRun { files, summary })
}
