//! Linearity pilots and the enzyme-sensitivity heatmap.
//!
//! Pilots bypass the channel entirely: the air concentrations are prescribed
//! as baseline × scaling profiles, no loss is applied, and the metric is the
//! fraction of samples whose saturation ratio exceeds 0.1. The heatmap reruns
//! the periodic pilot with the two glycosylation enzyme abundances rescaled.

use super::CampaignRun;
use crate::config::ScenarioConfig;
use crate::error::{GlvError, Result};
use crate::exec::{map_items, ExecMode};
use crate::molecule::{Molecule, PerMolecule};
use crate::output::{sci, CsvTable};
use crate::receiver::{integrate_with, ReceiverParams, ReceiverState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilotMode {
    Constant,
    /// Scaled for the first `pulse_on_s`, baseline after.
    SinglePulse,
    /// On-off cycling with equal on and off times of `pulse_on_s`.
    Periodic,
}

impl PilotMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(PilotMode::Constant),
            "single_pulse" => Ok(PilotMode::SinglePulse),
            "periodic" => Ok(PilotMode::Periodic),
            other => Err(GlvError::Config(format!("unknown pilot mode {other:?}"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            PilotMode::Constant => "constant",
            PilotMode::SinglePulse => "single_pulse",
            PilotMode::Periodic => "periodic",
        }
    }

    /// Scaling multiplier at time t: `sf` while on, 1 while off.
    fn factor(&self, t: f64, sf: f64, pulse_on_s: f64) -> f64 {
        match self {
            PilotMode::Constant => sf,
            PilotMode::SinglePulse => {
                if t < pulse_on_s {
                    sf
                } else {
                    1.0
                }
            }
            PilotMode::Periodic => {
                if ((t / pulse_on_s).floor() as u64) % 2 == 0 {
                    sf
                } else {
                    1.0
                }
            }
        }
    }
}

/// Which molecules receive the scaling; the rest stay at baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaledSet {
    Hal,
    Hol,
    Hac,
    All,
}

impl ScaledSet {
    pub const ALL_SETS: [ScaledSet; 4] =
        [ScaledSet::Hal, ScaledSet::Hol, ScaledSet::Hac, ScaledSet::All];

    pub fn tag(&self) -> &'static str {
        match self {
            ScaledSet::Hal => "HAL",
            ScaledSet::Hol => "HOL",
            ScaledSet::Hac => "HAC",
            ScaledSet::All => "ALL",
        }
    }

    fn scales(&self, m: Molecule) -> bool {
        match self {
            ScaledSet::Hal => m == Molecule::Hal,
            ScaledSet::Hol => m == Molecule::Hol,
            ScaledSet::Hac => m == Molecule::Hac,
            ScaledSet::All => true,
        }
    }
}

/// Prescribed air concentrations (mol/m³) for one pilot cell.
pub fn pilot_traces(
    mode: PilotMode,
    set: ScaledSet,
    scaling_factor: f64,
    baseline: f64,
    pulse_on_s: f64,
    duration_s: f64,
    sample_rate_hz: f64,
) -> PerMolecule<Vec<f64>> {
    let n = (duration_s * sample_rate_hz).round() as usize;
    let dt = 1.0 / sample_rate_hz;
    PerMolecule::splat(()).map(|m, _| {
        (0..n)
            .map(|k| {
                let f = if set.scales(m) {
                    mode.factor(k as f64 * dt, scaling_factor, pulse_on_s)
                } else {
                    1.0
                };
                baseline * f
            })
            .collect()
    })
}

/// Fraction of trajectory samples with r > 0.1, streamed without retaining
/// the trajectory.
fn nonlinear_fraction(
    traces: &PerMolecule<Vec<f64>>,
    params: &ReceiverParams,
    sample_rate_hz: f64,
) -> Result<(f64, bool)> {
    let mut above = 0usize;
    let mut total = 0usize;
    integrate_with(traces, params, sample_rate_hz, ReceiverState::default(), |rec| {
        total += 1;
        if rec.r > 0.1 {
            above += 1;
        }
    })?;
    let fraction = above as f64 / total as f64;
    Ok((fraction, fraction <= 0.02))
}

#[derive(Debug, Clone, Copy)]
pub struct PilotCell {
    pub mode: PilotMode,
    pub set: ScaledSet,
    pub scaling_factor: f64,
    pub nonlinear_fraction: f64,
    pub linear: bool,
}

pub fn run_linearity_pilot(cfg: &ScenarioConfig, mode: ExecMode) -> Result<Vec<PilotCell>> {
    let lp = &cfg.campaigns.linearity_pilot;
    let modes: Vec<PilotMode> = lp.modes.iter().map(|m| PilotMode::parse(m)).collect::<Result<_>>()?;
    let params = cfg.receiver_params()?;
    let fs = cfg.timing.sample_rate_hz;

    let mut cells: Vec<(PilotMode, ScaledSet, f64)> = Vec::new();
    for &pm in &modes {
        for set in ScaledSet::ALL_SETS {
            for &sf in &lp.scaling_factors {
                cells.push((pm, set, sf));
            }
        }
    }
    map_items(mode, &cells, |&(pm, set, sf)| -> Result<PilotCell> {
        let traces =
            pilot_traces(pm, set, sf, lp.baseline_mol_per_m3, lp.pulse_on_s, lp.duration_s, fs);
        let (fraction, linear) = nonlinear_fraction(&traces, &params, fs)?;
        Ok(PilotCell { mode: pm, set, scaling_factor: sf, nonlinear_fraction: fraction, linear })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SensitivityCell {
    pub scale_85a: f64,
    pub scale_91r: f64,
    pub nonlinear_fraction: f64,
    pub linear: bool,
}

/// Periodic all-molecule pilot per (85A, 91R) abundance-scale pair.
pub fn run_sensitivity_heatmap(cfg: &ScenarioConfig, mode: ExecMode) -> Result<Vec<SensitivityCell>> {
    let sh = &cfg.campaigns.sensitivity_heatmap;
    let lp = &cfg.campaigns.linearity_pilot;
    let fs = cfg.timing.sample_rate_hz;
    let base_params = cfg.receiver_params()?;
    let traces = pilot_traces(
        PilotMode::Periodic,
        ScaledSet::All,
        sh.scaling_factor,
        lp.baseline_mol_per_m3,
        lp.pulse_on_s,
        sh.duration_s,
        fs,
    );

    let mut cells: Vec<(f64, f64)> = Vec::new();
    for &s85 in &sh.scales_ugt85a {
        for &s91 in &sh.scales_ugt91r {
            cells.push((s85, s91));
        }
    }
    map_items(mode, &cells, |&(s85, s91)| -> Result<SensitivityCell> {
        let mut params = base_params.clone();
        params.enzymes = cfg.enzyme_set_scaled(s85, s91)?;
        let (fraction, linear) = nonlinear_fraction(&traces, &params, fs)?;
        Ok(SensitivityCell { scale_85a: s85, scale_91r: s91, nonlinear_fraction: fraction, linear })
    })
    .into_iter()
    .collect()
}

pub(super) fn pilot_campaign(cfg: &ScenarioConfig, mode: ExecMode) -> Result<CampaignRun> {
    let cells = run_linearity_pilot(cfg, mode)?;
    let mut t = CsvTable::new(["mode", "scaled_set", "scaling_factor", "nonlinear_fraction", "linear"]);
    t.comment("nonlinear_fraction: share of samples with saturation ratio r > 0.1");
    t.comment("linear: 1 when the fraction is <= 0.02");
    for c in &cells {
        t.push_row([
            c.mode.tag().to_string(),
            c.set.tag().to_string(),
            sci(c.scaling_factor),
            sci(c.nonlinear_fraction),
            (c.linear as u8).to_string(),
        ])?;
    }
    let nonlinear = cells.iter().filter(|c| !c.linear).count();
    let summary = format!(
        "linearity_pilot: {} cells, {} nonlinear (fraction > 0.02)\n",
        cells.len(),
        nonlinear
    );
    Ok(CampaignRun { files: vec![("pilot.csv".into(), t)], summary })
}

pub(super) fn sensitivity_campaign(cfg: &ScenarioConfig, mode: ExecMode) -> Result<CampaignRun> {
    let cells = run_sensitivity_heatmap(cfg, mode)?;
    let mut t = CsvTable::new(["scale_ugt85a", "scale_ugt91r", "nonlinear_fraction", "linear"]);
    t.comment("periodic all-molecule pilot with rescaled UGT85A53 / UGT91R1 abundances");
    for c in &cells {
        t.push_row([
            sci(c.scale_85a),
            sci(c.scale_91r),
            sci(c.nonlinear_fraction),
            (c.linear as u8).to_string(),
        ])?;
    }
    let linear = cells.iter().filter(|c| c.linear).count();
    let summary = format!(
        "sensitivity_heatmap: {} cells, {} classified linear\n",
        cells.len(),
        linear
    );
    Ok(CampaignRun { files: vec![("sensitivity.csv".into(), t)], summary })
}
