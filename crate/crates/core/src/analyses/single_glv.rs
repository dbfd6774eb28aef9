//! Single-GLV comparison: the whole carbon budget of the base amplitude set
//! is spent on one molecule at a time, and the three resulting HEXVic
//! trajectories are compared at one receiver under a shared wind realization.

use super::{campaign_emission, campaign_wind, receiver_input, CampaignRun};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::molecule::PerMolecule;
use crate::output::{sci, CsvTable};
use crate::receiver::{integrate_with, ReceiverState};
use crate::transmitter::carbon_budget_amplitudes;

/// Carbon atoms per molecule: hexenal and hexenol are C6, the acetate ester
/// is C8.
pub const CARBON_ATOMS: PerMolecule<f64> = PerMolecule { hal: 6.0, hol: 6.0, hac: 8.0 };

#[derive(Debug, Clone)]
pub struct SingleGlvResult {
    /// Total carbon budget of the base amplitudes (mol C / s).
    pub budget_mol_per_s: f64,
    pub times_s: Vec<f64>,
    /// c_v trajectory per single-molecule scenario (µM).
    pub c_v: PerMolecule<Vec<f64>>,
    pub final_c_v: PerMolecule<f64>,
}

pub fn run_single_glv_comparison(cfg: &ScenarioConfig) -> Result<SingleGlvResult> {
    let sc = &cfg.campaigns.single_glv_comparison;
    let chan = cfg.channel_config(sc.horizon_s);
    let wind = campaign_wind(cfg, &cfg.wind_model()?, &chan)?;
    let params = cfg.receiver_params()?;
    let (budget, scenarios) = carbon_budget_amplitudes(&cfg.emission_amplitudes(), &CARBON_ATOMS)?;

    let fs = cfg.timing.sample_rate_hz;
    let mut c_v = PerMolecule::new(Vec::new(), Vec::new(), Vec::new());
    let mut times = Vec::new();
    for scenario in &scenarios {
        let emission = campaign_emission(cfg, sc.horizon_s, scenario.amplitudes)?;
        let traces = receiver_input(cfg, &emission, &wind, &chan, sc.rx_position_m, "")?;
        let series = c_v.get_mut(scenario.active);
        let first = times.is_empty();
        integrate_with(&traces, &params, fs, ReceiverState::default(), |rec| {
            series.push(rec.state.c_v);
            if first {
                times.push(rec.time_s);
            }
        })?;
    }
    let final_c_v = c_v.map(|_, s| *s.last().unwrap());
    Ok(SingleGlvResult { budget_mol_per_s: budget, times_s: times, c_v, final_c_v })
}

pub(super) fn campaign(cfg: &ScenarioConfig) -> Result<CampaignRun> {
    let result = run_single_glv_comparison(cfg)?;
    let mut t = CsvTable::new([
        "time_s",
        "c_v_hal_only_um",
        "c_v_hol_only_um",
        "c_v_hac_only_um",
    ]);
    t.comment("HEXVic accumulation when the full carbon budget goes to one molecule");
    t.comment(&format!("carbon budget: {} mol C/s", sci(result.budget_mol_per_s)));
    for (k, &time) in result.times_s.iter().enumerate() {
        t.push_numeric_row(&[time, result.c_v.hal[k], result.c_v.hol[k], result.c_v.hac[k]])?;
    }
    let summary = format!(
        "single_glv_comparison: budget {} mol C/s, final c_v (uM): HAL {}, HOL {}, HAC {}\n",
        sci(result.budget_mol_per_s),
        sci(result.final_c_v.hal),
        sci(result.final_c_v.hol),
        sci(result.final_c_v.hac),
    );
    Ok(CampaignRun { files: vec![("single_glv.csv".into(), t)], summary })
}
