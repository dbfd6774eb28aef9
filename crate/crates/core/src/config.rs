//! Scenario configuration: one strict TOML schema carrying the full parameter
//! set, so every run can be reproduced from its echoed config alone.
//!
//! Unknown keys are rejected everywhere. Validation collects every offending
//! key before reporting. The `validate_report` path also tags each headline
//! parameter with its provenance: values matching the published tables are
//! `paper-table`, the liquid-phase resistances are `placeholder` (no source
//! table lists them), anything else is `user`.

use crate::channel::{ChannelConfig, FarDecimation};
use crate::error::{GlvError, Result};
use crate::loss::LossModel;
use crate::molecule::{Molecule, PerMolecule};
use crate::receiver::{EnzymeParams, EnzymeSet, ReceiverParams};
use crate::units::{alarm_threshold_to_micromolar, enzyme_total_concentration, Environment};
use crate::uptake::{LeafParams, MoleculeUptake, UptakeParams};
use crate::wind::WindModel;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub master_seed: u64,
    /// Campaign to execute.
    pub scenario: String,
    pub environment: Environment,
    pub timing: TimingConfig,
    pub alarm: AlarmConfig,
    pub emission: EmissionSpec,
    pub wind: WindSpec,
    pub loss: LossSpec,
    pub leaf: LeafParams,
    pub constants: Constants,
    pub molecules: MoleculeTable,
    pub enzymes: EnzymeTable,
    pub receiver: ReceiverSpec,
    pub channel: ChannelSpec,
    pub geometry: GeometrySpec,
    pub campaigns: CampaignTable,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingConfig {
    pub sample_rate_hz: f64,
    pub symbol_period_s: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlarmConfig {
    /// Threshold in µg per g fresh weight.
    pub threshold_microgram_per_g_fw: f64,
    /// Molar mass of the terminal metabolite (g/mol).
    pub hexvic_molar_mass_g_per_mol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionSpec {
    /// Explicit bit string of '0'/'1'; empty means draw from the "bits" stream.
    #[serde(default)]
    pub bits: String,
    /// Number of random bits when `bits` is empty; 0 auto-sizes to the
    /// campaign horizon.
    pub n_random_bits: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindSpec {
    /// Named regime; empty string means use the explicit mean/std below.
    #[serde(default)]
    pub regime: String,
    #[serde(default)]
    pub mean_mps: Option<[f64; 2]>,
    #[serde(default)]
    pub std_mps: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossSpec {
    pub enabled: bool,
    pub mean: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub avogadro_per_mol: f64,
    /// Enzyme units per gram fresh weight (Eq. 9 scale factor).
    pub enzyme_units_per_g_fw: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeTable {
    pub hal: MoleculeConfig,
    pub hol: MoleculeConfig,
    pub hac: MoleculeConfig,
}

impl MoleculeTable {
    pub fn get(&self, m: Molecule) -> &MoleculeConfig {
        match m {
            Molecule::Hal => &self.hal,
            Molecule::Hol => &self.hol,
            Molecule::Hac => &self.hac,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeConfig {
    pub diffusivity_m2_per_s: f64,
    pub molar_mass_g_per_mol: f64,
    pub henry_mol_per_l_atm: f64,
    /// log10 octanol-water partition coefficient; carried for users deriving
    /// the liquid-phase resistance externally, not used in the simulation.
    pub log_kow: f64,
    pub boundary_resistance_water: f64,
    pub stomatal_resistance_water: f64,
    pub transpiration_mol_per_m2_s: f64,
    pub emission_amplitude_mol_per_s: f64,
    /// Composite liquid-phase resistance. No source table lists it, so it is
    /// a required input; the shipped config carries labelled placeholders.
    #[serde(default)]
    pub r_liq_m2_s_per_mol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnzymeTable {
    pub chr: EnzymeConfig,
    pub cxe: EnzymeConfig,
    pub ugt85a: EnzymeConfig,
    pub ugt91r: EnzymeConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnzymeConfig {
    pub abundance_ppm: f64,
    pub k_cat_per_s: f64,
    pub k_m_micromolar: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverSpec {
    pub substeps: u32,
    pub absorption_per_step: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub truncation: bool,
    #[serde(default)]
    pub far_decimation_lag_s: Option<f64>,
    #[serde(default)]
    pub far_decimation_stride: Option<usize>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub tx_position_m: [f64; 3],
    pub rx_position_m: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignTable {
    pub point_to_point: PointToPointConfig,
    pub linearity_pilot: LinearityPilotConfig,
    pub frequency_response: FrequencyResponseConfig,
    pub sensitivity_heatmap: SensitivityHeatmapConfig,
    pub distance_sweep: DistanceSweepConfig,
    pub alarm_map: AlarmMapConfig,
    pub single_glv_comparison: SingleGlvConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointToPointConfig {
    pub horizon_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearityPilotConfig {
    /// Subset of {"constant", "single_pulse", "periodic"}.
    pub modes: Vec<String>,
    pub scaling_factors: Vec<f64>,
    pub duration_s: f64,
    /// Baseline prescribed air concentration (mol/m³).
    pub baseline_mol_per_m3: f64,
    /// On time for the pulse and periodic modes (s).
    pub pulse_on_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyResponseConfig {
    pub frequencies_hz: Vec<f64>,
    pub amplitude_mol_per_m3: f64,
    pub n_periods: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityHeatmapConfig {
    pub scales_ugt85a: Vec<f64>,
    pub scales_ugt91r: Vec<f64>,
    pub duration_s: f64,
    pub scaling_factor: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceSweepConfig {
    pub regime: String,
    pub distances_m: Vec<f64>,
    pub horizon_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlarmMapConfig {
    /// Half-width of the square receiver lattice (m), centred on the
    /// transmitter at z = 1 m.
    pub grid_half_extent_m: f64,
    /// Points per axis.
    pub grid_points_per_axis: usize,
    pub snapshot_times_s: Vec<f64>,
    pub regime: String,
    pub horizon_s: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleGlvConfig {
    pub horizon_s: f64,
    pub rx_position_m: [f64; 3],
}

pub const SCENARIOS: &[&str] = &[
    "point_to_point",
    "linearity_pilot",
    "frequency_response",
    "sensitivity_heatmap",
    "distance_sweep",
    "alarm_map",
    "single_glv_comparison",
];

impl ScenarioConfig {
    /// Parse a TOML document with strict schema checking.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| GlvError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| GlvError::Config(e.to_string()))
    }

    /// All invariant violations, collected so one pass reports everything.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !SCENARIOS.contains(&self.scenario.as_str()) {
            out.push(format!(
                "scenario: unknown scenario {:?}; expected one of {SCENARIOS:?}",
                self.scenario
            ));
        }
        if let Err(e) = self.environment.validate() {
            out.push(format!("environment: {e}"));
        }
        if !(self.timing.sample_rate_hz > 0.0) {
            out.push("timing.sample_rate_hz: must be > 0".into());
        }
        if !(self.timing.symbol_period_s > 0.0) {
            out.push("timing.symbol_period_s: must be > 0".into());
        }
        if !(self.alarm.threshold_microgram_per_g_fw > 0.0) {
            out.push("alarm.threshold_microgram_per_g_fw: must be > 0".into());
        }
        if !(self.alarm.hexvic_molar_mass_g_per_mol > 0.0) {
            out.push("alarm.hexvic_molar_mass_g_per_mol: must be > 0".into());
        }
        if !self.emission.bits.is_empty()
            && self.emission.bits.chars().any(|c| c != '0' && c != '1')
        {
            out.push("emission.bits: only '0' and '1' characters allowed".into());
        }
        if let Err(e) = self.wind_model() {
            out.push(format!("wind: {e}"));
        }
        if self.loss.enabled {
            let model = LossModel { mean: self.loss.mean, cv: self.loss.cv };
            if let Err(e) = model.validate() {
                out.push(format!("loss: {e}"));
            }
        }
        for m in Molecule::ALL {
            let mc = self.molecules.get(m);
            if mc.r_liq_m2_s_per_mol.is_none() {
                out.push(format!(
                    "molecules.{}.r_liq_m2_s_per_mol: required, no value supplied \
                     (derive it externally or accept the shipped placeholder)",
                    m.tag().to_lowercase()
                ));
            }
            if let Some(r) = mc.r_liq_m2_s_per_mol {
                if !(r > 0.0) {
                    out.push(format!(
                        "molecules.{}.r_liq_m2_s_per_mol: must be > 0",
                        m.tag().to_lowercase()
                    ));
                }
            }
            if !(mc.emission_amplitude_mol_per_s >= 0.0) {
                out.push(format!(
                    "molecules.{}.emission_amplitude_mol_per_s: must be >= 0",
                    m.tag().to_lowercase()
                ));
            }
        }
        for (name, e) in [
            ("chr", &self.enzymes.chr),
            ("cxe", &self.enzymes.cxe),
            ("ugt85a", &self.enzymes.ugt85a),
            ("ugt91r", &self.enzymes.ugt91r),
        ] {
            if !(e.abundance_ppm >= 0.0 && e.k_cat_per_s > 0.0 && e.k_m_micromolar > 0.0) {
                out.push(format!("enzymes.{name}: need abundance >= 0, k_cat > 0, k_m > 0"));
            }
        }
        if self.receiver.substeps == 0 {
            out.push("receiver.substeps: must be >= 1".into());
        }
        if self.channel.far_decimation_lag_s.is_some() != self.channel.far_decimation_stride.is_some()
        {
            out.push(
                "channel: far_decimation_lag_s and far_decimation_stride must be set together"
                    .into(),
            );
        }
        let samples_per_symbol = self.timing.symbol_period_s * self.timing.sample_rate_hz;
        if (samples_per_symbol - samples_per_symbol.round()).abs() > 1e-9 {
            out.push("timing: symbol period must be an integer number of samples".into());
        }
        out.extend(self.campaign_problems());
        out
    }

    fn campaign_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let c = &self.campaigns;
        if !(c.point_to_point.horizon_s > 0.0) {
            out.push("campaigns.point_to_point.horizon_s: must be > 0".into());
        }
        let lp = &c.linearity_pilot;
        if lp.modes.is_empty()
            || lp
                .modes
                .iter()
                .any(|m| !["constant", "single_pulse", "periodic"].contains(&m.as_str()))
        {
            out.push(
                "campaigns.linearity_pilot.modes: subset of constant/single_pulse/periodic, non-empty"
                    .into(),
            );
        }
        if lp.scaling_factors.iter().any(|&s| !(s > 0.0)) || lp.scaling_factors.is_empty() {
            out.push("campaigns.linearity_pilot.scaling_factors: non-empty, all > 0".into());
        }
        if !(lp.duration_s > 0.0) || !(lp.pulse_on_s > 0.0) || !(lp.baseline_mol_per_m3 > 0.0) {
            out.push("campaigns.linearity_pilot: duration, pulse_on, baseline must be > 0".into());
        }
        let fr = &c.frequency_response;
        let nyq = self.timing.sample_rate_hz / 4.0;
        if fr.frequencies_hz.is_empty() || fr.frequencies_hz.iter().any(|&f| !(f > 0.0) || f > nyq)
        {
            out.push(format!(
                "campaigns.frequency_response.frequencies_hz: non-empty, each in (0, fs/4 = {nyq}]"
            ));
        }
        if !(fr.amplitude_mol_per_m3 > 0.0) || fr.n_periods < 4 {
            out.push("campaigns.frequency_response: amplitude > 0 and n_periods >= 4".into());
        }
        let sh = &c.sensitivity_heatmap;
        if sh.scales_ugt85a.iter().chain(&sh.scales_ugt91r).any(|&s| !(s > 0.0))
            || sh.scales_ugt85a.is_empty()
            || sh.scales_ugt91r.is_empty()
        {
            out.push("campaigns.sensitivity_heatmap: scale lists non-empty, all > 0".into());
        }
        if !(sh.duration_s > 0.0) || !(sh.scaling_factor > 0.0) {
            out.push("campaigns.sensitivity_heatmap: duration and scaling factor must be > 0".into());
        }
        let ds = &c.distance_sweep;
        if ds.distances_m.is_empty()
            || ds.distances_m.iter().any(|&d| d < crate::channel::EPSILON_GEOM_M)
        {
            out.push(format!(
                "campaigns.distance_sweep.distances_m: non-empty, each >= {}",
                crate::channel::EPSILON_GEOM_M
            ));
        }
        if !(ds.horizon_s > 0.0) {
            out.push("campaigns.distance_sweep.horizon_s: must be > 0".into());
        }
        let am = &c.alarm_map;
        if am.grid_points_per_axis < 2 || !(am.grid_half_extent_m > 0.0) {
            out.push("campaigns.alarm_map: need >= 2 grid points per axis and extent > 0".into());
        }
        if am.snapshot_times_s.is_empty()
            || am.snapshot_times_s.iter().any(|&t| t < 0.0 || t > am.horizon_s)
        {
            out.push("campaigns.alarm_map.snapshot_times_s: non-empty, each in [0, horizon]".into());
        }
        if !(c.single_glv_comparison.horizon_s > 0.0) {
            out.push("campaigns.single_glv_comparison.horizon_s: must be > 0".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(GlvError::Config(problems.join("\n")))
        }
    }

    pub fn wind_model(&self) -> Result<WindModel> {
        if !self.wind.regime.is_empty() {
            return WindModel::regime(&self.wind.regime, self.timing.sample_rate_hz);
        }
        match (self.wind.mean_mps, self.wind.std_mps) {
            (Some(mean), Some(std)) => {
                Ok(WindModel { mean_mps: mean, std_mps: std, sample_rate_hz: self.timing.sample_rate_hz })
            }
            _ => Err(GlvError::Config(
                "either a named regime or explicit mean_mps + std_mps required".into(),
            )),
        }
    }

    pub fn wind_model_for(&self, regime: &str) -> Result<WindModel> {
        WindModel::regime(regime, self.timing.sample_rate_hz)
    }

    pub fn loss_model(&self) -> Option<LossModel> {
        self.loss.enabled.then_some(LossModel { mean: self.loss.mean, cv: self.loss.cv })
    }

    pub fn emission_amplitudes(&self) -> PerMolecule<f64> {
        PerMolecule::new(
            self.molecules.hal.emission_amplitude_mol_per_s,
            self.molecules.hol.emission_amplitude_mol_per_s,
            self.molecules.hac.emission_amplitude_mol_per_s,
        )
    }

    pub fn diffusivities(&self) -> PerMolecule<f64> {
        PerMolecule::new(
            self.molecules.hal.diffusivity_m2_per_s,
            self.molecules.hol.diffusivity_m2_per_s,
            self.molecules.hac.diffusivity_m2_per_s,
        )
    }

    fn enzyme_params(&self, e: &EnzymeConfig, abundance_scale: f64) -> Result<EnzymeParams> {
        Ok(EnzymeParams {
            k_cat: e.k_cat_per_s,
            k_m: e.k_m_micromolar,
            e_total: enzyme_total_concentration(
                e.abundance_ppm * abundance_scale,
                self.constants.enzyme_units_per_g_fw,
                self.constants.avogadro_per_mol,
            )?,
        })
    }

    /// Enzyme set with optional abundance scaling of the two glycosylation
    /// enzymes (sensitivity campaign).
    pub fn enzyme_set_scaled(&self, scale_85a: f64, scale_91r: f64) -> Result<EnzymeSet> {
        Ok(EnzymeSet {
            chr: self.enzyme_params(&self.enzymes.chr, 1.0)?,
            cxe: self.enzyme_params(&self.enzymes.cxe, 1.0)?,
            ugt85a: self.enzyme_params(&self.enzymes.ugt85a, scale_85a)?,
            ugt91r: self.enzyme_params(&self.enzymes.ugt91r, scale_91r)?,
        })
    }

    pub fn enzyme_set(&self) -> Result<EnzymeSet> {
        self.enzyme_set_scaled(1.0, 1.0)
    }

    pub fn uptake_params(&self) -> Result<PerMolecule<UptakeParams>> {
        let resolve = |m: Molecule| -> Result<UptakeParams> {
            let mc = self.molecules.get(m);
            let r_liq = mc.r_liq_m2_s_per_mol.ok_or_else(|| {
                GlvError::Config(format!(
                    "molecules.{}.r_liq_m2_s_per_mol is required",
                    m.tag().to_lowercase()
                ))
            })?;
            UptakeParams::resolve(
                &MoleculeUptake {
                    diffusivity_m2_per_s: mc.diffusivity_m2_per_s,
                    boundary_resistance_water: mc.boundary_resistance_water,
                    stomatal_resistance_water: mc.stomatal_resistance_water,
                    transpiration_mol_per_m2_s: mc.transpiration_mol_per_m2_s,
                    henry_mol_per_l_atm: mc.henry_mol_per_l_atm,
                    r_liq_m2_s_per_mol: r_liq,
                },
                &self.leaf,
                &self.environment,
            )
        };
        Ok(PerMolecule::new(
            resolve(Molecule::Hal)?,
            resolve(Molecule::Hol)?,
            resolve(Molecule::Hac)?,
        ))
    }

    pub fn receiver_params(&self) -> Result<ReceiverParams> {
        Ok(ReceiverParams {
            enzymes: self.enzyme_set()?,
            uptake: self.uptake_params()?,
            environment: self.environment,
            substeps: self.receiver.substeps,
            absorption_per_step: self.receiver.absorption_per_step,
        })
    }

    pub fn channel_config(&self, horizon_s: f64) -> ChannelConfig {
        ChannelConfig {
            tx_position: self.geometry.tx_position_m,
            sample_rate_hz: self.timing.sample_rate_hz,
            horizon_s,
            truncation: self.channel.truncation,
            far_decimation: match (self.channel.far_decimation_lag_s, self.channel.far_decimation_stride)
            {
                (Some(lag), Some(stride)) => Some(FarDecimation { lag_threshold_s: lag, stride }),
                _ => None,
            },
        }
    }

    /// Alarm threshold in µM.
    pub fn alarm_threshold_micromolar(&self) -> Result<f64> {
        alarm_threshold_to_micromolar(
            self.alarm.threshold_microgram_per_g_fw,
            self.alarm.hexvic_molar_mass_g_per_mol,
            self.leaf.intracellular_volume_l_per_g,
        )
    }
}

/// Apply `--set dotted.path=value` overrides to a raw TOML document.
pub fn apply_overrides(doc: &mut toml::Value, overrides: &[(String, String)]) -> Result<()> {
    for (path, raw) in overrides {
        let parsed: toml::Value = {
            // parse through a scratch table so scalars, arrays, and strings
            // all round-trip with native types
            let scratch = format!("v = {raw}");
            match scratch.parse::<toml::Table>() {
                Ok(mut t) => t.remove("v").unwrap(),
                Err(_) => toml::Value::String(raw.clone()),
            }
        };
        let mut node = &mut *doc;
        let (last, prefix) = path.split('.').collect::<Vec<_>>().split_last().map(|(l, p)| (*l, p.to_vec())).unwrap();
        for part in prefix {
            let table = node.as_table_mut().ok_or_else(|| {
                GlvError::Config(format!("override {path}: {part} is not a table"))
            })?;
            node = table
                .entry(part.to_string())
                .or_insert(toml::Value::Table(toml::Table::new()));
        }
        let table = node
            .as_table_mut()
            .ok_or_else(|| GlvError::Config(format!("override {path}: {last} is not a table")))?;
        table.insert(last.to_string(), parsed);
    }
    Ok(())
}

/// Parse, apply overrides, and strictly deserialize.
pub fn load_config(text: &str, overrides: &[(String, String)]) -> Result<ScenarioConfig> {
    let mut doc: toml::Value =
        text.parse().map_err(|e: toml::de::Error| GlvError::Config(e.to_string()))?;
    apply_overrides(&mut doc, overrides)?;
    let cfg: ScenarioConfig =
        doc.try_into().map_err(|e: toml::de::Error| GlvError::Config(e.to_string()))?;
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    PaperTable,
    Placeholder,
    User,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::PaperTable => write!(f, "paper-table"),
            Provenance::Placeholder => write!(f, "placeholder"),
            Provenance::User => write!(f, "user"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProvenanceEntry {
    pub key: String,
    pub value: String,
    pub provenance: Provenance,
}

/// Tag headline parameters against the published table values.
pub fn provenance_report(cfg: &ScenarioConfig) -> Vec<ProvenanceEntry> {
    let reference = default_config_toml()
        .parse::<toml::Value>()
        .expect("shipped default config must parse");
    let current: toml::Value = toml::Value::try_from(cfg).expect("config serializes");
    let mut out = Vec::new();
    walk_provenance(&current, &reference, String::new(), &mut out);
    out
}

fn walk_provenance(
    current: &toml::Value,
    reference: &toml::Value,
    prefix: String,
    out: &mut Vec<ProvenanceEntry>,
) {
    match current {
        toml::Value::Table(t) => {
            for (k, v) in t {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                let r = reference.get(k);
                match r {
                    Some(rv) => walk_provenance(v, rv, path, out),
                    None => out.push(ProvenanceEntry {
                        key: path,
                        value: v.to_string(),
                        provenance: Provenance::User,
                    }),
                }
            }
        }
        other => {
            let provenance = if prefix.contains("r_liq") {
                Provenance::Placeholder
            } else if Some(other) == Some(reference) && other == reference {
                // campaign knobs and plumbing are ours, not the tables'
                if prefix.starts_with("campaigns.")
                    || prefix.starts_with("channel.")
                    || prefix.starts_with("receiver.")
                    || prefix.starts_with("emission.")
                    || prefix == "master_seed"
                    || prefix == "scenario"
                {
                    Provenance::User
                } else {
                    Provenance::PaperTable
                }
            } else {
                Provenance::User
            };
            out.push(ProvenanceEntry { key: prefix, value: other.to_string(), provenance });
        }
    }
}

/// The shipped canonical configuration.
pub fn default_config_toml() -> &'static str {
    include_str!("../../../configs/default.toml")
}

pub fn default_config() -> ScenarioConfig {
    ScenarioConfig::from_toml_str(default_config_toml()).expect("shipped default config is valid")
}
