//! Emission signal construction.
//!
//! Herbivore bites form a bit sequence; each 1-bit emits a rectangular pulse
//! of length `T_sym` at the molecule's amplitude. Pulses are sample-aligned:
//! `T_sym × f_s` must be an integer so the channel convolution stays exact.

use crate::error::{GlvError, Result};
use crate::molecule::PerMolecule;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct EmissionConfig {
    pub bit_sequence: Vec<u8>,
    pub symbol_period_s: f64,
    /// Emission rate in mol/s per molecule while a 1-bit is active.
    pub amplitudes: PerMolecule<f64>,
    pub sample_rate_hz: f64,
}

/// Per-molecule emission rate q(t) in mol/s at uniform sample times.
#[derive(Debug, Clone)]
pub struct EmissionSignal {
    pub samples: PerMolecule<Vec<f64>>,
    pub sample_rate_hz: f64,
}

impl EmissionSignal {
    pub fn len(&self) -> usize {
        self.samples.hal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl EmissionConfig {
    fn validate(&self) -> Result<()> {
        if self.bit_sequence.is_empty() {
            return Err(GlvError::Parameter("bit sequence must not be empty".into()));
        }
        if self.bit_sequence.iter().any(|&b| b > 1) {
            return Err(GlvError::Parameter("bit sequence entries must be 0 or 1".into()));
        }
        if !(self.symbol_period_s > 0.0) || !(self.sample_rate_hz > 0.0) {
            return Err(GlvError::Parameter(
                "symbol period and sample rate must be > 0".into(),
            ));
        }
        let per_symbol = self.symbol_period_s * self.sample_rate_hz;
        if (per_symbol - per_symbol.round()).abs() > 1e-9 || per_symbol.round() < 1.0 {
            return Err(GlvError::Parameter(format!(
                "symbol_period_s × sample_rate_hz must be a positive integer, got {per_symbol}"
            )));
        }
        for (m, &a) in self.amplitudes.iter() {
            if a < 0.0 {
                return Err(GlvError::Parameter(format!(
                    "emission amplitude for {} must be >= 0, got {a}",
                    m.tag()
                )));
            }
        }
        Ok(())
    }
}

/// Build the rectangular pulse train q(t) for all three molecules.
pub fn build_emission_signal(cfg: &EmissionConfig) -> Result<EmissionSignal> {
    cfg.validate()?;
    let per_symbol = (cfg.symbol_period_s * cfg.sample_rate_hz).round() as usize;
    let n = cfg.bit_sequence.len() * per_symbol;
    let samples = cfg.amplitudes.map(|_, &amp| {
        let mut s = vec![0.0; n];
        for (k, &bit) in cfg.bit_sequence.iter().enumerate() {
            if bit == 1 {
                for v in &mut s[k * per_symbol..(k + 1) * per_symbol] {
                    *v = amp;
                }
            }
        }
        s
    });
    Ok(EmissionSignal { samples, sample_rate_hz: cfg.sample_rate_hz })
}

/// Draw `n` equiprobable bits from the "bits" substream of the master seed.
pub fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..=1u8)).collect()
}

/// Parse a bit sequence given as a string of '0'/'1' characters.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(GlvError::Config(format!(
                "bit string may only contain 0 and 1, found {other:?}"
            ))),
        })
        .collect()
}

/// One single-molecule emission scenario under a fixed carbon budget.
#[derive(Debug, Clone)]
pub struct CarbonBudgetScenario {
    pub active: crate::molecule::Molecule,
    pub amplitudes: PerMolecule<f64>,
}

/// Carbon-budget amplitudes for single-GLV scenarios.
///
/// The budget is the total carbon emission rate of the base amplitude set;
/// each scenario spends the entire budget on one molecule.
pub fn carbon_budget_amplitudes(
    base: &PerMolecule<f64>,
    carbons: &PerMolecule<f64>,
) -> Result<(f64, Vec<CarbonBudgetScenario>)> {
    for (m, &c) in carbons.iter() {
        if !(c > 0.0) {
            return Err(GlvError::Parameter(format!(
                "carbon count for {} must be > 0, got {c}",
                m.tag()
            )));
        }
    }
    for (m, &a) in base.iter() {
        if !(a > 0.0) {
            return Err(GlvError::Parameter(format!(
                "base amplitude for {} must be > 0, got {a}",
                m.tag()
            )));
        }
    }
    let budget: f64 = base.iter().map(|(m, &a)| a * carbons.get(m)).sum();
    let scenarios = crate::molecule::Molecule::ALL
        .iter()
        .map(|&active| {
            let amplitudes = base.map(|m, _| if m == active { budget / carbons.get(active) } else { 0.0 });
            CarbonBudgetScenario { active, amplitudes }
        })
        .collect();
    Ok((budget, scenarios))
}
