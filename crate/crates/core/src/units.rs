//! Unit conversions shared by the whole pipeline.
//!
//! Internal convention: channel quantities are SI (mol, m, s), cytosolic
//! concentrations are µM, rates are µM/s. Conversions happen only at module
//! boundaries, through the functions here.

use crate::error::{GlvError, Result};
use serde::{Deserialize, Serialize};

/// Ideal-gas constant in m³·atm·mol⁻¹·K⁻¹.
pub const GAS_CONSTANT_M3_ATM: f64 = 8.2057e-5;

/// One atmosphere in bar. The absorption equation takes pressure in bar.
pub const BAR_PER_ATM: f64 = 1.01325;

/// Ambient temperature and pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    pub temperature_kelvin: f64,
    pub pressure_atm: f64,
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature_kelvin > 0.0) {
            return Err(GlvError::Parameter(format!(
                "temperature_kelvin must be > 0, got {}",
                self.temperature_kelvin
            )));
        }
        if !(self.pressure_atm > 0.0) {
            return Err(GlvError::Parameter(format!(
                "pressure_atm must be > 0, got {}",
                self.pressure_atm
            )));
        }
        Ok(())
    }

    /// Ideal-gas molar volume in m³/mol.
    pub fn molar_volume_m3(&self) -> f64 {
        GAS_CONSTANT_M3_ATM * self.temperature_kelvin / self.pressure_atm
    }

    pub fn pressure_bar(&self) -> f64 {
        self.pressure_atm * BAR_PER_ATM
    }
}

/// Air concentration mol/m³ → mole fraction ppb.
pub fn mol_per_m3_to_ppb(c: f64, env: &Environment) -> Result<f64> {
    if c < 0.0 {
        return Err(GlvError::Domain(format!("air concentration must be >= 0, got {c}")));
    }
    Ok(c * env.molar_volume_m3() * 1e9)
}

/// Total enzyme concentration in µM from a PaxDb-style ppm abundance.
///
/// `k_e` is the cellular protein density in molecules per femtoliter. The
/// ppm→fraction factor (10⁻⁶) and the mol→µmol factor (10⁶) cancel, so
/// `k_e · A_b · 10¹⁵ / N_A` reads directly in µmol/L.
pub fn enzyme_total_concentration(abundance_ppm: f64, k_e: f64, avogadro: f64) -> Result<f64> {
    if abundance_ppm < 0.0 {
        return Err(GlvError::Domain(format!(
            "enzyme abundance must be >= 0, got {abundance_ppm}"
        )));
    }
    if !(k_e > 0.0) {
        return Err(GlvError::Parameter(format!("k_e must be > 0, got {k_e}")));
    }
    Ok(k_e * abundance_ppm * 1e15 / avogadro)
}

/// Alarm threshold µg·g⁻¹ FW → µM, given the metabolite molar mass and the
/// intracellular water volume per fresh weight.
pub fn alarm_threshold_to_micromolar(threshold_ug_per_g: f64, mw: f64, v_intra: f64) -> Result<f64> {
    if threshold_ug_per_g < 0.0 {
        return Err(GlvError::Domain(format!(
            "threshold must be >= 0, got {threshold_ug_per_g}"
        )));
    }
    if !(mw > 0.0) || !(v_intra > 0.0) {
        return Err(GlvError::Parameter(format!(
            "molar mass and intracellular volume must be > 0 (mw={mw}, v_intra={v_intra})"
        )));
    }
    Ok(threshold_ug_per_g / (mw * v_intra))
}

/// Cytosolic concentration µM → mol/m³ (what the absorption equation takes).
pub fn micromolar_to_mol_per_m3(c_um: f64) -> f64 {
    c_um * 1e-3
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn env() -> Environment {
        Environment { temperature_kelvin: 298.15, pressure_atm: 1.0 }
    }

    #[test]
    fn ppb_zero_case() {
        assert_eq!(mol_per_m3_to_ppb(0.0, &env()).unwrap(), 0.0);
    }

    #[test]
    fn ppb_unit_concentration() {
        // V_m = 8.2057e-5 * 298.15 = 0.024465 m³/mol
        let ppb = mol_per_m3_to_ppb(1.0, &env()).unwrap();
        assert_relative_eq!(ppb, 2.4465e7, max_relative = 1e-4);
    }

    #[test]
    fn ppb_linear_scaling() {
        let a = mol_per_m3_to_ppb(1.0, &env()).unwrap();
        let b = mol_per_m3_to_ppb(1e-12, &env()).unwrap();
        assert_relative_eq!(b, a * 1e-12, max_relative = 1e-12);
        assert_relative_eq!(b, 2.4465e-5, max_relative = 1e-4);
    }

    #[test]
    fn ppb_rejects_negative() {
        assert!(mol_per_m3_to_ppb(-1.0, &env()).is_err());
    }

    #[test]
    fn enzyme_concentration_zero() {
        assert_eq!(enzyme_total_concentration(0.0, 3e6, 6.02e23).unwrap(), 0.0);
    }

    #[test]
    fn enzyme_concentration_chr() {
        // molecules/L = 3e6 * 1e15 * 330e-6 = 9.9e17; / 6.02e23 = 1.6445e-6 mol/L
        let e = enzyme_total_concentration(330.0, 3e6, 6.02e23).unwrap();
        let oracle = 3e6 * 330.0 * 1e15 / 6.02e23;
        assert_relative_eq!(e, oracle, max_relative = 1e-12);
        assert_relative_eq!(e, 1.644, max_relative = 1e-3);
    }

    #[test]
    fn enzyme_concentration_91r() {
        let e = enzyme_total_concentration(0.09, 3e6, 6.02e23).unwrap();
        assert_relative_eq!(e, 4.485e-4, max_relative = 1e-3);
    }

    #[test]
    fn enzyme_concentration_linear_in_abundance() {
        let a = enzyme_total_concentration(330.0, 3e6, 6.02e23).unwrap();
        let b = enzyme_total_concentration(165.0, 3e6, 6.02e23).unwrap();
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-14);
    }

    #[test]
    fn threshold_zero() {
        assert_eq!(alarm_threshold_to_micromolar(0.0, 394.4, 0.0009).unwrap(), 0.0);
    }

    #[test]
    fn threshold_paper_value() {
        // 0.5 / (394.4 * 0.0009) = 1.409, matching the tabulated 1.4 µM
        let c = alarm_threshold_to_micromolar(0.5, 394.4, 0.0009).unwrap();
        assert_relative_eq!(c, 1.409, max_relative = 1e-3);
    }

    #[test]
    fn threshold_exposed_plant_mean() {
        let c = alarm_threshold_to_micromolar(2.39, 394.4, 0.0009).unwrap();
        assert_relative_eq!(c, 6.73, max_relative = 1e-3);
    }

    #[test]
    fn threshold_round_trip() {
        let x = 0.5;
        let c = alarm_threshold_to_micromolar(x, 394.4, 0.0009).unwrap();
        assert_relative_eq!(c * 394.4 * 0.0009, x, max_relative = 1e-12);
    }

    #[test]
    fn threshold_rejects_bad_params() {
        assert!(alarm_threshold_to_micromolar(0.5, 0.0, 0.0009).is_err());
        assert!(alarm_threshold_to_micromolar(0.5, 394.4, -1.0).is_err());
    }
}
