//! Leaf uptake: the gas/liquid resistance network that turns an air
//! concentration into a molar absorption rate.
//!
//! The absorption equation is evaluated verbatim with its mixed units: the
//! air concentration enters in ppb, the cytosolic concentration in mol/m³,
//! and the rate comes out in mol·m⁻²·s⁻¹. Absorption is bidirectional by
//! default; a negative rate is efflux back to the air and is the receiver's
//! only outflow path.

use crate::error::{GlvError, Result};
use crate::units::Environment;
use serde::{Deserialize, Serialize};

/// Leaf-level geometry and transport parameters, shared by all molecules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafParams {
    /// Diffusion coefficient of water vapor in air (m²/s).
    pub water_vapor_diffusivity_m2_per_s: f64,
    /// Effective diffusion path length in intercellular air spaces (m).
    pub ias_path_length_m: f64,
    /// Diffusion path tortuosity (m/m).
    pub tortuosity: f64,
    /// Fraction of intercellular air space volume in the leaf volume.
    pub ias_volume_fraction: f64,
    /// Leaf area per fresh weight (m²/g FW).
    pub leaf_area_per_fw_m2_per_g: f64,
    /// Intracellular water volume per fresh weight (L/g FW).
    pub intracellular_volume_l_per_g: f64,
    /// Ablation flag: clamp negative absorption (efflux) to zero.
    #[serde(default)]
    pub clamp_nonnegative_absorption: bool,
}

/// Per-molecule uptake inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeUptake {
    /// Gas-phase diffusivity of the molecule (m²/s).
    pub diffusivity_m2_per_s: f64,
    /// Leaf boundary-layer resistance for water vapor (m²·s/mol).
    pub boundary_resistance_water: f64,
    /// Stomatal resistance for water vapor (m²·s/mol).
    pub stomatal_resistance_water: f64,
    /// Transpiration rate (mol·m⁻²·s⁻¹).
    pub transpiration_mol_per_m2_s: f64,
    /// Henry constant (mol·L⁻¹·atm⁻¹).
    pub henry_mol_per_l_atm: f64,
    /// Composite liquid-phase resistance (m²·s/mol). Not tabulated in any
    /// source table; must be supplied in config.
    pub r_liq_m2_s_per_mol: f64,
}

/// Resolved absorption coefficients for one molecule.
///
/// A(C_a, C_ct) = (gain·C_a − sol·C_ct) / denom with C_a in ppb and C_ct in
/// mol/m³; the whole equation is affine so the three scalars capture it.
#[derive(Debug, Clone, Copy)]
pub struct UptakeParams {
    gain: f64,
    sol: f64,
    denom: f64,
    /// A (mol·m⁻²·s⁻¹) → cytosolic rate (mol·L⁻¹·s⁻¹) factor.
    la_over_v: f64,
    clamp_nonnegative: bool,
}

impl UptakeParams {
    pub fn resolve(mol: &MoleculeUptake, leaf: &LeafParams, env: &Environment) -> Result<Self> {
        env.validate()?;
        for (name, v) in [
            ("diffusivity", mol.diffusivity_m2_per_s),
            ("boundary resistance", mol.boundary_resistance_water),
            ("stomatal resistance", mol.stomatal_resistance_water),
            ("henry constant", mol.henry_mol_per_l_atm),
            ("r_liq", mol.r_liq_m2_s_per_mol),
            ("water vapor diffusivity", leaf.water_vapor_diffusivity_m2_per_s),
            ("ias path length", leaf.ias_path_length_m),
            ("tortuosity", leaf.tortuosity),
            ("leaf area per FW", leaf.leaf_area_per_fw_m2_per_g),
            ("intracellular volume", leaf.intracellular_volume_l_per_g),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(GlvError::Parameter(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(leaf.ias_volume_fraction > 0.0 && leaf.ias_volume_fraction < 1.0) {
            return Err(GlvError::Parameter(format!(
                "ias_volume_fraction must be in (0, 1), got {}",
                leaf.ias_volume_fraction
            )));
        }

        let d_ratio = leaf.water_vapor_diffusivity_m2_per_s / mol.diffusivity_m2_per_s;
        let r_boundary = mol.boundary_resistance_water * d_ratio.powf(2.0 / 3.0);
        let r_stomatal = mol.stomatal_resistance_water * d_ratio;
        let r_gas = r_stomatal + r_boundary;
        let r_ias = leaf.ias_path_length_m * leaf.tortuosity
            / (mol.diffusivity_m2_per_s * leaf.ias_volume_fraction);
        let scaling = 273.15 / (env.temperature_kelvin * 22.4e-3);
        let half_e = mol.transpiration_mol_per_m2_s / 2.0;
        let g_num = 1.0 / r_gas - half_e;
        let g_den = 1.0 / r_gas + half_e;
        let henry_term = 1e3 / (mol.henry_mol_per_l_atm * env.pressure_bar());
        let denom = r_ias / scaling + 1.0 / g_den + henry_term * mol.r_liq_m2_s_per_mol;
        if !(denom > 0.0) || !denom.is_finite() {
            return Err(GlvError::Parameter(format!(
                "absorption denominator must be finite and > 0, got {denom}"
            )));
        }
        Ok(Self {
            gain: g_num / g_den,
            sol: henry_term,
            denom,
            la_over_v: leaf.leaf_area_per_fw_m2_per_g / leaf.intracellular_volume_l_per_g,
            clamp_nonnegative: leaf.clamp_nonnegative_absorption,
        })
    }

    /// Absorption rate A in mol·m⁻²·s⁻¹. `c_air_ppb` in ppb, `c_cytosol` in
    /// mol/m³.
    pub fn absorption_rate(&self, c_air_ppb: f64, c_cytosol: f64) -> Result<f64> {
        if !c_air_ppb.is_finite() || !c_cytosol.is_finite() {
            return Err(GlvError::Numeric(format!(
                "non-finite absorption inputs: C_a = {c_air_ppb}, C_ct = {c_cytosol}"
            )));
        }
        let a = (self.gain * c_air_ppb - self.sol * c_cytosol) / self.denom;
        Ok(if self.clamp_nonnegative { a.max(0.0) } else { a })
    }

    /// Area-based rate → cytosolic rate in µM/s.
    pub fn to_cytosolic_rate(&self, a: f64) -> f64 {
        a * self.la_over_v * 1e6
    }

    /// Air→cytosol rate constant in 1/s for the linearized system; useful for
    /// step-size sanity checks.
    pub fn cytosolic_rate_constant(&self) -> f64 {
        // µM → mol/m³ is 1e-3; mol/L/s → µM/s is 1e6.
        self.sol / self.denom * self.la_over_v * 1e6 * 1e-3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn hal_uptake() -> MoleculeUptake {
        MoleculeUptake {
            diffusivity_m2_per_s: 8.0718e-6,
            boundary_resistance_water: 2.58,
            stomatal_resistance_water: 21.8,
            transpiration_mol_per_m2_s: 6e-4,
            henry_mol_per_l_atm: 6.0,
            r_liq_m2_s_per_mol: 1e4,
        }
    }

    pub(crate) fn leaf() -> LeafParams {
        LeafParams {
            water_vapor_diffusivity_m2_per_s: 2.3289e-5,
            ias_path_length_m: 6.38e-5,
            tortuosity: 1.57,
            ias_volume_fraction: 0.328,
            leaf_area_per_fw_m2_per_g: 0.0055,
            intracellular_volume_l_per_g: 0.0009,
            clamp_nonnegative_absorption: false,
        }
    }

    fn env() -> Environment {
        Environment { temperature_kelvin: 298.15, pressure_atm: 1.0 }
    }

    #[test]
    fn homogeneous_case_is_zero() {
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        assert_eq!(p.absorption_rate(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn cytosol_only_gives_efflux() {
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        assert!(p.absorption_rate(0.0, 1e-3).unwrap() < 0.0);
    }

    /// Frozen value from an independent straight-line evaluation of the
    /// absorption equation with the tabulated HAL parameters, C_a = 1 ppb,
    /// C_ct = 0, r_liq = 10⁴.
    #[test]
    fn hal_reference_point_regression() {
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        let a = p.absorption_rate(1.0, 0.0).unwrap();
        assert_relative_eq!(a, 5.835730731560016e-7, max_relative = 1e-12);
    }

    #[test]
    fn affine_structure() {
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        let a10 = p.absorption_rate(3.0, 0.0).unwrap();
        let a1 = p.absorption_rate(1.0, 0.0).unwrap();
        assert_relative_eq!(a10, 3.0 * a1, max_relative = 1e-12);
        let mixed = p.absorption_rate(2.0, 5e-4).unwrap();
        let split =
            p.absorption_rate(2.0, 0.0).unwrap() + p.absorption_rate(0.0, 5e-4).unwrap();
        assert_relative_eq!(mixed, split, max_relative = 1e-10);
    }

    #[test]
    fn monotonic_in_both_arguments() {
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        let h = 1e-6;
        let da = (p.absorption_rate(1.0 + h, 1e-4).unwrap()
            - p.absorption_rate(1.0, 1e-4).unwrap())
            / h;
        let dct = (p.absorption_rate(1.0, 1e-4 + h).unwrap()
            - p.absorption_rate(1.0, 1e-4).unwrap())
            / h;
        assert!(da > 0.0);
        assert!(dct < 0.0);
    }

    #[test]
    fn equilibrium_cytosol_proportional_to_air() {
        // A = 0 at C_ct* = gain/sol × C_a
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        for c_a in [0.5, 1.0, 10.0] {
            let c_star = p.gain / p.sol * c_a;
            let a = p.absorption_rate(c_a, c_star).unwrap();
            assert!(a.abs() < 1e-18, "A at equilibrium = {a}");
        }
    }

    #[test]
    fn cytosolic_rate_conversion() {
        // A = 1 → 0.0055/0.0009 mol/L/s = 6.111e6 µM/s
        let p = UptakeParams::resolve(&hal_uptake(), &leaf(), &env()).unwrap();
        assert_relative_eq!(p.to_cytosolic_rate(1.0), 0.0055 / 0.0009 * 1e6, max_relative = 1e-12);
        assert_eq!(p.to_cytosolic_rate(0.0), 0.0);
        assert!(p.to_cytosolic_rate(-1.0) < 0.0);
    }

    #[test]
    fn clamp_flag_suppresses_efflux() {
        let mut leaf_clamped = leaf();
        leaf_clamped.clamp_nonnegative_absorption = true;
        let p = UptakeParams::resolve(&hal_uptake(), &leaf_clamped, &env()).unwrap();
        assert_eq!(p.absorption_rate(0.0, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let mut bad = hal_uptake();
        bad.r_liq_m2_s_per_mol = 0.0;
        assert!(UptakeParams::resolve(&bad, &leaf(), &env()).is_err());
    }
}
