//! Laboratory units for real compounds.
//!
//! Energies are quoted as wavenumbers and converted to kelvin with `hc/k_B`;
//! fields enter through `h = g μ_B B`.

use serde::{Deserialize, Serialize};

use crate::hamiltonian::ModelParams;
use crate::{Error, Result};

/// `hc/k_B` in K per cm⁻¹.
pub const HC_OVER_KB: f64 = 1.4387769;
/// `μ_B/k_B` in K per T.
pub const MU_B_OVER_KB: f64 = 0.6717139;
/// `μ_B/(hc)` in cm⁻¹ per T, kept consistent with the two constants above.
pub const MU_B_OVER_HC: f64 = MU_B_OVER_KB / HC_OVER_KB;

pub fn wavenumber_to_kelvin(cm: f64) -> f64 {
    cm * HC_OVER_KB
}

pub fn kelvin_to_wavenumber(k: f64) -> f64 {
    k / HC_OVER_KB
}

/// Energy scale of a compound: maps tesla and kelvin onto `h/J` and `k_BT/J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScale {
    /// `J/k_B` in kelvin.
    pub j_kelvin: f64,
    pub g: f64,
}

impl PhysicalScale {
    pub fn new(j_wavenumber: f64, g: f64) -> Result<Self> {
        check_positive("J", j_wavenumber)?;
        check_positive("g", g)?;
        Ok(PhysicalScale { j_kelvin: wavenumber_to_kelvin(j_wavenumber), g })
    }

    pub fn h_over_j(&self, tesla: f64) -> f64 {
        self.g * MU_B_OVER_KB * tesla / self.j_kelvin
    }

    pub fn tesla(&self, h_over_j: f64) -> f64 {
        h_over_j * self.j_kelvin / (self.g * MU_B_OVER_KB)
    }

    pub fn kt_over_j(&self, kelvin: f64) -> f64 {
        kelvin / self.j_kelvin
    }

    pub fn kelvin(&self, kt_over_j: f64) -> f64 {
        kt_over_j * self.j_kelvin
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidPhysical(format!("{name} must be finite, got {v}")));
    }
    if v <= 0.0 {
        return Err(Error::InvalidPhysical(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// `J` as a wavenumber, cm⁻¹.
    pub j_wavenumber: f64,
    /// `J1` as a wavenumber, cm⁻¹.
    pub j1_wavenumber: f64,
    pub d_over_j: f64,
    /// Composite `g = (2 g_Ni + g_Cu)/3`.
    pub g_factor: f64,
    pub field_tesla: f64,
    pub temperature_kelvin: f64,
}

impl PhysicalParams {
    pub fn scale(&self) -> Result<PhysicalScale> {
        PhysicalScale::new(self.j_wavenumber, self.g_factor)
    }

    /// Dimensionless couplings and `k_BT/J`.
    pub fn to_model_units(&self) -> Result<(ModelParams, f64)> {
        let s = self.scale()?;
        for (name, v) in [
            ("J1", self.j1_wavenumber),
            ("D/J", self.d_over_j),
            ("B", self.field_tesla),
            ("T", self.temperature_kelvin),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidPhysical(format!("{name} must be finite, got {v}")));
            }
        }
        if self.temperature_kelvin < 0.0 {
            return Err(Error::InvalidPhysical(format!("T must be ≥ 0, got {}", self.temperature_kelvin)));
        }
        let p = ModelParams::dimensionless(
            self.j1_wavenumber / self.j_wavenumber,
            self.d_over_j,
            s.h_over_j(self.field_tesla),
        );
        Ok((p, s.kt_over_j(self.temperature_kelvin)))
    }

    /// Inverse of [`to_model_units`](Self::to_model_units) for a given `J`
    /// wavenumber and `g`.
    pub fn from_model_units(p: &ModelParams, kt: f64, j_wavenumber: f64, g_factor: f64) -> Result<Self> {
        p.validate()?;
        let s = PhysicalScale::new(j_wavenumber, g_factor)?;
        // the model may carry its own J
        let unit = j_wavenumber / p.j;
        Ok(PhysicalParams {
            j_wavenumber,
            j1_wavenumber: p.j1 * unit,
            d_over_j: p.d / p.j,
            g_factor,
            field_tesla: s.tesla(p.h / p.j),
            temperature_kelvin: s.kelvin(kt / p.j),
        })
    }
}

/// `[compound]` section of a config file. Every field except `name` is
/// required; in particular `g` has no default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompoundConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub j_wavenumber: f64,
    pub j1_wavenumber: f64,
    pub d_over_j: f64,
    pub g: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompoundFile {
    compound: CompoundConfig,
}

impl CompoundConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("j_wavenumber", self.j_wavenumber)?;
        check_positive("g", self.g)?;
        for (name, v) in [("j1_wavenumber", self.j1_wavenumber), ("d_over_j", self.d_over_j)] {
            if !v.is_finite() {
                return Err(Error::InvalidPhysical(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn scale(&self) -> Result<PhysicalScale> {
        PhysicalScale::new(self.j_wavenumber, self.g)
    }

    /// Dimensionless couplings at zero field.
    pub fn model_params(&self) -> Result<ModelParams> {
        self.validate()?;
        Ok(ModelParams::dimensionless(self.j1_wavenumber / self.j_wavenumber, self.d_over_j, 0.0))
    }

    pub fn at(&self, field_tesla: f64, temperature_kelvin: f64) -> PhysicalParams {
        PhysicalParams {
            j_wavenumber: self.j_wavenumber,
            j1_wavenumber: self.j1_wavenumber,
            d_over_j: self.d_over_j,
            g_factor: self.g,
            field_tesla,
            temperature_kelvin,
        }
    }
}

/// Parses and validates a TOML document with a `[compound]` table.
pub fn parse_compound_config(text: &str) -> Result<CompoundConfig> {
    let file: CompoundFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    file.compound.validate()?;
    Ok(file.compound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn nicuni(b: f64, t: f64) -> PhysicalParams {
        PhysicalParams {
            j_wavenumber: 90.3,
            j1_wavenumber: 0.0,
            d_over_j: 0.1,
            g_factor: 2.2,
            field_tesla: b,
            temperature_kelvin: t,
        }
    }

    #[test]
    fn wavenumber_to_kelvin_reference() {
        assert_abs_diff_eq!(wavenumber_to_kelvin(90.3), 129.92, epsilon = 5e-3);
        assert_relative_eq!(kelvin_to_wavenumber(wavenumber_to_kelvin(90.3)), 90.3, max_relative = 1e-15);
    }

    #[test]
    fn zero_field_is_zero_h() {
        let (p, _) = nicuni(0.0, 10.0).to_model_units().unwrap();
        assert_eq!(p.h, 0.0);
    }

    #[test]
    fn round_trip() {
        let phys = nicuni(37.5, 12.0);
        let (p, kt) = phys.to_model_units().unwrap();
        let back = PhysicalParams::from_model_units(&p, kt, 90.3, 2.2).unwrap();
        assert_relative_eq!(back.field_tesla, 37.5, max_relative = 1e-12);
        assert_relative_eq!(back.temperature_kelvin, 12.0, max_relative = 1e-12);
        assert_relative_eq!(back.d_over_j, 0.1, max_relative = 1e-12);
    }

    #[test]
    fn linear_in_field() {
        let (a, _) = nicuni(10.0, 1.0).to_model_units().unwrap();
        let (b, _) = nicuni(20.0, 1.0).to_model_units().unwrap();
        assert_eq!(2.0 * a.h, b.h);
    }

    #[test]
    fn kelvin_and_wavenumber_paths_agree() {
        let s = PhysicalScale::new(90.3, 2.2).unwrap();
        let via_cm = 2.2 * MU_B_OVER_HC * 15.0 / 90.3;
        assert_relative_eq!(s.h_over_j(15.0), via_cm, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_physical_inputs() {
        assert!(PhysicalParams { j_wavenumber: 0.0, ..nicuni(1.0, 1.0) }.to_model_units().is_err());
        assert!(PhysicalParams { g_factor: -2.0, ..nicuni(1.0, 1.0) }.to_model_units().is_err());
        assert!(nicuni(1.0, -1.0).to_model_units().is_err());
    }

    #[test]
    fn compound_config() {
        let ok = "[compound]\nname = \"NiCuNi\"\nj_wavenumber = 90.3\nj1_wavenumber = 0.0\nd_over_j = 0.1\ng = 2.2\n";
        let c = parse_compound_config(ok).unwrap();
        assert_eq!(c.name.as_deref(), Some("NiCuNi"));
        assert_eq!(c.model_params().unwrap(), ModelParams::dimensionless(0.0, 0.1, 0.0));
        let no_g = "[compound]\nj_wavenumber = 90.3\nj1_wavenumber = 0.0\nd_over_j = 0.1\n";
        assert!(parse_compound_config(no_g).is_err());
        assert!(parse_compound_config(&ok.replace("90.3", "-1.0")).is_err());
        assert!(parse_compound_config(&format!("{ok}extra = 1\n")).is_err());
        assert!(parse_compound_config("not toml [").is_err());
    }
}
