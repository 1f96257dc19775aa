//! Material property records and derived elastic constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isotropic linear-elastic material, plus the contact/failure properties
/// needed by the payload model.
///
/// The shear modulus is never stored: it is always derived from `E` and `nu`
/// via [`Material::shear_modulus`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub name: String,
    /// Young's modulus, Pa.
    pub youngs_modulus: f64,
    /// Poisson's ratio, 0 <= nu < 0.5.
    pub poisson_ratio: f64,
    /// kg/m^3, informational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Shear fracture stress tau_f, Pa.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_fracture_stress: Option<f64>,
    /// Coefficient of static friction against a rigid counterface.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub static_friction: Option<f64>,
}

impl Material {
    pub fn new(name: impl Into<String>, youngs_modulus: f64, poisson_ratio: f64) -> Result<Self> {
        let m = Material {
            name: name.into(),
            youngs_modulus,
            poisson_ratio,
            density: None,
            shear_fracture_stress: None,
            static_friction: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus > 0.0 && self.youngs_modulus.is_finite()) {
            return Err(Error::invalid(format!(
                "material `{}`: youngs_modulus must be positive, got {}",
                self.name, self.youngs_modulus
            )));
        }
        if !(0.0..0.5).contains(&self.poisson_ratio) {
            return Err(Error::invalid(format!(
                "material `{}`: poisson_ratio must satisfy 0 <= nu < 0.5, got {}",
                self.name, self.poisson_ratio
            )));
        }
        if let Some(mu) = self.static_friction {
            if mu < 0.0 {
                return Err(Error::invalid(format!(
                    "material `{}`: static_friction must be >= 0",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// G = E / (2 (1 + nu)), Pa.
    pub fn shear_modulus(&self) -> f64 {
        self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))
    }

    /// PA-6 as used for every skeleton simulation.
    ///
    /// The modulus is recovered from the 1.0 mm reference strip
    /// (F = 0.01 N, L = 100 mm, w = 20 mm, tip deflection 1.75 mm) rather
    /// than taken from a datasheet, so the solvers reproduce the same
    /// deflection table the default configuration was validated against.
    /// nu = 0.39 is a typical handbook value for dry PA-6.
    pub fn pa6() -> Material {
        let e = calibrate_modulus(1.0, 1.75, 0.01, 100.0, 20.0)
            .expect("reference row inversion is well-posed");
        Material {
            name: "PA6".to_string(),
            youngs_modulus: e,
            poisson_ratio: 0.39,
            density: Some(1140.0),
            shear_fracture_stress: None,
            static_friction: None,
        }
    }

    /// Handbook PLA, the usual print material for the layers.
    pub fn pla() -> Material {
        Material {
            name: "PLA".to_string(),
            youngs_modulus: 3.5e9,
            poisson_ratio: 0.36,
            density: Some(1250.0),
            shear_fracture_stress: None,
            static_friction: None,
        }
    }

    /// Ecoflex 00-30 silicone. Only the payload model consumes it — the
    /// skeleton FEA never meshes the elastomer.
    pub fn ecoflex_00_30() -> Material {
        Material {
            name: "Ecoflex00-30".to_string(),
            youngs_modulus: 1.0e5,
            poisson_ratio: 0.49,
            density: Some(1070.0),
            // Tear-strength-class bound for the shear fracture check.
            shear_fracture_stress: Some(2.6e5),
            static_friction: Some(1.0),
        }
    }

    /// Look up a built-in material by its registered name.
    pub fn builtin(name: &str) -> Option<Material> {
        match name {
            "PA6" => Some(Material::pa6()),
            "PLA" => Some(Material::pla()),
            "Ecoflex00-30" => Some(Material::ecoflex_00_30()),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 3] = ["PA6", "PLA", "Ecoflex00-30"];
}

/// Recover a Young's modulus from one measured cantilever row.
///
/// Inverts delta = F L^3 / (3 E I) with I = w t^3 / 12. All geometric inputs
/// in mm, load in N; the result is in Pa.
pub fn calibrate_modulus(
    thickness_mm: f64,
    displacement_mm: f64,
    load_n: f64,
    length_mm: f64,
    width_mm: f64,
) -> Result<f64> {
    for (label, v) in [
        ("thickness", thickness_mm),
        ("displacement", displacement_mm),
        ("load", load_n),
        ("length", length_mm),
        ("width", width_mm),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!(
                "calibrate_modulus: {label} must be positive and finite, got {v}"
            )));
        }
    }
    let t = crate::units::mm_to_m(thickness_mm);
    let w = crate::units::mm_to_m(width_mm);
    let l = crate::units::mm_to_m(length_mm);
    let delta = crate::units::mm_to_m(displacement_mm);
    let second_moment = w * t.powi(3) / 12.0;
    Ok(load_n * l.powi(3) / (3.0 * delta * second_moment))
}
