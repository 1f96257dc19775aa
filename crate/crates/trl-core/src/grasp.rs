//! Antipodal-grasp payload model.
//!
//! A simply lifted object is held by two opposed fingers. Three failure
//! modes bound the liftable force: the contact slipping, the finger
//! twisting about its long axis until the object rotates free, and the
//! soft gripping layer shearing off. The smallest of the applicable limits
//! governs the payload.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

/// One grasp configuration. All quantities are interface units
/// (N, mm, N·mm/rad, Pa); conversions happen inside the model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraspScenario {
    /// Normal force each finger applies, N.
    pub normal_force_n: f64,
    /// Static friction coefficient at the contact.
    pub friction: f64,
    /// Distance from the finger's neutral axis to the object surface, mm.
    pub contact_radius_mm: f64,
    /// Torsional spring constant of the finger, N·mm/rad.
    pub torsional_stiffness_nmm: f64,
    /// Vertical sag the application tolerates before the grasp counts as
    /// failed, mm.
    pub allowed_sag_mm: f64,
    /// Shear stress seen by the gripping layer, Pa. Leave unset when no
    /// field data is available; the shear mode then passes vacuously.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_stress_pa: Option<f64>,
    /// Shear fracture strength of the gripping layer, Pa.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear_fracture_pa: Option<f64>,
}

impl GraspScenario {
    pub fn validate(&self) -> Result<()> {
        if self.normal_force_n < 0.0 {
            return Err(Error::invalid("normal_force_n must be >= 0"));
        }
        if self.friction < 0.0 {
            return Err(Error::invalid("friction must be >= 0"));
        }
        if !(self.contact_radius_mm > 0.0) {
            return Err(Error::invalid("contact_radius_mm must be > 0"));
        }
        if !(self.torsional_stiffness_nmm > 0.0) {
            return Err(Error::invalid("torsional_stiffness_nmm must be > 0"));
        }
        if self.allowed_sag_mm < 0.0 {
            return Err(Error::invalid("allowed_sag_mm must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureMode {
    Slip,
    Twist,
    Shear,
}

/// Per-mode load limits and the governing minimum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PayloadReport {
    pub slip_limit_n: f64,
    pub twist_limit_n: f64,
    pub shear_ok: bool,
    /// kappa / r^2, N/m.
    pub effective_stiffness_n_per_m: f64,
    pub capacity_n: f64,
    pub governing_mode: FailureMode,
}

/// Friction bound on the liftable force: mu * F_n.
pub fn slip_limit(friction: f64, normal_force_n: f64) -> f64 {
    friction * normal_force_n
}

/// Twist bound: the force that rotates the finger far enough for the object
/// to sag by `allowed_sag_mm`, i.e. (kappa / r^2) * x.
pub fn twist_limit(kappa_nmm: f64, contact_radius_mm: f64, allowed_sag_mm: f64) -> Result<f64> {
    let k = effective_stiffness(kappa_nmm, contact_radius_mm)?;
    Ok(k * units::mm_to_m(allowed_sag_mm))
}

/// kappa / r^2 — the translational stiffness a grasped object feels as it
/// sags under gravity. Returned in N/m.
pub fn effective_stiffness(kappa_nmm: f64, contact_radius_mm: f64) -> Result<f64> {
    if !(contact_radius_mm > 0.0) {
        return Err(Error::invalid("contact radius must be > 0"));
    }
    let kappa = units::nmm_to_nm(kappa_nmm);
    let r = units::mm_to_m(contact_radius_mm);
    Ok(kappa / (r * r))
}

/// Invert the effective stiffness against a measured value:
/// r = sqrt(kappa / k_measured), returned in mm.
pub fn fit_contact_radius(kappa_nmm: f64, measured_stiffness_n_per_m: f64) -> Result<f64> {
    if !(kappa_nmm > 0.0 && measured_stiffness_n_per_m > 0.0) {
        return Err(Error::invalid(
            "fit_contact_radius needs positive stiffnesses",
        ));
    }
    let kappa = units::nmm_to_nm(kappa_nmm);
    Ok(units::m_to_mm((kappa / measured_stiffness_n_per_m).sqrt()))
}

/// Shear mode passes unless the layer stress strictly exceeds the fracture
/// strength. Missing data on either side passes vacuously.
pub fn shear_check(shear_stress_pa: Option<f64>, shear_fracture_pa: Option<f64>) -> bool {
    match (shear_stress_pa, shear_fracture_pa) {
        (Some(tau), Some(tau_f)) => tau <= tau_f,
        _ => true,
    }
}

/// Evaluate all three failure modes; the minimum governs.
/// Ties resolve Slip before Twist before Shear.
pub fn payload_capacity(s: &GraspScenario) -> Result<PayloadReport> {
    s.validate()?;
    let slip = slip_limit(s.friction, s.normal_force_n);
    let twist = twist_limit(
        s.torsional_stiffness_nmm,
        s.contact_radius_mm,
        s.allowed_sag_mm,
    )?;
    let keff = effective_stiffness(s.torsional_stiffness_nmm, s.contact_radius_mm)?;
    let shear_ok = shear_check(s.shear_stress_pa, s.shear_fracture_pa);

    let (capacity, mode) = if !shear_ok {
        (0.0, FailureMode::Shear)
    } else if slip <= twist {
        (slip, FailureMode::Slip)
    } else {
        (twist, FailureMode::Twist)
    };

    Ok(PayloadReport {
        slip_limit_n: slip,
        twist_limit_n: twist,
        shear_ok,
        effective_stiffness_n_per_m: keff,
        capacity_n: capacity,
        governing_mode: mode,
    })
}

/// Which gripper build a feasibility query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gripper {
    /// Plain flat strain limiting layer.
    Benchmark,
    /// Torsion-resistant layer.
    Trl,
}

impl Gripper {
    /// Demonstrated lifting capacity, expressed as the heaviest mass held.
    pub fn default_capacity_n(self) -> f64 {
        match self {
            Gripper::Benchmark => units::grams_to_newtons(100.0),
            Gripper::Trl => units::grams_to_newtons(300.0),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub object_weight_n: f64,
    pub capacity_n: f64,
    /// Spare capacity expressed as a mass, g. Negative when infeasible.
    pub margin_g: f64,
}

/// Can `mass_g` be lifted? Capacity comes from the gripper's demonstrated
/// mass limit unless a full scenario overrides it. Masses convert to forces
/// with standard gravity.
pub fn feasibility(
    mass_g: f64,
    gripper: Gripper,
    scenario: Option<&GraspScenario>,
) -> Result<Feasibility> {
    if mass_g < 0.0 {
        return Err(Error::invalid("mass must be >= 0"));
    }
    let capacity_n = match scenario {
        Some(s) => payload_capacity(s)?.capacity_n,
        None => gripper.default_capacity_n(),
    };
    let weight_n = units::grams_to_newtons(mass_g);
    Ok(Feasibility {
        feasible: weight_n <= capacity_n,
        object_weight_n: weight_n,
        capacity_n,
        margin_g: units::newtons_to_grams(capacity_n) - mass_g,
    })
}

/// Named scenario presets surfaced by the CLI.
///
/// `pull-test-fit` carries the stiffness fitted from the cylinder pull test
/// (kappa = 265.5 N·mm/rad, r = 15 mm) with the silicone-on-rigid friction
/// assumption mu = 1 and the measured 3 N peak normal force. The caller
/// still supplies the allowed sag.
pub fn preset(name: &str) -> Option<GraspScenario> {
    match name {
        "pull-test-fit" | "paper-V.B-fit" => Some(GraspScenario {
            normal_force_n: 3.0,
            friction: 1.0,
            contact_radius_mm: 15.0,
            torsional_stiffness_nmm: 265.5,
            allowed_sag_mm: 1.0,
            shear_stress_pa: None,
            shear_fracture_pa: None,
        }),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 2] = ["pull-test-fit", "paper-V.B-fit"];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn slip_limit_values() {
        assert_eq!(slip_limit(0.5, 10.0), 5.0);
        assert_eq!(slip_limit(0.0, 123.0), 0.0);
        // 3 N at mu = 1 sits right at the ~300 g demonstrated limit.
        let cap = slip_limit(1.0, 3.0);
        assert_eq!(cap, 3.0);
        assert!((units::newtons_to_grams(cap) - 305.8).abs() < 1.0);
    }

    #[test]
    fn twist_limit_values() {
        let f = twist_limit(265.5, 15.0, 1.0).unwrap();
        assert_relative_eq!(f, 1.18, max_relative = 1e-3);
        assert_eq!(twist_limit(265.5, 15.0, 0.0).unwrap(), 0.0);
        let quarter = twist_limit(265.5, 30.0, 1.0).unwrap();
        assert_relative_eq!(quarter, f / 4.0, max_relative = 1e-12);
        assert!(twist_limit(265.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn effective_stiffness_values() {
        let k = effective_stiffness(265.5, 15.0).unwrap();
        assert_relative_eq!(k, 1180.0, max_relative = 1e-3);
        // Scale invariance: kappa x4, r x2 -> unchanged.
        let k2 = effective_stiffness(265.5 * 4.0, 30.0).unwrap();
        assert_relative_eq!(k2, k, max_relative = 1e-12);
        // Unit identity: 1 N·m over 1 m -> 1 N/m.
        let k3 = effective_stiffness(1000.0, 1000.0).unwrap();
        assert_relative_eq!(k3, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn contact_radius_fits() {
        let r = fit_contact_radius(265.5, 1181.0).unwrap();
        assert!((r - 15.0).abs() < 0.1, "fit {r} should be 15.0 +- 0.1");
        let r_bench = fit_contact_radius(1.9, 152.0).unwrap();
        assert_relative_eq!(r_bench, 3.5, max_relative = 0.02);
    }

    #[test]
    fn fit_round_trips_through_effective_stiffness() {
        for (kappa, k_meas) in [(265.5, 1181.0), (1.9, 152.0), (50.0, 700.0)] {
            let r = fit_contact_radius(kappa, k_meas).unwrap();
            let k = effective_stiffness(kappa, r).unwrap();
            assert_relative_eq!(k, k_meas, max_relative = 1e-9);
        }
    }

    #[test]
    fn shear_check_boundary() {
        assert!(shear_check(Some(1.0e3), Some(1.0e5)));
        assert!(shear_check(Some(1.0e5), Some(1.0e5)));
        assert!(!shear_check(Some(1.0e5 + 1.0), Some(1.0e5)));
        assert!(shear_check(None, Some(1.0e5)));
        assert!(shear_check(Some(1.0e5), None));
    }

    fn scenario(friction: f64) -> GraspScenario {
        GraspScenario {
            normal_force_n: 3.0,
            friction,
            contact_radius_mm: 15.0,
            torsional_stiffness_nmm: 265.5,
            allowed_sag_mm: 1.0,
            shear_stress_pa: None,
            shear_fracture_pa: None,
        }
    }

    #[test]
    fn capacity_governing_modes() {
        let twist_governed = payload_capacity(&scenario(1.0)).unwrap();
        assert_relative_eq!(twist_governed.capacity_n, 1.18, max_relative = 1e-3);
        assert_eq!(twist_governed.governing_mode, FailureMode::Twist);

        let slip_governed = payload_capacity(&scenario(0.1)).unwrap();
        assert_relative_eq!(slip_governed.capacity_n, 0.3, max_relative = 1e-12);
        assert_eq!(slip_governed.governing_mode, FailureMode::Slip);

        let mut s = scenario(1.0);
        s.shear_stress_pa = Some(2.0e5);
        s.shear_fracture_pa = Some(1.0e5);
        let sheared = payload_capacity(&s).unwrap();
        assert_eq!(sheared.capacity_n, 0.0);
        assert_eq!(sheared.governing_mode, FailureMode::Shear);
    }

    #[test]
    fn unit_audit_si_vs_interface() {
        // The SI path must agree with direct mm / N·mm arithmetic.
        let s = scenario(1.0);
        let report = payload_capacity(&s).unwrap();
        let twist_mm_units =
            s.torsional_stiffness_nmm / s.contact_radius_mm.powi(2) * s.allowed_sag_mm;
        let slip = s.friction * s.normal_force_n;
        let capacity_mm_units = slip.min(twist_mm_units);
        assert_relative_eq!(report.capacity_n, capacity_mm_units, max_relative = 1e-9);
    }

    #[test]
    fn feasibility_window() {
        let f = feasibility(250.0, Gripper::Trl, None).unwrap();
        assert!(f.feasible);
        assert_relative_eq!(f.margin_g, 50.0, max_relative = 1e-9);

        let f = feasibility(150.0, Gripper::Benchmark, None).unwrap();
        assert!(!f.feasible);

        assert!(feasibility(0.0, Gripper::Trl, None).unwrap().feasible);
        assert!(feasibility(0.0, Gripper::Benchmark, None).unwrap().feasible);
    }

    #[test]
    fn presets_resolve() {
        let s = preset("pull-test-fit").unwrap();
        s.validate().unwrap();
        let report = payload_capacity(&s).unwrap();
        assert_eq!(report.governing_mode, FailureMode::Twist);
        assert!(preset("paper-V.B-fit").is_some());
        assert!(preset("nope").is_none());
    }

    proptest! {
        /// Capacity grows (weakly) with kappa, mu, F_n, x and shrinks with r.
        #[test]
        fn capacity_monotonicity(
            fn_ in 0.0f64..20.0,
            mu in 0.0f64..2.0,
            r in 1.0f64..100.0,
            kappa in 0.1f64..1000.0,
            x in 0.0f64..10.0,
            bump in 1.0f64..3.0,
        ) {
            let base = scenario(mu);
            let base = GraspScenario { normal_force_n: fn_, contact_radius_mm: r,
                torsional_stiffness_nmm: kappa, allowed_sag_mm: x, ..base };
            let c0 = payload_capacity(&base).unwrap().capacity_n;

            let mut up = base.clone();
            up.torsional_stiffness_nmm *= bump;
            prop_assert!(payload_capacity(&up).unwrap().capacity_n >= c0);

            let mut up = base.clone();
            up.friction *= bump;
            prop_assert!(payload_capacity(&up).unwrap().capacity_n >= c0);

            let mut up = base.clone();
            up.normal_force_n *= bump;
            prop_assert!(payload_capacity(&up).unwrap().capacity_n >= c0);

            let mut up = base.clone();
            up.allowed_sag_mm *= bump;
            prop_assert!(payload_capacity(&up).unwrap().capacity_n >= c0);

            let mut down = base.clone();
            down.contact_radius_mm *= bump;
            prop_assert!(payload_capacity(&down).unwrap().capacity_n <= c0);
        }

        /// The reported mode is always the argmin of the reported limits.
        #[test]
        fn governing_mode_self_consistent(
            fn_ in 0.0f64..20.0,
            mu in 0.0f64..2.0,
            r in 1.0f64..100.0,
            kappa in 0.1f64..1000.0,
            x in 0.0f64..10.0,
        ) {
            let s = GraspScenario {
                normal_force_n: fn_,
                friction: mu,
                contact_radius_mm: r,
                torsional_stiffness_nmm: kappa,
                allowed_sag_mm: x,
                shear_stress_pa: None,
                shear_fracture_pa: None,
            };
            let rep = payload_capacity(&s).unwrap();
            match rep.governing_mode {
                FailureMode::Slip => prop_assert!(rep.slip_limit_n <= rep.twist_limit_n),
                FailureMode::Twist => prop_assert!(rep.twist_limit_n < rep.slip_limit_n),
                FailureMode::Shear => prop_assert!(!rep.shear_ok),
            }
            prop_assert_eq!(rep.capacity_n, rep.slip_limit_n.min(rep.twist_limit_n));
        }
    }
}
