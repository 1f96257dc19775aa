//! Unit conversions between the mm / N / N·mm / degree interface units and
//! the SI quantities used inside the solvers.
//!
//! Geometry files, CLI flags and result records all speak millimetres and
//! newton-millimetres because that is the natural scale of the hardware.
//! Everything that computes (element stiffness, beam formulas, payload
//! limits) runs in m / N / Pa / rad and converts at the boundary.

pub const MM_PER_M: f64 = 1.0e3;
pub const M_PER_MM: f64 = 1.0e-3;

/// Standard gravity used to convert object masses into lifting forces.
pub const STANDARD_GRAVITY: f64 = 9.81; // m/s^2

pub fn mm_to_m(x: f64) -> f64 {
    x * M_PER_MM
}

pub fn m_to_mm(x: f64) -> f64 {
    x * MM_PER_M
}

/// N·mm -> N·m
pub fn nmm_to_nm(x: f64) -> f64 {
    x * M_PER_MM
}

/// N·m -> N·mm
pub fn nm_to_nmm(x: f64) -> f64 {
    x * MM_PER_M
}

pub fn deg_to_rad(x: f64) -> f64 {
    x.to_radians()
}

pub fn rad_to_deg(x: f64) -> f64 {
    x.to_degrees()
}

/// Grams -> weight in newtons.
pub fn grams_to_newtons(mass_g: f64) -> f64 {
    mass_g * 1.0e-3 * STANDARD_GRAVITY
}

/// Weight in newtons -> equivalent mass in grams.
pub fn newtons_to_grams(force_n: f64) -> f64 {
    force_n / STANDARD_GRAVITY * 1.0e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert!((m_to_mm(mm_to_m(123.456)) - 123.456).abs() < 1e-12);
        assert_eq!(nm_to_nmm(nmm_to_nm(5.0)), 5.0);
        let g = grams_to_newtons(300.0);
        assert!((g - 2.943).abs() < 1e-12);
        assert!((newtons_to_grams(g) - 300.0).abs() < 1e-12);
    }
}
