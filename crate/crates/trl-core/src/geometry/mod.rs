//! Parametric layer geometry: flat strips and triangulated torsion-resistant
//! layers, meshed into labeled triangle shells.
//!
//! All coordinates are millimetres. Meshes are pure functions of their spec
//! and target edge length; nodes shared between panels are generated from
//! identical interpolation expressions so they merge exactly.

mod builder;
mod sll;
mod stl;
mod trl;
mod validate;

pub use sll::build_sll_mesh;
pub use stl::{export_stl, stl_signed_volume, stl_triangle_count};
pub use trl::{build_trl_mesh, build_trl_mesh_styled, TrlStyle};
pub use validate::{validate_mesh, MeshDefect};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat rectangular strain limiting layer.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SllSpec {
    /// mm
    pub length: f64,
    /// mm
    pub width: f64,
    /// mm
    pub thickness: f64,
}

impl Default for SllSpec {
    fn default() -> Self {
        SllSpec {
            length: 100.0,
            width: 20.0,
            thickness: 0.5,
        }
    }
}

impl SllSpec {
    pub fn new(length: f64, width: f64, thickness: f64) -> Result<Self> {
        let spec = SllSpec {
            length,
            width,
            thickness,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0 && self.thickness > 0.0) {
            return Err(Error::invalid(format!(
                "strip spec must have positive dimensions, got L={} W={} t={}",
                self.length, self.width, self.thickness
            )));
        }
        Ok(())
    }
}

/// Triangulated torsion-resistant layer.
///
/// `triangle_count` tents of oblique panels hang below a thin bonding
/// flange; the apexes form the gripping spikes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrlSpec {
    /// mm
    pub length: f64,
    /// mm
    pub width: f64,
    pub triangle_count: u32,
    /// Apex depth below the flange, mm. Default 10% of length plus 2 mm of
    /// bonding allowance for the gripping layer.
    pub fin_height: f64,
    /// Printed wall thickness for flange and panels, mm.
    pub panel_thickness: f64,
}

pub const DEFAULT_PANEL_THICKNESS: f64 = 1.0;

impl Default for TrlSpec {
    fn default() -> Self {
        TrlSpec::new(100.0, 20.0, 30).expect("default spec is valid")
    }
}

impl TrlSpec {
    /// Build a spec with the default fin height and panel thickness.
    pub fn new(length: f64, width: f64, triangle_count: u32) -> Result<Self> {
        let spec = TrlSpec {
            length,
            width,
            triangle_count,
            fin_height: Self::default_fin_height(length),
            panel_thickness: DEFAULT_PANEL_THICKNESS,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn default_fin_height(length: f64) -> f64 {
        0.10 * length + 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.width > 0.0) {
            return Err(Error::invalid("layer length and width must be positive"));
        }
        if self.triangle_count < 1 {
            return Err(Error::invalid("triangle_count must be at least 1"));
        }
        if !(self.fin_height > 0.0) {
            return Err(Error::invalid("fin_height must be positive"));
        }
        if !(self.panel_thickness > 0.0) {
            return Err(Error::invalid("panel_thickness must be positive"));
        }
        Ok(())
    }

    /// Out-of-band but permitted configurations, surfaced to the user.
    pub fn warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if !(2..=30).contains(&self.triangle_count) {
            warnings.push(format!(
                "triangle_count {} is outside the studied 2..=30 range; results are extrapolation",
                self.triangle_count
            ));
        }
        warnings
    }

    /// Spacing of the apex stations along the length, mm.
    pub fn pitch(&self) -> f64 {
        self.length / self.triangle_count as f64
    }

    /// x-position of the i-th chord station (i in 0..=triangle_count).
    pub fn station_x(&self, i: u32) -> f64 {
        self.length * i as f64 / self.triangle_count as f64
    }

    /// x-position of the i-th apex (i in 0..triangle_count).
    pub fn apex_x(&self, i: u32) -> f64 {
        self.length * (i as f64 + 0.5) / self.triangle_count as f64
    }

    pub fn apex_positions(&self) -> Vec<f64> {
        (0..self.triangle_count).map(|i| self.apex_x(i)).collect()
    }

    /// Side-elevation angle between the base and the triangle side,
    /// alpha = atan(2 h / pitch), degrees. Derived metadata only.
    pub fn apex_angle_deg(&self) -> f64 {
        (2.0 * self.fin_height / self.pitch()).atan().to_degrees()
    }
}

/// Triangle shell mesh with labeled node and element sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriMesh {
    /// Node coordinates, mm.
    pub nodes: Vec<[f64; 3]>,
    /// Node index triples, consistently wound per panel.
    pub elements: Vec<[usize; 3]>,
    /// Shell thickness per element, mm.
    pub thickness: Vec<f64>,
    /// Flat-panel id per element; panels are the units of STL solid export.
    pub panel_of: Vec<usize>,
    pub node_sets: NodeSets,
    pub element_sets: ElementSets,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeSets {
    /// Clamped end, x = 0.
    pub fixed_edge: Vec<usize>,
    /// Loaded free-end top edge, x = L.
    pub load_edge: Vec<usize>,
    /// Tip node nearest (L, 0, 0); measurement point A.
    pub tip_center_a: usize,
    /// Tip node nearest (L, W/2, 0); measurement point B.
    pub tip_edge_b: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementSets {
    /// Elements touching the load edge; excluded from stress-concentration
    /// statistics to suppress point-load pollution.
    pub load_adjacent: Vec<usize>,
}

impl TriMesh {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn panel_count(&self) -> usize {
        self.panel_of.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Element area from the cross product, mm^2.
    pub fn element_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.elements[e];
        let p = self.nodes[a];
        let q = self.nodes[b];
        let r = self.nodes[c];
        let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
        let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
        let cx = u[1] * v[2] - u[2] * v[1];
        let cy = u[2] * v[0] - u[0] * v[2];
        let cz = u[0] * v[1] - u[1] * v[0];
        0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.element_count()).map(|e| self.element_area(e)).sum()
    }

    /// Axis-aligned bounding box, ([min; 3], [max; 3]) in mm.
    pub fn bounding_box(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for n in &self.nodes {
            for k in 0..3 {
                lo[k] = lo[k].min(n[k]);
                hi[k] = hi[k].max(n[k]);
            }
        }
        (lo, hi)
    }

    /// Structured JSON dump (nodes, elements, sets), mm everywhere.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<TriMesh> {
        Ok(serde_json::from_str(text)?)
    }
}
