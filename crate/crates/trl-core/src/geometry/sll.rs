//! Flat strip mesher.

use super::builder::{divisions, even_divisions, MeshBuilder};
use super::{SllSpec, TriMesh};
use crate::error::{Error, Result};

/// Mesh the strip as a single flat panel in the z = 0 plane, x in [0, L],
/// y in [-W/2, W/2]. The clamped edge is x = 0, the loaded edge x = L.
pub fn build_sll_mesh(spec: &SllSpec, target_edge: f64) -> Result<TriMesh> {
    spec.validate()?;
    if !(target_edge > 0.0) {
        return Err(Error::invalid("target_edge must be positive"));
    }
    if target_edge > spec.length.min(spec.width) {
        return Err(Error::invalid(format!(
            "target_edge {} exceeds the smallest layer dimension {}",
            target_edge,
            spec.length.min(spec.width)
        )));
    }

    let nx = divisions(spec.length, target_edge);
    let ny = even_divisions(spec.width, target_edge);
    let half_w = spec.width / 2.0;

    let mut builder = MeshBuilder::new();
    builder.add_quad_panel(
        [
            [0.0, -half_w, 0.0],
            [spec.length, -half_w, 0.0],
            [spec.length, half_w, 0.0],
            [0.0, half_w, 0.0],
        ],
        nx,
        ny,
        spec.thickness,
        0,
    );
    Ok(builder.finish(spec.length, spec.width))
}
