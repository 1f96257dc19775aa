//! Torsion-resistant layer mesher.

use super::builder::{divisions, even_divisions, MeshBuilder};
use super::{TriMesh, TrlSpec};
use crate::error::{Error, Result};

/// Cross-section interpretation for the triangulated layer.
///
/// The printed part is a family of flat panels; exactly how they are
/// arranged is a modelling choice, kept separate from the solvers so
/// alternative readings of the hardware can be meshed without touching
/// downstream code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrlStyle {
    /// Default: a thin full-width bonding flange at z = 0 with, per
    /// triangle, a pair of oblique panels running from the two chord
    /// station segments down to a centerline apex spike.
    #[default]
    VGirder,
}

/// Mesh the layer in its default interpretation.
pub fn build_trl_mesh(spec: &TrlSpec, target_edge: f64) -> Result<TriMesh> {
    build_trl_mesh_styled(spec, target_edge, TrlStyle::VGirder)
}

/// Mesh the layer with an explicit cross-section interpretation.
pub fn build_trl_mesh_styled(
    spec: &TrlSpec,
    target_edge: f64,
    style: TrlStyle,
) -> Result<TriMesh> {
    spec.validate()?;
    if spec.triangle_count < 1 {
        return Err(Error::invalid("triangle_count must be at least 1"));
    }
    if !(target_edge > 0.0) {
        return Err(Error::invalid("target_edge must be positive"));
    }

    let half_w = spec.width / 2.0;
    let pitch = spec.pitch();
    let slant =
        ((pitch / 2.0).powi(2) + half_w.powi(2) + spec.fin_height.powi(2)).sqrt();
    let web_max_edge = pitch.max(slant);

    // Mesher limit: panels with extreme edge ratios produce sliver elements.
    let web_area = 0.5 * pitch * (half_w.powi(2) + spec.fin_height.powi(2)).sqrt();
    let aspect = web_max_edge / (2.0 * web_area / web_max_edge);
    if aspect > 200.0 {
        return Err(Error::Meshing(format!(
            "web panel of triangle 0 has aspect ratio {aspect:.0} (limit 200); \
             adjust triangle_count or fin_height"
        )));
    }

    // Web base subdivision fixes the flange column count per span so the
    // chord seams are conforming.
    let n_web = divisions(web_max_edge, target_edge);
    let ny = even_divisions(spec.width, target_edge);

    let mut builder = MeshBuilder::new();
    let t = spec.panel_thickness;

    match style {
        TrlStyle::VGirder => {
            // Panel 0: bonding flange, one flat panel meshed span by span.
            for i in 0..spec.triangle_count {
                let x0 = spec.station_x(i);
                let x1 = spec.station_x(i + 1);
                builder.add_quad_panel(
                    [
                        [x0, -half_w, 0.0],
                        [x1, -half_w, 0.0],
                        [x1, half_w, 0.0],
                        [x0, half_w, 0.0],
                    ],
                    n_web,
                    ny,
                    t,
                    0,
                );
            }
            add_tent_webs(&mut builder, spec, n_web, 1);
        }
    }

    Ok(builder.finish(spec.length, spec.width))
}

/// Two oblique panels per triangle: chord segment on each side down to the
/// shared apex spike at (apex_x, 0, -h).
fn add_tent_webs(builder: &mut MeshBuilder, spec: &TrlSpec, n_web: usize, first_panel: usize) {
    let half_w = spec.width / 2.0;
    let t = spec.panel_thickness;
    for i in 0..spec.triangle_count {
        let x0 = spec.station_x(i);
        let x1 = spec.station_x(i + 1);
        let apex = [spec.apex_x(i), 0.0, -spec.fin_height];
        // Left web: wound so the outward normal faces -y / -z.
        builder.add_tri_panel(
            [
                [x1, -half_w, 0.0],
                [x0, -half_w, 0.0],
                apex,
            ],
            n_web,
            t,
            first_panel + 2 * i as usize,
        );
        // Right web: outward normal faces +y / -z.
        builder.add_tri_panel(
            [
                [x0, half_w, 0.0],
                [x1, half_w, 0.0],
                apex,
            ],
            n_web,
            t,
            first_panel + 2 * i as usize + 1,
        );
    }
}
