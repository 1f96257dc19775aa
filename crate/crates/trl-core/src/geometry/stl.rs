//! Binary STL export.
//!
//! Each flat panel is thickened symmetrically about its midsurface into a
//! closed prism solid: offset top and bottom faces plus side walls around
//! the panel boundary. Little-endian, 80-byte header, one u16 attribute
//! word per facet (zero).

use std::collections::HashMap;

use super::{validate_mesh, TriMesh};
use crate::error::{Error, Result};

type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(v: Vec3) -> Vec3 {
    let len = dot(v, v).sqrt();
    [v[0] / len, v[1] / len, v[2] / len]
}

fn offset(p: Vec3, n: Vec3, d: f64) -> Vec3 {
    [p[0] + n[0] * d, p[1] + n[1] * d, p[2] + n[2] * d]
}

/// Number of facets the export will emit: top + bottom per element plus two
/// wall facets per panel boundary edge.
pub fn stl_triangle_count(mesh: &TriMesh) -> usize {
    2 * mesh.element_count() + 2 * panel_boundaries(mesh).len()
}

/// Serialize the thickened mesh. Refuses meshes with defects.
pub fn export_stl(mesh: &TriMesh, extrude_mm: f64) -> Result<Vec<u8>> {
    if !(extrude_mm > 0.0) {
        return Err(Error::invalid("extrude must be positive"));
    }
    let defects = validate_mesh(mesh);
    if !defects.is_empty() {
        return Err(Error::MeshDefects(defects));
    }

    let boundaries = panel_boundaries(mesh);
    let facet_count = 2 * mesh.element_count() + 2 * boundaries.len();

    let mut out = Vec::with_capacity(84 + 50 * facet_count);
    let mut header = [0u8; 80];
    let tag = b"trlkit layer shell, thickened panels, mm";
    header[..tag.len()].copy_from_slice(tag);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(facet_count as u32).to_le_bytes());

    let panel_normals = panel_normals(mesh);
    let half = extrude_mm / 2.0;

    for (e, tri) in mesh.elements.iter().enumerate() {
        let n = panel_normals[mesh.panel_of[e]];
        let [a, b, c] = tri.map(|i| mesh.nodes[i]);
        let top = [offset(a, n, half), offset(b, n, half), offset(c, n, half)];
        write_facet(&mut out, top[0], top[1], top[2]);
        let bot = [offset(a, n, -half), offset(c, n, -half), offset(b, n, -half)];
        write_facet(&mut out, bot[0], bot[1], bot[2]);
    }
    for (edge, panel) in &boundaries {
        let n = panel_normals[*panel];
        let a = mesh.nodes[edge.0];
        let b = mesh.nodes[edge.1];
        let (a_top, a_bot) = (offset(a, n, half), offset(a, n, -half));
        let (b_top, b_bot) = (offset(b, n, half), offset(b, n, -half));
        write_facet(&mut out, a_bot, b_bot, b_top);
        write_facet(&mut out, a_bot, b_top, a_top);
    }
    Ok(out)
}

fn write_facet(out: &mut Vec<u8>, a: Vec3, b: Vec3, c: Vec3) {
    let n = normalize(cross(sub(b, a), sub(c, a)));
    for v in [n, a, b, c] {
        for x in v {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    out.extend_from_slice(&0u16.to_le_bytes());
}

/// Directed boundary edges of each panel, in the winding of the owning
/// element (interior on the left).
fn panel_boundaries(mesh: &TriMesh) -> Vec<((usize, usize), usize)> {
    let mut directed: HashMap<(usize, usize, usize), bool> = HashMap::new();
    for (e, tri) in mesh.elements.iter().enumerate() {
        let panel = mesh.panel_of[e];
        for k in 0..3 {
            let a = tri[k];
            let b = tri[(k + 1) % 3];
            directed.insert((panel, a, b), true);
        }
    }
    let mut boundary: Vec<((usize, usize), usize)> = directed
        .keys()
        .filter(|&&(panel, a, b)| !directed.contains_key(&(panel, b, a)))
        .map(|&(panel, a, b)| ((a, b), panel))
        .collect();
    boundary.sort_unstable();
    boundary
}

/// Unit normal per panel; panels are flat so the first element suffices.
fn panel_normals(mesh: &TriMesh) -> Vec<Vec3> {
    let mut normals = vec![[0.0; 3]; mesh.panel_count()];
    let mut seen = vec![false; mesh.panel_count()];
    for (e, tri) in mesh.elements.iter().enumerate() {
        let p = mesh.panel_of[e];
        if !seen[p] {
            let [a, b, c] = tri.map(|i| mesh.nodes[i]);
            normals[p] = normalize(cross(sub(b, a), sub(c, a)));
            seen[p] = true;
        }
    }
    normals
}

/// Signed enclosed volume of a binary STL byte stream via the divergence
/// theorem; positive when facet normals point outward. mm^3.
pub fn stl_signed_volume(bytes: &[u8]) -> Result<f64> {
    if bytes.len() < 84 {
        return Err(Error::invalid("STL shorter than its header"));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    if bytes.len() != 84 + 50 * count {
        return Err(Error::invalid(format!(
            "STL length {} does not match {} facets",
            bytes.len(),
            count
        )));
    }
    let mut volume = 0.0;
    for f in 0..count {
        let base = 84 + 50 * f + 12; // skip the stored normal
        let mut verts = [[0.0f64; 3]; 3];
        for (v, vert) in verts.iter_mut().enumerate() {
            for k in 0..3 {
                let at = base + 12 * v + 4 * k;
                vert[k] = f32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as f64;
            }
        }
        volume += dot(verts[0], cross(verts[1], verts[2])) / 6.0;
    }
    Ok(volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_sll_mesh, build_trl_mesh, SllSpec, TriMesh, TrlSpec};
    use crate::geometry::{ElementSets, NodeSets};

    fn single_right_triangle() -> TriMesh {
        TriMesh {
            nodes: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            elements: vec![[0, 1, 2]],
            thickness: vec![1.0],
            panel_of: vec![0],
            node_sets: NodeSets {
                fixed_edge: vec![0, 2],
                load_edge: vec![1],
                tip_center_a: 1,
                tip_edge_b: 2,
            },
            element_sets: ElementSets {
                load_adjacent: vec![0],
            },
        }
    }

    #[test]
    fn file_size_matches_format_arithmetic() {
        let mesh = build_sll_mesh(&SllSpec::new(100.0, 20.0, 0.5).unwrap(), 5.0).unwrap();
        let bytes = export_stl(&mesh, 0.5).unwrap();
        let n = stl_triangle_count(&mesh);
        assert_eq!(bytes.len(), 84 + 50 * n);
        assert_eq!(
            u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize,
            n
        );
    }

    #[test]
    fn unit_prism_facets_and_volume() {
        let mesh = single_right_triangle();
        let bytes = export_stl(&mesh, 1.0).unwrap();
        // 1 top + 1 bottom + 3 boundary edges * 2 facets
        assert_eq!(stl_triangle_count(&mesh), 8);
        assert_eq!(bytes.len(), 84 + 50 * 8);
        let vol = stl_signed_volume(&bytes).unwrap();
        assert!((vol - 0.5).abs() < 1e-9, "prism volume {vol}");
    }

    #[test]
    fn trl_volume_matches_area_times_extrude() {
        let spec = TrlSpec::new(100.0, 20.0, 30).unwrap();
        let mesh = build_trl_mesh(&spec, 4.0).unwrap();
        let bytes = export_stl(&mesh, 1.0).unwrap();
        let vol = stl_signed_volume(&bytes).unwrap();
        let expected = mesh.total_area() * 1.0;
        assert!(vol > 0.0);
        assert!(
            ((vol - expected) / expected).abs() < 1e-3,
            "volume {vol} vs area*extrude {expected}"
        );
    }

    #[test]
    fn refuses_defective_mesh() {
        let mut mesh = single_right_triangle();
        mesh.nodes.push([5.0, 5.0, 5.0]); // dangling
        match export_stl(&mesh, 1.0) {
            Err(Error::MeshDefects(d)) => assert_eq!(d.len(), 1),
            other => panic!("expected defect refusal, got {other:?}"),
        }
    }

    #[test]
    fn refuses_nonpositive_extrude() {
        assert!(export_stl(&single_right_triangle(), 0.0).is_err());
    }
}
