//! Mesh lint. The validator never fails; it reports one defect per
//! violated invariant so callers can refuse or repair.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::TriMesh;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeshDefect {
    /// Node referenced by no element.
    DanglingNode { node: usize },
    /// Element references a node index outside the node table.
    IndexOutOfRange { element: usize },
    /// Element repeats a node.
    RepeatedNode { element: usize },
    /// Element area below the degeneracy threshold.
    ZeroAreaElement { element: usize, area: f64 },
    /// Edge shared by more than two elements.
    NonManifoldEdge { a: usize, b: usize, count: usize },
    /// Two elements traverse a shared edge in the same direction.
    InconsistentWinding { a: usize, b: usize },
    /// fixed_edge / load_edge missing or overlapping.
    BadBoundarySets { detail: String },
}

impl fmt::Display for MeshDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshDefect::DanglingNode { node } => write!(f, "dangling node {node}"),
            MeshDefect::IndexOutOfRange { element } => {
                write!(f, "element {element} references an out-of-range node")
            }
            MeshDefect::RepeatedNode { element } => {
                write!(f, "element {element} repeats a node")
            }
            MeshDefect::ZeroAreaElement { element, area } => {
                write!(f, "element {element} has near-zero area {area:.3e}")
            }
            MeshDefect::NonManifoldEdge { a, b, count } => {
                write!(f, "edge ({a},{b}) shared by {count} elements")
            }
            MeshDefect::InconsistentWinding { a, b } => {
                write!(f, "edge ({a},{b}) wound the same way by two elements")
            }
            MeshDefect::BadBoundarySets { detail } => write!(f, "boundary sets: {detail}"),
        }
    }
}

const AREA_EPS: f64 = 1.0e-9; // mm^2

/// Check every mesh invariant; empty result means the mesh is sound.
pub fn validate_mesh(mesh: &TriMesh) -> Vec<MeshDefect> {
    let mut defects = Vec::new();
    let n_nodes = mesh.node_count();

    let mut referenced = vec![false; n_nodes];
    // undirected edge -> (element count, sum of direction signs)
    let mut edges: HashMap<(usize, usize), (usize, i32)> = HashMap::new();

    for (e, tri) in mesh.elements.iter().enumerate() {
        if tri.iter().any(|&n| n >= n_nodes) {
            defects.push(MeshDefect::IndexOutOfRange { element: e });
            continue;
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            defects.push(MeshDefect::RepeatedNode { element: e });
            continue;
        }
        for &n in tri {
            referenced[n] = true;
        }
        let area = mesh.element_area(e);
        if area < AREA_EPS {
            defects.push(MeshDefect::ZeroAreaElement { element: e, area });
        }
        for k in 0..3 {
            let a = tri[k];
            let b = tri[(k + 1) % 3];
            let (key, dir) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
            let entry = edges.entry(key).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += dir;
        }
    }

    for (node, seen) in referenced.iter().enumerate() {
        if !seen {
            defects.push(MeshDefect::DanglingNode { node });
        }
    }

    let mut edge_defects: Vec<MeshDefect> = Vec::new();
    for (&(a, b), &(count, dir_sum)) in &edges {
        if count > 2 {
            edge_defects.push(MeshDefect::NonManifoldEdge { a, b, count });
        } else if count == 2 && dir_sum != 0 {
            edge_defects.push(MeshDefect::InconsistentWinding { a, b });
        }
    }
    // HashMap iteration order is arbitrary; keep reports deterministic.
    edge_defects.sort_by_key(|d| match d {
        MeshDefect::NonManifoldEdge { a, b, .. } => (0, *a, *b),
        MeshDefect::InconsistentWinding { a, b } => (1, *a, *b),
        _ => (2, 0, 0),
    });
    defects.extend(edge_defects);

    if mesh.node_sets.fixed_edge.is_empty() {
        defects.push(MeshDefect::BadBoundarySets {
            detail: "fixed_edge is empty".to_string(),
        });
    }
    if mesh.node_sets.load_edge.is_empty() {
        defects.push(MeshDefect::BadBoundarySets {
            detail: "load_edge is empty".to_string(),
        });
    }
    for &i in &mesh.node_sets.fixed_edge {
        if mesh.node_sets.load_edge.contains(&i) {
            defects.push(MeshDefect::BadBoundarySets {
                detail: format!("node {i} is in both fixed_edge and load_edge"),
            });
        }
    }

    defects
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_trl_mesh, TrlSpec};

    fn clean_mesh() -> TriMesh {
        build_trl_mesh(&TrlSpec::new(100.0, 20.0, 30).unwrap(), 4.0).unwrap()
    }

    #[test]
    fn clean_mesh_has_no_defects() {
        assert!(validate_mesh(&clean_mesh()).is_empty());
    }

    #[test]
    fn duplicated_element_is_nonmanifold() {
        let mut mesh = clean_mesh();
        mesh.elements.push(mesh.elements[0]);
        mesh.thickness.push(mesh.thickness[0]);
        mesh.panel_of.push(mesh.panel_of[0]);
        let defects = validate_mesh(&mesh);
        assert!(defects
            .iter()
            .any(|d| matches!(d, MeshDefect::NonManifoldEdge { .. })));
    }

    #[test]
    fn collapsed_node_pair_is_zero_area() {
        let mut mesh = clean_mesh();
        let [a, b, _] = mesh.elements[0];
        mesh.nodes[b] = mesh.nodes[a];
        let defects = validate_mesh(&mesh);
        assert!(defects
            .iter()
            .any(|d| matches!(d, MeshDefect::ZeroAreaElement { .. })));
    }

    #[test]
    fn flipped_element_is_inconsistent() {
        let mut mesh = clean_mesh();
        let [a, b, c] = mesh.elements[0];
        mesh.elements[0] = [a, c, b];
        let defects = validate_mesh(&mesh);
        assert!(defects
            .iter()
            .any(|d| matches!(d, MeshDefect::InconsistentWinding { .. })));
    }

    #[test]
    fn unreferenced_node_is_dangling() {
        let mut mesh = clean_mesh();
        mesh.nodes.push([1.0, 2.0, 3.0]);
        let defects = validate_mesh(&mesh);
        assert!(matches!(
            defects.as_slice(),
            [MeshDefect::DanglingNode { .. }]
        ));
    }

    #[test]
    fn bad_index_reported() {
        let mut mesh = clean_mesh();
        let n = mesh.node_count();
        mesh.elements[0] = [0, 1, n + 5];
        let defects = validate_mesh(&mesh);
        assert!(defects
            .iter()
            .any(|d| matches!(d, MeshDefect::IndexOutOfRange { element: 0 })));
    }
}
