//! Structured panel meshing shared by the strip and TRL generators.
//!
//! Every coordinate that can be shared between two panels is produced by the
//! same `lerp` expression from the same endpoint values, so shared nodes are
//! bitwise identical and the quantized dedup key never splits a seam.

use std::collections::HashMap;

use super::{ElementSets, NodeSets, TriMesh};

/// Dedup quantum, mm. Far below any real node spacing, far above f64 noise.
const KEY_QUANTUM: f64 = 1.0e-6;

pub fn lerp(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    ]
}

pub struct MeshBuilder {
    nodes: Vec<[f64; 3]>,
    keys: HashMap<[i64; 3], usize>,
    elements: Vec<[usize; 3]>,
    thickness: Vec<f64>,
    panel_of: Vec<usize>,
}

impl MeshBuilder {
    pub fn new() -> Self {
        MeshBuilder {
            nodes: Vec::new(),
            keys: HashMap::new(),
            elements: Vec::new(),
            thickness: Vec::new(),
            panel_of: Vec::new(),
        }
    }

    pub fn node(&mut self, p: [f64; 3]) -> usize {
        let key = [
            (p[0] / KEY_QUANTUM).round() as i64,
            (p[1] / KEY_QUANTUM).round() as i64,
            (p[2] / KEY_QUANTUM).round() as i64,
        ];
        if let Some(&idx) = self.keys.get(&key) {
            return idx;
        }
        let idx = self.nodes.len();
        self.nodes.push(p);
        self.keys.insert(key, idx);
        idx
    }

    pub fn tri(&mut self, a: usize, b: usize, c: usize, thickness: f64, panel: usize) {
        self.elements.push([a, b, c]);
        self.thickness.push(thickness);
        self.panel_of.push(panel);
    }

    /// Structured grid over the (possibly non-planar) bilinear patch
    /// c0-c1-c2-c3 (counter-clockwise), `nx` by `ny` quads split into
    /// triangles. Winding follows the corner order.
    pub fn add_quad_panel(
        &mut self,
        corners: [[f64; 3]; 4],
        nx: usize,
        ny: usize,
        thickness: f64,
        panel: usize,
    ) {
        let [c0, c1, c2, c3] = corners;
        let mut grid = vec![0usize; (nx + 1) * (ny + 1)];
        for j in 0..=ny {
            let tv = j as f64 / ny as f64;
            for i in 0..=nx {
                let tu = i as f64 / nx as f64;
                let bottom = lerp(c0, c1, tu);
                let top = lerp(c3, c2, tu);
                grid[j * (nx + 1) + i] = self.node(lerp(bottom, top, tv));
            }
        }
        for j in 0..ny {
            for i in 0..nx {
                let a = grid[j * (nx + 1) + i];
                let b = grid[j * (nx + 1) + i + 1];
                let c = grid[(j + 1) * (nx + 1) + i + 1];
                let d = grid[(j + 1) * (nx + 1) + i];
                self.tri(a, b, c, thickness, panel);
                self.tri(a, c, d, thickness, panel);
            }
        }
    }

    /// Uniform refinement of triangle c0-c1-c2 into n^2 sub-triangles.
    /// Row r runs from edge c0-c1 (r = 0) toward the apex c2; boundary
    /// points on each edge are plain lerps of the corner pair.
    pub fn add_tri_panel(
        &mut self,
        corners: [[f64; 3]; 3],
        n: usize,
        thickness: f64,
        panel: usize,
    ) {
        let [c0, c1, c2] = corners;
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
        for r in 0..=n {
            let t = r as f64 / n as f64;
            let left = lerp(c0, c2, t);
            let right = lerp(c1, c2, t);
            let count = n - r;
            let mut row = Vec::with_capacity(count + 1);
            if count == 0 {
                row.push(self.node(left));
            } else {
                for i in 0..=count {
                    row.push(self.node(lerp(left, right, i as f64 / count as f64)));
                }
            }
            rows.push(row);
        }
        for r in 0..n {
            let lower = &rows[r];
            let upper = &rows[r + 1];
            for i in 0..upper.len() - 1 {
                self.tri(lower[i], lower[i + 1], upper[i], thickness, panel);
                self.tri(lower[i + 1], upper[i + 1], upper[i], thickness, panel);
            }
            let i = upper.len() - 1;
            self.tri(lower[i], lower[i + 1], upper[i], thickness, panel);
        }
    }

    /// Finish the mesh, deriving node sets from the layer conventions:
    /// clamped end at x = 0, loaded top edge at x = `length`, measurement
    /// points at the tip centerline and tip edge.
    pub fn finish(self, length: f64, width: f64) -> TriMesh {
        let tol = 1.0e-6;
        let mut fixed_edge = Vec::new();
        let mut load_edge = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if n[0].abs() < tol {
                fixed_edge.push(i);
            }
            if (n[0] - length).abs() < tol && n[2].abs() < tol {
                load_edge.push(i);
            }
        }

        let tip_center_a = nearest(&self.nodes, [length, 0.0, 0.0]);
        let tip_edge_b = nearest(&self.nodes, [length, width / 2.0, 0.0]);

        let mut load_adjacent = Vec::new();
        let mut on_load_edge = vec![false; self.nodes.len()];
        for &i in &load_edge {
            on_load_edge[i] = true;
        }
        for (e, tri) in self.elements.iter().enumerate() {
            if tri.iter().any(|&n| on_load_edge[n]) {
                load_adjacent.push(e);
            }
        }

        TriMesh {
            nodes: self.nodes,
            elements: self.elements,
            thickness: self.thickness,
            panel_of: self.panel_of,
            node_sets: NodeSets {
                fixed_edge,
                load_edge,
                tip_center_a,
                tip_edge_b,
            },
            element_sets: ElementSets { load_adjacent },
        }
    }
}

fn nearest(nodes: &[[f64; 3]], target: [f64; 3]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, n) in nodes.iter().enumerate() {
        let d = (n[0] - target[0]).powi(2) + (n[1] - target[1]).powi(2) + (n[2] - target[2]).powi(2);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Subdivision count that brings `edge_len` at or below `target`.
pub fn divisions(edge_len: f64, target: f64) -> usize {
    (edge_len / target).ceil().max(1.0) as usize
}

/// Like [`divisions`], rounded up to even so the midline lands on a node
/// row (the tip measurement point sits on the centerline).
pub fn even_divisions(edge_len: f64, target: f64) -> usize {
    let n = divisions(edge_len, target);
    n + (n % 2)
}
