//! Global stiffness assembly and the boundary-condition machinery.
//!
//! Assembly walks elements in index order and accumulates into a fixed
//! sparsity pattern, so the matrix is bit-identical run to run. Boundary
//! conditions are applied by elimination: a factorization is built over the
//! free dofs (ordered along the beam for a small profile) and supports
//! prescribed values on the eliminated dofs.

use crate::error::{Error, Result};
use crate::geometry::TriMesh;
use crate::material::Material;
use crate::units;

use super::element::element_stiffness;
use super::solver::{conjugate_gradient, Csr, Skyline, SolverOptions};

pub const DOFS_PER_NODE: usize = 6;

/// Assembled stiffness system over all dofs, SI units, no constraints yet.
pub struct StiffnessSystem {
    pub mesh: TriMesh,
    pub material: Material,
    /// Node coordinates in metres.
    coords: Vec<[f64; 3]>,
    k: Csr,
}

/// Assemble the global matrix for a mesh/material pair.
pub fn assemble(mesh: &TriMesh, material: &Material) -> Result<StiffnessSystem> {
    material.validate()?;
    let n_nodes = mesh.node_count();
    let n_dofs = n_nodes * DOFS_PER_NODE;
    let coords: Vec<[f64; 3]> = mesh
        .nodes
        .iter()
        .map(|p| [units::mm_to_m(p[0]), units::mm_to_m(p[1]), units::mm_to_m(p[2])])
        .collect();

    // Sparsity from node adjacency.
    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n_nodes];
    for tri in &mesh.elements {
        for &a in tri {
            for &b in tri {
                neighbors[a].push(b as u32);
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }

    let mut row_ptr = Vec::with_capacity(n_dofs + 1);
    row_ptr.push(0usize);
    let mut cols: Vec<u32> = Vec::new();
    for node in 0..n_nodes {
        for _comp in 0..DOFS_PER_NODE {
            for &nb in &neighbors[node] {
                for c in 0..DOFS_PER_NODE {
                    cols.push(nb * DOFS_PER_NODE as u32 + c as u32);
                }
            }
            row_ptr.push(cols.len());
        }
    }
    let mut k = Csr {
        n: n_dofs,
        row_ptr,
        cols,
        vals: Vec::new(),
    };
    k.vals = vec![0.0; k.cols.len()];

    // Element loop, deterministic accumulation order.
    for (e, tri) in mesh.elements.iter().enumerate() {
        let coords_e = [coords[tri[0]], coords[tri[1]], coords[tri[2]]];
        let t = units::mm_to_m(mesh.thickness[e]);
        let ke = element_stiffness(
            &coords_e,
            material.youngs_modulus,
            material.poisson_ratio,
            t,
        )
        .map_err(|err| Error::Meshing(format!("element {e}: {err}")))?;
        for (li, &ni) in tri.iter().enumerate() {
            for (lj, &nj) in tri.iter().enumerate() {
                for a in 0..DOFS_PER_NODE {
                    let gi = ni * DOFS_PER_NODE + a;
                    let row = &k.cols[k.row_ptr[gi]..k.row_ptr[gi + 1]];
                    for b in 0..DOFS_PER_NODE {
                        let gj = (nj * DOFS_PER_NODE + b) as u32;
                        let off = row.partition_point(|&c| c < gj);
                        debug_assert_eq!(row[off], gj);
                        k.vals[k.row_ptr[gi] + off] += ke[(6 * li + a, 6 * lj + b)];
                    }
                }
            }
        }
    }

    Ok(StiffnessSystem {
        mesh: mesh.clone(),
        material: material.clone(),
        coords,
        k,
    })
}

impl StiffnessSystem {
    pub fn n_dofs(&self) -> usize {
        self.k.n
    }

    pub fn coords_m(&self) -> &[[f64; 3]] {
        &self.coords
    }

    /// y = K x over all dofs.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.k.n];
        self.k.matvec(x, &mut y);
        y
    }

    /// Strain energy 1/2 u^T K u.
    pub fn strain_energy(&self, u: &[f64]) -> f64 {
        let ku = self.matvec(u);
        0.5 * u.iter().zip(&ku).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Eliminate all six dofs of `fixed_nodes` and factorize the rest.
    pub fn factorize(&self, fixed_nodes: &[usize]) -> Result<Factorized<'_>> {
        self.factorize_with(fixed_nodes, &SolverOptions::default())
    }

    pub fn factorize_with(
        &self,
        fixed_nodes: &[usize],
        opts: &SolverOptions,
    ) -> Result<Factorized<'_>> {
        if fixed_nodes.is_empty() {
            return Err(Error::invalid("fixed node set must not be empty"));
        }
        let n_nodes = self.mesh.node_count();
        let mut eliminated = vec![false; self.k.n];
        for &node in fixed_nodes {
            if node >= n_nodes {
                return Err(Error::invalid(format!("fixed node {node} out of range")));
            }
            for c in 0..DOFS_PER_NODE {
                eliminated[node * DOFS_PER_NODE + c] = true;
            }
        }

        // Order free dofs by node position along the beam to keep the
        // skyline profile tight, then by node index for determinism.
        let mut node_order: Vec<usize> = (0..n_nodes).collect();
        node_order.sort_by(|&a, &b| {
            let pa = self.coords[a];
            let pb = self.coords[b];
            pa.partial_cmp(&pb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });

        let mut reduced_of_global = vec![usize::MAX; self.k.n];
        let mut global_of_reduced = Vec::new();
        for &node in &node_order {
            for c in 0..DOFS_PER_NODE {
                let g = node * DOFS_PER_NODE + c;
                if !eliminated[g] {
                    reduced_of_global[g] = global_of_reduced.len();
                    global_of_reduced.push(g);
                }
            }
        }
        let n_free = global_of_reduced.len();
        if n_free == 0 {
            return Err(Error::invalid("no free dofs left after clamping"));
        }

        let use_cg = n_free > opts.cg_threshold_dofs;
        let mut skyline = None;
        let mut reduced_csr = None;

        if use_cg {
            reduced_csr = Some(self.reduced_csr(&reduced_of_global, &global_of_reduced));
        } else {
            // Column first-row indices from the reduced pattern.
            let mut first: Vec<usize> = (0..n_free).collect();
            for (rj, &gj) in global_of_reduced.iter().enumerate() {
                for k in self.k.row_ptr[gj]..self.k.row_ptr[gj + 1] {
                    let ri = reduced_of_global[self.k.cols[k] as usize];
                    if ri != usize::MAX && ri < rj {
                        first[rj] = first[rj].min(ri);
                    }
                }
            }
            let mut sky = Skyline::new(first);
            for (rj, &gj) in global_of_reduced.iter().enumerate() {
                for k in self.k.row_ptr[gj]..self.k.row_ptr[gj + 1] {
                    let ri = reduced_of_global[self.k.cols[k] as usize];
                    if ri != usize::MAX && ri <= rj {
                        sky.add(ri, rj, self.k.vals[k]);
                    }
                }
            }
            sky.factorize()?;
            skyline = Some(sky);
        }

        Ok(Factorized {
            system: self,
            eliminated,
            global_of_reduced,
            skyline,
            reduced_csr,
            opts: opts.clone(),
        })
    }

    fn reduced_csr(&self, reduced_of_global: &[usize], global_of_reduced: &[usize]) -> Csr {
        let n_free = global_of_reduced.len();
        let mut row_ptr = Vec::with_capacity(n_free + 1);
        row_ptr.push(0usize);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for &gi in global_of_reduced {
            let mut entries: Vec<(u32, f64)> = Vec::new();
            for k in self.k.row_ptr[gi]..self.k.row_ptr[gi + 1] {
                let rj = reduced_of_global[self.k.cols[k] as usize];
                if rj != usize::MAX {
                    entries.push((rj as u32, self.k.vals[k]));
                }
            }
            entries.sort_unstable_by_key(|&(c, _)| c);
            for (c, v) in entries {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Csr {
            n: n_free,
            row_ptr,
            cols,
            vals,
        }
    }
}

/// A factorized (or CG-ready) reduced system; solve as many right-hand
/// sides against it as needed.
pub struct Factorized<'a> {
    pub system: &'a StiffnessSystem,
    eliminated: Vec<bool>,
    global_of_reduced: Vec<usize>,
    skyline: Option<Skyline>,
    reduced_csr: Option<Csr>,
    opts: SolverOptions,
}

/// Outcome of one raw solve.
pub struct RawSolution {
    /// Full displacement vector, SI (m, rad), prescribed values included.
    pub u: Vec<f64>,
    /// ||K u - f|| / ||f|| over free dofs.
    pub residual: f64,
    pub free_dofs: usize,
    pub cg_iterations: Option<usize>,
}

impl Factorized<'_> {
    pub fn free_dofs(&self) -> usize {
        self.global_of_reduced.len()
    }

    /// Solve with nodal loads `f` (full dof vector, N / N·m) and optional
    /// prescribed displacement values on the eliminated dofs.
    pub fn solve_nodal(&self, f: &[f64], prescribed: Option<&[f64]>) -> Result<RawSolution> {
        let n = self.system.k.n;
        if f.len() != n {
            return Err(Error::invalid("load vector length mismatch"));
        }
        if let Some(p) = prescribed {
            if p.len() != n {
                return Err(Error::invalid("prescribed vector length mismatch"));
            }
        }

        // Reduced rhs: f_free - K[free, eliminated] * u_eliminated.
        let n_free = self.global_of_reduced.len();
        let mut rhs = vec![0.0; n_free];
        for (r, &g) in self.global_of_reduced.iter().enumerate() {
            rhs[r] = f[g];
        }
        if let Some(p) = prescribed {
            let k = &self.system.k;
            for (r, &g) in self.global_of_reduced.iter().enumerate() {
                let mut coupling = 0.0;
                for idx in k.row_ptr[g]..k.row_ptr[g + 1] {
                    let c = k.cols[idx] as usize;
                    if self.eliminated[c] && p[c] != 0.0 {
                        coupling += k.vals[idx] * p[c];
                    }
                }
                rhs[r] -= coupling;
            }
        }

        let mut cg_iterations = None;
        let reduced_u = if let Some(sky) = &self.skyline {
            let mut u = rhs.clone();
            sky.solve(&mut u);
            u
        } else {
            let csr = self.reduced_csr.as_ref().expect("cg path keeps reduced csr");
            let (u, iters) = conjugate_gradient(csr, &rhs, &self.opts)?;
            cg_iterations = Some(iters);
            u
        };

        // Scatter back to the full vector.
        let mut u = vec![0.0; n];
        if let Some(p) = prescribed {
            for g in 0..n {
                if self.eliminated[g] {
                    u[g] = p[g];
                }
            }
        }
        for (r, &g) in self.global_of_reduced.iter().enumerate() {
            u[g] = reduced_u[r];
        }

        // Residual over free dofs against the full matrix.
        let ku = self.system.matvec(&u);
        let mut res = 0.0;
        let mut fnorm = 0.0;
        for (r, &g) in self.global_of_reduced.iter().enumerate() {
            let d = ku[g] - f[g];
            res += d * d;
            fnorm += rhs[r] * rhs[r];
        }
        let residual = if fnorm > 0.0 {
            (res / fnorm).sqrt()
        } else {
            res.sqrt()
        };

        Ok(RawSolution {
            u,
            residual,
            free_dofs: n_free,
            cg_iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_sll_mesh, SllSpec};

    fn small_system() -> StiffnessSystem {
        let mesh = build_sll_mesh(&SllSpec::new(20.0, 10.0, 1.0).unwrap(), 5.0).unwrap();
        assemble(&mesh, &Material::pa6()).unwrap()
    }

    #[test]
    fn rigid_translation_is_in_null_space() {
        let sys = small_system();
        let n = sys.n_dofs();
        let mut u = vec![0.0; n];
        for node in 0..sys.mesh.node_count() {
            u[node * 6] = 1.0; // unit x translation
        }
        let ku = sys.matvec(&u);
        let scale = {
            let mut m = 0.0f64;
            for i in 0..n {
                for k in sys.k.row_ptr[i]..sys.k.row_ptr[i + 1] {
                    if sys.k.cols[k] as usize == i {
                        m = m.max(sys.k.vals[k].abs());
                    }
                }
            }
            m
        };
        let worst = ku.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        assert!(worst < 1e-9 * scale, "residual {worst} vs diag scale {scale}");
    }

    #[test]
    fn rigid_rotation_is_in_null_space() {
        let sys = small_system();
        let n = sys.n_dofs();
        // Rotation about z through the origin.
        let mut u = vec![0.0; n];
        for (node, p) in sys.coords_m().iter().enumerate() {
            u[node * 6] = -p[1];
            u[node * 6 + 1] = p[0];
            u[node * 6 + 5] = 1.0;
        }
        let ku = sys.matvec(&u);
        let umax = u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let scale = ku.len() as f64; // placeholder replaced below
        let _ = scale;
        let mut diag_max = 0.0f64;
        for i in 0..n {
            for k in sys.k.row_ptr[i]..sys.k.row_ptr[i + 1] {
                if sys.k.cols[k] as usize == i {
                    diag_max = diag_max.max(sys.k.vals[k].abs());
                }
            }
        }
        let worst = ku.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        assert!(
            worst < 1e-9 * diag_max * umax.max(1.0),
            "residual {worst} vs scale {diag_max}"
        );
    }

    #[test]
    fn clamped_solve_has_small_residual() {
        let sys = small_system();
        let fixed = sys.mesh.node_sets.fixed_edge.clone();
        let fact = sys.factorize(&fixed).unwrap();
        let mut f = vec![0.0; sys.n_dofs()];
        for &n in &sys.mesh.node_sets.load_edge {
            f[n * 6 + 2] = 0.01;
        }
        let sol = fact.solve_nodal(&f, None).unwrap();
        assert!(sol.residual < 1e-9, "residual {}", sol.residual);
        assert!(sol.u.iter().any(|&x| x != 0.0));
        // Clamped nodes stay put.
        for &n in &fixed {
            for c in 0..6 {
                assert_eq!(sol.u[n * 6 + c], 0.0);
            }
        }
    }

    #[test]
    fn strain_energy_positive_under_load() {
        let sys = small_system();
        let fixed = sys.mesh.node_sets.fixed_edge.clone();
        let fact = sys.factorize(&fixed).unwrap();
        let mut f = vec![0.0; sys.n_dofs()];
        f[sys.mesh.node_sets.tip_center_a * 6 + 2] = 0.5;
        let sol = fact.solve_nodal(&f, None).unwrap();
        assert!(sys.strain_energy(&sol.u) > 0.0);
        let zero = fact.solve_nodal(&vec![0.0; sys.n_dofs()], None).unwrap();
        assert_eq!(sys.strain_energy(&zero.u), 0.0);
    }
}
