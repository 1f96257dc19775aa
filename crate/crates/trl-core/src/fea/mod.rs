//! Linear-elastic facet-shell solver for the two layer load cases, plus the
//! derived scalars: tip deflection, twist angle, rotational stiffness and
//! stress concentration.

pub mod assemble;
pub mod element;
pub mod solver;

mod converge;
mod vtk;

pub use assemble::{assemble, Factorized, RawSolution, StiffnessSystem, DOFS_PER_NODE};
pub use converge::{
    converge, converge_pair, ConvergeOptions, Converged, DesignSpec, PairResult, RefinementLevel,
};
pub use solver::SolverOptions;
pub use vtk::write_vtk;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TriMesh;
use crate::units;

/// The two characterization load cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoadCase {
    /// Total transverse tip force in the actuation bending plane, N,
    /// spread uniformly over the load edge.
    InPlaneTipForce { newtons: f64 },
    /// Moment about the longitudinal axis, N·mm, applied as a statically
    /// equivalent transverse force couple at the two outer load-edge nodes.
    TipTorsionMoment { newton_mm: f64 },
}

impl LoadCase {
    pub fn validate(&self) -> Result<()> {
        let m = match self {
            LoadCase::InPlaneTipForce { newtons } => newtons,
            LoadCase::TipTorsionMoment { newton_mm } => newton_mm,
        };
        if !m.is_finite() {
            return Err(Error::invalid("load magnitude must be finite"));
        }
        Ok(())
    }
}

/// Reference load magnitudes used throughout the characterization studies.
pub mod reference {
    /// Tip bending force, N.
    pub const BENDING_FORCE_N: f64 = 0.01;
    /// Twist moment for flat strips, N·mm.
    pub const SLL_MOMENT_NMM: f64 = 0.5;
    /// Twist moment for triangulated layers, N·mm.
    pub const TRL_MOMENT_NMM: f64 = 5.0;
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub dof_count: usize,
    pub free_dofs: usize,
    /// ||K u - f|| / ||f|| over free dofs.
    pub residual_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cg_iterations: Option<usize>,
}

/// Displacement/stress fields plus derived scalars for one solved case.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeaResult {
    /// Per node: translations in mm, rotations in rad.
    pub displacements: Vec<[f64; 6]>,
    /// |w| at the tip centerline node, mm.
    pub tip_inplane_displacement: f64,
    /// Twist angle from the tip measurement pair, degrees.
    pub angular_displacement_deg: f64,
    /// Applied moment over twist, N·mm/rad; only set for the torsion case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotational_stiffness_nmm: Option<f64>,
    /// Per element, Pa. Max of the two shell surfaces at the centroid.
    pub von_mises_pa: Vec<f64>,
    pub stress_concentration: f64,
    pub diagnostics: SolveDiagnostics,
}

impl FeaResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Nodal load vector in SI for a load case on this mesh.
fn load_vector(mesh: &TriMesh, load: &LoadCase) -> Result<Vec<f64>> {
    load.validate()?;
    let edge = &mesh.node_sets.load_edge;
    if edge.is_empty() {
        return Err(Error::invalid("mesh has no load edge"));
    }
    let mut f = vec![0.0; mesh.node_count() * DOFS_PER_NODE];
    match *load {
        LoadCase::InPlaneTipForce { newtons } => {
            let per_node = newtons / edge.len() as f64;
            for &n in edge {
                f[n * DOFS_PER_NODE + 2] = per_node;
            }
        }
        LoadCase::TipTorsionMoment { newton_mm } => {
            // Statically equivalent couple spread over the whole edge:
            // transverse forces proportional to the offset from the edge
            // centroid (zero net force, net moment M). Spreading instead of
            // loading two corner nodes keeps the local shell response out
            // of the twist measurement.
            let mean_y =
                edge.iter().map(|&n| mesh.nodes[n][1]).sum::<f64>() / edge.len() as f64;
            let sum_sq: f64 = edge
                .iter()
                .map(|&n| {
                    let dy = units::mm_to_m(mesh.nodes[n][1] - mean_y);
                    dy * dy
                })
                .sum();
            if !(sum_sq > 0.0) {
                return Err(Error::invalid(
                    "load edge has no width to carry a torsion couple",
                ));
            }
            let scale = units::nmm_to_nm(newton_mm) / sum_sq;
            for &n in edge {
                let dy = units::mm_to_m(mesh.nodes[n][1] - mean_y);
                f[n * DOFS_PER_NODE + 2] = scale * dy;
            }
        }
    }
    Ok(f)
}

/// Clamp the fixed nodes, factorize and solve one load case.
pub fn solve(system: &StiffnessSystem, load: &LoadCase, fixed: &[usize]) -> Result<FeaResult> {
    let fact = system.factorize(fixed)?;
    solve_case(&fact, load)
}

/// Solve one load case against an existing factorization.
pub fn solve_case(fact: &Factorized<'_>, load: &LoadCase) -> Result<FeaResult> {
    let system = fact.system;
    let f = load_vector(&system.mesh, load)?;
    let raw = fact.solve_nodal(&f, None)?;
    build_result(system, load, &raw)
}

fn build_result(
    system: &StiffnessSystem,
    load: &LoadCase,
    raw: &RawSolution,
) -> Result<FeaResult> {
    let mesh = &system.mesh;
    let n_nodes = mesh.node_count();

    let mut displacements = Vec::with_capacity(n_nodes);
    for node in 0..n_nodes {
        let base = node * DOFS_PER_NODE;
        displacements.push([
            units::m_to_mm(raw.u[base]),
            units::m_to_mm(raw.u[base + 1]),
            units::m_to_mm(raw.u[base + 2]),
            raw.u[base + 3],
            raw.u[base + 4],
            raw.u[base + 5],
        ]);
    }

    let von_mises_pa = element_von_mises(system, &raw.u)?;
    let stress_concentration =
        stress_concentration(&von_mises_pa, &mesh.element_sets.load_adjacent)?;

    let tip = mesh.node_sets.tip_center_a;
    let tip_inplane_displacement = displacements[tip][2].abs();

    let beta = beta_from_displacements(
        mesh,
        &displacements,
        mesh.node_sets.tip_center_a,
        mesh.node_sets.tip_edge_b,
    )?;

    let rotational_stiffness_nmm = match *load {
        LoadCase::TipTorsionMoment { newton_mm } if beta > 0.0 => {
            Some(rotational_stiffness(newton_mm, beta)?)
        }
        _ => None,
    };

    Ok(FeaResult {
        displacements,
        tip_inplane_displacement,
        angular_displacement_deg: beta,
        rotational_stiffness_nmm,
        von_mises_pa,
        stress_concentration,
        diagnostics: SolveDiagnostics {
            dof_count: system.n_dofs(),
            free_dofs: raw.free_dofs,
            residual_norm: raw.residual,
            cg_iterations: raw.cg_iterations,
        },
    })
}

fn element_von_mises(system: &StiffnessSystem, u: &[f64]) -> Result<Vec<f64>> {
    let mesh = &system.mesh;
    let coords = system.coords_m();
    let mut out = Vec::with_capacity(mesh.element_count());
    for (e, tri) in mesh.elements.iter().enumerate() {
        let coords_e = [coords[tri[0]], coords[tri[1]], coords[tri[2]]];
        let mut ue = [0.0f64; 18];
        for (ln, &n) in tri.iter().enumerate() {
            for c in 0..DOFS_PER_NODE {
                ue[6 * ln + c] = u[n * DOFS_PER_NODE + c];
            }
        }
        let t = units::mm_to_m(mesh.thickness[e]);
        let (sm, sb) = element::element_stress(
            &coords_e,
            system.material.youngs_modulus,
            system.material.poisson_ratio,
            t,
            &ue,
        )?;
        let top = [sm[0] + sb[0], sm[1] + sb[1], sm[2] + sb[2]];
        let bottom = [sm[0] - sb[0], sm[1] - sb[1], sm[2] - sb[2]];
        out.push(element::von_mises(&top).max(element::von_mises(&bottom)));
    }
    Ok(out)
}

/// Twist angle between the tip measurement pair:
/// asin(BC / sqrt(AB^2 + BC^2)) where BC is the relative out-of-plane
/// displacement and AB the undeformed separation. Degrees.
pub fn extract_beta(mesh: &TriMesh, result: &FeaResult, a: usize, b: usize) -> Result<f64> {
    beta_from_displacements(mesh, &result.displacements, a, b)
}

fn beta_from_displacements(
    mesh: &TriMesh,
    displacements: &[[f64; 6]],
    a: usize,
    b: usize,
) -> Result<f64> {
    let n = mesh.node_count();
    if a >= n || b >= n {
        return Err(Error::invalid("measurement node out of range"));
    }
    let pa = mesh.nodes[a];
    let pb = mesh.nodes[b];
    let ab = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2) + (pa[2] - pb[2]).powi(2)).sqrt();
    if !(ab > 0.0) {
        return Err(Error::invalid(
            "measurement nodes coincide; twist angle undefined",
        ));
    }
    let bc = (displacements[b][2] - displacements[a][2]).abs();
    Ok(units::rad_to_deg((bc / (ab * ab + bc * bc).sqrt()).asin()))
}

/// kappa = M / theta with theta in radians; N·mm/rad.
pub fn rotational_stiffness(moment_nmm: f64, beta_deg: f64) -> Result<f64> {
    if !(beta_deg > 0.0) {
        return Err(Error::invalid(
            "rotational stiffness needs a positive twist angle",
        ));
    }
    Ok(moment_nmm / units::deg_to_rad(beta_deg))
}

/// Peak over median von Mises stress, excluding the listed elements
/// (typically those adjacent to the load introduction).
pub fn stress_concentration(von_mises_pa: &[f64], excluded: &[usize]) -> Result<f64> {
    if von_mises_pa.is_empty() {
        return Err(Error::invalid("empty stress field"));
    }
    let mut excluded_mask = vec![false; von_mises_pa.len()];
    for &e in excluded {
        if e < excluded_mask.len() {
            excluded_mask[e] = true;
        }
    }
    let mut kept: Vec<f64> = von_mises_pa
        .iter()
        .enumerate()
        .filter(|&(e, _)| !excluded_mask[e])
        .map(|(_, &s)| s)
        .collect();
    if kept.is_empty() {
        return Err(Error::invalid("all elements excluded from stress field"));
    }
    kept.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max = *kept.last().unwrap();
    if max == 0.0 {
        return Ok(1.0);
    }
    let mid = kept.len() / 2;
    let median = if kept.len() % 2 == 1 {
        kept[mid]
    } else {
        0.5 * (kept[mid - 1] + kept[mid])
    };
    if median == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(max / median)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta_formula_cases() {
        // Direct evaluations of the angle relation.
        let bc_zero = 0.0f64;
        assert_eq!(bc_zero, 0.0);
        let beta = |ab: f64, bc: f64| (bc / (ab * ab + bc * bc).sqrt()).asin().to_degrees();
        assert_eq!(beta(10.0, 0.0), 0.0);
        assert_relative_eq!(beta(10.0, 10.0), 45.0, max_relative = 1e-12);
        assert_relative_eq!(beta(10.0, 1.745), 9.90, max_relative = 1e-3);
    }

    #[test]
    fn rotational_stiffness_cases() {
        assert_relative_eq!(
            rotational_stiffness(0.5, 15.36).unwrap(),
            1.87,
            max_relative = 3e-3
        );
        let k = rotational_stiffness(5.0, 0.7816).unwrap();
        assert_relative_eq!(k, 366.6, max_relative = 1e-3);
        assert_relative_eq!(
            rotational_stiffness(5.0, 90.0).unwrap(),
            3.18,
            max_relative = 2e-3
        );
        assert!(rotational_stiffness(5.0, 0.0).is_err());
        assert!(rotational_stiffness(5.0, -1.0).is_err());
    }

    #[test]
    fn stress_concentration_cases() {
        let scf = stress_concentration(&[1.0, 1.0, 1.0, 10.0], &[]).unwrap();
        assert_eq!(scf, 10.0);
        let uniform = stress_concentration(&[2.0; 64], &[]).unwrap();
        assert!((uniform - 1.0).abs() < 1e-6);
        // Exclusion removes the peak.
        let scf = stress_concentration(&[1.0, 1.0, 1.0, 10.0], &[3]).unwrap();
        assert_eq!(scf, 1.0);
        assert!(stress_concentration(&[], &[]).is_err());
        assert!(stress_concentration(&[1.0], &[0]).is_err());
    }
}
