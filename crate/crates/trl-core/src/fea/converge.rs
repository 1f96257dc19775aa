//! Mesh-independence driver: halve the target edge until the monitored
//! scalar settles, within a dof budget.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_sll_mesh, build_trl_mesh, SllSpec, TriMesh, TrlSpec};
use crate::material::Material;

use super::assemble::assemble;
use super::solver::SolverOptions;
use super::{solve_case, FeaResult, LoadCase, DOFS_PER_NODE};

/// Anything the refinement loop can mesh.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DesignSpec {
    Sll(SllSpec),
    Trl(TrlSpec),
}

impl DesignSpec {
    pub fn build_mesh(&self, target_edge: f64) -> Result<TriMesh> {
        match self {
            DesignSpec::Sll(spec) => build_sll_mesh(spec, target_edge),
            DesignSpec::Trl(spec) => build_trl_mesh(spec, target_edge),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DesignSpec::Sll(s) => format!("sll t={}", s.thickness),
            DesignSpec::Trl(s) => format!("trl T_n={}", s.triangle_count),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergeOptions {
    /// Relative change between successive levels that counts as converged;
    /// must lie in (0, 0.1].
    pub tolerance: f64,
    /// Coarsest target edge, mm.
    pub initial_edge_mm: f64,
    pub max_levels: usize,
    pub max_dofs: usize,
    pub solver: SolverOptions,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        ConvergeOptions {
            tolerance: 0.01,
            initial_edge_mm: 2.0,
            max_levels: 5,
            max_dofs: 150_000,
            solver: SolverOptions::default(),
        }
    }
}

impl ConvergeOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 0.1) {
            return Err(Error::invalid(format!(
                "convergence tolerance must be in (0, 0.1], got {}",
                self.tolerance
            )));
        }
        if !(self.initial_edge_mm > 0.0) {
            return Err(Error::invalid("initial edge must be positive"));
        }
        if self.max_levels < 2 {
            return Err(Error::invalid("need at least two refinement levels"));
        }
        Ok(())
    }
}

/// One row of the refinement history.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub target_edge_mm: f64,
    pub dof_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tip_displacement_mm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angular_displacement_deg: Option<f64>,
}

pub struct Converged {
    pub result: FeaResult,
    pub mesh: TriMesh,
    pub history: Vec<RefinementLevel>,
}

/// Both load cases converged on a shared mesh ladder.
pub struct PairResult {
    pub bending: FeaResult,
    pub torsion: FeaResult,
    pub mesh: TriMesh,
    pub history: Vec<RefinementLevel>,
}

fn monitored(load: &LoadCase, result: &FeaResult) -> f64 {
    match load {
        LoadCase::InPlaneTipForce { .. } => result.tip_inplane_displacement,
        LoadCase::TipTorsionMoment { .. } => result.angular_displacement_deg,
    }
}

fn settled(prev: f64, curr: f64, tol: f64) -> bool {
    let scale = curr.abs().max(prev.abs());
    if scale == 0.0 {
        return true;
    }
    (curr - prev).abs() <= tol * scale
}

/// Refine until the load's monitored scalar settles.
pub fn converge(
    spec: &DesignSpec,
    load: &LoadCase,
    material: &Material,
    opts: &ConvergeOptions,
) -> Result<Converged> {
    let pair = converge_cases(spec, &[*load], material, opts)?;
    let (mut results, mesh, history) = pair;
    Ok(Converged {
        result: results.pop().expect("one case requested"),
        mesh,
        history,
    })
}

/// Refine once for both characterization cases, reusing each level's
/// factorization. Both monitored scalars must settle.
pub fn converge_pair(
    spec: &DesignSpec,
    force_n: f64,
    moment_nmm: f64,
    material: &Material,
    opts: &ConvergeOptions,
) -> Result<PairResult> {
    let cases = [
        LoadCase::InPlaneTipForce { newtons: force_n },
        LoadCase::TipTorsionMoment {
            newton_mm: moment_nmm,
        },
    ];
    let (mut results, mesh, history) = converge_cases(spec, &cases, material, opts)?;
    let torsion = results.pop().expect("two cases requested");
    let bending = results.pop().expect("two cases requested");
    Ok(PairResult {
        bending,
        torsion,
        mesh,
        history,
    })
}

fn converge_cases(
    spec: &DesignSpec,
    cases: &[LoadCase],
    material: &Material,
    opts: &ConvergeOptions,
) -> Result<(Vec<FeaResult>, TriMesh, Vec<RefinementLevel>)> {
    opts.validate()?;
    for case in cases {
        case.validate()?;
    }

    let mut history: Vec<RefinementLevel> = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    let mut edge = opts.initial_edge_mm;

    for _level in 0..opts.max_levels {
        let mesh = spec.build_mesh(edge)?;
        let dof_count = mesh.node_count() * DOFS_PER_NODE;
        if dof_count > opts.max_dofs {
            return Err(Error::DofBudget {
                message: format!(
                    "{} needs {dof_count} dofs at edge {edge} mm (budget {})",
                    spec.label(),
                    opts.max_dofs
                ),
                history,
            });
        }

        let system = assemble(&mesh, material)?;
        let fact = system.factorize_with(&mesh.node_sets.fixed_edge, &opts.solver)?;
        let mut results = Vec::with_capacity(cases.len());
        for case in cases {
            results.push(solve_case(&fact, case)?);
        }
        let scalars: Vec<f64> = cases
            .iter()
            .zip(&results)
            .map(|(c, r)| monitored(c, r))
            .collect();

        history.push(RefinementLevel {
            target_edge_mm: edge,
            dof_count,
            tip_displacement_mm: cases
                .iter()
                .position(|c| matches!(c, LoadCase::InPlaneTipForce { .. }))
                .map(|i| scalars[i]),
            angular_displacement_deg: cases
                .iter()
                .position(|c| matches!(c, LoadCase::TipTorsionMoment { .. }))
                .map(|i| scalars[i]),
        });

        if let Some(prev_scalars) = &previous {
            let done = scalars
                .iter()
                .zip(prev_scalars)
                .all(|(&curr, &prev)| settled(prev, curr, opts.tolerance));
            if done {
                return Ok((results, mesh, history));
            }
        }
        previous = Some(scalars);
        edge *= 0.5;
    }

    Err(Error::DofBudget {
        message: format!(
            "{} did not settle within {} levels (last edge {} mm)",
            spec.label(),
            opts.max_levels,
            edge * 2.0
        ),
        history,
    })
}
