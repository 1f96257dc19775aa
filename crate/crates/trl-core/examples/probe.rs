use std::time::Instant;

use trl_core::beams::{cantilever_tip_deflection, rect_torsion_angle, RectSection};
use trl_core::fea::{assemble, solve_case, ConvergeOptions, DesignSpec, LoadCase};
use trl_core::geometry::{build_sll_mesh, build_trl_mesh, SllSpec, TrlSpec};
use trl_core::material::Material;

fn main() {
    let pa6 = Material::pa6();
    let e = pa6.youngs_modulus;
    let g = pa6.shear_modulus();

    println!("== SLL vs oracles, per mesh level ==");
    for t in [0.5f64, 1.0] {
        let spec = SllSpec::new(100.0, 20.0, t).unwrap();
        let sec = RectSection::new(20.0, t).unwrap();
        let analytic_tip = cantilever_tip_deflection(&sec, 100.0, e, 0.01);
        let analytic_twist = rect_torsion_angle(&sec, 100.0, g, 0.5);
        for edge in [5.0, 2.0, 1.0] {
            let t0 = Instant::now();
            let mesh = build_sll_mesh(&spec, edge).unwrap();
            let sys = assemble(&mesh, &pa6).unwrap();
            let fact = sys.factorize(&mesh.node_sets.fixed_edge).unwrap();
            let bend = solve_case(&fact, &LoadCase::InPlaneTipForce { newtons: 0.01 }).unwrap();
            let tors = solve_case(&fact, &LoadCase::TipTorsionMoment { newton_mm: 0.5 }).unwrap();
            println!(
                "t={t} edge={edge}: tip={:.4} (oracle {:.4}, {:+.2}%)  beta={:.4} (oracle {:.4}, {:+.2}%)  dofs={} {:?}",
                bend.tip_inplane_displacement,
                analytic_tip,
                100.0 * (bend.tip_inplane_displacement / analytic_tip - 1.0),
                tors.angular_displacement_deg,
                analytic_twist,
                100.0 * (tors.angular_displacement_deg / analytic_twist - 1.0),
                sys.n_dofs(),
                t0.elapsed(),
            );
        }
    }

    println!("\n== SLL with nu = 0 (clamp Poisson effect isolated) ==");
    {
        let nu0 = Material::new("pa6-nu0", e, 0.0).unwrap();
        let spec = SllSpec::new(100.0, 20.0, 1.0).unwrap();
        let sec = RectSection::new(20.0, 1.0).unwrap();
        let analytic_tip = cantilever_tip_deflection(&sec, 100.0, e, 0.01);
        for edge in [2.0, 1.0] {
            let mesh = build_sll_mesh(&spec, edge).unwrap();
            let sys = assemble(&mesh, &nu0).unwrap();
            let fact = sys.factorize(&mesh.node_sets.fixed_edge).unwrap();
            let bend = solve_case(&fact, &LoadCase::InPlaneTipForce { newtons: 0.01 }).unwrap();
            println!(
                "nu=0 edge={edge}: tip={:.5} (oracle {:.5}, {:+.3}%)",
                bend.tip_inplane_displacement,
                analytic_tip,
                100.0 * (bend.tip_inplane_displacement / analytic_tip - 1.0),
            );
        }
    }

    println!("\n== TRL magnitudes (paper targets: inplane 20.7/15.6/11.3 mm; beta 0.8/1.6/0.58 deg) ==");
    for t_n in [2u32, 5, 7, 30] {
        let spec = TrlSpec::new(100.0, 20.0, t_n).unwrap();
        for edge in [2.0f64, 1.0, 0.7] {
            let t0 = Instant::now();
            let mesh = build_trl_mesh(&spec, edge).unwrap();
            let sys = assemble(&mesh, &pa6).unwrap();
            let fact = sys.factorize(&mesh.node_sets.fixed_edge).unwrap();
            let bend = solve_case(&fact, &LoadCase::InPlaneTipForce { newtons: 0.01 }).unwrap();
            let tors = solve_case(&fact, &LoadCase::TipTorsionMoment { newton_mm: 5.0 }).unwrap();
            println!(
                "T_n={t_n} edge={edge}: inplane={:.4} mm  beta={:.4} deg  kappa={:.1} Nmm/rad  scf={:.2}  dofs={} {:?}",
                bend.tip_inplane_displacement,
                tors.angular_displacement_deg,
                tors.rotational_stiffness_nmm.unwrap_or(f64::NAN),
                tors.stress_concentration,
                sys.n_dofs(),
                t0.elapsed(),
            );
        }
    }

    let _ = (ConvergeOptions::default(), DesignSpec::Sll(SllSpec::default()));
}
