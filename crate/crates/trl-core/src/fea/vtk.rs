//! Legacy-format VTK field export for external viewers.

use std::io::Write;

use crate::error::Result;
use crate::geometry::TriMesh;

use super::FeaResult;

/// Write an ASCII legacy VTK unstructured grid with nodal displacement
/// vectors (mm) and element von Mises stress (Pa).
pub fn write_vtk<W: Write>(mut w: W, mesh: &TriMesh, result: &FeaResult) -> Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "layer shell solution")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;

    writeln!(w, "POINTS {} double", mesh.node_count())?;
    for n in &mesh.nodes {
        writeln!(w, "{} {} {}", n[0], n[1], n[2])?;
    }

    let m = mesh.element_count();
    writeln!(w, "CELLS {} {}", m, 4 * m)?;
    for tri in &mesh.elements {
        writeln!(w, "3 {} {} {}", tri[0], tri[1], tri[2])?;
    }
    writeln!(w, "CELL_TYPES {m}")?;
    for _ in 0..m {
        writeln!(w, "5")?;
    }

    writeln!(w, "POINT_DATA {}", mesh.node_count())?;
    writeln!(w, "VECTORS displacement double")?;
    for d in &result.displacements {
        writeln!(w, "{} {} {}", d[0], d[1], d[2])?;
    }

    writeln!(w, "CELL_DATA {m}")?;
    writeln!(w, "SCALARS von_mises double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for s in &result.von_mises_pa {
        writeln!(w, "{s}")?;
    }
    Ok(())
}
