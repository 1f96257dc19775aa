use thiserror::Error;

use crate::fea::RefinementLevel;
use crate::geometry::MeshDefect;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("meshing failed: {0}")]
    Meshing(String),

    #[error("mesh has {} defect(s): {}", .0.len(), format_defects(.0))]
    MeshDefects(Vec<MeshDefect>),

    #[error("structure is a mechanism (stiffness not positive definite): {0}")]
    Mechanism(String),

    #[error("iterative solve did not converge: {0}")]
    NonConvergence(String),

    #[error("dof budget exceeded before convergence ({message})")]
    DofBudget {
        message: String,
        history: Vec<RefinementLevel>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

fn format_defects(defects: &[MeshDefect]) -> String {
    let mut out = String::new();
    for (i, d) in defects.iter().take(4).enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&d.to_string());
    }
    if defects.len() > 4 {
        out.push_str("; ...");
    }
    out
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
