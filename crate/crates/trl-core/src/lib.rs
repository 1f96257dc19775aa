//! Design-space exploration toolkit for torsion-resistant strain limiting
//! layers in pneumatic-network grippers.
//!
//! The crate covers the full loop from parametric geometry to payload
//! prediction:
//!
//! - [`geometry`] builds flat strips and triangulated layers as labeled
//!   triangle shell meshes, with binary STL export for printing.
//! - [`fea`] is a linear-elastic facet-shell solver (membrane + plate
//!   bending) for the two characterization load cases: an in-plane tip
//!   force and a tip torsion moment.
//! - [`beams`] provides the closed-form cantilever and torsion oracles that
//!   cross-check the solver on rectangular strips.
//! - [`sweep`] drives thickness and triangle-count studies, classifies the
//!   response curves, and picks designs against named objectives.
//! - [`grasp`] turns stiffness numbers into antipodal payload limits and
//!   mass feasibility verdicts.
//!
//! Interfaces speak mm / N / N·mm / degrees; solver internals are SI.

pub mod beams;
pub mod error;
pub mod fea;
pub mod geometry;
pub mod grasp;
pub mod material;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use fea::reference;
