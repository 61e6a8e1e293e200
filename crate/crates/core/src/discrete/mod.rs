//! Axisymmetric finite-difference discretization of the weighted
//! `p`-Dirichlet energy and discrete checks of the local boundedness theory.

pub mod energy;
pub mod grid;
pub mod calibration;
pub mod checks;
pub mod solver;

pub use energy::{energy, sample_cells, weak_residual};
pub use grid::{AxisymGrid, GridField, Region};
pub use solver::{minimize_energy, DirichletProblem, SolveReport};
