//! Port-Hamiltonian model of the kinetic-energy subsystem of ideal fluid flow
//! on a structured 2D grid.

pub mod error;
pub mod algebra;
pub mod dirac;
pub mod energetics;
pub mod fields;
pub mod forms;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
pub use dirac::{EnergyReport, PortSet};
pub use energetics::{FlowState, Representation};
pub use forms::{BoundaryForm, DiscreteForm, Grid, VectorField};
pub use simulator::{simulate, SimConfig, SimOutput};
pub use verify::{verify, VerifyConfig, VerifyReport};
