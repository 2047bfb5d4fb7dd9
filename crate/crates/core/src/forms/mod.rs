//! Discrete exterior calculus on a flat rectangular grid.

mod boundary;
mod calculus;
mod form;
mod grid;
pub mod stencil;

pub use boundary::{boundary_integral, boundary_scale, boundary_wedge, trace, BoundaryForm, Edge};
pub use calculus::{
    divergence, exterior_derivative, integrate_top, lie_derivative, pairing, pairing_scale,
};
pub use form::{
    flat, hodge_star, interior_product, sharp, vol_flat, vol_sharp, wedge, DiscreteForm,
    VectorField, N,
};
pub use grid::{Axis, Grid, GridSpec, MIN_RESOLUTION};
