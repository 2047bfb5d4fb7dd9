//! Shared fixtures for the criterion benches in `benches/`.

use std::f64::consts::PI;

use phfluid::energetics::{FlowState, Representation};
use phfluid::fields::{random_mass, random_one_form, rng};
use phfluid::Grid;

pub const SIZES: [usize; 3] = [32, 64, 128];

pub fn torus(n: usize) -> Grid {
    Grid::periodic([2.0 * PI, 2.0 * PI], [n, n]).expect("valid grid")
}

pub fn square(n: usize) -> Grid {
    Grid::bounded([1.0, 1.0], [n, n]).expect("valid grid")
}

/// A seeded smooth state with density in `[0.9, 1.1]`.
pub fn state(grid: Grid, repr: Representation) -> FlowState {
    let r = &mut rng(11);
    FlowState::new(repr, random_one_form(grid, r), random_mass(grid, 0.1, r)).expect("valid state")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for n in SIZES {
            assert!(state(torus(n), Representation::Momentum).min_density() >= 0.9 - 1e-12);
            assert_eq!(square(n).shape(), (n, n));
        }
    }
}
