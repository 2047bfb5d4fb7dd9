//! Seeded trigonometric test data and the named analytic fields used by the
//! simulator.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{Axis, DiscreteForm, Grid};

pub type FieldRng = ChaCha8Rng;

/// Number of Fourier modes in a random trigonometric field.
pub const MODES: usize = 4;
/// Largest wavenumber per axis in a random trigonometric field.
pub const MAX_WAVENUMBER: i32 = 3;

pub fn rng(seed: u64) -> FieldRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Phase coordinate along an axis: one full period per domain length on
/// periodic axes, the raw coordinate on bounded axes.
fn phase(grid: &Grid, axis: Axis, x: f64) -> f64 {
    if grid.is_periodic(axis) {
        2.0 * PI * x / grid.extents()[axis.index()]
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    kx: f64,
    ky: f64,
    amp: f64,
    phase: f64,
}

/// A truncated trigonometric polynomial `Σ c_m cos(kx X + ky Y + φ_m)` with
/// `Σ |c_m| = 1`, so its sup-norm is at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigField {
    modes: Vec<Mode>,
}

impl TrigField {
    pub fn random(rng: &mut FieldRng) -> Self {
        let mut modes: Vec<Mode> = (0..MODES)
            .map(|_| {
                let (kx, ky) = loop {
                    let kx = rng.random_range(0..=MAX_WAVENUMBER);
                    let ky = rng.random_range(0..=MAX_WAVENUMBER);
                    if kx != 0 || ky != 0 {
                        break (kx, ky);
                    }
                };
                Mode {
                    kx: kx as f64,
                    ky: ky as f64,
                    amp: rng.random_range(-1.0..=1.0),
                    phase: rng.random_range(0.0..2.0 * PI),
                }
            })
            .collect();
        let total: f64 = modes.iter().map(|m| m.amp.abs()).sum();
        if total > 0.0 {
            for m in &mut modes {
                m.amp /= total;
            }
        }
        TrigField { modes }
    }

    pub fn eval(&self, grid: &Grid, x: f64, y: f64) -> f64 {
        let px = phase(grid, Axis::X, x);
        let py = phase(grid, Axis::Y, y);
        self.modes
            .iter()
            .map(|m| m.amp * (m.kx * px + m.ky * py + m.phase).cos())
            .sum()
    }
}

pub fn random_function(grid: Grid, rng: &mut FieldRng) -> DiscreteForm {
    let f = TrigField::random(rng);
    DiscreteForm::function_fn(grid, |x, y| f.eval(&grid, x, y))
}

pub fn random_one_form(grid: Grid, rng: &mut FieldRng) -> DiscreteForm {
    let a = TrigField::random(rng);
    let b = TrigField::random(rng);
    DiscreteForm::one_form_fn(grid, |x, y| (a.eval(&grid, x, y), b.eval(&grid, x, y)))
}

pub fn random_top_form(grid: Grid, rng: &mut FieldRng) -> DiscreteForm {
    let f = TrigField::random(rng);
    DiscreteForm::top_form_fn(grid, |x, y| f.eval(&grid, x, y))
}

pub fn random_form(grid: Grid, degree: usize, rng: &mut FieldRng) -> DiscreteForm {
    match degree {
        0 => random_function(grid, rng),
        1 => random_one_form(grid, rng),
        _ => random_top_form(grid, rng),
    }
}

/// A positive mass form `μ = ρ μ_vol` with `ρ = 1 + amp·f`, `f` a random
/// trigonometric field; `ρ ∈ [1 − amp, 1 + amp]`.
pub fn random_mass(grid: Grid, amp: f64, rng: &mut FieldRng) -> DiscreteForm {
    let f = TrigField::random(rng);
    let s = grid.volume_factor();
    DiscreteForm::top_form_fn(grid, |x, y| s * (1.0 + amp * f.eval(&grid, x, y)))
}

/// Phase used by the named fields: a full period per length on periodic axes,
/// a half period on bounded axes so that `sin` vanishes on both walls.
pub fn wall_phase(grid: &Grid, axis: Axis, x: f64) -> f64 {
    let l = grid.extents()[axis.index()];
    if grid.is_periodic(axis) {
        2.0 * PI * x / l
    } else {
        PI * x / l
    }
}

/// Coordinate velocity components of the named initial conditions.
pub fn uniform_velocity(u: [f64; 2]) -> impl Fn(f64, f64) -> (f64, f64) {
    move |_, _| (u[0], u[1])
}

/// `v = (A sin Y, 0)`.
pub fn shear_velocity(grid: Grid, amp: f64) -> impl Fn(f64, f64) -> (f64, f64) {
    move |_, y| (amp * wall_phase(&grid, Axis::Y, y).sin(), 0.0)
}

/// `v = A (sin X cos Y, −cos X sin Y)`; tangential on every bounded wall.
pub fn taylor_green_velocity(grid: Grid, amp: f64) -> impl Fn(f64, f64) -> (f64, f64) {
    move |x, y| {
        let px = wall_phase(&grid, Axis::X, x);
        let py = wall_phase(&grid, Axis::Y, y);
        (amp * px.sin() * py.cos(), -amp * px.cos() * py.sin())
    }
}

/// `ρ = 1 + ε cos X cos Y`.
pub fn perturbed_density(grid: Grid, eps: f64) -> impl Fn(f64, f64) -> f64 {
    move |x, y| 1.0 + eps * wall_phase(&grid, Axis::X, x).cos() * wall_phase(&grid, Axis::Y, y).cos()
}
