use std::f64::consts::PI;

use phfluid::dirac::{dirac_residual, ports};
use phfluid::energetics::{hamiltonian, pairing_rate, structure_map, to_velocity, EffortPair};
use phfluid::fields::{random_function, random_mass, random_one_form, rng};
use phfluid::forms::pairing_scale;
use phfluid::simulator::impose_walls;
use phfluid::verify::fit_order;
use phfluid::{FlowState, Grid, Representation};
use proptest::prelude::*;

fn square(n: usize) -> Grid {
    Grid::bounded([1.0, 1.0], [n, n]).unwrap()
}

fn state(g: Grid, seed: u64) -> FlowState {
    let r = &mut rng(seed);
    FlowState::momentum(random_one_form(g, r), random_mass(g, 0.3, r)).unwrap()
}

fn power_defect(s: &FlowState, seed: u64) -> f64 {
    let f = random_one_form(*s.grid(), &mut rng(seed));
    ports(s, &f).unwrap().power_sum().unwrap().abs()
}

#[test]
fn power_continuity_on_bounded_grid() {
    let s = state(square(128), 4);
    for st in [s.clone(), to_velocity(&s).unwrap()] {
        let scale = hamiltonian(&st).unwrap();
        assert!(power_defect(&st, 5) <= 1e-8 * scale, "{}", power_defect(&st, 5) / scale);
    }
}

#[test]
fn permeable_power_defect_converges() {
    let pts: Vec<(f64, f64)> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let g = square(n);
            (g.min_spacing(), power_defect(&state(g, 6), 7))
        })
        .collect();
    let order = fit_order(&pts).unwrap();
    assert!(order >= 3.0, "{pts:?} order {order}");
}

#[test]
fn walls_make_boundary_power_vanish_exactly() {
    let g = Grid::new([PI, 2.0], [24, 20], [false, false], [1.5, 0.8]).unwrap();
    let r = &mut rng(8);
    let mut alpha = random_one_form(g, r);
    impose_walls(&mut alpha);
    let s = FlowState::momentum(alpha, random_mass(g, 0.3, r)).unwrap();
    let f = random_one_form(g, r);
    for st in [s.clone(), to_velocity(&s).unwrap()] {
        let p = ports(&st, &f).unwrap();
        assert_eq!(p.boundary_power().unwrap(), 0.0);
        assert!(p.f_boundary.max_abs() == 0.0);
    }
}

#[test]
fn walls_on_one_axis_only() {
    let g = Grid::new([2.0 * PI, 1.0], [24, 20], [true, false], [1.0, 1.0]).unwrap();
    let r = &mut rng(9);
    let mut alpha = random_one_form(g, r);
    impose_walls(&mut alpha);
    let s = FlowState::momentum(alpha, random_mass(g, 0.3, r)).unwrap();
    let p = ports(&s, &random_one_form(g, r)).unwrap();
    assert_eq!(p.boundary_power().unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_tuples_are_dirac_consistent(seed in any::<u64>(), momentum in any::<bool>(), periodic in any::<bool>()) {
        let g = Grid::new([1.0, 1.5], [16, 20], [periodic, periodic], [1.0, 2.0]).unwrap();
        let s = state(g, seed);
        let s = if momentum { s } else { to_velocity(&s).unwrap() };
        let p = ports(&s, &random_one_form(g, &mut rng(seed ^ 1))).unwrap();
        prop_assert!(dirac_residual(&p, &s).unwrap().max() <= 1e-10);
    }

    #[test]
    fn structure_maps_are_skew_for_any_seed(seed in any::<u64>(), momentum in any::<bool>()) {
        let g = Grid::new([2.0, 2.0], [16, 16], [true, true], [0.5, 1.5]).unwrap();
        let r = &mut rng(seed);
        let repr = if momentum { Representation::Momentum } else { Representation::Velocity };
        let s = FlowState::new(repr, random_one_form(g, r), random_mass(g, 0.5, r)).unwrap();
        let e = EffortPair::new(random_one_form(g, r), random_function(g, r)).unwrap();
        let j = structure_map(&s, &e).unwrap();
        let scale = pairing_scale(&j.first, &e.first).unwrap() + pairing_scale(&j.mass, &e.mass).unwrap();
        prop_assert!(pairing_rate(&j, &e).unwrap().abs() <= 1e-12 * scale);
    }

    #[test]
    fn port_powers_agree_across_representations(seed in any::<u64>()) {
        let g = square(24);
        let s = state(g, seed);
        let f = random_one_form(g, &mut rng(seed ^ 2));
        let pm = ports(&s, &f).unwrap();
        let pv = ports(&to_velocity(&s).unwrap(), &f).unwrap();
        prop_assert!((pm.boundary_power().unwrap() - pv.boundary_power().unwrap()).abs() <= 1e-9);
        prop_assert!((pm.distributed_power().unwrap() - pv.distributed_power().unwrap()).abs() <= 1e-9);
        let h = hamiltonian(&s).unwrap();
        prop_assert!((h - hamiltonian(&to_velocity(&s).unwrap()).unwrap()).abs() <= 1e-13 * h);
    }
}
