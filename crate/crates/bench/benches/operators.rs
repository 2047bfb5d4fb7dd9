use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use phfluid::energetics::{var_deriv, structure_map, Representation};
use phfluid::fields::{random_one_form, rng};
use phfluid::forms::{exterior_derivative, hodge_star, lie_derivative, pairing, sharp, wedge};
use phfluid::simulator::{rk4_step, Force};
use phfluid_bench::{square, state, torus, SIZES};

fn forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("forms");
    for n in SIZES {
        let g = torus(n);
        let a = random_one_form(g, &mut rng(1));
        let b = random_one_form(g, &mut rng(2));
        let v = sharp(&b).unwrap();
        group.bench_with_input(BenchmarkId::new("d_periodic", n), &a, |bch, a| {
            bch.iter(|| exterior_derivative(black_box(a)).unwrap())
        });
        let ab = random_one_form(square(n), &mut rng(1));
        group.bench_with_input(BenchmarkId::new("d_bounded", n), &ab, |bch, a| {
            bch.iter(|| exterior_derivative(black_box(a)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("wedge_star", n), &n, |bch, _| {
            bch.iter(|| wedge(black_box(&a), &hodge_star(black_box(&b))).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lie_derivative", n), &n, |bch, _| {
            bch.iter(|| lie_derivative(black_box(&v), black_box(&a)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pairing", n), &n, |bch, _| {
            bch.iter(|| pairing(black_box(&a), black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn dynamics(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics");
    group.sample_size(20);
    for n in SIZES {
        for repr in [Representation::Momentum, Representation::Velocity] {
            let s = state(torus(n), repr);
            group.bench_with_input(BenchmarkId::new(format!("structure_map_{}", repr.name()), n), &s, |bch, s| {
                bch.iter(|| structure_map(s, &var_deriv(s).unwrap()).unwrap())
            });
            let force = Force::zero(*s.grid());
            group.bench_with_input(BenchmarkId::new(format!("rk4_step_{}", repr.name()), n), &s, |bch, s| {
                bch.iter(|| rk4_step(black_box(s), &force, 0.0, 1e-3, false).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, forms, dynamics);
criterion_main!(benches);
