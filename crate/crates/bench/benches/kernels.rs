use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use iterroot::constructions::{approximate_pl, kill_square_root, strip_rotation_example, KillOptions};
use iterroot::functional_graphs::BruteForceOptions;
use iterroot::geometry::{barycentric_subdivision, kuhn_triangulation, PerturbConfig};
use iterroot::pl::{certified_composition_distance, CompositionOptions, ExprMap};
use iterroot::rational::q;
use iterroot_bench::{affine_graph, permutation_of_type, quarter_turn, Evaluable, Point};

fn finite(c: &mut Criterion) {
    let mut group = c.benchmark_group("finite");
    for n in [5, 6] {
        let f = affine_graph(n, 2, 1);
        group.bench_with_input(BenchmarkId::new("brute_force", n), &f, |b, f| {
            b.iter(|| f.brute_force_square_roots(None, BruteForceOptions::default()).unwrap())
        });
    }
    let big = affine_graph(100_000, 3, 7);
    group.bench_function("components_100k", |b| b.iter(|| black_box(&big).components()));
    let sigma = permutation_of_type(&[3, 3, 5, 9, 9, 9, 12, 12, 12, 12]);
    group.bench_function("fourth_root", |b| b.iter(|| black_box(&sigma).construct_nth_root(4).unwrap()));
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    let k = kuhn_triangulation(3, 1);
    group.bench_function("subdivide_cube_twice", |b| b.iter(|| barycentric_subdivision(&barycentric_subdivision(&k))));
    let grid = kuhn_triangulation(2, 32);
    let pts: Vec<Point> = (0..64).map(|i| Point::new(vec![q(i, 64), q(63 - i, 97)])).collect();
    group.bench_function("locate_64", |b| b.iter(|| pts.iter().map(|p| grid.locate(p).unwrap()).collect::<Vec<_>>()));
    group.finish();
}

fn pl(c: &mut Criterion) {
    let mut group = c.benchmark_group("pl");
    group.sample_size(10);
    let g = quarter_turn(8);
    group.bench_function("lipschitz_constant", |b| b.iter(|| black_box(&g).lipschitz_constant()));
    let id = ExprMap::identity(2);
    let opts = CompositionOptions { target: None, max_depth: 8 };
    group.bench_function("composition_bound_step_1_16", |b| {
        b.iter(|| certified_composition_distance(&g, &id, &q(1, 16), &opts).unwrap())
    });
    group.bench_function("strip_example", |b| b.iter(|| strip_rotation_example(&q(1, 4)).unwrap()));
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    let h = ExprMap::parse("1 - x1/2", 1).unwrap();
    let eps = q(1, 10);
    let cfg = PerturbConfig { seed: 7, ..Default::default() };
    group.bench_function("interval_kill_root", |b| {
        b.iter(|| {
            let a = approximate_pl(&h, &h.modulus(), &eps, 1, &cfg).unwrap();
            kill_square_root(&a.f0, &q(1, 50), &KillOptions::default()).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, finite, geometry, pl, pipeline);
criterion_main!(benches);
