use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use grs_core::algebra::parse::parse_poly;
use grs_core::dynamics::{Dynamics, Params, PhasePoint};
use grs_core::flows::{closed_form, default_grid, integrate_canonical, residual_scan, CatalogId, CurveParams};
use grs_core::integrals::{recursion_solve, Seed};
use grs_core::orbit::{ExtVector, OrbitData};
use grs_core::superpotential::{candidate_set, solve_superpotential};

fn superpotential_search(c: &mut Criterion) {
    let warped = OrbitData::warped(2, 2);
    let d = warped.d_ext();
    let aug: Vec<ExtVector> =
        [[-1, -1], [-1, 1], [1, -1]].iter().map(|x| d.add(&ExtVector::from_ints(&[x[0], x[1], 0])).half()).collect();
    let cands: Vec<ExtVector> = candidate_set(&warped, &aug).into_iter().map(|c| c.c).collect();
    c.bench_function("solve warped (2,2)", |b| b.iter(|| solve_superpotential(black_box(&warped), &cands).unwrap()));
}

fn recursion(c: &mut Criterion) {
    let sphere = OrbitData::sphere(4);
    let mp = |t: &str| parse_poly(t, &["p", "phi"]).unwrap();
    let seed = Seed { c: ExtVector::from_ints(&[-3, 1]), f_c: mp("-1/4*(p + phi)^2"), psi_c: mp("1/2*(p + phi)") };
    c.bench_function("recursion sphere(4)", |b| b.iter(|| recursion_solve(black_box(&sphere), &seed, 4).unwrap()));
}

fn flows(c: &mut Criterion) {
    let curve = closed_form(CatalogId::WarpedSmooth, CurveParams::with_energy(1.0)).unwrap();
    let init = curve.phase_point(1.0).unwrap();
    let mut g = c.benchmark_group("flows");
    g.sample_size(20);
    g.bench_function("canonical warped t 1..6", |b| {
        b.iter(|| {
            integrate_canonical(curve.orbit(), curve.dynamics_params(), black_box(&init), (1.0, 6.0), 1e-10, None)
        })
    });
    let grid = default_grid(&curve, 200);
    g.bench_function("residual scan 200 points", |b| {
        b.iter(|| residual_scan(&curve, curve.orbit(), curve.dynamics_params(), black_box(&grid)).unwrap())
    });
    g.finish();
}

fn gradient(c: &mut Criterion) {
    let orbit = OrbitData::warped(3, 3);
    let dy = Dynamics::new(&orbit, Params::steady(1.0));
    let pt = PhasePoint::from_state(&[0.3, -0.2, 0.1, 0.5, 0.7, -0.4]);
    c.bench_function("hamiltonian gradient warped (3,3)", |b| b.iter(|| dy.hamiltonian_gradient(black_box(&pt))));
}

criterion_group!(benches, superpotential_search, recursion, flows, gradient);
criterion_main!(benches);
