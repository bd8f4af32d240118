use grs_core::algebra::parse::{parse_laurent, parse_poly};
use grs_core::algebra::rat;
use grs_core::dynamics::{Dynamics, Params, PhasePoint, VelocityPoint};
use grs_core::flows::{
    closed_form, integrate_canonical, integrate_first_order, linspace, CatalogId, CurveParams, StopReason,
};
use grs_core::integrals::{integral_drift, recursion_solve, ExpPolySum, Seed};
use grs_core::orbit::{ExtVector, OrbitData};
use grs_core::superpotential::{first_order_subsystem, ExpSum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(x: &[(i64, i64)]) -> ExtVector {
    ExtVector(x.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn bryant_integral() -> ExpPolySum {
    let mp = |t: &str| parse_poly(t, &["p", "phi"]).unwrap();
    let seed = Seed { c: ExtVector::from_ints(&[-3, 1]), f_c: mp("-1/4*(p + phi)^2"), psi_c: mp("1/2*(p + phi)") };
    recursion_solve(&OrbitData::sphere(4), &seed, 4).unwrap().f
}

#[test]
fn canonical_flow_preserves_constraint_and_tracks_warped_curve() {
    let c = closed_form(CatalogId::WarpedSmooth, CurveParams::with_energy(1.0)).unwrap();
    let t0 = 0.5;
    let init = c.phase_point(t0).unwrap();
    let grid = linspace(t0, t0 + 5.0, 51);
    let tr =
        integrate_canonical(c.orbit(), c.dynamics_params(), &init, (t0, t0 + 5.0), 1e-10, Some(grid.clone())).unwrap();
    assert_eq!(tr.stop, StopReason::Completed);
    assert_eq!(tr.len(), grid.len());
    assert!(tr.max_abs_hamiltonian() < 1e-8, "{}", tr.max_abs_hamiltonian());
    for (t, p) in tr.times.iter().zip(&tr.points) {
        let s = c.sample(*t).unwrap();
        for i in 0..2 {
            assert!((p.q[i] - s.q[i]).abs() < 1e-6, "t={t}");
        }
        assert!((p.u - s.u).abs() < 1e-6, "t={t}");
    }
}

#[test]
fn bryant_integral_is_conserved_along_the_flow() {
    let f = bryant_integral();
    let c = closed_form(CatalogId::Bryant5Smooth, CurveParams::with_energy(1.0)).unwrap();
    let params = c.dynamics_params();
    let along: Vec<PhasePoint> = linspace(0.1, 8.0, 80).iter().map(|&t| c.phase_point(t).unwrap()).collect();
    assert!(integral_drift(c.orbit(), &params, &f, &along).unwrap() < 1e-9);

    let init = c.phase_point(0.5).unwrap();
    let mut tr =
        integrate_canonical(c.orbit(), params, &init, (0.5, 5.5), 1e-10, Some(linspace(0.5, 5.5, 101))).unwrap();
    assert!(tr.max_abs_hamiltonian() < 1e-8);
    assert!(integral_drift(c.orbit(), &params, &f, &tr.points).unwrap() < 1e-7);
    tr.register("F", &f, &[1.0]);
    let mu = c.mu().unwrap();
    assert!(tr.conserved[0].1.iter().all(|x| (x - mu).abs() < 1e-7));
}

#[test]
fn bryant_integral_is_mu_at_any_velocity() {
    let f = bryant_integral();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let e: f64 = rng.gen_range(0.2..4.0);
        let dy = Dynamics::new(&OrbitData::sphere(4), Params::steady(e));
        let vp = VelocityPoint {
            q: vec![rng.gen_range(-2.0..2.0)],
            u: rng.gen_range(-2.0..2.0),
            qdot: vec![rng.gen_range(-3.0..3.0)],
            udot: rng.gen_range(-3.0..3.0),
        };
        let pt = dy.legendre_forward(&vp).unwrap();
        let x = vp.qdot[0] - vp.udot;
        let mu = (vp.q[0] - vp.u).exp() * (e - x * x);
        assert!((f.eval(&pt, &[e.sqrt()]) - mu).abs() < 1e-10 * (1.0 + mu.abs()));
    }
}

#[test]
fn circle_integral_along_cigar() {
    let mp = |t: &str| parse_poly(t, &["p", "phi"]).unwrap();
    let seed = Seed { c: ExtVector::from_ints(&[0, 1]), f_c: mp("p + phi"), psi_c: mp("1") };
    let o = OrbitData::circle();
    let f = recursion_solve(&o, &seed, 3).unwrap().f;
    for a in [0.5, 1.0, 3.0] {
        let c = closed_form(CatalogId::Cigar, CurveParams { a: Some(a), ..CurveParams::with_energy(2.0) }).unwrap();
        let pts: Vec<PhasePoint> = linspace(0.2, 6.0, 40).iter().map(|&t| c.phase_point(t).unwrap()).collect();
        assert!(integral_drift(&o, &c.dynamics_params(), &f, &pts).unwrap() < 1e-10);
    }
}

fn compare_first_order(id: CatalogId, params: CurveParams, f: &ExpSum, free: &[f64]) {
    let c = closed_form(id, params).unwrap();
    let field = first_order_subsystem(c.orbit(), f, params.e, free).unwrap();
    let s = c.sample(0.5).unwrap();
    let mut init = s.q.clone();
    init.push(s.u);
    let grid = linspace(0.5, 5.0, 46);
    let tr = integrate_first_order(&field, &init, (0.5, 5.0), 1e-11, Some(grid)).unwrap();
    assert_eq!(tr.stop, StopReason::Completed);
    for (t, p) in tr.times.iter().zip(&tr.points) {
        let s = c.sample(*t).unwrap();
        let gap = p.q.iter().zip(&s.q).map(|(a, b)| (a - b).abs()).fold((p.u - s.u).abs(), f64::max);
        assert!(gap < 1e-6, "{id} t={t}: gap {gap}");
    }
    assert!(tr.max_abs_hamiltonian() < 1e-8, "{id}: {}", tr.max_abs_hamiltonian());
}

#[test]
fn first_order_flows_reproduce_closed_forms() {
    for e in [0.5, 1.0, 4.0] {
        let bryant = ExpSum::from_terms([
            (v(&[(2, 1), (-1, 1)]), parse_laurent("2*s").unwrap()),
            (v(&[(1, 1), (-1, 1)]), parse_laurent("12/s").unwrap()),
        ]);
        compare_first_order(CatalogId::Bryant5Conical, CurveParams::with_energy(e), &bryant, &[]);
        let warped = ExpSum::from_terms([
            (v(&[(1, 2), (3, 2), (-1, 1)]), parse_laurent("s").unwrap()),
            (v(&[(3, 2), (1, 2), (-1, 1)]), parse_laurent("s").unwrap()),
            (v(&[(1, 2), (1, 2), (-1, 1)]), parse_laurent("4/s").unwrap()),
        ]);
        compare_first_order(CatalogId::WarpedSmooth, CurveParams::with_energy(e), &warped, &[]);
        let circle = ExpSum::from_terms([
            (v(&[(1, 1), (-1, 1)]), parse_laurent("a").unwrap()),
            (v(&[(0, 1), (-1, 1)]), parse_laurent("s^2/a").unwrap()),
        ]);
        let a = e / 2.0;
        compare_first_order(CatalogId::Cigar, CurveParams { a: Some(a), ..CurveParams::with_energy(e) }, &circle, &[a]);
    }
}

#[test]
fn planar_invariant_matches_constant() {
    use grs_core::integrals::darboux::j1;
    let j = j1(4);
    for id in [CatalogId::Bryant5Smooth, CatalogId::Bryant5Posmu, CatalogId::Bryant5Conical] {
        let c = closed_form(id, CurveParams::with_energy(1.7)).unwrap();
        let cc = c.dynamics_params().c;
        for t in linspace(0.3, 5.0, 20) {
            let h = c.h(t).unwrap()[0];
            let ud = c.u(t).unwrap().d1;
            let (x, y) = (h.d1, 4.0 * h.d1 - h.v * ud);
            let val = j.eval(&[x, y]);
            assert!((val - cc * h.v * h.v).abs() < 1e-9 * (1.0 + val.abs()), "{id} t={t}");
        }
    }
}

#[test]
fn lifted_subsystem_solves_canonical_equations() {
    let bryant = ExpSum::from_terms([
        (v(&[(2, 1), (-1, 1)]), parse_laurent("2*s").unwrap()),
        (v(&[(1, 1), (-1, 1)]), parse_laurent("12/s").unwrap()),
    ]);
    let e = 1.3;
    let o = OrbitData::sphere(4);
    let field = first_order_subsystem(&o, &bryant, e, &[]).unwrap();
    let dy = Dynamics::new(&o, Params::steady(e));
    // along a subsystem trajectory the momenta must follow ṗ = −∂𝓗/∂q
    let tr = integrate_first_order(&field, &[0.2, -0.1], (0.0, 2.0), 1e-12, Some(linspace(0.0, 2.0, 201))).unwrap();
    let dt = 0.01;
    for i in 1..tr.len() - 1 {
        let pt = &tr.points[i];
        assert!(dy.hamiltonian(pt).unwrap().abs() < 1e-9);
        let vf = dy.vector_field(&pt.to_state()).unwrap();
        let qdot = field.eval(&[pt.q[0], pt.u]).unwrap();
        assert!((vf[0] - qdot[0]).abs() < 1e-10 && (vf[1] - qdot[1]).abs() < 1e-10);
        let pdot = (tr.points[i + 1].p[0] - tr.points[i - 1].p[0]) / (2.0 * dt);
        let phidot = (tr.points[i + 1].phi - tr.points[i - 1].phi) / (2.0 * dt);
        assert!((pdot - vf[2]).abs() < 1e-3 * (1.0 + vf[2].abs()), "i={i}");
        assert!((phidot - vf[3]).abs() < 1e-3 * (1.0 + vf[3].abs()), "i={i}");
    }
}

#[test]
fn subsystem_trajectories_stay_on_the_constraint() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let circle = ExpSum::from_terms([
        (v(&[(1, 1), (-1, 1)]), parse_laurent("a").unwrap()),
        (v(&[(0, 1), (-1, 1)]), parse_laurent("s^2/a").unwrap()),
    ]);
    let bryant = ExpSum::from_terms([
        (v(&[(2, 1), (-1, 1)]), parse_laurent("2*s").unwrap()),
        (v(&[(1, 1), (-1, 1)]), parse_laurent("12/s").unwrap()),
    ]);
    let warped = ExpSum::from_terms([
        (v(&[(1, 2), (3, 2), (-1, 1)]), parse_laurent("s").unwrap()),
        (v(&[(3, 2), (1, 2), (-1, 1)]), parse_laurent("s").unwrap()),
        (v(&[(1, 2), (1, 2), (-1, 1)]), parse_laurent("4/s").unwrap()),
    ]);
    let cases = [
        (OrbitData::circle(), circle, vec![0.7]),
        (OrbitData::sphere(4), bryant, vec![]),
        (OrbitData::warped(2, 2), warped, vec![]),
    ];
    for (o, f, free) in &cases {
        let field = first_order_subsystem(o, f, 1.4, free).unwrap();
        for _ in 0..100 {
            let init: Vec<f64> = (0..field.dim()).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let tr = integrate_first_order(&field, &init, (0.0, 2.0), 1e-10, None).unwrap();
            assert!(tr.max_abs_hamiltonian() < 1e-8, "{}: {}", o.name(), tr.max_abs_hamiltonian());
        }
    }
}

#[test]
fn hamiltonian_is_a_trivial_integral() {
    use grs_core::integrals::steady_hamiltonian;
    let c = closed_form(CatalogId::WarpedSmooth, CurveParams::with_energy(1.0)).unwrap();
    let mut init = c.phase_point(1.0).unwrap();
    init.p[0] += 0.01;
    let tr = integrate_canonical(c.orbit(), c.dynamics_params(), &init, (1.0, 4.0), 1e-10, None).unwrap();
    let h = steady_hamiltonian(c.orbit());
    assert!(integral_drift(c.orbit(), &c.dynamics_params(), &h, &tr.points).unwrap() < 1e-8);
    assert!(tr.hamiltonian_drift() < 1e-8);
    assert!(tr.hamiltonian[0].abs() > 1e-4);
}
