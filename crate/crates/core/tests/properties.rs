use grs_core::algebra::{int, rat, LaurentScalar, Poly, Rational};
use grs_core::dynamics::{Dynamics, Params, PhasePoint, VelocityPoint};
use grs_core::integrals::{poisson_bracket, ExpPolySum, MomPoly};
use grs_core::orbit::{ExtVector, OrbitData};
use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn test_orbits() -> Vec<OrbitData> {
    vec![
        OrbitData::circle(),
        OrbitData::sphere(3),
        OrbitData::sphere(4),
        OrbitData::warped(2, 2),
        OrbitData::warped(3, 3),
        OrbitData::circle_bundle(&[1, 2], &[2, 4], &[int(1), int(2)]).unwrap(),
    ]
}

fn params_for(o: &OrbitData, general: bool, e: f64) -> Params {
    if general {
        Params::new(o.n(), 1.7, 0.6, e).unwrap()
    } else {
        Params::steady(e)
    }
}

fn point(o: &OrbitData, xs: &[f64]) -> PhasePoint {
    let r = o.r();
    PhasePoint { q: xs[..r].to_vec(), u: xs[r], p: xs[r + 1..2 * r + 1].to_vec(), phi: xs[2 * r + 1] }
}

fn ext(xs: &[i64]) -> ExtVector {
    ExtVector::from_ints(xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn legendre_round_trip(idx in 0usize..6, general: bool, xs in prop::collection::vec(-1.5f64..1.5, 8)) {
        let o = &test_orbits()[idx];
        let dy = Dynamics::new(o, params_for(o, general, 0.8));
        let r = o.r();
        let v = VelocityPoint { q: xs[..r].to_vec(), u: xs[r], qdot: xs[r + 1..2 * r + 1].to_vec(), udot: xs[2 * r + 1] };
        let back = dy.legendre_inverse(&dy.legendre_forward(&v).unwrap()).unwrap();
        for (a, b) in back.qdot.iter().chain([&back.udot]).zip(v.qdot.iter().chain([&v.udot])) {
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn gradient_matches_differences(idx in 0usize..6, general: bool, xs in prop::collection::vec(-1.0f64..1.0, 8)) {
        let o = &test_orbits()[idx];
        let dy = Dynamics::new(o, params_for(o, general, 1.3));
        let pt = point(o, &xs);
        let g = dy.hamiltonian_gradient(&pt).unwrap();
        let analytic: Vec<f64> = g.dq.iter().chain([&g.du]).chain(&g.dp).chain([&g.dphi]).copied().collect();
        let state = pt.to_state();
        for (i, a) in analytic.iter().enumerate() {
            let h = 1e-5 * (1.0 + state[i].abs());
            let mut plus = state.clone();
            let mut minus = state.clone();
            plus[i] += h;
            minus[i] -= h;
            let fd = (dy.hamiltonian(&PhasePoint::from_state(&plus)).unwrap()
                - dy.hamiltonian(&PhasePoint::from_state(&minus)).unwrap()) / (2.0 * h);
            prop_assert!((a - fd).abs() <= 1e-6 * a.abs().max(1.0), "component {i}: {a} vs {fd}");
        }
    }

    #[test]
    fn steady_forms_agree(idx in 0usize..6, xs in prop::collection::vec(-1.0f64..1.0, 8)) {
        let o = &test_orbits()[idx];
        let dy = Dynamics::new(o, Params::steady(0.9));
        let pt = point(o, &xs);
        let (a, b) = (dy.hamiltonian(&pt).unwrap(), dy.hamiltonian_steady(&pt).unwrap());
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn polarization(idx in 0usize..6, v in prop::collection::vec(-9i64..9, 4), w in prop::collection::vec(-9i64..9, 4)) {
        let o = &test_orbits()[idx];
        let k = o.r() + 1;
        let form = o.lorentz();
        let (v, w) = (ext(&v[..k]), ext(&w[..k]));
        let lhs = form.bilinear(&v, &w).unwrap() * int(2);
        let rhs = form.quadratic(&v.add(&w)).unwrap() - form.quadratic(&v).unwrap() - form.quadratic(&w).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(form.bilinear(&v, &w).unwrap(), form.bilinear(&w, &v).unwrap());
    }

    #[test]
    fn null_pairing(idx in 0usize..6, v in prop::collection::vec((-6i64..6, 1i64..4), 3), w in prop::collection::vec((-6i64..6, 1i64..4), 3)) {
        let o = &test_orbits()[idx];
        let r = o.r();
        let v: Vec<Rational> = v[..r].iter().map(|&(n, d)| rat(n, d)).collect();
        let w: Vec<Rational> = w[..r].iter().map(|&(n, d)| rat(n, d)).collect();
        let mut expected = int(1);
        for i in 0..r {
            expected -= &v[i] * &w[i] / int(o.d()[i] as i64);
        }
        prop_assert_eq!(o.lorentz().lemma51_check(&v, &w).unwrap(), expected);
    }
}

#[test]
fn signature_matches_eigenvalues() {
    for o in test_orbits() {
        let m = o.lorentz().matrix();
        let k = m.rows;
        let dm = DMatrix::from_fn(k, k, |i, j| m[(i, j)].to_f64().unwrap());
        let eig = dm.symmetric_eigen().eigenvalues;
        let pos = eig.iter().filter(|x| **x > 1e-12).count();
        let neg = eig.iter().filter(|x| **x < -1e-12).count();
        assert_eq!(o.lorentz().signature(), (pos, neg, k - pos - neg), "{}", o.name());
        assert_eq!((pos, neg), (1, o.r()), "{}", o.name());
    }
}

/// `(exponent, momentum powers, numerator, power of s)`.
type Term = ((i64, i64), (u32, u32), i64, i32);

fn exppoly(terms: &[Term]) -> ExpPolySum {
    let mut out = ExpPolySum::new(2);
    for &((b0, b1), (m0, m1), c, s) in terms {
        let mono: MomPoly = Poly::from_terms(2, [(vec![m0, m1], LaurentScalar::s_power(int(c), s))]);
        out = out.add(&ExpPolySum::monomial(ext(&[b0, b1]), mono));
    }
    out
}

fn term() -> impl Strategy<Value = Term> {
    ((-2i64..3, -2i64..3), (0u32..3, 0u32..3), -4i64..5, -1i32..2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_laws(f in prop::collection::vec(term(), 1..4), g in prop::collection::vec(term(), 1..4), h in prop::collection::vec(term(), 1..4)) {
        let (f, g, h) = (exppoly(&f), exppoly(&g), exppoly(&h));
        let br = |a: &ExpPolySum, b: &ExpPolySum| poisson_bracket(a, b).unwrap();
        prop_assert_eq!(br(&f, &g), br(&g, &f).neg());
        prop_assert_eq!(br(&f.add(&g), &h), br(&f, &h).add(&br(&g, &h)));
        prop_assert_eq!(br(&f.mul(&g), &h), f.mul(&br(&g, &h)).add(&g.mul(&br(&f, &h))));
        let jacobi = br(&f, &br(&g, &h)).add(&br(&g, &br(&h, &f))).add(&br(&h, &br(&f, &g)));
        prop_assert!(jacobi.is_empty());
    }
}

#[test]
fn null_pairing_on_a_thousand_pairs_per_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for o in test_orbits() {
        let r = o.r();
        for _ in 0..1000 {
            let mut draw =
                || -> Vec<Rational> { (0..r).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=12))).collect() };
            let (v, w) = (draw(), draw());
            let mut expected = int(1);
            for i in 0..r {
                expected -= &v[i] * &w[i] / int(o.d()[i] as i64);
            }
            assert_eq!(o.lorentz().lemma51_check(&v, &w).unwrap(), expected, "{}", o.name());
        }
    }
}

#[test]
fn legendre_round_trip_on_a_thousand_points_per_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(163);
    for o in test_orbits() {
        let r = o.r();
        for general in [false, true] {
            let dy = Dynamics::new(&o, params_for(&o, general, 0.8));
            for _ in 0..1000 {
                let mut x = || rng.gen_range(-1.5..1.5);
                let v = VelocityPoint {
                    q: (0..r).map(|_| x()).collect(),
                    u: x(),
                    qdot: (0..r).map(|_| x()).collect(),
                    udot: x(),
                };
                let back = dy.legendre_inverse(&dy.legendre_forward(&v).unwrap()).unwrap();
                for (a, b) in back.qdot.iter().chain([&back.udot]).zip(v.qdot.iter().chain([&v.udot])) {
                    assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{}: {a} vs {b}", o.name());
                }
            }
        }
    }
}
