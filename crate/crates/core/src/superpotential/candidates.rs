//! Candidate exponent sets `½(𝐝 + W̃)` and their extensions.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};

use super::hull::in_convex_hull;
use crate::algebra::{int, rat, Rational};
use crate::orbit::{ExtVector, OrbitData};

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub c: ExtVector,
    pub null: bool,
    /// `w ∈ W̃` with `2c = 𝐝 + w`, if any.
    pub realizes: Option<ExtVector>,
}

fn tag(orbit: &OrbitData, c: ExtVector) -> Candidate {
    let form = orbit.lorentz();
    let null = form.is_null(&c).expect("candidate length matches the orbit");
    let x = c.scale(&int(2)).sub(&orbit.d_ext());
    let realizes = orbit.extended_weights().into_iter().map(|(w, _)| w).find(|w| *w == x);
    Candidate { c, null, realizes }
}

/// `{½(𝐝 + 𝐰) : 𝐰 ∈ W̃}` followed by any augments, without duplicates.
pub fn candidate_set(orbit: &OrbitData, augment: &[ExtVector]) -> Vec<Candidate> {
    let d = orbit.d_ext();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let base = orbit.extended_weights().into_iter().map(|(w, _)| d.add(&w).half());
    for c in base.chain(augment.iter().cloned()) {
        if seen.insert(c.clone()) {
            out.push(tag(orbit, c));
        }
    }
    out
}

/// Extra candidates `½(𝐝 + x)` with `x ∈ conv(W̃)` half-integral and not
/// already of the form `½(𝐝 + 𝐰)`.
pub fn half_lattice_candidates(orbit: &OrbitData) -> Vec<ExtVector> {
    let pts: Vec<ExtVector> = orbit.extended_weights().into_iter().map(|(w, _)| w).collect();
    let k = orbit.r();
    let mut lo = vec![0i64; k];
    let mut hi = vec![0i64; k];
    for p in &pts {
        for i in 0..k {
            // bounds on 2x_i
            let twice: Rational = &p.0[i] * int(2);
            let f = twice.floor().to_integer().to_i64().unwrap_or(0);
            let c = twice.ceil().to_integer().to_i64().unwrap_or(0);
            lo[i] = lo[i].min(f);
            hi[i] = hi[i].max(c);
        }
    }
    let d = orbit.d_ext();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let mut x: Vec<Rational> = cur.iter().map(|&v| rat(v, 2)).collect();
        x.push(Rational::zero());
        let xv = ExtVector(x);
        if !pts.contains(&xv) && in_convex_hull(&xv, &pts) {
            out.push(d.add(&xv).half());
        }
        let mut i = 0;
        while i < k {
            cur[i] += 1;
            if cur[i] <= hi[i] {
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
        if i == k {
            break;
        }
    }
    out
}
