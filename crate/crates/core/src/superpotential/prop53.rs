//! Non-existence certificate for candidate sets whose hulls have no null
//! vertex.
//!
//! A support `𝒞 ⊆ candidates` can only carry a superpotential if
//! `conv(𝒞) ⊇ ½(𝐝 + W̃)`. When every such support has only non-null hull
//! vertices, the constant-`J` edge argument from `½𝐝` to `½(𝐝 + 𝐰)` rules
//! them all out.

use num_traits::{Signed, Zero};

use super::hull::{hull_vertices, in_convex_hull};
use crate::algebra::{rat, Rational};
use crate::orbit::{ExtVector, OrbitData};

/// Edge `c0 → c1` of the hull with `c0 = ½𝐝`, `c1 = ½(𝐝 + 𝐰)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWitness {
    pub w: ExtVector,
    pub c0: ExtVector,
    pub c1: ExtVector,
    /// `J(c0, c0)`, always `1/4`.
    pub j_c0_c0: Rational,
    /// `J(c0, c1)`, always `1/4`.
    pub j_c0_c1: Rational,
    /// Candidate on the edge closest to `c0` (other than `c0`).
    pub nearest: Option<ExtVector>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prop53Witness {
    /// Hull vertices of the candidate set with their `J(c, c)`.
    pub vertices: Vec<(ExtVector, Rational)>,
    pub edges: Vec<EdgeWitness>,
    /// Number of candidate subsets whose hull contains `½(𝐝 + W̃)`.
    pub admissible_supports: usize,
}

pub fn prop53_certificate(orbit: &OrbitData, candidates: &[ExtVector]) -> Option<Prop53Witness> {
    let weights: Vec<ExtVector> = orbit.weights().iter().map(|w| w.extended()).filter(|w| !w.is_zero()).collect();
    if weights.is_empty() || candidates.is_empty() || candidates.len() > 20 {
        return None;
    }
    let form = orbit.lorentz();
    let d = orbit.d_ext();
    let required: Vec<ExtVector> = orbit.extended_weights().into_iter().map(|(w, _)| d.add(&w).half()).collect();

    let mut admissible = 0;
    for mask in 1u32..(1u32 << candidates.len()) {
        let sub: Vec<ExtVector> =
            (0..candidates.len()).filter(|i| mask & (1 << i) != 0).map(|i| candidates[i].clone()).collect();
        if !required.iter().all(|x| sub.contains(x) || in_convex_hull(x, &sub)) {
            continue;
        }
        admissible += 1;
        if hull_vertices(&sub).iter().any(|&i| form.is_null(&sub[i]).unwrap_or(true)) {
            return None;
        }
    }
    if admissible == 0 {
        return None;
    }

    let vertices = hull_vertices(candidates)
        .into_iter()
        .map(|i| (candidates[i].clone(), form.quadratic(&candidates[i]).expect("length matches")))
        .collect();
    let c0 = d.half();
    let edges = hull_vertices(&weights)
        .into_iter()
        .map(|i| {
            let w = weights[i].clone();
            let c1 = d.add(&w).half();
            let dir = c1.sub(&c0);
            // candidates c0 + t (c1 - c0) with 0 < t <= 1
            let nearest = candidates
                .iter()
                .filter_map(|c| edge_parameter(&c0, &dir, c).map(|t| (t, c.clone())))
                .filter(|(t, _)| t.is_positive() && *t <= rat(1, 1))
                .min_by(|a, b| a.0.cmp(&b.0))
                .map(|(_, c)| c);
            EdgeWitness {
                j_c0_c0: form.quadratic(&c0).expect("length matches"),
                j_c0_c1: form.bilinear(&c0, &c1).expect("length matches"),
                w,
                c0: c0.clone(),
                c1,
                nearest,
            }
        })
        .collect();
    Some(Prop53Witness { vertices, edges, admissible_supports: admissible })
}

/// `t` with `x = c0 + t·dir`, if `x` lies on that line.
fn edge_parameter(c0: &ExtVector, dir: &ExtVector, x: &ExtVector) -> Option<Rational> {
    let diff = x.sub(c0);
    let mut t: Option<Rational> = None;
    for (a, b) in diff.0.iter().zip(&dir.0) {
        if b.is_zero() {
            if !a.is_zero() {
                return None;
            }
            continue;
        }
        let ti = a / b;
        match &t {
            Some(prev) if *prev != ti => return None,
            _ => t = Some(ti),
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn warped_d33_certificate() {
        let o = OrbitData::warped(3, 3);
        let d = o.d_ext();
        let cands: Vec<ExtVector> = o.extended_weights().into_iter().map(|(w, _)| d.add(&w).half()).collect();
        let w = prop53_certificate(&o, &cands).expect("certificate");
        assert_eq!(w.vertices.len(), 3);
        assert!(w.vertices.iter().all(|(_, j)| !j.is_zero()));
        assert_eq!(w.edges.len(), 2);
        for e in &w.edges {
            assert_eq!(e.j_c0_c0, rat(1, 4));
            assert_eq!(e.j_c0_c1, rat(1, 4));
            assert_eq!(e.nearest.as_ref(), Some(&e.c1));
        }
    }

    #[test]
    fn bryant_augmented_has_none() {
        let o = OrbitData::sphere(4);
        let cands = vec![
            ExtVector(vec![rat(2, 1), rat(-1, 1)]),
            ExtVector(vec![rat(3, 2), rat(-1, 1)]),
            ExtVector(vec![rat(1, 1), rat(-1, 1)]),
        ];
        assert!(prop53_certificate(&o, &cands).is_none());
        assert!(prop53_certificate(&o, &cands[..2]).is_some());
        assert!(prop53_certificate(&OrbitData::circle(), &cands[..1]).is_none());
    }
}
