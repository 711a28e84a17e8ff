use std::sync::Arc;

use proptest::prelude::*;

use hyperhodge::ore::{
    exp_twist, fourier_laplace, ideal_membership_bounded, parse_poly, specialize_z_one, z_shift,
    Exponents, Membership, OrePoly, OreSignature, Presentation,
};
use hyperhodge::rational::q;

// x is invertible, y is affine.
fn sig() -> Arc<OreSignature> {
    OreSignature::new(&["x", "y"], &["x"], true).unwrap()
}

fn plain_sig() -> Arc<OreSignature> {
    OreSignature::new(&["x", "y"], &["x"], false).unwrap()
}

fn e_free_poly() -> impl Strategy<Value = OrePoly> {
    prop::collection::vec(term(), 0..4).prop_map(|t| {
        let t: Vec<Term> = t.into_iter().map(|(z, a, b, ta, tb, _, c)| (z, a, b, ta, tb, 0, c)).collect();
        build(&plain_sig(), &t)
    })
}

fn affine_sig() -> Arc<OreSignature> {
    OreSignature::new(&["u", "v"], &[] as &[&str], true).unwrap()
}

type Term = (u32, i32, i32, u32, u32, u32, i64);

fn term() -> impl Strategy<Value = Term> {
    (0u32..2, -2i32..3, 0i32..3, 0u32..3, 0u32..2, 0u32..2, -3i64..4)
}

fn build(s: &Arc<OreSignature>, terms: &[Term]) -> OrePoly {
    OrePoly::from_terms(
        s,
        terms.iter().map(|&(z, a, b, ta, tb, e, c)| {
            let a = if s.is_invertible(0) { a } else { a.abs() };
            (
                Exponents {
                    z,
                    x: vec![a, b],
                    theta: vec![ta, tb],
                    e,
                },
                q(c),
            )
        }),
    )
    .unwrap()
}

fn poly() -> impl Strategy<Value = OrePoly> {
    prop::collection::vec(term(), 0..4).prop_map(|t| build(&sig(), &t))
}

/// Total degree at most 2.
fn small_poly() -> impl Strategy<Value = OrePoly> {
    prop::collection::vec(term(), 0..3).prop_map(|t| {
        let t: Vec<Term> = t
            .into_iter()
            .filter(|&(z, a, b, ta, tb, e, _)| z + a.unsigned_abs() + b as u32 + ta + tb + e <= 2)
            .collect();
        build(&sig(), &t)
    })
}

fn affine_poly() -> impl Strategy<Value = OrePoly> {
    prop::collection::vec(term(), 1..4).prop_map(|t| build(&affine_sig(), &t))
}

/// Base-variable polynomial for twisting.
fn phi() -> impl Strategy<Value = OrePoly> {
    prop::collection::vec((0i32..3, 0i32..3, -3i64..4), 1..4).prop_map(|ts| {
        let s = affine_sig();
        OrePoly::from_terms(
            &s,
            ts.into_iter().map(|(a, b, c)| {
                let mut ex = Exponents::one(2);
                ex.x = vec![a, b];
                (ex, q(c))
            }),
        )
        .unwrap()
    })
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(10_000))]

    #[test]
    fn associativity(a in poly(), b in poly(), c in poly()) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn distributivity(a in poly(), b in poly(), c in poly()) {
        let l = a.mul(&b.add(&c).unwrap()).unwrap();
        let r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn canonical_form(a in poly(), b in poly()) {
        let p = a.mul(&b).unwrap();
        // no zero coefficients, strictly ordered, rebuilt from its own terms
        prop_assert!(p.terms().all(|(_, c)| *c != q(0)));
        let exps: Vec<&Exponents> = p.terms().map(|(e, _)| e).collect();
        prop_assert!(exps.windows(2).all(|w| w[0] < w[1]));
        let rebuilt = OrePoly::from_terms(&sig(), p.terms().map(|(e, c)| (e.clone(), c.clone()))).unwrap();
        prop_assert_eq!(&rebuilt, &p);
        prop_assert!(p.sub(&p).unwrap().is_zero());
        // the printed form parses back to the same element
        let back = parse_poly(&sig(), &p.to_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn leibniz(b in -3i32..4, k in 0u32..3) {
        let s = sig();
        let z = OrePoly::z(&s);
        let th = OrePoly::theta(&s, "x").unwrap();
        let xb = OrePoly::var(&s, "x").unwrap().pow(b as i64).unwrap();
        // theta = z d_x: theta x^b = x^b theta + b z x^(b-1)
        let lhs = th.mul(&xb).unwrap();
        let xb1 = OrePoly::var(&s, "x").unwrap().pow(b as i64 - 1).unwrap();
        let rhs = xb.mul(&th).unwrap().add(&z.mul(&xb1).unwrap().scale(&q(b as i64))).unwrap();
        prop_assert_eq!(lhs, rhs);
        // z^2 d_z z^k = z^k (z^2 d_z + k z)
        let e = OrePoly::z2dz(&s).unwrap();
        let zk = z.pow(k as i64).unwrap();
        let lhs = e.mul(&zk).unwrap();
        let rhs = zk.mul(&e.add(&z.scale(&q(k as i64))).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn z_is_central_except_for_e(a in poly()) {
        let s = sig();
        let z = OrePoly::z(&s);
        let comm = z.mul(&a).unwrap().sub(&a.mul(&z).unwrap()).unwrap();
        // [z, a] only sees the z^2 d_z part of a: it vanishes iff a is free of E
        let e_free = a.terms().all(|(ex, _)| ex.e == 0);
        prop_assert_eq!(comm.is_zero(), e_free);
    }

    #[test]
    fn classical_specialization_is_a_homomorphism(a in e_free_poly(), b in e_free_poly()) {
        let s = plain_sig();
        let pa = Presentation::new(&s, vec![a.clone(), b.clone(), a.mul(&b).unwrap()]).unwrap();
        let sp = specialize_z_one(&pa).unwrap();
        let g = sp.generators();
        if !g[0].is_zero() && !g[1].is_zero() {
            prop_assert_eq!(g[0].mul(&g[1]).unwrap(), g[2].clone());
        }
    }
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn twist_inverse(gens in prop::collection::vec(affine_poly(), 1..4), f in phi()) {
        let s = affine_sig();
        let p = Presentation::new(&s, gens).unwrap();
        let back = exp_twist(&exp_twist(&p, &f).unwrap(), &f.neg()).unwrap();
        prop_assert_eq!(back.generators(), p.generators());
    }

    /// Applying FL twice is the antipode `w -> -w` followed by a `z` shift by N.
    #[test]
    fn fourier_laplace_twice(gens in prop::collection::vec(affine_poly(), 1..3)) {
        let s = affine_sig();
        let p = Presentation::new(&s, gens).unwrap();
        let twice = fourier_laplace(&fourier_laplace(&p).unwrap()).unwrap();
        let t = twice.signature().clone();
        let mut expect = Vec::new();
        for g in p.generators() {
            let mut terms = Vec::new();
            for (ex, c) in g.terms() {
                let deg = ex.x.iter().sum::<i32>() + ex.theta.iter().sum::<u32>() as i32;
                let sign = if deg % 2 == 0 { c.clone() } else { -c.clone() };
                terms.push((ex.clone(), sign));
            }
            expect.push(OrePoly::from_terms(&t, terms).unwrap());
        }
        let antipode = Presentation::new(&t, expect).unwrap();
        let shifted = z_shift(&antipode, 2).unwrap();
        prop_assert_eq!(twice.generators(), shifted.generators());
    }

    #[test]
    fn certificates_remultiply(a in small_poly(), b in small_poly()) {
        let s = sig();
        let g1 = parse_poly(&s, "th[x] - x").unwrap();
        let g2 = parse_poly(&s, "y*th[y] + z").unwrap();
        let target = a.mul(&g1).unwrap().add(&b.mul(&g2).unwrap()).unwrap();
        let pres = Presentation::new(&s, vec![g1, g2]).unwrap();
        // cofactors of degree <= 2 exist by construction
        match ideal_membership_bounded(&pres, &target, 2).unwrap() {
            Membership::Yes(cert) => {
                prop_assert!(cert.verify(pres.generators(), &target));
                prop_assert_eq!(cert.combine(pres.generators()).unwrap(), target);
            }
            Membership::NoAtBound { .. } => prop_assert!(false, "missed a member at its own bound"),
        }
    }
}

#[test]
fn twist_on_z_free_presentation_with_shift() {
    let s = affine_sig();
    let p = Presentation::new(&s, vec![parse_poly(&s, "z2dz + u*th[u]").unwrap()]).unwrap();
    let f = parse_poly(&s, "v^2 + u").unwrap();
    let t = exp_twist(&p, &f).unwrap();
    assert_ne!(t.generators(), p.generators());
    let back = exp_twist(&t, &f.neg()).unwrap();
    assert_eq!(back.generators(), p.generators());
}
