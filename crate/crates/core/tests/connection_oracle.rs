//! Cross-checks the connection matrices against the operator presentation:
//! `z^2 d_z Q_k - sum_l Q_l (tau A_0 + z A_inf)_(l,k)` must lie in `(P, tau R, tau H)`.

use std::sync::Arc;

use hyperhodge::hodge::lpoly::{LPoly, T, TAU, Z};
use hyperhodge::hodge::{connection_matrices, rescale};
use hyperhodge::hyper::HypParams;
use hyperhodge::ore::{ideal_membership_bounded, Membership, OrePoly, OreSignature, Presentation};
use hyperhodge::rational::{frac, q, Q};

fn lift(sig: &Arc<OreSignature>, p: &LPoly) -> OrePoly {
    let mut acc = OrePoly::zero(sig);
    for (e, c) in p.terms() {
        assert_eq!(e[3], 0, "c must be substituted");
        let m = OrePoly::z(sig)
            .pow(e[Z] as i64)
            .unwrap()
            .mul(&OrePoly::var(sig, "t").unwrap().pow(e[T] as i64).unwrap())
            .unwrap()
            .mul(&OrePoly::var(sig, "tau").unwrap().pow(e[TAU] as i64).unwrap())
            .unwrap()
            .scale(c);
        acc = acc.add(&m).unwrap();
    }
    acc
}

/// `Q_k` written directly as operators.
fn q_operators(sig: &Arc<OreSignature>, p: &HypParams, c: &Q) -> Vec<OrePoly> {
    let n = p.n();
    let k0 = Q::from_integer((1 - n as i64).into());
    let tau_inv = OrePoly::var(sig, "tau").unwrap().pow(-1).unwrap();
    let s = OrePoly::var(sig, "t")
        .unwrap()
        .mul(&OrePoly::theta(sig, "t").unwrap())
        .unwrap();
    let mut qs = vec![OrePoly::one(sig)];
    for k in 1..n {
        let f = tau_inv
            .mul(&s.sub(&OrePoly::z(sig).scale(&p.alpha()[k - 1])).unwrap())
            .unwrap()
            .scale(&k0);
        let next = qs[k - 1].mul(&f).unwrap();
        qs.push(next);
    }
    let corr = OrePoly::var(sig, "t")
        .unwrap()
        .scale(&(num_traits::pow(k0, n - 1) * c));
    qs[n - 1] = qs[n - 1].add(&corr).unwrap();
    qs
}

fn residual(pres: &Presentation, qs: &[OrePoly], a0: &[Vec<LPoly>], ainf: &[Q], k: usize) -> OrePoly {
    let sig = pres.signature();
    let mut rhs = OrePoly::zero(sig);
    for l in 0..qs.len() {
        let mut ent = LPoly::var(TAU, 1).mul(&a0[l][k]);
        if l == k {
            ent = ent.add(&LPoly::var(Z, 1).scale(&ainf[l]));
        }
        rhs = rhs.add(&lift(sig, &ent).mul(&qs[l]).unwrap()).unwrap();
    }
    OrePoly::z2dz(sig).unwrap().mul(&qs[k]).unwrap().sub(&rhs).unwrap()
}

fn in_ideal(pres: &Presentation, p: &OrePoly, bound: u32) -> bool {
    match ideal_membership_bounded(pres, p, bound).unwrap() {
        Membership::Yes(cert) => {
            assert!(cert.verify(pres.generators(), p));
            true
        }
        Membership::NoAtBound { .. } => false,
    }
}

fn check(p: &HypParams, bound: u32) {
    let resc = rescale(p).unwrap();
    let m = connection_matrices(p).unwrap();
    let qs = q_operators(resc.presentation.signature(), p, &m.c);
    let tau = OrePoly::var(resc.presentation.signature(), "tau").unwrap();
    for k in 0..p.n() {
        // tau^k is a unit; clearing tau^-k keeps the cofactors small
        let r = tau
            .pow(k as i64)
            .unwrap()
            .mul(&residual(&resc.presentation, &qs, &m.a0, &m.ainf, k))
            .unwrap();
        assert!(in_ideal(&resc.presentation, &r, bound), "column {k}");
    }
}

#[test]
fn n2_connection_is_realised_by_operators() {
    check(&HypParams::new(vec![q(0), frac(1, 2)], vec![frac(1, 4)]).unwrap(), 3);
}

#[test]
fn n3_connection_is_realised_by_operators() {
    check(
        &HypParams::new(vec![q(0), frac(1, 3), frac(2, 3)], vec![frac(1, 2)]).unwrap(),
        4,
    );
}

#[test]
fn n2_sign_flipped_column_is_not_reached() {
    let p = HypParams::new(vec![q(0), frac(1, 2)], vec![frac(1, 4)]).unwrap();
    let resc = rescale(&p).unwrap();
    let m = connection_matrices(&p).unwrap();
    let qs = q_operators(resc.presentation.signature(), &p, &m.c);
    let r = residual(&resc.presentation, &qs, &m.display_a0, &m.ainf, 1);
    assert!(!m.matches_display);
    assert!(!in_ideal(&resc.presentation, &r, 3));
}

