use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use hyperhodge::hodge::{
    connection_matrices, graded_nilpotent, irr_hodge, nilpotency_index, q_basis,
    u_filtration_step, unnormalized_jumps,
};
use hyperhodge::hodge::lpoly::{LPoly, T};
use hyperhodge::hyper::{
    epsilon_raw, hyp_operator, irreducible, kummer_twist, thm_presentation, torus_signature,
    HypParams,
};
use hyperhodge::ore::{specialize_z_one, OrePoly, Presentation};
use hyperhodge::rational::{is_integer, Q};

fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn rational01() -> impl Strategy<Value = Q> {
    (1i64..9).prop_flat_map(|d| (0..d).prop_map(move |n| frac(n, d)))
}

/// Irreducible `(n, 1)` data; the alphas may repeat.
fn params_n1(max_n: usize) -> impl Strategy<Value = HypParams> {
    (prop::collection::vec(rational01(), 1..=max_n), rational01())
        .prop_filter_map("reducible", |(a, b)| {
            let p = HypParams::new(a, vec![b]).ok()?;
            irreducible(&p).then_some(p)
        })
}

fn params_nm() -> impl Strategy<Value = HypParams> {
    (prop::collection::vec(rational01(), 0..4), prop::collection::vec(rational01(), 0..4))
        .prop_filter_map("empty", |(a, b)| HypParams::new(a, b).ok())
}

fn qi(k: i64) -> Q {
    Q::from_integer(k.into())
}

/// Longest run of equal alphas whose jump values differ from `a` by an integer.
fn longest_block(p: &HypParams, a: &Q) -> usize {
    let n = p.n() as i64;
    let eps = p.epsilon();
    let jump = |j: usize| -&eps + qi(j as i64) - qi(n - 1) * &p.alpha()[j];
    let mut best = 0;
    let mut j = 0;
    while j < p.n() {
        let mut k = j;
        while k + 1 < p.n() && p.alpha()[k + 1] == p.alpha()[j] {
            k += 1;
        }
        if is_integer(&(jump(j) - a)) {
            best = best.max(k - j + 1);
        }
        j = k + 1;
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn kummer_twists_compose(p in params_nm(), e1 in rational01(), e2 in rational01()) {
        let (p1, w1) = kummer_twist(&p, &e1).unwrap();
        let (p12, w2) = kummer_twist(&p1, &e2).unwrap();
        let (direct, w) = kummer_twist(&p, &(&e1 + &e2)).unwrap();
        prop_assert!(w1.identity_holds && w2.identity_holds && w.identity_holds);
        prop_assert_eq!(p12, direct);
    }

    #[test]
    fn epsilon_moves_with_the_twist(p in params_nm(), eta in rational01()) {
        let (_, w) = kummer_twist(&p, &eta).unwrap();
        let shifted = epsilon_raw(&w.shifted_alpha, &w.shifted_beta);
        let mn = qi(p.m() as i64 - p.n() as i64);
        prop_assert_eq!(shifted, p.epsilon() + mn * eta);
    }

    #[test]
    fn h_at_z_one_is_the_classical_operator(p in params_nm()) {
        let thm = thm_presentation(&p).unwrap();
        let plain = torus_signature(false).unwrap();
        let h = &thm.generators()[1];
        prop_assert!(h.terms().all(|(e, _)| e.e == 0));
        let h = OrePoly::from_terms(&plain, h.terms().map(|(e, c)| (e.clone(), c.clone()))).unwrap();
        let classical = specialize_z_one(&Presentation::new(&plain, vec![h]).unwrap()).unwrap();
        prop_assert_eq!(&classical.generators()[0], &hyp_operator(&p).unwrap());
    }

    #[test]
    fn hodge_numbers_and_jumps(p in params_n1(6)) {
        let r = irr_hodge(&p).unwrap();
        let n = p.n();
        // oracle: k - (n-1) alpha_k with multiplicities
        let mut want: BTreeMap<Q, usize> = BTreeMap::new();
        for (k, a) in p.alpha().iter().enumerate() {
            *want.entry(qi(k as i64 + 1) - qi(n as i64 - 1) * a).or_default() += 1;
        }
        prop_assert_eq!(&r.hodge_numbers, &want);
        prop_assert_eq!(r.hodge_numbers.values().sum::<usize>(), n);
        prop_assert_eq!(r.jumps.len(), n);
    }

    #[test]
    fn tau_shift_identity(p in params_n1(6), j in 0usize..6) {
        let j = j % p.n();
        let a = unnormalized_jumps(&p)[j].clone();
        let here = u_filtration_step(&p, &a).unwrap();
        let there = u_filtration_step(&p, &(&a - Q::one())).unwrap();
        for ((k, x), (k2, y)) in here.iter().zip(&there) {
            prop_assert_eq!(k, k2);
            prop_assert_eq!(*y, x + 1);
        }
    }

    #[test]
    fn graded_action_is_nilpotent(p in params_n1(6)) {
        let n = p.n();
        for a in unnormalized_jumps(&p) {
            let m = graded_nilpotent(&p, &a);
            // m^n = 0 by direct multiplication
            let mut pw = m.clone();
            for _ in 1..n {
                pw = mul(&pw, &m);
            }
            prop_assert!(pw.iter().flatten().all(Zero::is_zero));
            prop_assert_eq!(nilpotency_index(&m), Some(longest_block(&p, &a)));
        }
    }

    #[test]
    fn connection_shapes(p in params_n1(5).prop_filter("n >= 2", |p| p.n() >= 2)) {
        let m = connection_matrices(&p).unwrap();
        let n = p.n();
        prop_assert_eq!(m.a0.len(), n);
        for k in 0..n - 1 {
            prop_assert_eq!(&m.a0[k + 1][k], &LPoly::constant(Q::one()));
        }
        // A_0 only carries nonnegative powers of t, no z and no tau
        for row in &m.a0 {
            for x in row {
                prop_assert!(x.terms().all(|(e, _)| e[T] >= 0 && e[0] == 0 && e[2] == 0 && e[3] == 0));
            }
        }
        let b = q_basis(&p).unwrap();
        prop_assert_eq!(&b.c, &m.c);
        // residues at infinity: the jump spectrum, and (n-1) alpha on the t-side
        prop_assert_eq!(&m.ainf, &unnormalized_jumps(&p));
        let scaled: Vec<Q> = p.alpha().iter().map(|a| qi(n as i64 - 1) * a).collect();
        prop_assert_eq!(&m.ainf_prime, &scaled);
    }
}

fn mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[test]
fn repeated_alpha_example() {
    let p = HypParams::new(vec![Q::zero(), frac(1, 2), frac(1, 2)], vec![frac(1, 4)]).unwrap();
    let r = irr_hodge(&p).unwrap();
    let want: BTreeMap<Q, usize> = [(qi(1), 2), (qi(2), 1)].into_iter().collect();
    assert_eq!(r.hodge_numbers, want);
    let idx: Vec<usize> = r.filtration.iter().map(|f| f.nilpotency_index).collect();
    assert_eq!(idx.iter().max(), Some(&2));
}
