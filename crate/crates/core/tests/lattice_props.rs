use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;

use hyperhodge::gkz::{build_n, build_z_check_n, family_matrix, GkzData};
use hyperhodge::lattice::{
    admissible_region, cone_facets, hermite_normal_form, in_shifted_admissible, kernel_basis,
    lemma_raute_membership, smith_invariants, IntMatrix,
};
use hyperhodge::rational::Q;

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Supporting hyperplanes through `d - 1` independent columns.
fn facets_oracle(a: &IntMatrix) -> BTreeSet<Vec<i64>> {
    let d = a.nrows();
    let cols = a.columns();
    let mut out = BTreeSet::new();
    for s in subsets(cols.len(), d - 1) {
        // cofactor normal of the d x (d-1) matrix of chosen columns
        let mut normal: Vec<i64> = (0..d)
            .map(|i| {
                let m: Vec<Vec<i64>> = (0..d)
                    .filter(|&r| r != i)
                    .map(|r| s.iter().map(|&c| cols[c][r]).collect())
                    .collect();
                if i % 2 == 0 { det(&m) } else { -det(&m) }
            })
            .collect();
        let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            continue;
        }
        normal.iter_mut().for_each(|x| *x /= g);
        let vals: Vec<i64> = cols.iter().map(|c| c.iter().zip(&normal).map(|(x, y)| x * y).sum()).collect();
        if vals.iter().all(|&v| v >= 0) {
            out.insert(normal);
        } else if vals.iter().all(|&v| v <= 0) {
            out.insert(normal.iter().map(|x| -x).collect());
        }
    }
    out
}

fn full_dim_matrix() -> impl Strategy<Value = IntMatrix> {
    (2usize..4)
        .prop_flat_map(|d| (Just(d), d + 1..d + 4))
        .prop_flat_map(|(d, n)| prop::collection::vec(prop::collection::vec(-2i64..4, n), d))
        .prop_filter_map("rank deficient", |rows| {
            let m = IntMatrix::from_rows(rows).ok()?;
            (m.rank() == m.nrows()).then_some(m)
        })
}

fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn unit_point(len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((1i64..13).prop_flat_map(|d| (0..d).prop_map(move |n| frac(n, d))), len)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, ..ProptestConfig::default() })]

    #[test]
    fn facets_match_brute_force(a in full_dim_matrix()) {
        let facets = cone_facets(&a).unwrap();
        let got: BTreeSet<Vec<i64>> = facets.iter().map(|f| f.normal.clone()).collect();
        prop_assert_eq!(got.len(), facets.len());
        prop_assert_eq!(got, facets_oracle(&a));
        let colsum: Vec<i64> = (0..a.nrows()).map(|r| a.row(r).iter().sum()).collect();
        for f in &facets {
            let w: i64 = f.normal.iter().zip(&colsum).map(|(x, y)| x * y).sum();
            prop_assert_eq!(f.weight, w);
        }
    }

    #[test]
    fn kernel_and_hermite_form(a in full_dim_matrix()) {
        let ker = kernel_basis(&a).unwrap();
        prop_assert_eq!(ker.len(), a.ncols() - a.nrows());
        for l in &ker {
            prop_assert!(a.mul_vec(l).iter().all(|&x| x == 0));
        }
        let (h, u) = hermite_normal_form(&a).unwrap();
        prop_assert_eq!(u.mul(&a).unwrap(), h.clone());
        prop_assert_eq!(det(&u.to_rows()).abs(), 1);
        // the rank is visible in both normal forms
        let inv = smith_invariants(&a);
        prop_assert_eq!(inv.len(), a.nrows());
    }

    #[test]
    fn shift_witness_lands_in_the_region(a in full_dim_matrix(), seed in unit_point(3)) {
        let beta: Vec<Q> = seed.into_iter().cycle().take(a.nrows()).collect();
        let region = admissible_region(&a).unwrap();
        if let Some(k) = in_shifted_admissible(&a, &beta).unwrap() {
            prop_assert!(k.iter().all(|&x| x >= 0));
            let shifted: Vec<Q> = beta.iter().zip(&k).map(|(b, &x)| b - Q::from_integer(x.into())).collect();
            prop_assert!(region.contains(&shifted));
        }
        if region.contains(&beta) {
            prop_assert_eq!(in_shifted_admissible(&a, &beta).unwrap(), Some(vec![0; a.nrows()]));
        }
    }

    #[test]
    fn lemma_agrees_with_search(n in 1usize..4, m in 1usize..4, pt in unit_point(5)) {
        let a = family_matrix(n, m).unwrap();
        let v = &pt[..n + m - 1];
        let (p, q) = v.split_at(m);
        prop_assert_eq!(
            lemma_raute_membership(m, n, p, q).unwrap(),
            in_shifted_admissible(&a, v).unwrap().is_some()
        );
    }
}

#[test]
fn gkz_systems_have_expected_sizes() {
    let a = family_matrix(2, 1).unwrap();
    let data = GkzData::new(a, vec![frac(1, 4), frac(1, 2)]).unwrap();
    let n = build_n(&data, Some(2)).unwrap();
    let zn = build_z_check_n(&data, Some(2)).unwrap();
    // d Euler operators plus at least one box operator
    assert!(n.generators().len() > 2);
    assert_eq!(n.signature().nvars(), 3);
    assert_eq!(zn.signature().nvars(), 3);
    assert!(zn.signature().has_z2dz());
}
