//! Commutative Buchberger used for sound non-membership certificates.
//!
//! `zR` is a two-sided ideal and `R/zR` is the commutative polynomial ring in
//! the base variables (plus inverses), the thetas and `z^2 d_z`. If the image
//! of `p` is outside the image of a left ideal `I`, then `p` is not in `I`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::OrePoly;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Mono(Vec<u32>);

// graded reverse lexicographic
impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        let da: u32 = self.0.iter().sum();
        let db: u32 = o.0.iter().sum();
        da.cmp(&db).then_with(|| {
            for (a, b) in self.0.iter().zip(&o.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

type CPoly = BTreeMap<Mono, Q>;

fn lead(p: &CPoly) -> (&Mono, &Q) {
    p.iter().next_back().expect("nonzero polynomial")
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

fn sub_mul(p: &mut CPoly, c: &Q, shift: &[u32], g: &CPoly) {
    for (m, v) in g {
        let nm = Mono(m.0.iter().zip(shift).map(|(a, b)| a + b).collect());
        let val = c * v;
        match p.entry(nm) {
            Entry::Vacant(e) => {
                e.insert(-val);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() -= val;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

fn normal_form(mut p: CPoly, basis: &[CPoly]) -> CPoly {
    let mut rem = CPoly::new();
    while let Some((m, c)) = p.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        let hit = basis.iter().find(|g| divides(lead(g).0, &m));
        match hit {
            Some(g) => {
                let (lm, lc) = lead(g);
                let shift: Vec<u32> = m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
                let f = &c / lc;
                sub_mul(&mut p, &f, &shift, g);
            }
            None => {
                p.remove(&m);
                rem.insert(m, c);
            }
        }
    }
    rem
}

fn monic(mut p: CPoly) -> CPoly {
    let lc = lead(&p).1.clone();
    if !lc.is_one() {
        for v in p.values_mut() {
            *v /= &lc;
        }
    }
    p
}

/// Reduced-enough Groebner basis, or `None` once `cap` basis elements are exceeded.
fn groebner(gens: Vec<CPoly>, cap: usize) -> Option<Vec<CPoly>> {
    let mut basis: Vec<CPoly> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_empty() {
            basis.push(monic(r));
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        let (a, b) = (lead(&basis[i]).0.clone(), lead(&basis[j]).0.clone());
        if a.0.iter().zip(&b.0).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let l: Vec<u32> = a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect();
        let mut s = CPoly::new();
        sub_mul(
            &mut s,
            &-Q::one(),
            &l.iter().zip(&a.0).map(|(x, y)| x - y).collect::<Vec<_>>(),
            &basis[i],
        );
        sub_mul(
            &mut s,
            &Q::one(),
            &l.iter().zip(&b.0).map(|(x, y)| x - y).collect::<Vec<_>>(),
            &basis[j],
        );
        let r = normal_form(s, &basis);
        if !r.is_empty() {
            if basis.len() >= cap {
                return None;
            }
            let k = basis.len();
            basis.push(monic(r));
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    Some(basis)
}

/// Coordinates: base variables, inverses of the invertible ones, thetas, `z^2 d_z`.
/// Terms carrying `z` vanish.
fn image(p: &OrePoly, inv: &[usize]) -> CPoly {
    let n = p.signature().nvars();
    let mut out = CPoly::new();
    for (ex, c) in p.terms() {
        if ex.z > 0 {
            continue;
        }
        let mut m = vec![0u32; 2 * n + inv.len() + 1];
        for (i, &b) in ex.x.iter().enumerate() {
            if b >= 0 {
                m[i] = b as u32;
            } else {
                let k = inv
                    .iter()
                    .position(|&j| j == i)
                    .expect("negative exponent on invertible variable");
                m[n + k] = (-b) as u32;
            }
        }
        for (i, &t) in ex.theta.iter().enumerate() {
            m[n + inv.len() + i] = t;
        }
        m[2 * n + inv.len()] = ex.e;
        let slot = out.entry(Mono(m.clone())).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            out.remove(&Mono(m));
        }
    }
    out
}

/// `Some(false)` certifies `p` is outside the left ideal generated by `gens`;
/// `Some(true)` only says the reductions mod `z` agree. `None` for classical
/// signatures or when the basis outgrows `cap`.
pub(crate) fn commutative_image_contains(
    gens: &[OrePoly],
    p: &OrePoly,
    cap: usize,
) -> Option<bool> {
    let sig = p.signature();
    if sig.is_classical() {
        return None;
    }
    let n = sig.nvars();
    let inv: Vec<usize> = (0..n).filter(|&i| sig.is_invertible(i)).collect();
    let width = 2 * n + inv.len() + 1;
    let mut polys: Vec<CPoly> = gens
        .iter()
        .map(|g| image(g, &inv))
        .filter(|g| !g.is_empty())
        .collect();
    for (k, &i) in inv.iter().enumerate() {
        let mut m = vec![0u32; width];
        m[i] = 1;
        m[n + k] = 1;
        let mut rel = CPoly::new();
        rel.insert(Mono(m), Q::one());
        rel.insert(Mono(vec![0; width]), -Q::one());
        polys.push(rel);
    }
    let basis = groebner(polys, cap)?;
    Some(normal_form(image(p, &inv), &basis).is_empty())
}
