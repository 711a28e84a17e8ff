use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};
use crate::rational::{ceil_q, Q};

/// A facet of `R_{>=0} A`: primitive inward normal and weight `<n, c>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub weight: i64,
}

impl Facet {
    pub fn eval(&self, x: &[Q]) -> Q {
        self.normal
            .iter()
            .zip(x)
            .map(|(n, v)| v * Q::from_integer((*n).into()))
            .sum()
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Rank and an index set of independent rows (greedy, in order).
fn independent_rows(rows: &[Vec<BigInt>]) -> Vec<usize> {
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v: Vec<Q> = r.iter().map(|x| Q::from_integer(x.clone())).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone() / &b[p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            basis.push(v);
            pivots.push(p);
            chosen.push(idx);
        }
    }
    chosen
}

/// Inverse of a square rational matrix (Gauss-Jordan); `None` if singular.
pub(crate) fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Facets of the full-dimensional cone spanned by the columns of `a`,
/// by the double description method on the dual cone.
pub fn cone_facets(a: &IntMatrix) -> Result<Vec<Facet>> {
    let d = a.nrows();
    let cols: Vec<Vec<BigInt>> = a
        .columns()
        .into_iter()
        .map(|c| c.into_iter().map(BigInt::from).collect())
        .collect();
    let init = independent_rows(&cols);
    if init.len() < d {
        return Err(Error::NotFullDimensional {
            rank: init.len(),
            dim: d,
        });
    }
    // simplicial start: rays are the columns of the inverse of the chosen rows
    let b: Vec<Vec<Q>> = init
        .iter()
        .map(|&i| cols[i].iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    let inv = invert(&b).expect("independent rows");
    let mut rays: Vec<Vec<BigInt>> = (0..d)
        .map(|k| {
            let col: Vec<Q> = (0..d).map(|r| inv[r][k].clone()).collect();
            let l = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            primitive(
                col.iter()
                    .map(|x| (x * Q::from_integer(l.clone())).to_integer())
                    .collect(),
            )
        })
        .collect();
    let mut processed: Vec<usize> = init.clone();
    let zero_set = |r: &Vec<BigInt>, processed: &[usize]| -> BTreeSet<usize> {
        processed
            .iter()
            .copied()
            .filter(|&i| dot(r, &cols[i]).is_zero())
            .collect()
    };
    for i in 0..cols.len() {
        if init.contains(&i) {
            continue;
        }
        let ai = &cols[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(r, ai)).collect();
        let zs: Vec<BTreeSet<usize>> = rays.iter().map(|r| zero_set(r, &processed)).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (p, vp) in vals.iter().enumerate().filter(|(_, v)| v.is_positive()) {
            for (n, vn) in vals.iter().enumerate().filter(|(_, v)| v.is_negative()) {
                let common: BTreeSet<usize> = zs[p].intersection(&zs[n]).copied().collect();
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&k| k != p && k != n)
                    .all(|k| !common.is_subset(&zs[k]));
                if !adjacent {
                    continue;
                }
                let r: Vec<BigInt> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(xn, xp)| vp * xn - vn * xp)
                    .collect();
                next.push(primitive(r));
            }
        }
        processed.push(i);
        let mut seen = HashSet::new();
        next.retain(|r| seen.insert(r.clone()));
        rays = next;
    }
    let c: Vec<BigInt> = (0..d)
        .map(|k| cols.iter().map(|col| &col[k]).sum())
        .collect();
    let mut facets = Vec::with_capacity(rays.len());
    for r in rays {
        let weight = dot(&r, &c);
        let normal = r
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::Overflow(format!("normal entry {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        facets.push(Facet {
            normal,
            weight: weight
                .to_i64()
                .ok_or_else(|| Error::Overflow(format!("weight {weight}")))?,
        });
    }
    facets.sort();
    Ok(facets)
}

/// Parameters `x` with `-1 < <n_F, x> <= 0` for every facet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleRegion {
    pub dim: usize,
    pub facets: Vec<Facet>,
}

/// A facet inequality failing at a parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub facet: Facet,
    pub value: Q,
}

pub fn admissible_region(a: &IntMatrix) -> Result<AdmissibleRegion> {
    Ok(AdmissibleRegion {
        dim: a.nrows(),
        facets: cone_facets(a)?,
    })
}

impl AdmissibleRegion {
    pub fn violation(&self, x: &[Q]) -> Option<Violation> {
        self.facets.iter().find_map(|f| {
            let v = f.eval(x);
            if v > -Q::one() && v <= Q::zero() {
                None
            } else {
                Some(Violation {
                    facet: f.clone(),
                    value: v,
                })
            }
        })
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.dim && self.violation(x).is_none()
    }

    /// Lexicographically smallest `k` in `N^d` with `beta - k` admissible.
    ///
    /// Admissibility of `beta - k` forces `<n_F, k> = ceil(<n_F, beta>)` for
    /// every facet, so `k` is pinned down whenever the normals span.
    pub fn shift_witness(&self, beta: &[Q]) -> Option<Vec<i64>> {
        let d = self.dim;
        if beta.len() != d {
            return None;
        }
        if self.facets.is_empty() {
            return Some(vec![0; d]);
        }
        let targets: Vec<BigInt> = self.facets.iter().map(|f| ceil_q(&f.eval(beta))).collect();
        let normals: Vec<Vec<BigInt>> = self
            .facets
            .iter()
            .map(|f| f.normal.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let check = |k: &[i64]| -> bool {
            normals
                .iter()
                .zip(&targets)
                .all(|(n, t)| n.iter().zip(k).map(|(a, b)| a * b).sum::<BigInt>() == *t)
        };
        let basis = independent_rows(&normals);
        if basis.len() == d {
            let m: Vec<Vec<Q>> = basis
                .iter()
                .map(|&i| {
                    normals[i]
                        .iter()
                        .map(|x| Q::from_integer(x.clone()))
                        .collect()
                })
                .collect();
            let inv = invert(&m).expect("independent normals");
            let mut k = Vec::with_capacity(d);
            for row in &inv {
                let v: Q = row
                    .iter()
                    .zip(&basis)
                    .map(|(c, &i)| c * Q::from_integer(targets[i].clone()))
                    .sum();
                if !v.is_integer() || v.is_negative() {
                    return None;
                }
                k.push(v.to_integer().to_i64()?);
            }
            return check(&k).then_some(k);
        }
        // degenerate normals: bounded lexicographic scan
        let radius = targets
            .iter()
            .map(|t| t.abs().to_i64().unwrap_or(i64::MAX / 4))
            .max()
            .unwrap_or(0)
            + 1;
        let mut k = vec![0i64; d];
        loop {
            if check(&k) {
                return Some(k);
            }
            let mut pos = d;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                if k[pos] < radius {
                    k[pos] += 1;
                    for v in k.iter_mut().skip(pos + 1) {
                        *v = 0;
                    }
                    break;
                }
            }
        }
    }
}

pub fn in_shifted_admissible(a: &IntMatrix, beta: &[Q]) -> Result<Option<Vec<i64>>> {
    if beta.len() != a.nrows() {
        return Err(Error::Params(format!(
            "beta has length {}, expected {}",
            beta.len(),
            a.nrows()
        )));
    }
    Ok(admissible_region(a)?.shift_witness(beta))
}

/// Closed-form membership test for the family matrix, with `p` the first `m`
/// coordinates and `q` the remaining `n - 1`.
pub fn lemma_raute_membership(m: usize, n: usize, p: &[Q], q: &[Q]) -> Result<bool> {
    if p.len() != m || q.len() + 1 != n {
        return Err(Error::Params(format!(
            "expected {m} p-entries and {} q-entries",
            n.saturating_sub(1)
        )));
    }
    let unit = |x: &Q| !x.is_negative() && *x < Q::one();
    if !p.iter().chain(q).all(unit) {
        return Err(Error::Params("entries must lie in [0,1)".into()));
    }
    let p_minus = p
        .iter()
        .filter(|x| !x.is_zero())
        .min()
        .cloned()
        .unwrap_or_else(Q::one);
    let p_plus = p.iter().max().cloned().unwrap_or_else(Q::zero);
    let has_zero = p.iter().any(|x| x.is_zero());
    Ok(q.iter()
        .all(|x| *x < p_minus || (!has_zero && *x >= p_plus)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SaturationCheck {
    /// Every cone lattice point in the box lies in `N A` (desk-scale evidence only).
    HoldsUpToRadius {
        radius: i64,
    },
    Counterexample {
        point: Vec<i64>,
    },
    Inconclusive {
        radius: i64,
        reason: String,
    },
}

/// Tests `N A = Z^d cap R_{>=0} A` on lattice points with `|coords| <= radius`.
pub fn check_saturation_bounded(a: &IntMatrix, radius: i64) -> Result<SaturationCheck> {
    if radius < 1 {
        return Err(Error::Params("radius must be at least 1".into()));
    }
    let d = a.nrows();
    let facets = cone_facets(a)?;
    let cols = a.columns();
    // h = sum of facet normals is positive on every nonzero column of a pointed cone
    let h: Vec<i64> = (0..d)
        .map(|k| facets.iter().map(|f| f.normal[k]).sum())
        .collect();
    let hval = |v: &[i64]| -> i64 { h.iter().zip(v).map(|(a, b)| a * b).sum() };
    let steps: Vec<&Vec<i64>> = cols.iter().filter(|c| c.iter().any(|&x| x != 0)).collect();
    if steps.iter().any(|c| hval(c) <= 0) {
        return Ok(SaturationCheck::Inconclusive {
            radius,
            reason: "cone is not pointed".into(),
        });
    }
    let hmax: i64 = h.iter().map(|x| x.abs() * radius).sum();
    let mut reach: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    reach.insert(vec![0; d]);
    queue.push_back(vec![0; d]);
    while let Some(p) = queue.pop_front() {
        for c in &steps {
            let q: Vec<i64> = p.iter().zip(c.iter()).map(|(a, b)| a + b).collect();
            if hval(&q) <= hmax && !reach.contains(&q) {
                reach.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    let mut pt = vec![-radius; d];
    loop {
        let in_cone = facets
            .iter()
            .all(|f| f.normal.iter().zip(&pt).map(|(a, b)| a * b).sum::<i64>() >= 0);
        if in_cone && !reach.contains(&pt) {
            return Ok(SaturationCheck::Counterexample { point: pt });
        }
        let mut pos = d;
        loop {
            if pos == 0 {
                return Ok(SaturationCheck::HoldsUpToRadius { radius });
            }
            pos -= 1;
            if pt[pos] < radius {
                pt[pos] += 1;
                for v in pt.iter_mut().skip(pos + 1) {
                    *v = -radius;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn fam21() -> IntMatrix {
        IntMatrix::from_rows(vec![vec![1, 0, 1], vec![1, -1, 0]]).unwrap()
    }

    #[test]
    fn facets_of_small_cones() {
        let f = cone_facets(&fam21()).unwrap();
        assert_eq!(
            f,
            vec![
                Facet {
                    normal: vec![1, -1],
                    weight: 2
                },
                Facet {
                    normal: vec![1, 0],
                    weight: 2
                }
            ]
        );
        let id = cone_facets(&IntMatrix::identity(3)).unwrap();
        assert_eq!(id.len(), 3);
        assert!(id
            .iter()
            .all(|f| f.weight == 1 && f.normal.iter().filter(|&&x| x == 1).count() == 1));
        let flat = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert!(cone_facets(&flat).is_err());
    }

    #[test]
    fn region_membership() {
        let r = admissible_region(&fam21()).unwrap();
        assert!(r.contains(&[Q::zero(), Q::zero()]));
        assert!(r.contains(&[frac(-1, 2), frac(1, 4)]));
        assert!(!r.contains(&[frac(1, 2), frac(1, 4)]));
    }

    #[test]
    fn lemma_examples() {
        assert!(lemma_raute_membership(1, 2, &[frac(1, 3)], &[frac(1, 2)]).unwrap());
        assert!(!lemma_raute_membership(2, 2, &[frac(1, 5), frac(3, 5)], &[frac(2, 5)]).unwrap());
        assert!(lemma_raute_membership(2, 2, &[Q::zero(), frac(1, 2)], &[frac(1, 4)]).unwrap());
    }

    #[test]
    fn saturation() {
        assert_eq!(
            check_saturation_bounded(&fam21(), 5).unwrap(),
            SaturationCheck::HoldsUpToRadius { radius: 5 }
        );
        let two = IntMatrix::from_rows(vec![vec![2]]).unwrap();
        assert_eq!(
            check_saturation_bounded(&two, 3).unwrap(),
            SaturationCheck::Counterexample { point: vec![1] }
        );
        let id = IntMatrix::identity(2);
        assert!(matches!(
            check_saturation_bounded(&id, 3).unwrap(),
            SaturationCheck::HoldsUpToRadius { .. }
        ));
    }
}
