//! Bounded left-ideal membership by exact linear algebra on monomial coordinates.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::groebner::commutative_image_contains;
use super::poly::{Exponents, OrePoly};
use super::presentation::Presentation;
use super::signature::OreSignature;
use crate::error::{Error, Result};
use crate::rational::Q;

const GROEBNER_CAP: usize = 400;

/// Sparse row, sorted by decreasing key.
pub(crate) type Row<K> = Vec<(K, Q)>;

/// `a - c * b` for rows sorted by decreasing key.
fn axpy<K: Ord + Clone>(a: &Row<K>, c: &Q, b: &Row<K>) -> Row<K> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => y.0.cmp(&x.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), -(c * &b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &a[i].1 - c * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn axpy_combo(a: &mut BTreeMap<usize, Q>, c: &Q, b: &BTreeMap<usize, Q>) {
    for (k, v) in b {
        let slot = a.entry(*k).or_insert_with(Q::zero);
        *slot -= c * v;
        if slot.is_zero() {
            a.remove(k);
        }
    }
}

/// Row echelon form under top reduction: distinct leading keys, leading
/// coefficient one. Optionally tracks each row as a combination of inserted
/// source rows.
#[derive(Debug, Clone)]
pub(crate) struct Echelon<K: Ord + Clone> {
    rows: Vec<Row<K>>,
    combos: Vec<BTreeMap<usize, Q>>,
    pivots: BTreeMap<K, usize>,
    track: bool,
    inserted: usize,
}

impl<K: Ord + Clone> Echelon<K> {
    pub(crate) fn new(track: bool) -> Self {
        Echelon {
            rows: Vec::new(),
            combos: Vec::new(),
            pivots: BTreeMap::new(),
            track,
            inserted: 0,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Top-reduces `row`; returns the residue and (if tracking) the residue
    /// minus `row`, as a combination of source rows.
    pub(crate) fn reduce(&self, mut row: Row<K>) -> (Row<K>, BTreeMap<usize, Q>) {
        let mut combo = BTreeMap::new();
        while let Some((k, c)) = row.first() {
            let Some(&pi) = self.pivots.get(k) else { break };
            let c = c.clone();
            row = axpy(&row, &c, &self.rows[pi]);
            if self.track {
                axpy_combo(&mut combo, &c, &self.combos[pi]);
            }
        }
        (row, combo)
    }

    /// Inserts a source row; returns whether the span grew. Source ids are
    /// assigned consecutively from 0.
    pub(crate) fn insert(&mut self, row: Row<K>) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let (mut row, mut combo) = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        if self.track {
            combo.insert(id, Q::one());
        }
        let lc = row[0].1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            for t in row.iter_mut() {
                t.1 *= &inv;
            }
            for v in combo.values_mut() {
                *v *= &inv;
            }
        }
        self.pivots.insert(row[0].0.clone(), self.rows.len());
        self.rows.push(row);
        self.combos.push(combo);
        true
    }

    /// Combination of source rows equal to `row`, when it lies in the span.
    pub(crate) fn solve(&self, row: Row<K>) -> Option<BTreeMap<usize, Q>> {
        let (rest, combo) = self.reduce(row);
        if !rest.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|(k, v)| (k, -v)).collect())
    }

    pub(crate) fn contains(&self, row: Row<K>) -> bool {
        self.reduce(row).0.is_empty()
    }

    pub(crate) fn rows(&self) -> &[Row<K>] {
        &self.rows
    }

    /// Rows with every non-leading pivot key eliminated (reduced echelon form).
    pub(crate) fn fully_reduced_rows(&self) -> Vec<Row<K>> {
        self.rows
            .iter()
            .map(|row| {
                let mut row = row.clone();
                let mut pos = 1;
                while pos < row.len() {
                    match self.pivots.get(&row[pos].0) {
                        Some(&pi) => {
                            let c = row[pos].1.clone();
                            row = axpy(&row, &c, &self.rows[pi]);
                        }
                        None => pos += 1,
                    }
                }
                row
            })
            .collect()
    }
}

pub(crate) fn poly_row(p: &OrePoly) -> Row<Exponents> {
    p.terms()
        .rev()
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect()
}

/// Normal-ordered monomials (coefficient one) of total degree at most `bound`;
/// invertible variables contribute `|exponent|`.
pub(crate) fn monomials_up_to(sig: &OreSignature, bound: u32) -> Vec<Exponents> {
    #[derive(Clone, Copy)]
    enum Slot {
        Z,
        X(usize),
        T(usize),
        E,
    }
    let n = sig.nvars();
    let mut slots = Vec::new();
    if !sig.is_classical() {
        slots.push(Slot::Z);
    }
    for i in 0..n {
        slots.push(Slot::X(i));
        slots.push(Slot::T(i));
    }
    if sig.has_z2dz() {
        slots.push(Slot::E);
    }
    fn rec(
        sig: &OreSignature,
        slots: &[Slot],
        left: u32,
        cur: &mut Exponents,
        out: &mut Vec<Exponents>,
    ) {
        let Some((&slot, rest)) = slots.split_first() else {
            out.push(cur.clone());
            return;
        };
        for k in 0..=left {
            match slot {
                Slot::Z => cur.z = k,
                Slot::T(i) => cur.theta[i] = k,
                Slot::E => cur.e = k,
                Slot::X(i) => {
                    cur.x[i] = k as i32;
                    rec(sig, rest, left - k, cur, out);
                    if k > 0 && sig.is_invertible(i) {
                        cur.x[i] = -(k as i32);
                        rec(sig, rest, left - k, cur, out);
                    }
                    cur.x[i] = 0;
                    continue;
                }
            }
            rec(sig, rest, left - k, cur, out);
        }
        match slot {
            Slot::Z => cur.z = 0,
            Slot::T(i) => cur.theta[i] = 0,
            Slot::E => cur.e = 0,
            Slot::X(_) => {}
        }
    }
    let mut out = Vec::new();
    let mut cur = Exponents::one(n);
    rec(sig, &slots, bound, &mut cur, &mut out);
    out.sort();
    out
}

/// Variable used by [`monic_reduce`]: `z^2 d_z`, or the theta of a
/// single base variable.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Pivot {
    E,
    Theta,
}

fn degree_in(p: &OrePoly, v: Pivot) -> Option<u32> {
    p.terms()
        .map(|(ex, _)| match v {
            Pivot::E => ex.e,
            Pivot::Theta => ex.theta[0],
        })
        .max()
}

/// Coefficient of `v^k` as an element free of `v`; `v` is rightmost in
/// normal order whenever this is called.
fn top_coefficient(p: &OrePoly, v: Pivot, k: u32) -> Result<OrePoly> {
    let terms = p.terms().filter_map(|(ex, c)| {
        let d = match v {
            Pivot::E => ex.e,
            Pivot::Theta => ex.theta[0],
        };
        (d == k).then(|| {
            let mut ne = ex.clone();
            match v {
                Pivot::E => ne.e = 0,
                Pivot::Theta => ne.theta[0] = 0,
            }
            (ne, c.clone())
        })
    });
    OrePoly::from_terms(p.signature(), terms.collect::<Vec<_>>())
}

fn pivot_power(sig: &Arc<OreSignature>, v: Pivot, k: u32) -> Result<OrePoly> {
    let mut ex = Exponents::one(sig.nvars());
    match v {
        Pivot::E => ex.e = k,
        Pivot::Theta => ex.theta[0] = k,
    }
    OrePoly::monomial(sig, Q::one(), ex)
}

/// Left division by the generators whose leading coefficient in `z^2 d_z`
/// (or, over one variable and free of `z^2 d_z`, in its theta) is a unit.
/// The remainder differs from `p` by an element of the left ideal, so a zero
/// remainder proves membership.
pub(crate) fn monic_reduce(p: &OrePoly, gens: &[OrePoly]) -> Result<OrePoly> {
    let sig = p.signature().clone();
    let mut divisors: Vec<(Pivot, u32, OrePoly, &OrePoly)> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let de = degree_in(g, Pivot::E).unwrap_or(0);
        if de > 0 {
            if let Ok(inv) = top_coefficient(g, Pivot::E, de)?.inverse_unit() {
                divisors.push((Pivot::E, de, inv, g));
            }
        } else if sig.nvars() == 1 {
            let dt = degree_in(g, Pivot::Theta).unwrap_or(0);
            if let Ok(inv) = top_coefficient(g, Pivot::Theta, dt)?.inverse_unit() {
                divisors.push((Pivot::Theta, dt, inv, g));
            }
        }
    }
    let mut r = p.clone();
    for v in [Pivot::E, Pivot::Theta] {
        loop {
            if r.is_zero() {
                return Ok(r);
            }
            if v == Pivot::Theta && degree_in(&r, Pivot::E).unwrap_or(0) > 0 {
                return Ok(r);
            }
            let k = degree_in(&r, v).unwrap_or(0);
            let Some((_, d, inv, g)) = divisors.iter().filter(|x| x.0 == v && x.1 <= k).min_by_key(|x| x.1) else {
                break;
            };
            let lead = top_coefficient(&r, v, k)?;
            let mu = lead.mul(inv)?.mul(&pivot_power(&sig, v, k - d)?)?;
            r = r.sub(&mu.mul(g)?)?;
        }
    }
    Ok(r)
}

/// The span `{ sum_g mu_g g : deg mu_g <= bound }` of a presentation.
#[derive(Debug, Clone)]
pub struct IdealSpan {
    sig: Arc<OreSignature>,
    generators: Vec<OrePoly>,
    bound: u32,
    sources: Vec<(Exponents, usize)>,
    echelon: Echelon<Exponents>,
}

/// Cofactors `mu_i` with `sum_i mu_i g_i = p`, one per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub cofactors: Vec<OrePoly>,
}

impl Certificate {
    /// Re-multiplies the cofactors against `generators`.
    pub fn combine(&self, generators: &[OrePoly]) -> Result<OrePoly> {
        let sig = generators
            .first()
            .map(|g| g.signature().clone())
            .ok_or(Error::SignatureMismatch)?;
        let mut acc = OrePoly::zero(&sig);
        for (mu, g) in self.cofactors.iter().zip(generators) {
            acc = acc.add(&mu.mul(g)?)?;
        }
        Ok(acc)
    }

    pub fn verify(&self, generators: &[OrePoly], p: &OrePoly) -> bool {
        self.cofactors.len() == generators.len()
            && self.combine(generators).map(|q| q == *p).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Yes(Certificate),
    NoAtBound { bound: u32 },
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }
}

impl IdealSpan {
    pub fn new(pres: &Presentation, bound: u32) -> Result<Self> {
        Self::build(pres, bound, true)
    }

    /// Same span without cofactor bookkeeping.
    pub fn untracked(pres: &Presentation, bound: u32) -> Result<Self> {
        Self::build(pres, bound, false)
    }

    fn build(pres: &Presentation, bound: u32, track: bool) -> Result<Self> {
        let sig = pres.signature().clone();
        let monos = monomials_up_to(&sig, bound);
        let mut echelon = Echelon::new(track);
        let mut sources = Vec::new();
        // low-degree cofactors first keeps pivots sparse
        let mut order: Vec<(u32, usize, &Exponents)> = Vec::new();
        for (gi, _) in pres.generators().iter().enumerate() {
            for m in &monos {
                order.push((m.total_degree(), gi, m));
            }
        }
        order.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(b.2)));
        for (_, gi, m) in order {
            let prod = pres.generators()[gi].mul_monomial_left(m)?;
            sources.push((m.clone(), gi));
            echelon.insert(poly_row(&prod));
        }
        Ok(IdealSpan {
            sig,
            generators: pres.generators().to_vec(),
            bound,
            sources,
            echelon,
        })
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, p: &OrePoly) -> Result<bool> {
        if **p.signature() != *self.sig {
            return Err(Error::SignatureMismatch);
        }
        Ok(self.echelon.contains(poly_row(p)))
    }

    /// Membership with a certificate (requires a tracked span).
    pub fn membership(&self, p: &OrePoly) -> Result<Membership> {
        if **p.signature() != *self.sig {
            return Err(Error::SignatureMismatch);
        }
        if !self.echelon.track {
            return Err(Error::Params(
                "membership certificates need a tracked span".into(),
            ));
        }
        match self.echelon.solve(poly_row(p)) {
            None => Ok(Membership::NoAtBound { bound: self.bound }),
            Some(combo) => {
                let mut cof: Vec<BTreeMap<Exponents, Q>> =
                    vec![BTreeMap::new(); self.generators.len()];
                for (src, c) in combo {
                    let (m, gi) = &self.sources[src];
                    let slot = cof[*gi].entry(m.clone()).or_insert_with(Q::zero);
                    *slot += c;
                }
                let cofactors = cof
                    .into_iter()
                    .map(|t| {
                        OrePoly::from_terms(&self.sig, t.into_iter().filter(|(_, c)| !c.is_zero()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let cert = Certificate { cofactors };
                debug_assert!(cert.verify(&self.generators, p));
                Ok(Membership::Yes(cert))
            }
        }
    }
}

/// Semi-decision for `p` in the left ideal of `pres` with cofactors of total
/// degree at most `degree_bound`.
pub fn ideal_membership_bounded(
    pres: &Presentation,
    p: &OrePoly,
    degree_bound: u32,
) -> Result<Membership> {
    if **p.signature() != **pres.signature() {
        return Err(Error::SignatureMismatch);
    }
    if pres.generators().is_empty() {
        return Ok(if p.is_zero() {
            Membership::Yes(Certificate { cofactors: vec![] })
        } else {
            Membership::NoAtBound {
                bound: degree_bound,
            }
        });
    }
    IdealSpan::new(pres, degree_bound)?.membership(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivOutcome {
    Equal {
        bound: u32,
    },
    /// `generator` of the first (`in_first`) or second presentation has a
    /// nonzero normal form modulo `z` against the other ideal.
    Unequal {
        in_first: bool,
        generator: usize,
        residue: String,
    },
    Inconclusive {
        bound: u32,
    },
}

impl EquivOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, EquivOutcome::Equal { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            EquivOutcome::Equal { .. } => "Equal",
            EquivOutcome::Unequal { .. } => "Unequal",
            EquivOutcome::Inconclusive { .. } => "Inconclusive",
        }
    }
}

fn missing(span: Option<&IdealSpan>, others: &[OrePoly], gens: &[OrePoly]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if monic_reduce(g, others)?.is_zero() {
            continue;
        }
        let inside = match span {
            Some(s) => s.contains(g)?,
            None => g.is_zero(),
        };
        if !inside {
            out.push(i);
        }
    }
    Ok(out)
}

/// Mutual bounded inclusion of two left ideals.
pub fn presentation_equiv_bounded(
    p1: &Presentation,
    p2: &Presentation,
    degree_bound: u32,
) -> Result<EquivOutcome> {
    if **p1.signature() != **p2.signature() {
        return Err(Error::SignatureMismatch);
    }
    let span = |p: &Presentation| -> Result<Option<IdealSpan>> {
        if p.generators().is_empty() {
            Ok(None)
        } else {
            IdealSpan::untracked(p, degree_bound).map(Some)
        }
    };
    let s1 = span(p1)?;
    let s2 = span(p2)?;
    let miss2 = missing(s1.as_ref(), p1.generators(), p2.generators())?;
    let miss1 = missing(s2.as_ref(), p2.generators(), p1.generators())?;
    if miss1.is_empty() && miss2.is_empty() {
        return Ok(EquivOutcome::Equal {
            bound: degree_bound,
        });
    }
    for (in_first, idxs, own, other) in [(true, &miss1, p1, p2), (false, &miss2, p2, p1)] {
        for &i in idxs {
            let g = &own.generators()[i];
            if commutative_image_contains(other.generators(), g, GROEBNER_CAP) == Some(false) {
                return Ok(EquivOutcome::Unequal {
                    in_first,
                    generator: i,
                    residue: g.to_string(),
                });
            }
        }
    }
    Ok(EquivOutcome::Inconclusive {
        bound: degree_bound,
    })
}

/// Runs [`presentation_equiv_bounded`] for bounds `1..=max_bound`, stopping at
/// the first conclusive answer.
pub fn presentation_equiv_search(
    p1: &Presentation,
    p2: &Presentation,
    max_bound: u32,
) -> Result<EquivOutcome> {
    let mut last = EquivOutcome::Inconclusive { bound: 0 };
    for b in 1..=max_bound.max(1) {
        last = presentation_equiv_bounded(p1, p2, b)?;
        if !matches!(last, EquivOutcome::Inconclusive { .. }) {
            break;
        }
    }
    Ok(last)
}
