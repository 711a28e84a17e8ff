//! Top de Rham cohomology along fiber variables, computed on a bounded span.
//!
//! For `b` in the base algebra, `b . [1] = 0` in `M / sum theta_w M` iff
//! `b` lies in `I + sum theta_w R`. The projection `pi` that rewrites every
//! fiber theta to the far left and keeps the theta-free part has kernel
//! `sum theta_w R`, so the annihilator is `pi(I)` intersected with the base
//! algebra. Cofactors containing fiber thetas never contribute.

use num_traits::Zero;

use super::ideal::{monic_reduce, monomials_up_to, poly_row, Echelon, IdealSpan, Row};
use super::poly::{Exponents, OrePoly};
use super::presentation::Presentation;
use super::signature::OreSignature;
use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, Q};

#[derive(Debug, Clone)]
pub struct Elimination {
    pub presentation: Presentation,
    pub bound: u32,
    /// Dimension of the bounded span of base-only elements found.
    pub candidates: usize,
}

type Key = (bool, Exponents);

/// Cofactor degree used when discarding redundant generators.
const PRUNE_BOUND: u32 = 3;

fn project(p: &OrePoly, fiber: &[usize], classical: bool) -> Row<Key> {
    let mut acc: std::collections::BTreeMap<Key, Q> = std::collections::BTreeMap::new();
    'terms: for (ex, c) in p.terms() {
        let mut ne = ex.clone();
        let mut coeff = c.clone();
        for &i in fiber {
            let (cw, f) = (ex.x[i], ex.theta[i]);
            if f == 0 {
                continue;
            }
            if (cw as i64) < f as i64 {
                continue 'terms;
            }
            let k = factorial(f as u64) * binomial(cw as u64, f as u64);
            let k = if f % 2 == 1 { -k } else { k };
            coeff *= Q::from_integer(k);
            ne.x[i] = cw - f as i32;
            ne.theta[i] = 0;
            if !classical {
                ne.z += f;
            }
        }
        let has_fiber = fiber.iter().any(|&i| ne.x[i] != 0);
        let slot = acc.entry((has_fiber, ne)).or_insert_with(Q::zero);
        *slot += coeff;
    }
    acc.into_iter()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Left-multiplies by the unit monomial making the smallest exponent of
/// every invertible variable zero.
fn clear_unit_denominators(p: &OrePoly) -> Result<OrePoly> {
    let sig = p.signature();
    let mut unit = Exponents::one(sig.nvars());
    for i in 0..sig.nvars() {
        if sig.is_invertible(i) {
            unit.x[i] = -p.terms().map(|(ex, _)| ex.x[i]).min().unwrap_or(0);
        }
    }
    if unit.is_one() {
        return Ok(p.clone());
    }
    p.mul_monomial_left(&unit)
}

fn conclusive(sig: &OreSignature, gens: &[OrePoly]) -> std::result::Result<(), String> {
    for (i, v) in sig.base_vars().iter().enumerate() {
        let found = gens.iter().any(|g| {
            g.terms().all(|(ex, _)| ex.e == 0)
                && g.terms().any(|(ex, _)| ex.x[i] != 0 || ex.theta[i] != 0)
        });
        if !found {
            return Err(format!("no z2dz-free relation involving `{v}`"));
        }
    }
    if sig.has_z2dz()
        && !gens
            .iter()
            .any(|g| g.terms().map(|(ex, _)| ex.e).max() == Some(1))
    {
        return Err("no relation of z2dz-degree one".into());
    }
    Ok(())
}

/// Annihilator of `[1]` in the cokernel of the fiber theta actions, searched
/// with cofactors of total degree at most `degree_bound`.
pub fn derham_pushforward_eliminate<S: AsRef<str>>(
    pres: &Presentation,
    fiber_vars: &[S],
    degree_bound: u32,
) -> Result<Elimination> {
    let sig = pres.signature().clone();
    if fiber_vars.is_empty() {
        return Ok(Elimination {
            presentation: pres.clone(),
            bound: degree_bound,
            candidates: 0,
        });
    }
    if degree_bound < 1 {
        return Err(Error::Params("degree bound must be at least 1".into()));
    }
    let mut fiber = Vec::new();
    let mut names = Vec::new();
    for v in fiber_vars {
        let v = v.as_ref();
        let i = sig
            .index_of(v)
            .ok_or_else(|| Error::UnmappedSymbol(v.to_string()))?;
        if sig.is_invertible(i) {
            return Err(Error::Signature(format!(
                "fiber variable `{v}` must not be invertible"
            )));
        }
        fiber.push(i);
        names.push(v.to_string());
    }
    let target = sig.without_vars(&names)?;
    let monos: Vec<Exponents> = monomials_up_to(&sig, degree_bound)
        .into_iter()
        .filter(|m| fiber.iter().all(|&i| m.theta[i] == 0))
        .collect();
    let mut jobs: Vec<(u32, usize, &Exponents)> = Vec::new();
    for gi in 0..pres.generators().len() {
        for m in &monos {
            jobs.push((m.total_degree(), gi, m));
        }
    }
    jobs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(b.2)));
    let mut ech: Echelon<Key> = Echelon::new(false);
    for (_, gi, m) in jobs {
        let prod = pres.generators()[gi].mul_monomial_left(m)?;
        ech.insert(project(&prod, &fiber, sig.is_classical()));
    }

    // base-only part of the span, fully inter-reduced
    let mut base: Echelon<Exponents> = Echelon::new(false);
    let mut rows: Vec<Row<Exponents>> = ech
        .rows()
        .iter()
        .filter(|r| !r[0].0 .0)
        .map(|r| r.iter().map(|((_, e), c)| (e.clone(), c.clone())).collect())
        .collect();
    rows.sort_by(|a: &Row<Exponents>, b| a[0].0.cmp(&b[0].0));
    for r in rows {
        base.insert(r);
    }
    let candidates = base.rank();
    let mut cands: Vec<OrePoly> = Vec::with_capacity(candidates);
    for r in base.fully_reduced_rows() {
        let p = OrePoly::from_terms(&sig, r)?.restrict_to(&target)?;
        cands.push(clear_unit_denominators(&p)?);
    }
    let e_degree = |p: &OrePoly| p.terms().map(|(ex, _)| ex.e).max().unwrap_or(0);
    cands.sort_by(|a, b| {
        (
            e_degree(a),
            a.total_degree(),
            a.len(),
            a.leading().map(|l| l.0.clone()),
        )
            .cmp(&(
                e_degree(b),
                b.total_degree(),
                b.len(),
                b.leading().map(|l| l.0.clone()),
            ))
    });

    // drop candidates already generated by low-degree multiples of earlier ones
    let span_monos = monomials_up_to(&target, PRUNE_BOUND);
    let mut kept: Vec<OrePoly> = Vec::new();
    let mut span: Echelon<Exponents> = Echelon::new(false);
    for c in cands {
        let c = monic_reduce(&c, &kept)?;
        if c.is_zero() || span.contains(poly_row(&c)) {
            continue;
        }
        for m in &span_monos {
            span.insert(poly_row(&c.mul_monomial_left(m)?));
        }
        kept.push(c);
    }
    // then drop late generators implied by the others
    let mut i = kept.len();
    while i > 1 {
        i -= 1;
        let others: Vec<OrePoly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if monic_reduce(&kept[i], &others)?.is_zero()
            || IdealSpan::untracked(&Presentation::new(&target, others)?, PRUNE_BOUND)?
                .contains(&kept[i])?
        {
            kept.remove(i);
        }
    }

    if let Err(reason) = conclusive(&target, &kept) {
        return Err(Error::Inconclusive {
            bound: degree_bound as usize,
            reason,
        });
    }
    let presentation = Presentation::new(&target, kept)?
        .with_meta_from(pres)
        .with_meta("elimination_bound", degree_bound.to_string())
        .with_meta("fiber_vars", names.join(","));
    Ok(Elimination {
        presentation,
        bound: degree_bound,
        candidates,
    })
}
