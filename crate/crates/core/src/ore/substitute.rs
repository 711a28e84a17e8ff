use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::poly::{OrePoly, Symbol};
use super::signature::OreSignature;
use crate::error::{Error, Result};

/// Images of single generators. Symbols without an entry map to the
/// identically named symbol of the target signature.
pub type SubstitutionMap = BTreeMap<Symbol, OrePoly>;

/// Applies `map` factor by factor to each normal-ordered monomial, left to
/// right (`z`, base variables, thetas, `z^2 d_z`), and renormalizes.
///
/// Whether `map` respects the defining relations is the caller's business.
pub fn substitute(
    p: &OrePoly,
    map: &SubstitutionMap,
    target: &Arc<OreSignature>,
) -> Result<OrePoly> {
    for img in map.values() {
        if **img.signature() != **target {
            return Err(Error::SignatureMismatch);
        }
    }
    let src = p.signature().clone();
    let mut cache: HashMap<(Symbol, i64), OrePoly> = HashMap::new();
    let mut power = |s: Symbol, k: i64| -> Result<OrePoly> {
        if let Some(v) = cache.get(&(s.clone(), k)) {
            return Ok(v.clone());
        }
        let base = match map.get(&s) {
            Some(img) => img.with_signature(target)?,
            None => OrePoly::symbol(target, &s)?,
        };
        let v = base.pow(k)?;
        cache.insert((s, k), v.clone());
        Ok(v)
    };
    let mut out = OrePoly::zero(target);
    for (ex, c) in p.terms() {
        let mut acc = OrePoly::constant(target, c.clone());
        if ex.z > 0 {
            acc = acc.mul(&power(Symbol::Z, ex.z as i64)?)?;
        }
        for (i, v) in src.base_vars().iter().enumerate() {
            if ex.x[i] != 0 {
                acc = acc.mul(&power(Symbol::Var(v.clone()), ex.x[i] as i64)?)?;
            }
        }
        for (i, v) in src.base_vars().iter().enumerate() {
            if ex.theta[i] != 0 {
                acc = acc.mul(&power(Symbol::Theta(v.clone()), ex.theta[i] as i64)?)?;
            }
        }
        if ex.e > 0 {
            acc = acc.mul(&power(Symbol::Z2Dz, ex.e as i64)?)?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}
