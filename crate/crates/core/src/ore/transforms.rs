//! Functors acting on presentations by rewriting generators.

use num_traits::Zero;

use super::poly::{Exponents, OrePoly, Symbol};
use super::presentation::Presentation;
use super::signature::OreSignature;
use super::substitute::{substitute, SubstitutionMap};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// Fourier-Laplace with dual variables `l1, ..., lN`.
pub fn fourier_laplace(pres: &Presentation) -> Result<Presentation> {
    let names: Vec<String> = (1..=pres.signature().nvars())
        .map(|i| format!("l{i}"))
        .collect();
    fourier_laplace_named(pres, &names)
}

/// `w_i -> theta_{l_i}`, `theta_{w_i} -> -l_i`, `z^2 d_z -> z^2 d_z + sum l_i theta_{l_i}`.
pub fn fourier_laplace_named<S: AsRef<str>>(
    pres: &Presentation,
    dual: &[S],
) -> Result<Presentation> {
    let src = pres.signature();
    if !src.invertible_vars().is_empty() {
        return Err(Error::Signature(format!(
            "Fourier-Laplace needs affine coordinates; `{}` is invertible",
            src.invertible_vars()[0]
        )));
    }
    if dual.len() != src.nvars() {
        return Err(Error::Signature(format!(
            "expected {} dual names, got {}",
            src.nvars(),
            dual.len()
        )));
    }
    let dual: Vec<String> = dual.iter().map(|s| s.as_ref().to_string()).collect();
    let target =
        OreSignature::from_parts(dual.clone(), vec![], src.has_z2dz(), src.is_classical())?;
    let mut map = SubstitutionMap::new();
    let mut euler = OrePoly::zero(&target);
    for (w, l) in src.base_vars().iter().zip(&dual) {
        let lp = OrePoly::var(&target, l)?;
        let th = OrePoly::theta(&target, l)?;
        euler = euler.add(&lp.mul(&th)?)?;
        map.insert(Symbol::Var(w.clone()), th);
        map.insert(Symbol::Theta(w.clone()), lp.neg());
    }
    if src.has_z2dz() {
        map.insert(Symbol::Z2Dz, OrePoly::z2dz(&target)?.add(&euler)?);
    }
    pres.map_generators(&target, |g| substitute(g, &map, &target))
}

/// Partial derivative of a commutative Laurent polynomial in the base variables.
fn partial(phi: &OrePoly, idx: usize) -> Result<OrePoly> {
    let mut terms = Vec::new();
    for (ex, c) in phi.terms() {
        let b = ex.x[idx];
        if b != 0 {
            let mut ne = ex.clone();
            ne.x[idx] -= 1;
            terms.push((ne, c * Q::from_integer(b.into())));
        }
    }
    OrePoly::from_terms(phi.signature(), terms)
}

/// Conjugation by `exp(phi/z)`: `theta_i -> theta_i - d phi/d x_i`,
/// `z^2 d_z -> z^2 d_z + phi`.
pub fn exp_twist(pres: &Presentation, phi: &OrePoly) -> Result<Presentation> {
    let sig = pres.signature();
    if **phi.signature() != **sig {
        return Err(Error::SignatureMismatch);
    }
    let phi = phi.with_signature(sig)?;
    if phi
        .terms()
        .any(|(ex, _)| ex.e != 0 || ex.theta_order() != 0 || ex.z != 0)
    {
        return Err(Error::Params(format!(
            "twist `{phi}` must be a polynomial in the base variables"
        )));
    }
    if phi.is_zero() {
        return Ok(pres.clone());
    }
    let mut map = SubstitutionMap::new();
    for (i, v) in sig.base_vars().iter().enumerate() {
        let d = partial(&phi, i)?;
        if !d.is_zero() {
            map.insert(Symbol::Theta(v.clone()), OrePoly::theta(sig, v)?.sub(&d)?);
        }
    }
    if sig.has_z2dz() {
        map.insert(Symbol::Z2Dz, OrePoly::z2dz(sig)?.add(&phi)?);
    }
    pres.map_generators(sig, |g| substitute(g, &map, sig))
}

/// Presentation of `z^k M`: `z^2 d_z -> z^2 d_z - k z`. The accumulated shift
/// is kept under the `z_shift` metadata key.
pub fn z_shift(pres: &Presentation, k: i64) -> Result<Presentation> {
    let sig = pres.signature();
    if k == 0 || !sig.has_z2dz() {
        return Ok(pres.clone());
    }
    let mut map = SubstitutionMap::new();
    let kz = OrePoly::z(sig).scale(&Q::from_integer(k.into()));
    map.insert(Symbol::Z2Dz, OrePoly::z2dz(sig)?.sub(&kz)?);
    let prev = pres
        .meta()
        .get("z_shift")
        .map(|s| parse_q(s))
        .transpose()?
        .unwrap_or_else(Q::zero);
    let total = prev + Q::from_integer(k.into());
    Ok(pres
        .map_generators(sig, |g| substitute(g, &map, sig))?
        .with_meta("z_shift", fmt_q(&total)))
}

/// Moves to the signature with `z^2 d_z` and adjoins the generator
/// `z^2 d_z - shift * z`.
pub fn attach_z2dz(pres: &Presentation, shift: &Q) -> Result<Presentation> {
    let sig = pres.signature();
    if sig.is_classical() {
        return Err(Error::Signature(
            "z^2 d_z cannot be attached to a classical signature".into(),
        ));
    }
    let target = sig.with_z2dz(true)?;
    let mut out = pres.map_generators(&target, |g| g.embed_into(&target))?;
    let e = OrePoly::z2dz(&target)?.sub(&OrePoly::z(&target).scale(shift))?;
    out.push(e)?;
    Ok(out.with_meta("z2dz_flag", fmt_q(shift)))
}

/// Inverse image along the projection forgetting `name`: the new variable is
/// inserted at position `at` and `theta_name` joins the generators.
pub fn extend_with_var(
    pres: &Presentation,
    name: &str,
    invertible: bool,
    at: usize,
) -> Result<Presentation> {
    let target = pres.signature().with_var_inserted(at, name, invertible)?;
    let mut out = pres.map_generators(&target, |g| g.embed_into(&target))?;
    out.push(OrePoly::theta(&target, name)?)?;
    Ok(out)
}

/// Order-filtration Rees module of a classical presentation: a term
/// `c x^b d^c` of a generator of order `k` becomes `c z^(k-|c|) x^b theta^c`.
pub fn rees_homogenize(pres: &Presentation) -> Result<Presentation> {
    let sig = pres.signature();
    if !sig.is_classical() {
        return Err(Error::Signature(
            "Rees homogenization expects a classical presentation".into(),
        ));
    }
    let target = sig.homogenized()?;
    let mut out = pres.map_generators(&target, |g| {
        let order = g.terms().map(|(ex, _)| ex.theta_order()).max().unwrap_or(0);
        let terms = g.terms().map(|(ex, c)| {
            let mut ne: Exponents = ex.clone();
            ne.z = order - ex.theta_order();
            (ne, c.clone())
        });
        OrePoly::from_terms(&target, terms.collect::<Vec<_>>())
    })?;
    if let (Some(n), Some(d)) = (pres.meta().get("N"), pres.meta().get("d")) {
        let shift = parse_q(n)? - parse_q(d)?;
        out = out.with_meta("hodge_shift", fmt_q(&shift));
    }
    Ok(out)
}

/// Sets `z = 1`; the presentation must not involve `z^2 d_z`.
pub fn specialize_z_one(pres: &Presentation) -> Result<Presentation> {
    let sig = pres.signature();
    if sig.is_classical() {
        return Ok(pres.clone());
    }
    if pres
        .generators()
        .iter()
        .any(|g| g.terms().any(|(ex, _)| ex.e > 0))
    {
        return Err(Error::Signature(
            "cannot set z = 1 in the presence of z^2 d_z".into(),
        ));
    }
    let target = sig.dehomogenized()?;
    pres.map_generators(&target, |g| {
        OrePoly::from_terms(
            &target,
            g.terms()
                .map(|(ex, c)| (ex.clone(), c.clone()))
                .collect::<Vec<_>>(),
        )
    })
}
