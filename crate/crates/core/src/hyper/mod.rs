//! Hypergeometric data of type `(n, m)` on the torus.

mod pipeline;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ore::{substitute, OrePoly, OreSignature, Presentation, SubstitutionMap, Symbol};
use crate::rational::{frac_part, Q};

pub use pipeline::{gkz_reduction_pipeline, PipelineReport};

/// Exponents `alpha` (length `n`) and `beta` (length `m`), reduced into `[0,1)` and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypParams {
    #[serde(with = "crate::rational::serde_qvec")]
    alpha: Vec<Q>,
    #[serde(with = "crate::rational::serde_qvec")]
    beta: Vec<Q>,
}

fn reduce_sorted(v: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = v.iter().map(frac_part).collect();
    out.sort();
    out
}

impl HypParams {
    pub fn new(alpha: Vec<Q>, beta: Vec<Q>) -> Result<Self> {
        if alpha.is_empty() && beta.is_empty() {
            return Err(Error::Params("(n, m) = (0, 0) is not allowed".into()));
        }
        Ok(HypParams {
            alpha: reduce_sorted(&alpha),
            beta: reduce_sorted(&beta),
        })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    pub fn alpha(&self) -> &[Q] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Q] {
        &self.beta
    }

    /// `sum beta - sum alpha + N - 1`.
    pub fn epsilon(&self) -> Q {
        epsilon_raw(&self.alpha, &self.beta)
    }
}

pub fn epsilon_raw(alpha: &[Q], beta: &[Q]) -> Q {
    let n = (alpha.len() + beta.len()) as i64;
    beta.iter().sum::<Q>() - alpha.iter().sum::<Q>() + Q::from_integer((n - 1).into())
}

pub fn torus_signature(z2dz: bool) -> Result<Arc<OreSignature>> {
    OreSignature::new(&["t"], &["t"], z2dz)
}

pub fn classical_torus() -> Result<Arc<OreSignature>> {
    OreSignature::classical(&["t"], &["t"])
}

/// `prod (s - c_i z)` with `s = t theta_t` (or `t d_t` classically).
pub(crate) fn euler_product(sig: &Arc<OreSignature>, roots: &[Q]) -> Result<OrePoly> {
    let s = OrePoly::var(sig, "t")?.mul(&OrePoly::theta(sig, "t")?)?;
    let z = OrePoly::z(sig);
    let mut acc = OrePoly::one(sig);
    for r in roots {
        acc = acc.mul(&s.sub(&z.scale(r))?)?;
    }
    Ok(acc)
}

/// `prod (s - a_i z) - t prod (s - b_j z)` for arbitrary rational exponents.
pub fn hyp_operator_in(sig: &Arc<OreSignature>, alpha: &[Q], beta: &[Q]) -> Result<OrePoly> {
    let t = OrePoly::var(sig, "t")?;
    euler_product(sig, alpha)?.sub(&t.mul(&euler_product(sig, beta)?)?)
}

/// Classical operator `prod (t d - alpha_i) - t prod (t d - beta_j)`.
pub fn hyp_operator(params: &HypParams) -> Result<OrePoly> {
    hyp_operator_in(&classical_torus()?, &params.alpha, &params.beta)
}

/// No `alpha_i - beta_j` is an integer.
pub fn irreducible(params: &HypParams) -> bool {
    params
        .alpha
        .iter()
        .all(|a| params.beta.iter().all(|b| a != b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerWitness {
    #[serde(with = "crate::rational::serde_q")]
    pub eta: Q,
    #[serde(with = "crate::rational::serde_qvec")]
    pub shifted_alpha: Vec<Q>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub shifted_beta: Vec<Q>,
    /// `d -> d - eta/t` turns the original operator into the one with the
    /// unreduced shifted exponents.
    pub identity_holds: bool,
}

/// Shift every exponent by `eta`; the witness checks the conjugation by `t^eta`.
pub fn kummer_twist(params: &HypParams, eta: &Q) -> Result<(HypParams, KummerWitness)> {
    let shifted_alpha: Vec<Q> = params.alpha.iter().map(|a| a + eta).collect();
    let shifted_beta: Vec<Q> = params.beta.iter().map(|b| b + eta).collect();
    let sig = classical_torus()?;
    let original = hyp_operator_in(&sig, &params.alpha, &params.beta)?;
    let mut map = SubstitutionMap::new();
    let d = OrePoly::theta(&sig, "t")?;
    let correction = OrePoly::var(&sig, "t")?.pow(-1)?.scale(eta);
    map.insert(Symbol::Theta("t".into()), d.sub(&correction)?);
    let conjugated = substitute(&original, &map, &sig)?;
    let identity_holds = conjugated == hyp_operator_in(&sig, &shifted_alpha, &shifted_beta)?;
    let twisted = HypParams::new(shifted_alpha.clone(), shifted_beta.clone())?;
    Ok((
        twisted,
        KummerWitness {
            eta: eta.clone(),
            shifted_alpha,
            shifted_beta,
            identity_holds,
        },
    ))
}

/// The alphas form one contiguous block in the circular order of all exponents.
pub fn arc_separated(params: &HypParams) -> Result<bool> {
    if !irreducible(params) {
        return Err(Error::Hypothesis(
            "some alpha coincides with some beta; arcs are undefined".into(),
        ));
    }
    let mut labelled: Vec<(&Q, bool)> = params
        .alpha
        .iter()
        .map(|a| (a, true))
        .chain(params.beta.iter().map(|b| (b, false)))
        .collect();
    labelled.sort();
    let k = labelled.len();
    let changes = (0..k)
        .filter(|&i| labelled[i].1 != labelled[(i + 1) % k].1)
        .count();
    Ok(changes <= 2)
}

/// `P = z^2 d_z + (n - m) t theta + eps z` and `H = prod (s - alpha_i z) - t prod (s - beta_j z)`.
pub fn thm_presentation(params: &HypParams) -> Result<Presentation> {
    let sig = torus_signature(true)?;
    let s = OrePoly::var(&sig, "t")?.mul(&OrePoly::theta(&sig, "t")?)?;
    let nm = Q::from_integer((params.n() as i64 - params.m() as i64).into());
    let p = OrePoly::z2dz(&sig)?
        .add(&s.scale(&nm))?
        .add(&OrePoly::z(&sig).scale(&params.epsilon()))?;
    let h = hyp_operator_in(&sig, &params.alpha, &params.beta)?;
    Ok(Presentation::new(&sig, vec![p, h])?
        .with_meta("epsilon", crate::rational::fmt_q(&params.epsilon())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::{parse_poly, specialize_z_one};
    use crate::rational::{frac, q};

    fn hp(a: &[Q], b: &[Q]) -> HypParams {
        HypParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn operators() {
        let s = classical_torus().unwrap();
        assert_eq!(
            hyp_operator(&hp(&[q(0)], &[])).unwrap(),
            parse_poly(&s, "t*d[t] - t").unwrap()
        );
        let h = hyp_operator(&hp(&[q(0)], &[frac(1, 2)])).unwrap();
        let expect = parse_poly(&s, "t*d[t] - t*(t*d[t] - 1/2)").unwrap();
        assert_eq!(h, expect);
    }

    #[test]
    fn normalization() {
        let p = hp(&[frac(3, 2), frac(-1, 3)], &[q(2)]);
        assert_eq!(p.alpha(), &[frac(1, 2), frac(2, 3)]);
        assert_eq!(p.beta(), &[q(0)]);
    }

    #[test]
    fn irreducibility() {
        assert!(!irreducible(&hp(&[q(0)], &[q(0)])));
        assert!(irreducible(&hp(&[q(0), frac(1, 2)], &[frac(1, 4)])));
        assert!(!irreducible(&hp(&[frac(1, 3)], &[frac(1, 3)])));
    }

    #[test]
    fn kummer() {
        let p = hp(&[q(0)], &[]);
        let (t, w) = kummer_twist(&p, &frac(1, 2)).unwrap();
        assert!(w.identity_holds);
        assert_eq!(t.alpha(), &[frac(1, 2)]);
        let s = classical_torus().unwrap();
        assert_eq!(
            hyp_operator(&t).unwrap(),
            parse_poly(&s, "t*d[t] - 1/2 - t").unwrap()
        );
        let p = hp(&[q(0), frac(1, 2)], &[frac(1, 4)]);
        let (t, w) = kummer_twist(&p, &q(1)).unwrap();
        assert_eq!(t, p);
        assert!(w.identity_holds);
        assert_eq!(kummer_twist(&p, &q(0)).unwrap().0, p);
    }

    #[test]
    fn arcs() {
        assert!(arc_separated(&hp(&[frac(1, 5), frac(2, 5)], &[frac(3, 5), frac(4, 5)])).unwrap());
        assert!(!arc_separated(&hp(&[frac(1, 5), frac(3, 5)], &[frac(2, 5), frac(4, 5)])).unwrap());
        assert!(arc_separated(&hp(&[q(0), frac(1, 3), frac(2, 3)], &[frac(1, 2)])).unwrap());
        assert!(arc_separated(&hp(&[q(0)], &[q(0)])).is_err());
    }

    #[test]
    fn closed_form_presentation() {
        let p = hp(&[q(0), frac(1, 2)], &[frac(1, 4)]);
        assert_eq!(p.epsilon(), frac(7, 4));
        let pres = thm_presentation(&p).unwrap();
        let s = pres.signature().clone();
        assert_eq!(
            pres.generators()[0],
            parse_poly(&s, "z2dz + t*th[t] + 7/4*z").unwrap()
        );
        let h = Presentation::new(&s, vec![pres.generators()[1].clone()]).unwrap();
        assert_eq!(
            specialize_z_one(&h).unwrap().generators()[0],
            hyp_operator(&p).unwrap()
        );
        let reg = thm_presentation(&hp(&[q(0), frac(1, 2)], &[frac(1, 4), frac(3, 4)])).unwrap();
        let eps = reg.meta()["epsilon"].clone();
        assert_eq!(
            reg.generators()[0],
            parse_poly(reg.signature(), &format!("z2dz + {eps}*z")).unwrap()
        );
    }
}
