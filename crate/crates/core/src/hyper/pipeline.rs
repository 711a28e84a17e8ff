//! Reduction of a hypergeometric module to a GKZ system and back:
//! Rees module of the w-side system, pull back to `G_m x A^N`, twist by
//! `exp(psi/z)` with `psi = w_1 t + w_2 + ... + w_N`, integrate out the `w`'s.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{irreducible, thm_presentation, torus_signature, HypParams};
use crate::error::{Error, Result};
use crate::gkz::{build_z_check_n, family_matrix, GkzData};
use crate::lattice::admissible_region;
use crate::ore::{
    derham_pushforward_eliminate, exp_twist, extend_with_var, presentation_equiv_search,
    substitute, z_shift, EquivOutcome, OrePoly, Presentation, SubstitutionMap, Symbol,
};
use crate::rational::{fmt_q, Q};

/// Largest cofactor degree tried when comparing with the closed form.
const EQUIV_BOUND: u32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    #[serde(skip)]
    pub presentation: Presentation,
    #[serde(with = "crate::rational::serde_qvec")]
    pub gamma: Vec<Q>,
    /// `k` with `gamma - k` admissible.
    pub shift: Vec<i64>,
    pub elimination_bound: u32,
    pub candidates: usize,
    pub z_shift: i64,
    pub outcome: String,
    pub equivalence_bound: u32,
}

impl PipelineReport {
    pub fn is_equal(&self) -> bool {
        self.outcome == "Equal"
    }
}

/// `gamma = (beta_1, .., beta_m, alpha_2, .., alpha_n)`.
pub fn gamma(params: &HypParams) -> Vec<Q> {
    params
        .beta()
        .iter()
        .chain(params.alpha().iter().skip(1))
        .cloned()
        .collect()
}

fn twisted_pullback(params: &HypParams) -> Result<(Presentation, Vec<String>)> {
    let (n, m) = (params.n(), params.m());
    let a = family_matrix(n, m)?;
    let data = GkzData::new(a, gamma(params))?;
    let zn = build_z_check_n(&data, None)?;
    let fiber: Vec<String> = zn.signature().base_vars().to_vec();
    let ext = extend_with_var(&zn, "t", true, 0)?;
    let sig = ext.signature().clone();
    let mut psi = OrePoly::var(&sig, "t")?.mul(&OrePoly::var(&sig, &fiber[0])?)?;
    for w in &fiber[1..] {
        psi = psi.add(&OrePoly::var(&sig, w)?)?;
    }
    Ok((exp_twist(&ext, &psi)?, fiber))
}

fn sign_flip_t(pres: &Presentation, m: usize) -> Result<Presentation> {
    if m % 2 == 0 {
        return Ok(pres.clone());
    }
    let sig = pres.signature().clone();
    let mut map = SubstitutionMap::new();
    map.insert(Symbol::Var("t".into()), OrePoly::var(&sig, "t")?.neg());
    map.insert(Symbol::Theta("t".into()), OrePoly::theta(&sig, "t")?.neg());
    pres.map_generators(&sig, |g| substitute(g, &map, &sig))
}

/// Runs the reduction with elimination bounds `1..=degree_bound` and returns
/// the first result that matches the closed-form presentation (or the last
/// conclusive attempt).
pub fn gkz_reduction_pipeline(params: &HypParams, degree_bound: u32) -> Result<PipelineReport> {
    let (n, m) = (params.n(), params.m());
    if n == 0 || !params.alpha()[0].is_zero() {
        return Err(Error::Params("the reduction needs alpha_1 = 0".into()));
    }
    if !irreducible(params) {
        return Err(Error::Hypothesis("parameters are not irreducible".into()));
    }
    let g = gamma(params);
    let a = family_matrix(n, m)?;
    let region = admissible_region(&a)?;
    let Some(shift) = region.shift_witness(&g) else {
        let guess: Vec<Q> = g
            .iter()
            .map(|x| if x.is_zero() { x.clone() } else { x - Q::one() })
            .collect();
        let detail = match region.violation(&guess) {
            Some(v) => format!(
                "facet normal {:?} takes value {} at gamma - k",
                v.facet.normal,
                fmt_q(&v.value)
            ),
            None => "facet equations have no common solution in N^d".into(),
        };
        return Err(Error::Admissibility(format!(
            "gamma = ({}) is not in the shifted admissible region: {detail}",
            g.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
        )));
    };
    let (twisted, fiber) = twisted_pullback(params)?;
    let target = thm_presentation(params)?;
    let big_n = (n + m) as i64;
    let mut last: Option<PipelineReport> = None;
    let mut last_err = None;
    for bound in 1..=degree_bound {
        let elim = match derham_pushforward_eliminate(&twisted, &fiber, bound) {
            Ok(e) => e,
            Err(e @ Error::Inconclusive { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let sig = torus_signature(true)?;
        let moved = elim
            .presentation
            .map_generators(&sig, |p| p.with_signature(&sig))?;
        let result = z_shift(&sign_flip_t(&moved, m)?, -big_n)?;
        let outcome = presentation_equiv_search(&result, &target, EQUIV_BOUND)?;
        let equivalence_bound = match outcome {
            EquivOutcome::Equal { bound } | EquivOutcome::Inconclusive { bound } => bound,
            EquivOutcome::Unequal { .. } => 0,
        };
        let report = PipelineReport {
            presentation: result.with_meta("elimination_bound", bound.to_string()),
            gamma: g.clone(),
            shift: shift.clone(),
            elimination_bound: bound,
            candidates: elim.candidates,
            z_shift: -big_n,
            outcome: outcome.label().to_string(),
            equivalence_bound,
        };
        if report.is_equal() {
            return Ok(report);
        }
        last = Some(report);
    }
    match (last, last_err) {
        (Some(r), _) => Ok(r),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::Params("degree bound must be at least 1".into())),
    }
}
