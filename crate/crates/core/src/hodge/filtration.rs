//! `nu`-table of the filtration, graded nilpotent parts and Hodge numbers.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyper::{arc_separated, euler_product, irreducible, thm_presentation, classical_torus, HypParams};
use crate::ore::Presentation;
use crate::rational::{ceil_q, fmt_q, is_integer, to_i64, Q};

fn qi(k: i64) -> Q {
    Q::from_integer(k.into())
}

/// `-alpha + k - eps - (n-1) alpha_(k+1)`, `k` zero-based.
fn nu_arg(params: &HypParams, a: &Q, k: usize) -> Q {
    let n = params.n() as i64;
    -a + qi(k as i64) - params.epsilon() - qi(n - 1) * &params.alpha()[k]
}

/// `ceil(-alpha + k - eps - (n-1) alpha_(k+1))`.
pub fn nu(params: &HypParams, a: &Q, k: usize) -> Result<i64> {
    if k >= params.n() {
        return Err(Error::Params(format!("k = {k} out of range 0..{}", params.n())));
    }
    to_i64(&ceil_q(&nu_arg(params, a, k)))
}

/// `(k, nu_alpha(k))` for `k = 0..n-1`: the step is the sum of `tau^nu(k) Q_k`.
pub fn u_filtration_step(params: &HypParams, a: &Q) -> Result<Vec<(usize, i64)>> {
    (0..params.n()).map(|k| Ok((k, nu(params, a, k)?))).collect()
}

/// Indices whose class is nonzero in the graded piece at `alpha` (the ceiling is tight).
pub fn surviving(params: &HypParams, a: &Q) -> Vec<usize> {
    (0..params.n()).filter(|&k| is_integer(&nu_arg(params, a, k))).collect()
}

/// Values `-eps + j - 1 - (n-1) alpha_j`, `j = 1..n`.
pub fn unnormalized_jumps(params: &HypParams) -> Vec<Q> {
    let n = params.n() as i64;
    (1..=params.n())
        .map(|j| -params.epsilon() + qi(j as i64 - 1) - qi(n - 1) * &params.alpha()[j - 1])
        .collect()
}

/// Normalized jumps `k - (n-1) alpha_k`, `k = 1..n`.
pub fn normalized_jumps(params: &HypParams) -> Vec<Q> {
    let n = params.n() as i64;
    (1..=params.n())
        .map(|k| qi(k as i64) - qi(n - 1) * &params.alpha()[k - 1])
        .collect()
}

/// Action on the surviving classes at `alpha`: `-1` from `k` to `k + 1` when both
/// survive and `alpha_(k+1) = alpha_(k+2)`. Rows and columns follow [`surviving`].
pub fn graded_nilpotent(params: &HypParams, a: &Q) -> Vec<Vec<Q>> {
    let surv = surviving(params, a);
    let pos: BTreeMap<usize, usize> = surv.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut m = vec![vec![Q::zero(); surv.len()]; surv.len()];
    for &k in &surv {
        if let Some(&r) = pos.get(&(k + 1)) {
            if params.alpha()[k] == params.alpha()[k + 1] {
                m[r][pos[&k]] = -Q::one();
            }
        }
    }
    m
}

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut out = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// Least `p >= 1` with `m^p = 0`, or `None` if `m` is not nilpotent (0 for the empty matrix).
pub fn nilpotency_index(m: &[Vec<Q>]) -> Option<usize> {
    let n = m.len();
    if n == 0 {
        return Some(0);
    }
    let mut pw = m.to_vec();
    for p in 1..=n {
        if pw.iter().flatten().all(Zero::is_zero) {
            return Some(p);
        }
        pw = mat_mul(&pw, m);
    }
    None
}

fn ser_qmap<S: Serializer>(m: &BTreeMap<Q, usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: BTreeMap<String, usize> = m.iter().map(|(k, v)| (fmt_q(k), *v)).collect();
    out.serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationRow {
    #[serde(with = "crate::rational::serde_q")]
    pub alpha: Q,
    pub nu: Vec<i64>,
    pub surviving: Vec<usize>,
    pub nilpotent: Vec<Vec<String>>,
    pub nilpotency_index: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrrHodgeReport {
    pub n: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub epsilon: Q,
    /// `rho(k)` for `k = 1..n`.
    #[serde(with = "crate::rational::serde_qvec")]
    pub jumps: Vec<Q>,
    /// Jump value to multiplicity.
    #[serde(serialize_with = "ser_qmap")]
    pub hodge_numbers: BTreeMap<Q, usize>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub unnormalized_jumps: Vec<Q>,
    /// One row per distinct unnormalized jump.
    pub filtration: Vec<FiltrationRow>,
}

pub fn irr_hodge(params: &HypParams) -> Result<IrrHodgeReport> {
    if params.m() != 1 {
        return Err(Error::Params(format!(
            "type (n, 1) required, got (n, m) = ({}, {})",
            params.n(),
            params.m()
        )));
    }
    if !irreducible(params) {
        return Err(Error::Hypothesis("parameters are reducible".into()));
    }
    let jumps = normalized_jumps(params);
    let mut hodge_numbers: BTreeMap<Q, usize> = BTreeMap::new();
    for j in &jumps {
        *hodge_numbers.entry(j.clone()).or_default() += 1;
    }
    let unnorm = unnormalized_jumps(params);
    let mut distinct = unnorm.clone();
    distinct.sort();
    distinct.dedup();
    let mut filtration = Vec::new();
    for a in distinct {
        let nilp = graded_nilpotent(params, &a);
        let idx = nilpotency_index(&nilp)
            .ok_or_else(|| Error::Shape(format!("graded action at {} is not nilpotent", fmt_q(&a))))?;
        filtration.push(FiltrationRow {
            nu: u_filtration_step(params, &a)?.into_iter().map(|(_, v)| v).collect(),
            surviving: surviving(params, &a),
            nilpotent: nilp.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
            nilpotency_index: idx,
            alpha: a,
        });
    }
    Ok(IrrHodgeReport {
        n: params.n(),
        epsilon: params.epsilon(),
        jumps,
        hodge_numbers,
        unnormalized_jumps: unnorm,
        filtration,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularHodgeReport {
    pub n: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub epsilon: Q,
    /// `h^p`, `p = 0..n-1`.
    pub hodge_numbers: Vec<usize>,
    /// `R_k = prod_(i<=k) (t d_t - alpha_i)`.
    pub splitting_labels: Vec<String>,
    /// Order of each `R_k`.
    pub orders: Vec<u32>,
    /// `k -> #{j : beta_j < alpha_k}`; diagnostic only.
    pub fedorov: Vec<usize>,
    pub homogeneous: bool,
}

pub fn regular_hodge(params: &HypParams) -> Result<RegularHodgeReport> {
    let n = params.n();
    if n != params.m() {
        return Err(Error::Params(format!("n = m required, got ({}, {})", n, params.m())));
    }
    if !irreducible(params) {
        return Err(Error::Hypothesis("parameters are reducible".into()));
    }
    if !arc_separated(params)? {
        return Err(Error::Hypothesis("parameters are not arc separated".into()));
    }
    let sig = classical_torus()?;
    let mut labels = Vec::with_capacity(n);
    let mut orders = Vec::with_capacity(n);
    for k in 0..n {
        let r = euler_product(&sig, &params.alpha()[..k])?;
        orders.push(r.terms().map(|(e, _)| e.theta_order()).max().unwrap_or(0));
        labels.push(r.to_string());
    }
    // graded pieces of the order filtration restricted to span(R_0..R_(n-1))
    let mut hodge_numbers = vec![0usize; n];
    for &o in &orders {
        let slot = hodge_numbers
            .get_mut(o as usize)
            .ok_or_else(|| Error::Shape(format!("R_k of order {o} >= n")))?;
        *slot += 1;
    }
    let fedorov = params
        .alpha()
        .iter()
        .map(|a| params.beta().iter().filter(|b| *b < a).count())
        .collect();
    Ok(RegularHodgeReport {
        n,
        epsilon: params.epsilon(),
        hodge_numbers,
        splitting_labels: labels,
        orders,
        fedorov,
        homogeneous: homogeneity_check(&thm_presentation(params)?),
    })
}

/// Every generator homogeneous for the grading `deg z = deg theta = deg z^2 d_z = 1`.
pub fn homogeneity_check(pres: &Presentation) -> bool {
    pres.generators().iter().all(|g| g.is_z_homogeneous())
}
