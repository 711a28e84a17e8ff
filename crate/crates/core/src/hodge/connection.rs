//! Rescaled module of type `(n, 1)`, its `Q`-basis and the Birkhoff-form connection.
//!
//! The module is modelled on the basis `e_j = s^j . 1` (`s = t theta_t`,
//! `0 <= j < n`) over Laurent polynomials in `z, t, tau`; the relation from
//! `H` folds `e_n` back. `c` is carried as a formal variable until solved.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::lpoly::{LPoly, C, T, TAU, Z};
use crate::error::{Error, Result};
use crate::hyper::{euler_product, irreducible, HypParams};
use crate::ore::{substitute, OrePoly, OreSignature, Presentation, SubstitutionMap, Symbol};
use crate::rational::{fmt_q, Q};

fn require_type_n1(params: &HypParams) -> Result<()> {
    if params.m() != 1 {
        return Err(Error::Params(format!(
            "type (n, 1) required, got (n, m) = ({}, {})",
            params.n(),
            params.m()
        )));
    }
    Ok(())
}

fn qi(k: i64) -> Q {
    Q::from_integer(k.into())
}

/// `(P, tau R, tau H)` over `t, tau` with `z^2 d_z`.
#[derive(Debug, Clone)]
pub struct RescaledPresentation {
    pub presentation: Presentation,
}

impl RescaledPresentation {
    /// `tau = 1`, dropping `tau R`.
    pub fn tau_one_slice(&self) -> Result<Presentation> {
        let target = crate::hyper::torus_signature(true)?;
        let mut map = SubstitutionMap::new();
        map.insert(Symbol::Var("tau".into()), OrePoly::one(&target));
        map.insert(Symbol::Theta("tau".into()), OrePoly::zero(&target));
        let gens = self.presentation.generators();
        let p = substitute(&gens[0], &map, &target)?;
        let h = substitute(&gens[2], &map, &target)?;
        Presentation::new(&target, vec![p, h])
    }
}

pub fn rescaled_signature() -> Result<Arc<OreSignature>> {
    OreSignature::new(&["t", "tau"], &["t", "tau"], true)
}

pub fn rescale(params: &HypParams) -> Result<RescaledPresentation> {
    require_type_n1(params)?;
    if !irreducible(params) {
        return Err(Error::Hypothesis("parameters are reducible".into()));
    }
    let sig = rescaled_signature()?;
    let n = params.n() as i64;
    let t = OrePoly::var(&sig, "t")?;
    let tau_inv = OrePoly::var(&sig, "tau")?.pow(-1)?;
    let h = tau_inv
        .pow(n)?
        .mul(&euler_product(&sig, params.alpha())?)?
        .sub(&t.mul(&tau_inv)?.mul(&euler_product(&sig, params.beta())?)?)?;
    let s = t.mul(&OrePoly::theta(&sig, "t")?)?;
    let p = OrePoly::z2dz(&sig)?
        .add(&s.scale(&qi(n - 1)))?
        .add(&OrePoly::z(&sig).scale(&params.epsilon()))?;
    let r = OrePoly::z2dz(&sig)?.add(&OrePoly::var(&sig, "tau")?.mul(&OrePoly::theta(&sig, "tau")?)?)?;
    Ok(RescaledPresentation {
        presentation: Presentation::new(&sig, vec![p, r, h])?
            .with_meta("epsilon", fmt_q(&params.epsilon())),
    })
}

type Vector = Vec<LPoly>;

struct Model {
    n: usize,
    alpha: Vec<Q>,
    beta: Q,
    eps: Q,
    /// Coefficients of `prod (X - alpha_i z)`, lowest first.
    rho: Vec<LPoly>,
}

fn zvar() -> LPoly {
    LPoly::var(Z, 1)
}

impl Model {
    fn new(params: &HypParams) -> Result<Self> {
        require_type_n1(params)?;
        let n = params.n();
        if n < 2 {
            return Err(Error::Params("n >= 2 required".into()));
        }
        let mut rho = vec![LPoly::constant(Q::one())];
        for a in params.alpha() {
            let mut next = vec![LPoly::zero(); rho.len() + 1];
            for (j, r) in rho.iter().enumerate() {
                next[j + 1] = next[j + 1].add(r);
                next[j] = next[j].sub(&r.mul(&zvar()).scale(a));
            }
            rho = next;
        }
        Ok(Model {
            n,
            alpha: params.alpha().to_vec(),
            beta: params.beta()[0].clone(),
            eps: params.epsilon(),
            rho,
        })
    }

    fn zeros(&self) -> Vector {
        vec![LPoly::zero(); self.n + 1]
    }

    /// Folds `e_n = -sum rho_j e_j + tau^(n-1) t (e_1 - beta z e_0)`.
    fn fold(&self, mut v: Vector) -> Vector {
        let n = self.n;
        if v.len() > n {
            let top = v.pop().unwrap_or_default();
            for j in 0..n {
                v[j] = v[j].sub(&top.mul(&self.rho[j]));
            }
            let w = top.mul(&LPoly::var(TAU, n as i32 - 1)).mul(&LPoly::var(T, 1));
            v[1] = v[1].add(&w);
            v[0] = v[0].sub(&w.mul(&zvar()).scale(&self.beta));
        }
        v
    }

    fn act_s(&self, v: &[LPoly]) -> Vector {
        let mut out = self.zeros();
        for (j, f) in v.iter().enumerate() {
            out[j + 1] = out[j + 1].add(f);
            out[j] = out[j].add(&f.euler(T).mul(&zvar()));
        }
        self.fold(out)
    }

    /// `z^2 d_z`, using `P`: `E e_j = (j - eps) z e_j - (n-1) e_(j+1)`.
    fn act_e(&self, v: &[LPoly]) -> Vector {
        let mut out = self.zeros();
        let nm1 = qi(self.n as i64 - 1);
        for (j, f) in v.iter().enumerate() {
            let w = qi(j as i64) - &self.eps;
            out[j] = out[j].add(&f.euler(Z).mul(&zvar())).add(&f.mul(&zvar()).scale(&w));
            out[j + 1] = out[j + 1].sub(&f.scale(&nm1));
        }
        self.fold(out)
    }

    /// `z tau d_tau`, using `tau R`: `e_j -> (n-1) e_(j+1) + eps z e_j`.
    fn act_tau(&self, v: &[LPoly]) -> Vector {
        let mut out = self.zeros();
        let nm1 = qi(self.n as i64 - 1);
        for (j, f) in v.iter().enumerate() {
            out[j] = out[j].add(&f.euler(TAU).mul(&zvar())).add(&f.mul(&zvar()).scale(&self.eps));
            out[j + 1] = out[j + 1].add(&f.scale(&nm1));
        }
        self.fold(out)
    }

    /// Columns `Q_k` in the `e`-basis, `c` symbolic.
    fn q_columns(&self) -> Vec<Vector> {
        let n = self.n;
        let k0 = -qi(n as i64 - 1);
        let tau_inv = LPoly::var(TAU, -1);
        let mut cols: Vec<Vector> = Vec::new();
        let mut cur = {
            let mut v = vec![LPoly::zero(); n];
            v[0] = LPoly::constant(Q::one());
            v
        };
        cols.push(cur.clone());
        for k in 1..n {
            let sv = self.act_s(&cur);
            let a = &self.alpha[k - 1];
            cur = sv
                .iter()
                .zip(&cur)
                .map(|(x, y)| x.sub(&y.mul(&zvar()).scale(a)).mul(&tau_inv).scale(&k0))
                .collect();
            cols.push(cur.clone());
        }
        let corr = LPoly::var(C, 1)
            .mul(&LPoly::var(T, 1))
            .scale(&num_traits::pow(k0, n - 1));
        let q0 = cols[0].clone();
        let last = &mut cols[n - 1];
        for (x, y) in last.iter_mut().zip(&q0) {
            *x = x.add(&y.mul(&corr));
        }
        cols
    }

    /// Coordinates of `w` in the basis `cols` (upper triangular, monomial diagonal).
    fn coords(&self, cols: &[Vector], w: &[LPoly]) -> Result<Vector> {
        let n = self.n;
        let mut w = w.to_vec();
        let mut out = vec![LPoly::zero(); n];
        for k in (0..n).rev() {
            let inv = cols[k][k]
                .inverse_monomial()
                .ok_or_else(|| Error::Shape(format!("Q_{k} has a non-monomial leading coefficient")))?;
            let coef = w[k].mul(&inv);
            for j in 0..n {
                w[j] = w[j].sub(&coef.mul(&cols[k][j]));
            }
            out[k] = coef;
        }
        if w.iter().any(|x| !x.is_zero()) {
            return Err(Error::Shape("basis change left a remainder".into()));
        }
        Ok(out)
    }

    /// Matrix of an action in the `Q`-basis: column `k` holds the coordinates of `op(Q_k)`.
    fn matrix(&self, cols: &[Vector], op: impl Fn(&Model, &[LPoly]) -> Vector) -> Result<Vec<Vector>> {
        let n = self.n;
        let mut m = vec![vec![LPoly::zero(); n]; n];
        for (k, col) in cols.iter().enumerate() {
            let c = self.coords(cols, &op(self, col))?;
            for (l, x) in c.into_iter().enumerate() {
                m[l][k] = x;
            }
        }
        Ok(m)
    }
}

/// Positions of `A_0` allowed to be nonzero besides the subdiagonal.
fn t_positions(n: usize) -> Vec<(usize, usize)> {
    if n == 2 {
        vec![(0, 0), (0, 1), (1, 1)]
    } else {
        vec![(0, n - 2), (1, n - 1)]
    }
}

/// Terms of the `z^2 d_z` matrix that the Birkhoff shape forbids, grouped per
/// `(z, t, tau)` monomial as polynomials in `c`.
fn shape_constraints(e: &[Vector]) -> Vec<std::collections::BTreeMap<i32, Q>> {
    let n = e.len();
    let allowed = t_positions(n);
    let mut out = Vec::new();
    for (l, row) in e.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            for (key, cpoly) in x.by_zttau() {
                let [zd, td, taud] = key;
                let ok = (zd == 0 && taud == 1 && td >= 0 && (l == k + 1 || allowed.contains(&(l, k))))
                    || (zd == 1 && taud == 0 && td == 0 && l == k);
                if !ok {
                    out.push(cpoly);
                }
            }
        }
    }
    out
}

fn eval_cpoly(p: &std::collections::BTreeMap<i32, Q>, c: &Q) -> Q {
    p.iter().fold(Q::zero(), |acc, (k, x)| {
        let pw = if *k >= 0 {
            num_traits::pow(c.clone(), *k as usize)
        } else {
            num_traits::pow(c.recip(), (-*k) as usize)
        };
        acc + x * pw
    })
}

fn solve_c(cons: &[std::collections::BTreeMap<i32, Q>]) -> Option<Q> {
    let linear = cons.iter().find_map(|p| {
        let a = p.get(&1).cloned().unwrap_or_else(Q::zero);
        let linear = p.keys().all(|k| *k == 0 || *k == 1);
        (linear && !a.is_zero()).then(|| -p.get(&0).cloned().unwrap_or_else(Q::zero) / a)
    })?;
    cons.iter()
        .all(|p| eval_cpoly(p, &linear).is_zero())
        .then_some(linear)
}

#[derive(Debug, Clone, Serialize)]
pub struct QBasis {
    pub n: usize,
    /// Value used to build `Q_(n-1)`.
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    /// `(beta - alpha_1) / (1 + alpha_1 - alpha_n)`.
    #[serde(with = "crate::rational::serde_q")]
    pub c_minus: Q,
    /// `(beta - alpha_1) / (1 + alpha_1 + alpha_n)`.
    #[serde(with = "crate::rational::serde_q")]
    pub c_plus: Q,
    /// From the shape solve; `None` if the shape conditions do not pin `c`.
    #[serde(serialize_with = "ser_opt_q")]
    pub c_solved: Option<Q>,
    /// Which candidate the solve agrees with: `minus`, `plus`, `both`, `neither` or `undetermined`.
    pub verdict: String,
    pub labels: Vec<String>,
    /// `tau = z` slices.
    pub slice_labels: Vec<String>,
    /// `Q_k` expanded on `(t theta_t)^j . 1`, `c` kept symbolic; `expansion[k][j]`.
    pub expansion: Vec<Vec<LPoly>>,
}

fn ser_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&fmt_q(v)),
        None => s.serialize_none(),
    }
}

fn label(n: usize, alpha: &[Q], k: usize, c: &Q, slice: bool) -> String {
    let k0 = -qi(n as i64 - 1);
    let name = if slice { "Qbar" } else { "Q" };
    let mut s = format!("{name}_{k} = {}", fmt_q(&num_traits::pow(k0.clone(), k)));
    for a in &alpha[..k] {
        if slice {
            s.push_str(&format!(" * (t*d_t - {})", fmt_q(a)));
        } else {
            s.push_str(&format!(" * (z/tau)(t*d_t - {})", fmt_q(a)));
        }
    }
    if k == n - 1 {
        let corr = num_traits::pow(k0, n - 1) * c;
        s.push_str(&format!(" + {}*t*{name}_0", fmt_q(&corr)));
    }
    s
}

pub fn q_basis(params: &HypParams) -> Result<QBasis> {
    let model = Model::new(params)?;
    let n = model.n;
    let a1 = &model.alpha[0];
    let an = &model.alpha[n - 1];
    let num = &model.beta - a1;
    let one = Q::one();
    let c_minus = &num / (&one + a1 - an);
    let c_plus = &num / (&one + a1 + an);
    let cols = model.q_columns();
    let e = model.matrix(&cols, Model::act_e)?;
    let c_solved = solve_c(&shape_constraints(&e));
    let verdict = match &c_solved {
        None => "undetermined",
        Some(c) => match (*c == c_minus, *c == c_plus) {
            (true, true) => "both",
            (true, false) => "minus",
            (false, true) => "plus",
            (false, false) => "neither",
        },
    }
    .to_string();
    let c = c_solved.clone().unwrap_or_else(|| c_minus.clone());
    Ok(QBasis {
        n,
        labels: (0..n).map(|k| label(n, &model.alpha, k, &c, false)).collect(),
        slice_labels: (0..n).map(|k| label(n, &model.alpha, k, &c, true)).collect(),
        expansion: (0..n).map(|k| cols[k].clone()).collect(),
        c,
        c_minus,
        c_plus,
        c_solved,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectionMatrices {
    pub n: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub epsilon: Q,
    pub a0: Vec<Vec<LPoly>>,
    /// Diagonals.
    #[serde(with = "crate::rational::serde_qvec")]
    pub ainf_prime: Vec<Q>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub ainf: Vec<Q>,
    /// `A_0` as prescribed by the closed-form display for this `n`.
    pub display_a0: Vec<Vec<LPoly>>,
    pub matches_display: bool,
}

fn display_a0(n: usize, c: &Q) -> Vec<Vec<LPoly>> {
    let t = LPoly::var(T, 1);
    let mut a = vec![vec![LPoly::zero(); n]; n];
    for k in 0..n - 1 {
        a[k + 1][k] = LPoly::constant(Q::one());
    }
    let c1 = c + Q::one();
    if n == 2 {
        a[0][0] = t.scale(c);
        a[0][1] = LPoly::var(T, 2).scale(&(c * &c1));
        a[1][1] = t.scale(&c1);
    } else {
        let k = num_traits::pow(-qi(n as i64 - 1), n - 1);
        a[0][n - 2] = t.scale(&(-(&k * c)));
        a[1][n - 1] = t.scale(&(&k * &c1));
    }
    a
}

fn shape_err(what: &str, l: usize, k: usize, x: &LPoly) -> Error {
    Error::Shape(format!("{what} entry ({l}, {k}) = {x}"))
}

pub fn connection_matrices(params: &HypParams) -> Result<ConnectionMatrices> {
    let basis = q_basis(params)?;
    let model = Model::new(params)?;
    let n = model.n;
    let c = basis.c.clone();
    let cols = model.q_columns();
    let ev = |m: Vec<Vector>| -> Vec<Vector> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| x.eval_c(&c)).collect())
            .collect()
    };
    let e = ev(model.matrix(&cols, Model::act_e)?);
    let s = ev(model.matrix(&cols, Model::act_s)?);
    let tm = ev(model.matrix(&cols, Model::act_tau)?);

    let tau = LPoly::var(TAU, 1);
    let z = zvar();
    let nm1 = qi(n as i64 - 1);
    let allowed = t_positions(n);
    let mut a0 = vec![vec![LPoly::zero(); n]; n];
    let mut ainf = vec![Q::zero(); n];
    let mut ainf_prime = vec![Q::zero(); n];
    for l in 0..n {
        for k in 0..n {
            let x = &e[l][k];
            let a = x.slice(0, 1);
            if a.terms().any(|(ex, _)| ex[T] < 0) {
                return Err(shape_err("A_0 (negative t power)", l, k, &a));
            }
            let inf = x.slice(1, 0).as_constant().ok_or_else(|| shape_err("A_inf", l, k, x))?;
            if l != k && !inf.is_zero() {
                return Err(shape_err("A_inf off-diagonal", l, k, x));
            }
            if tau.mul(&a).add(&z.scale(&inf)) != *x {
                return Err(shape_err("z^2 d_z matrix", l, k, x));
            }
            if l == k + 1 && a != LPoly::constant(Q::one()) {
                return Err(shape_err("A_0 subdiagonal", l, k, &a));
            }
            if l != k + 1 && !allowed.contains(&(l, k)) && !a.is_zero() {
                return Err(shape_err("A_0", l, k, &a));
            }
            // t d_t column: (n-1) s = -tau A_0 + z A'_inf
            let sp = s[l][k].scale(&nm1).add(&tau.mul(&a));
            let p = sp
                .mul(&LPoly::var(Z, -1))
                .as_constant()
                .ok_or_else(|| shape_err("t d_t matrix", l, k, &s[l][k]))?;
            if l != k && !p.is_zero() {
                return Err(shape_err("A'_inf off-diagonal", l, k, &s[l][k]));
            }
            if tm[l][k] != x.neg() {
                return Err(shape_err("z tau d_tau matrix", l, k, &tm[l][k]));
            }
            if l == k {
                ainf[l] = inf;
                ainf_prime[l] = p;
            }
            a0[l][k] = a;
        }
    }
    let display = display_a0(n, &c);
    Ok(ConnectionMatrices {
        n,
        matches_display: display == a0,
        display_a0: display,
        c,
        epsilon: model.eps.clone(),
        a0,
        ainf_prime,
        ainf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn p21() -> HypParams {
        HypParams::new(vec![q(0), frac(1, 2)], vec![frac(1, 4)]).unwrap()
    }

    #[test]
    fn basis_n2() {
        let b = q_basis(&p21()).unwrap();
        assert_eq!(b.c_minus, frac(1, 2));
        assert_eq!(b.c_solved, Some(frac(1, 2)));
        assert_eq!(b.verdict, "minus");
        assert!(b.labels[0].starts_with("Q_0 = 1"));
    }

    #[test]
    fn matrices_n2() {
        let m = connection_matrices(&p21()).unwrap();
        assert_eq!(m.ainf_prime, vec![q(0), frac(1, 2)]);
        assert_eq!(m.ainf, vec![frac(-7, 4), frac(-5, 4)]);
        assert_eq!(m.a0[0][0], LPoly::var(T, 1).scale(&frac(1, 2)));
        assert_eq!(m.a0[1][0], LPoly::constant(q(1)));
    }

    #[test]
    fn tau_slice_recovers_theorem() {
        let p = p21();
        let r = rescale(&p).unwrap();
        let slice = r.tau_one_slice().unwrap();
        let thm = crate::hyper::thm_presentation(&p).unwrap();
        assert_eq!(slice.generators(), thm.generators());
    }
}
