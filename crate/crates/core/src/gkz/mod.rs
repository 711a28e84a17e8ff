//! GKZ presentations attached to an integer matrix and a parameter vector.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{check_full_lattice, kernel_basis, IntMatrix};
use crate::ore::{attach_z2dz, rees_homogenize, Exponents, OrePoly, OreSignature, Presentation};
use crate::rational::{fmt_q, Q};

/// The `(N-1) x N` matrix `[1_m | 0 | Id_m ; 1_{n-1} | -Id_{n-1} | 0]`.
pub fn family_matrix(n: usize, m: usize) -> Result<IntMatrix> {
    if n < 1 || n + m < 2 {
        return Err(Error::Params(format!(
            "family matrix needs n >= 1 and n + m >= 2, got ({n}, {m})"
        )));
    }
    let big_n = n + m;
    let d = big_n - 1;
    let mut rows = vec![vec![0i64; big_n]; d];
    for (r, row) in rows.iter_mut().enumerate() {
        row[0] = 1;
        if r < m {
            row[n + r] = 1;
        } else {
            row[1 + (r - m)] = -1;
        }
    }
    IntMatrix::from_rows(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkzData {
    pub a: IntMatrix,
    #[serde(with = "crate::rational::serde_qvec")]
    pub beta: Vec<Q>,
}

impl GkzData {
    pub fn new(a: IntMatrix, beta: Vec<Q>) -> Result<Self> {
        if beta.len() != a.nrows() {
            return Err(Error::Params(format!(
                "beta has length {}, matrix has {} rows",
                beta.len(),
                a.nrows()
            )));
        }
        if !check_full_lattice(&a) {
            return Err(Error::Params("columns of A do not generate Z^d".into()));
        }
        Ok(GkzData { a, beta })
    }

    pub fn n_cols(&self) -> usize {
        self.a.ncols()
    }
}

/// Lattice relations `l` (with `A l = 0`) behind the box operators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxGeneratorSet {
    pub vectors: Vec<Vec<i64>>,
    pub degree_bound: u32,
}

fn sign_normal(v: Vec<i64>) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.into_iter().map(|y| -y).collect(),
        _ => v,
    }
}

/// All `l` in the kernel lattice with `|l|_1 <= degree_bound` up to sign,
/// together with a kernel basis.
pub fn build_box_generators(a: &IntMatrix, degree_bound: u32) -> Result<BoxGeneratorSet> {
    let basis = kernel_basis(a)?;
    let n = a.ncols();
    let mut found: BTreeSet<Vec<i64>> = basis.iter().cloned().map(sign_normal).collect();
    if !basis.is_empty() {
        let mut cur = vec![0i64; n];
        enumerate_l1(a, &mut cur, 0, degree_bound as i64, &mut found);
    }
    let mut vectors: Vec<Vec<i64>> = found.into_iter().collect();
    vectors.sort_by_key(|v| {
        (
            v.iter().map(|x| x.abs()).sum::<i64>(),
            std::cmp::Reverse(v.clone()),
        )
    });
    Ok(BoxGeneratorSet {
        vectors,
        degree_bound,
    })
}

fn enumerate_l1(
    a: &IntMatrix,
    cur: &mut Vec<i64>,
    idx: usize,
    left: i64,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if idx == cur.len() {
        if cur.iter().any(|&x| x != 0) && a.mul_vec(cur).iter().all(|&x| x == 0) {
            out.insert(sign_normal(cur.clone()));
        }
        return;
    }
    for v in -left..=left {
        cur[idx] = v;
        enumerate_l1(a, cur, idx + 1, left - v.abs(), out);
    }
    cur[idx] = 0;
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Default box bound: the largest `|l|_1` in the kernel basis.
fn default_bound(a: &IntMatrix) -> Result<u32> {
    Ok(kernel_basis(a)?
        .iter()
        .map(|v| v.iter().map(|x| x.unsigned_abs() as u32).sum())
        .max()
        .unwrap_or(0))
}

fn monomial(sig: &Arc<OreSignature>, x: &[i64], theta: &[i64]) -> Result<OrePoly> {
    let mut ex = Exponents::one(sig.nvars());
    for (i, (&b, &c)) in x.iter().zip(theta).enumerate() {
        ex.x[i] = b as i32;
        ex.theta[i] = c as u32;
    }
    OrePoly::monomial(sig, Q::one(), ex)
}

fn split(l: &[i64]) -> (Vec<i64>, Vec<i64>) {
    (
        l.iter().map(|&x| x.max(0)).collect(),
        l.iter().map(|&x| (-x).max(0)).collect(),
    )
}

/// Box operators with derivations: `prod theta^{l+} - prod theta^{l-}`.
fn theta_boxes(sig: &Arc<OreSignature>, set: &BoxGeneratorSet) -> Result<Vec<OrePoly>> {
    let zero = vec![0; sig.nvars()];
    set.vectors
        .iter()
        .map(|l| {
            let (p, m) = split(l);
            monomial(sig, &zero, &p)?.sub(&monomial(sig, &zero, &m)?)
        })
        .collect()
}

/// Sum of `a_ki x_i theta_i` over the columns.
fn euler_part(
    sig: &Arc<OreSignature>,
    a: &IntMatrix,
    k: usize,
    names: &[String],
) -> Result<OrePoly> {
    let mut acc = OrePoly::zero(sig);
    for (i, v) in names.iter().enumerate() {
        let c = a.get(k, i);
        if c != 0 {
            let term = OrePoly::var(sig, v)?.mul(&OrePoly::theta(sig, v)?)?;
            acc = acc.add(&term.scale(&Q::from_integer(c.into())))?;
        }
    }
    Ok(acc)
}

fn with_shape_meta(p: Presentation, data: &GkzData, bound: u32) -> Presentation {
    p.with_meta("N", data.a.ncols().to_string())
        .with_meta("d", data.a.nrows().to_string())
        .with_meta("box_bound", bound.to_string())
        .with_meta(
            "beta",
            data.beta.iter().map(fmt_q).collect::<Vec<_>>().join(","),
        )
}

/// `E_k = sum a_ki l_i d_i - beta_k` and `prod d^{l+} - prod d^{l-}` (classical).
pub fn build_m(data: &GkzData, box_bound: Option<u32>) -> Result<Presentation> {
    let bound = match box_bound {
        Some(b) => b,
        None => default_bound(&data.a)?,
    };
    let vars = names("l", data.n_cols());
    let sig = OreSignature::classical(&vars, &[] as &[String])?;
    let mut gens = Vec::new();
    for (k, b) in data.beta.iter().enumerate() {
        gens.push(euler_part(&sig, &data.a, k, &vars)?.sub(&OrePoly::constant(&sig, b.clone()))?);
    }
    gens.extend(theta_boxes(&sig, &build_box_generators(&data.a, bound)?)?);
    Ok(with_shape_meta(Presentation::new(&sig, gens)?, data, bound))
}

/// `E_k = sum a_ki d_i w_i + beta_k` and `prod w^{l+} - prod w^{l-}` (classical).
pub fn build_check_m(data: &GkzData, box_bound: Option<u32>) -> Result<Presentation> {
    let bound = match box_bound {
        Some(b) => b,
        None => default_bound(&data.a)?,
    };
    let vars = names("w", data.n_cols());
    let sig = OreSignature::classical(&vars, &[] as &[String])?;
    let zero = vec![0; vars.len()];
    let mut gens = Vec::new();
    for (k, b) in data.beta.iter().enumerate() {
        let mut acc = OrePoly::constant(&sig, b.clone());
        for (i, v) in vars.iter().enumerate() {
            let c = data.a.get(k, i);
            if c != 0 {
                let dw = OrePoly::theta(&sig, v)?.mul(&OrePoly::var(&sig, v)?)?;
                acc = acc.add(&dw.scale(&Q::from_integer(c.into())))?;
            }
        }
        gens.push(acc);
    }
    for l in &build_box_generators(&data.a, bound)?.vectors {
        let (p, m) = split(l);
        gens.push(monomial(&sig, &p, &zero)?.sub(&monomial(&sig, &m, &zero)?)?);
    }
    Ok(with_shape_meta(Presentation::new(&sig, gens)?, data, bound))
}

/// Rees module of the w-side system with the `z^2 d_z - z` generator attached.
pub fn build_z_check_n(data: &GkzData, box_bound: Option<u32>) -> Result<Presentation> {
    attach_z2dz(
        &rees_homogenize(&build_check_m(data, box_bound)?)?,
        &Q::one(),
    )
}

/// `E_0 = z^2 d_z + sum l_i theta_i`, `E_k = sum a_ki l_i theta_i - z beta_k`,
/// and the theta box operators.
pub fn build_n(data: &GkzData, box_bound: Option<u32>) -> Result<Presentation> {
    let bound = match box_bound {
        Some(b) => b,
        None => default_bound(&data.a)?,
    };
    let vars = names("l", data.n_cols());
    let sig = OreSignature::new(&vars, &[] as &[String], true)?;
    let mut e0 = OrePoly::z2dz(&sig)?;
    for v in &vars {
        e0 = e0.add(&OrePoly::var(&sig, v)?.mul(&OrePoly::theta(&sig, v)?)?)?;
    }
    let mut gens = vec![e0];
    let z = OrePoly::z(&sig);
    for (k, b) in data.beta.iter().enumerate() {
        gens.push(euler_part(&sig, &data.a, k, &vars)?.sub(&z.scale(b))?);
    }
    gens.extend(theta_boxes(&sig, &build_box_generators(&data.a, bound)?)?);
    Ok(with_shape_meta(Presentation::new(&sig, gens)?, data, bound))
}
