use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::product;
use super::signature::OreSignature;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Exponent profile of a normal-ordered monomial `z^z x^x theta^theta (z^2 d_z)^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponents {
    pub z: u32,
    pub x: Vec<i32>,
    pub theta: Vec<u32>,
    pub e: u32,
}

impl Exponents {
    pub fn one(nvars: usize) -> Self {
        Exponents {
            z: 0,
            x: vec![0; nvars],
            theta: vec![0; nvars],
            e: 0,
        }
    }

    pub fn is_one(&self) -> bool {
        self.z == 0
            && self.e == 0
            && self.x.iter().all(|&b| b == 0)
            && self.theta.iter().all(|&c| c == 0)
    }

    /// Sum of absolute exponents over every symbol.
    pub fn total_degree(&self) -> u32 {
        self.z
            + self.e
            + self.x.iter().map(|b| b.unsigned_abs()).sum::<u32>()
            + self.theta.iter().sum::<u32>()
    }

    /// Degree for the grading `deg z = deg theta = deg z^2 d_z = 1`, base variables 0.
    pub fn z_weight(&self) -> u32 {
        self.z + self.e + self.theta.iter().sum::<u32>()
    }

    pub fn theta_order(&self) -> u32 {
        self.theta.iter().sum()
    }
}

/// Lexicographic on `(z, x.., theta.., e)` read from the right, so `z` is the
/// least significant coordinate.
impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.e
            .cmp(&other.e)
            .then_with(|| self.theta.iter().rev().cmp(other.theta.iter().rev()))
            .then_with(|| self.x.iter().rev().cmp(other.x.iter().rev()))
            .then_with(|| self.z.cmp(&other.z))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A single generator of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Z,
    Var(String),
    Theta(String),
    Z2Dz,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Z => write!(f, "z"),
            Symbol::Var(v) => write!(f, "{v}"),
            Symbol::Theta(v) => write!(f, "th[{v}]"),
            Symbol::Z2Dz => write!(f, "z2dz"),
        }
    }
}

/// A normal-ordered element with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct OrePoly {
    sig: Arc<OreSignature>,
    terms: BTreeMap<Exponents, Q>,
}

impl PartialEq for OrePoly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig) && self.terms == other.terms
    }
}

impl Eq for OrePoly {}

impl OrePoly {
    pub fn zero(sig: &Arc<OreSignature>) -> Self {
        OrePoly {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(sig: &Arc<OreSignature>, c: Q) -> Self {
        Self::monomial(sig, c, Exponents::one(sig.nvars()))
            .expect("constant monomial is always valid")
    }

    pub fn one(sig: &Arc<OreSignature>) -> Self {
        Self::constant(sig, Q::one())
    }

    pub fn monomial(sig: &Arc<OreSignature>, c: Q, exps: Exponents) -> Result<Self> {
        let mut p = Self::zero(sig);
        check_exponents(sig, &exps)?;
        let exps = normalize_classical(sig, exps);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        Ok(p)
    }

    pub fn symbol(sig: &Arc<OreSignature>, s: &Symbol) -> Result<Self> {
        let n = sig.nvars();
        let mut ex = Exponents::one(n);
        match s {
            Symbol::Z => {
                if sig.is_classical() {
                    return Ok(Self::one(sig));
                }
                ex.z = 1
            }
            Symbol::Var(v) => {
                ex.x[sig
                    .index_of(v)
                    .ok_or_else(|| Error::UnmappedSymbol(v.clone()))?] = 1
            }
            Symbol::Theta(v) => {
                ex.theta[sig
                    .index_of(v)
                    .ok_or_else(|| Error::UnmappedSymbol(v.clone()))?] = 1
            }
            Symbol::Z2Dz => {
                if !sig.has_z2dz() {
                    return Err(Error::UnmappedSymbol("z2dz".into()));
                }
                ex.e = 1
            }
        }
        Self::monomial(sig, Q::one(), ex)
    }

    pub fn z(sig: &Arc<OreSignature>) -> Self {
        Self::symbol(sig, &Symbol::Z).expect("z exists in every signature")
    }

    pub fn var(sig: &Arc<OreSignature>, name: &str) -> Result<Self> {
        Self::symbol(sig, &Symbol::Var(name.into()))
    }

    pub fn theta(sig: &Arc<OreSignature>, name: &str) -> Result<Self> {
        Self::symbol(sig, &Symbol::Theta(name.into()))
    }

    pub fn z2dz(sig: &Arc<OreSignature>) -> Result<Self> {
        Self::symbol(sig, &Symbol::Z2Dz)
    }

    pub fn from_terms(
        sig: &Arc<OreSignature>,
        terms: impl IntoIterator<Item = (Exponents, Q)>,
    ) -> Result<Self> {
        let mut p = Self::zero(sig);
        for (ex, c) in terms {
            if ex.x.len() != sig.nvars() || ex.theta.len() != sig.nvars() {
                return Err(Error::SignatureMismatch);
            }
            check_exponents(sig, &ex)?;
            p.add_term(normalize_classical(sig, ex), c);
        }
        Ok(p)
    }

    pub fn signature(&self) -> &Arc<OreSignature> {
        &self.sig
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Exponents, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, ex: &Exponents) -> Q {
        self.terms.get(ex).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, ex: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(ex) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_sig(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut r = self.clone();
        for (ex, c) in &other.terms {
            r.add_term(ex.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut r = self.clone();
        for (ex, c) in &other.terms {
            r.add_term(ex.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        OrePoly {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Normal-ordered product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut r = Self::zero(&self.sig);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let cc = c1 * c2;
                for (ex, k) in product::mul_monomials(&self.sig, e1, e2)? {
                    r.add_term(ex, &cc * k);
                }
            }
        }
        Ok(r)
    }

    /// Left-multiplies by a single normal-ordered monomial with coefficient one.
    pub fn mul_monomial_left(&self, ex: &Exponents) -> Result<Self> {
        let mut r = Self::zero(&self.sig);
        for (e2, c2) in &self.terms {
            for (out, k) in product::mul_monomials(&self.sig, ex, e2)? {
                r.add_term(out, c2 * k);
            }
        }
        Ok(r)
    }

    /// `self^k` for `k >= 0`; negative powers only for unit monomials.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse_unit()?.pow(-k);
        }
        let mut acc = Self::one(&self.sig);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of `c * x^b` with every variable of `b` invertible.
    pub fn inverse_unit(&self) -> Result<Self> {
        let name = || format!("{self}");
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(name()));
        }
        let (ex, c) = self.terms.iter().next().expect("one term");
        if ex.z != 0 || ex.e != 0 || ex.theta.iter().any(|&t| t != 0) {
            return Err(Error::NotInvertible(name()));
        }
        for (i, &b) in ex.x.iter().enumerate() {
            if b != 0 && !self.sig.is_invertible(i) {
                return Err(Error::NotInvertible(name()));
            }
        }
        let mut inv = ex.clone();
        for b in inv.x.iter_mut() {
            *b = -*b;
        }
        Self::monomial(&self.sig, c.recip(), inv)
    }

    /// Canonical re-normalisation (rebuilds the term map); idempotent.
    pub fn renormalized(&self) -> Self {
        let mut r = Self::zero(&self.sig);
        for (e, c) in &self.terms {
            r.add_term(normalize_classical(&self.sig, e.clone()), c.clone());
        }
        r
    }

    /// Homogeneous for the `z`-grading (`z`, `theta`, `z^2 d_z` of degree one).
    pub fn is_z_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.z_weight());
        match it.next() {
            None => true,
            Some(w) => it.all(|v| v == w),
        }
    }

    /// Moves the polynomial to an equal signature (structural copy).
    pub fn with_signature(&self, sig: &Arc<OreSignature>) -> Result<Self> {
        if **sig != *self.sig {
            return Err(Error::SignatureMismatch);
        }
        Ok(OrePoly {
            sig: sig.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Drops every coordinate of the variables not in `target`, which must be
    /// absent from the polynomial.
    pub fn restrict_to(&self, target: &Arc<OreSignature>) -> Result<Self> {
        let map: Vec<Option<usize>> = self
            .sig
            .base_vars()
            .iter()
            .map(|v| target.index_of(v))
            .collect();
        let mut out = Self::zero(target);
        for (ex, c) in &self.terms {
            let mut ne = Exponents::one(target.nvars());
            ne.z = ex.z;
            ne.e = ex.e;
            if ne.e > 0 && !target.has_z2dz() {
                return Err(Error::UnmappedSymbol("z2dz".into()));
            }
            for (i, slot) in map.iter().enumerate() {
                match slot {
                    Some(j) => {
                        ne.x[*j] = ex.x[i];
                        ne.theta[*j] = ex.theta[i];
                    }
                    None => {
                        if ex.x[i] != 0 || ex.theta[i] != 0 {
                            return Err(Error::UnmappedSymbol(self.sig.base_vars()[i].clone()));
                        }
                    }
                }
            }
            check_exponents(target, &ne)?;
            out.add_term(normalize_classical(target, ne), c.clone());
        }
        Ok(out)
    }

    /// Embeds into a signature containing every variable of this one.
    pub fn embed_into(&self, target: &Arc<OreSignature>) -> Result<Self> {
        if self.sig.has_z2dz() && !target.has_z2dz() {
            return Err(Error::SignatureMismatch);
        }
        let mut idx = Vec::with_capacity(self.sig.nvars());
        for v in self.sig.base_vars() {
            idx.push(
                target
                    .index_of(v)
                    .ok_or_else(|| Error::UnmappedSymbol(v.clone()))?,
            );
        }
        let mut out = Self::zero(target);
        for (ex, c) in &self.terms {
            let mut ne = Exponents::one(target.nvars());
            ne.z = ex.z;
            ne.e = ex.e;
            for (i, &j) in idx.iter().enumerate() {
                ne.x[j] = ex.x[i];
                ne.theta[j] = ex.theta[i];
            }
            check_exponents(target, &ne)?;
            out.add_term(normalize_classical(target, ne), c.clone());
        }
        Ok(out)
    }
}

pub(crate) fn check_exponents(sig: &OreSignature, ex: &Exponents) -> Result<()> {
    for (i, &b) in ex.x.iter().enumerate() {
        if b < 0 && !sig.is_invertible(i) {
            return Err(Error::NegativeExponent {
                var: sig.base_vars()[i].clone(),
                exp: b as i64,
            });
        }
    }
    if ex.e > 0 && !sig.has_z2dz() {
        return Err(Error::UnmappedSymbol("z2dz".into()));
    }
    Ok(())
}

pub(crate) fn normalize_classical(sig: &OreSignature, mut ex: Exponents) -> Exponents {
    if sig.is_classical() {
        ex.z = 0;
    }
    ex
}

impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let th = if self.sig.is_classical() { "d" } else { "th" };
        for (i, (ex, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            if ex.z > 0 {
                factors.push(pow_str("z", ex.z as i64));
            }
            for (v, &b) in self.sig.base_vars().iter().zip(&ex.x) {
                if b != 0 {
                    factors.push(pow_str(v, b as i64));
                }
            }
            for (v, &t) in self.sig.base_vars().iter().zip(&ex.theta) {
                if t != 0 {
                    factors.push(pow_str(&format!("{th}[{v}]"), t as i64));
                }
            }
            if ex.e > 0 {
                factors.push(pow_str("z2dz", ex.e as i64));
            }
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_q(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn pow_str(base: &str, k: i64) -> String {
    if k == 1 {
        base.to_string()
    } else if k < 0 {
        format!("{base}^({k})")
    } else {
        format!("{base}^{k}")
    }
}
