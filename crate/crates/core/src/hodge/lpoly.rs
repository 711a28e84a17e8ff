//! Commutative Laurent polynomials in `z, t, tau` and a symbolic constant `c`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{fmt_q, Q};

pub const Z: usize = 0;
pub const T: usize = 1;
pub const TAU: usize = 2;
pub const C: usize = 3;

const NAMES: [&str; 4] = ["z", "t", "tau", "c"];

pub type Exp = [i32; 4];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LPoly {
    terms: BTreeMap<Exp, Q>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        LPoly::monomial(c, [0; 4])
    }

    pub fn monomial(c: Q, e: Exp) -> Self {
        let mut p = LPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn var(i: usize, k: i32) -> Self {
        let mut e = [0; 4];
        e[i] = k;
        LPoly::monomial(Q::one(), e)
    }

    fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &LPoly) -> LPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LPoly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> LPoly {
        let mut r = LPoly::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, c * k);
        }
        r
    }

    pub fn mul(&self, o: &LPoly) -> LPoly {
        let mut r = LPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                r.add_term(e, x * y);
            }
        }
        r
    }

    /// `v d/dv` for the variable with index `i`.
    pub fn euler(&self, i: usize) -> LPoly {
        let mut r = LPoly::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, c * Q::from_integer(e[i].into()));
        }
        r
    }

    /// Inverse of a single-term polynomial.
    pub fn inverse_monomial(&self) -> Option<LPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(LPoly::monomial(c.recip(), [-e[0], -e[1], -e[2], -e[3]]))
    }

    /// Substitutes a rational value for `c`.
    pub fn eval_c(&self, v: &Q) -> LPoly {
        let mut r = LPoly::zero();
        for (e, x) in &self.terms {
            let mut f = e.to_owned();
            let k = f[C];
            f[C] = 0;
            let pw = if k >= 0 {
                num_traits::pow(v.clone(), k as usize)
            } else {
                num_traits::pow(v.recip(), (-k) as usize)
            };
            r.add_term(f, x * pw);
        }
        r
    }

    /// Groups terms by their `(z, t, tau)` part; values are polynomials in `c`
    /// given as `c`-exponent to coefficient.
    pub fn by_zttau(&self) -> BTreeMap<[i32; 3], BTreeMap<i32, Q>> {
        let mut out: BTreeMap<[i32; 3], BTreeMap<i32, Q>> = BTreeMap::new();
        for (e, x) in &self.terms {
            out.entry([e[Z], e[T], e[TAU]])
                .or_default()
                .insert(e[C], x.clone());
        }
        out
    }

    /// Part with the given `z` and `tau` exponents, as a polynomial in `t` (and `c`).
    pub fn slice(&self, z: i32, tau: i32) -> LPoly {
        let mut r = LPoly::zero();
        for (e, x) in &self.terms {
            if e[Z] == z && e[TAU] == tau {
                r.add_term([0, e[T], 0, e[C]], x.clone());
            }
        }
        r
    }

    /// Value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, x) = self.terms.iter().next()?;
                (*e == [0; 4]).then(|| x.clone())
            }
            _ => None,
        }
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(NAMES[k].to_string()),
                    _ => factors.push(format!("{}^{}", NAMES[k], p)),
                }
            }
            let mag = c.abs();
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for LPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn arithmetic() {
        let t = LPoly::var(T, 1);
        let ti = LPoly::var(T, -1);
        assert_eq!(t.mul(&ti), LPoly::constant(q(1)));
        let p = t.scale(&frac(3, 4)).add(&LPoly::var(Z, 1));
        assert_eq!(p.euler(T), t.scale(&frac(3, 4)));
        assert_eq!(p.to_string(), "z + 3/4*t");
        let pc = LPoly::var(C, 2).mul(&t);
        assert_eq!(pc.eval_c(&q(3)), t.scale(&q(9)));
        assert_eq!(t.inverse_monomial().unwrap(), ti);
        assert!(p.inverse_monomial().is_none());
    }
}
