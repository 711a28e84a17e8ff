//! Helpers around `BigRational`: parsing, formatting and rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    Ok(Q::from_integer(n))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn ceil_q(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Representative of `x` modulo Z in `[0, 1)`.
pub fn frac_part(x: &Q) -> Q {
    x - Q::from_integer(floor_q(x))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Falling factorial `b (b-1) ... (b-k+1)` for any integer `b`.
pub fn falling(b: i64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k as i64 {
        r *= BigInt::from(b - i);
    }
    r
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn gcd_slice(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn lcm_denoms<'a>(v: impl IntoIterator<Item = &'a Q>) -> BigInt {
    v.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

pub fn to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(x.to_string()))
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter writing a rational as `"p/q"`.
pub mod serde_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_q, parse_q, Q};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rationals.
pub mod serde_qvec {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{fmt_q, parse_q, Q};

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/4").unwrap(), frac(3, 4));
        assert_eq!(parse_q("-2").unwrap(), q(-2));
        assert_eq!(parse_q("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_q("-1.5").unwrap(), frac(-3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn format_roundtrip() {
        for s in ["0", "7", "-3/5", "22/7"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(ceil_q(&frac(1, 2)), BigInt::from(1));
        assert_eq!(ceil_q(&frac(-1, 2)), BigInt::from(0));
        assert_eq!(ceil_q(&q(3)), BigInt::from(3));
        assert_eq!(frac_part(&frac(-1, 4)), frac(3, 4));
    }

    #[test]
    fn falling_negative_base() {
        assert_eq!(falling(-2, 3), BigInt::from(-24));
        assert_eq!(falling(2, 3), BigInt::from(0));
    }
}
