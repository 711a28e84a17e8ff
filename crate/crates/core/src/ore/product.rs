//! Product of two normal-ordered monomials.
//!
//! Relations: `theta_i x_i^b = x_i^b theta_i + b z x_i^(b-1)`,
//! `(z^2 d_z) z = z (z^2 d_z) + z^2`, `(z^2 d_z) theta_i = theta_i (z^2 d_z) + z theta_i`,
//! and `z^2 d_z` commutes with the base variables. Consequently for an
//! `E`-free monomial `u` of z-weight `w`, `E^e u = u (E + w z)^e`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{check_exponents, normalize_classical, Exponents};
use super::signature::OreSignature;
use crate::error::Result;
use crate::rational::{binomial, falling, Q};

thread_local! {
    static SHIFT_POWERS: RefCell<HashMap<(u32, u64), Rc<Vec<BigInt>>>> = RefCell::new(HashMap::new());
}

/// Coefficients `c_i` with `(E + w z)^e = sum_i c_i z^(e-i) E^i`.
pub(crate) fn shifted_power(e: u32, w: u64) -> Rc<Vec<BigInt>> {
    if let Some(v) = SHIFT_POWERS.with(|m| m.borrow().get(&(e, w)).cloned()) {
        return v;
    }
    let v = if e == 0 {
        vec![BigInt::one()]
    } else {
        let prev = shifted_power(e - 1, w);
        let mut out = vec![BigInt::zero(); e as usize + 1];
        for i in 1..=e as usize {
            out[i] += &prev[i - 1];
        }
        if w != 0 {
            let wb = BigInt::from(w);
            for (ip, cp) in prev.iter().enumerate() {
                if cp.is_zero() {
                    continue;
                }
                let unit = shifted_power(ip as u32, 1);
                for (l, cl) in unit.iter().enumerate() {
                    out[l] += &wb * cp * cl;
                }
            }
        }
        out
    };
    let v = Rc::new(v);
    SHIFT_POWERS.with(|m| m.borrow_mut().insert((e, w), v.clone()));
    v
}

pub(crate) fn mul_monomials(
    sig: &OreSignature,
    a: &Exponents,
    b: &Exponents,
) -> Result<Vec<(Exponents, Q)>> {
    let n = sig.nvars();
    let w = b.z as u64 + b.theta.iter().map(|&c| c as u64).sum::<u64>();
    let shift = shifted_power(a.e, w);

    // per-variable Weyl reordering theta^c x^b
    let mut per_var: Vec<Vec<(u32, BigInt)>> = Vec::with_capacity(n);
    for i in 0..n {
        let c = a.theta[i] as u64;
        let bx = b.x[i] as i64;
        let mut opts = Vec::new();
        for k in 0..=c {
            let f = falling(bx, k);
            if f.is_zero() {
                continue;
            }
            opts.push((k as u32, binomial(c, k) * f));
        }
        per_var.push(opts);
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut coef = BigInt::one();
        let mut ex = Exponents::one(n);
        let mut zk = 0u32;
        for i in 0..n {
            let (k, ref c) = per_var[i][idx[i]];
            coef *= c;
            zk += k;
            ex.x[i] = a.x[i] + b.x[i] - k as i32;
            ex.theta[i] = a.theta[i] - k + b.theta[i];
        }
        for (i, ci) in shift.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let mut e2 = ex.clone();
            e2.z = a.z + b.z + zk + (a.e - i as u32);
            e2.e = i as u32 + b.e;
            check_exponents(sig, &e2)?;
            out.push((normalize_classical(sig, e2), Q::from_integer(&coef * ci)));
        }
        // advance the mixed-radix counter
        let mut pos = 0;
        while pos < n {
            idx[pos] += 1;
            if idx[pos] < per_var[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_power_small_cases() {
        assert_eq!(*shifted_power(1, 3), vec![BigInt::from(3), BigInt::from(1)]);
        // (E + z)^2 = E^2 + 2 z E + 2 z^2
        assert_eq!(
            *shifted_power(2, 1),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(1)]
        );
        assert_eq!(
            *shifted_power(3, 0),
            vec![
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::one()
            ]
        );
    }
}
