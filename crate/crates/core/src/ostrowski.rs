//! Ostrowski numeration with respect to the convergent denominators `q_k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::alpha::ContinuedFraction;
use crate::error::{Error, Result};

/// Digits of `m = Σ c_{k+1}·q_k`; `coeffs[k]` holds `c_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiExpansion {
    pub m: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl OstrowskiExpansion {
    /// The index `M` with `q_M ≤ m < q_{M+1}`; `None` for `m = 0`.
    pub fn top(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// The digit `c_j` (1-based, zero past the top).
    pub fn c(&self, j: usize) -> BigInt {
        assert!(j >= 1, "digits are indexed from c_1");
        self.coeffs.get(j - 1).cloned().unwrap_or_default()
    }

    /// Checks the digit constraints against `cf`.
    pub fn is_valid(&self, cf: &ContinuedFraction) -> bool {
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_negative() || k + 1 > cf.last_index() {
                return false;
            }
            let a = cf.a(k + 1);
            if k == 0 && c >= a {
                return false;
            }
            if c > a {
                return false;
            }
            if k >= 1 && c == a && !self.coeffs[k - 1].is_zero() {
                return false;
            }
        }
        true
    }
}

/// Greedy top-down expansion of `m`; needs `m < q_N` for the last computed `N`.
pub fn ostrowski_expand(m: &BigInt, cf: &ContinuedFraction) -> Result<OstrowskiExpansion> {
    if m.is_negative() {
        return Err(Error::InvalidArgument(format!("cannot expand negative {m}")));
    }
    let last = cf.last_index();
    if m >= cf.q(last) {
        return Err(Error::RangeExceeded { value: m.to_string(), limit: cf.q(last).to_string() });
    }
    let Some(top) = (0..last).rev().find(|&k| cf.q(k) <= m) else {
        return Ok(OstrowskiExpansion { m: m.clone(), coeffs: Vec::new() });
    };
    let mut coeffs = vec![BigInt::zero(); top + 1];
    let mut rest = m.clone();
    for k in (0..=top).rev() {
        let (d, r) = rest.div_rem(cf.q(k));
        coeffs[k] = d;
        rest = r;
    }
    Ok(OstrowskiExpansion { m: m.clone(), coeffs })
}

/// `Σ c_{k+1}·q_k`.
pub fn ostrowski_eval(exp: &OstrowskiExpansion, cf: &ContinuedFraction) -> Result<BigInt> {
    if exp.coeffs.len() > cf.last_index() + 1 {
        return Err(Error::IndexOutOfRange { index: exp.coeffs.len() - 1, last: cf.last_index() });
    }
    Ok(exp.coeffs.iter().enumerate().map(|(k, c)| c * cf.q(k)).sum())
}
