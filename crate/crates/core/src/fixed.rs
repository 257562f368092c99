//! 192-bit fixed-point arithmetic on ℝ/ℤ with certified error tracking.
//!
//! The hot loops walk the orbit `m ↦ mα mod 1` one addition at a time. Each
//! point carries the width (in units of 2⁻¹⁹²) of an interval that is
//! guaranteed to contain the true value, so every conversion to `f64` either
//! meets the 2⁻⁵⁰ relative-error contract or reports that it cannot.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::exact::{pow2, Real};

/// A point of ℝ/ℤ, `(hi·2⁶⁴ + lo)·2⁻¹⁹²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fx {
    hi: u128,
    lo: u64,
}

impl Fx {
    pub const ZERO: Fx = Fx { hi: 0, lo: 0 };
    pub const HALF: Fx = Fx { hi: 1 << 127, lo: 0 };
    pub const FRAC_BITS: u32 = 192;

    pub const fn from_parts(hi: u128, lo: u64) -> Self {
        Fx { hi, lo }
    }

    /// A small count of ulps.
    pub const fn from_ulps(v: u128) -> Self {
        Fx { hi: v >> 64, lo: v as u64 }
    }

    /// `v << s` ulps, or `None` if it does not fit below 1.
    pub fn from_ulps_shl(v: u128, s: u32) -> Option<Self> {
        if v == 0 {
            return Some(Fx::ZERO);
        }
        let bits = 128 - v.leading_zeros() + s;
        if bits > Self::FRAC_BITS {
            return None;
        }
        if s >= 64 {
            Some(Fx { hi: v << (s - 64), lo: 0 })
        } else if s == 0 {
            Some(Fx::from_ulps(v))
        } else {
            let low = v << s;
            let overflow = v >> (128 - s);
            Some(Fx { hi: (low >> 64) | (overflow << 64), lo: low as u64 })
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0 && self.lo == 0
    }

    #[inline]
    pub fn wrapping_add(self, o: Fx) -> Fx {
        let (lo, carry) = self.lo.overflowing_add(o.lo);
        Fx { hi: self.hi.wrapping_add(o.hi).wrapping_add(carry as u128), lo }
    }

    #[inline]
    pub fn wrapping_sub(self, o: Fx) -> Fx {
        let (lo, borrow) = self.lo.overflowing_sub(o.lo);
        Fx { hi: self.hi.wrapping_sub(o.hi).wrapping_sub(borrow as u128), lo }
    }

    #[inline]
    pub fn wrapping_neg(self) -> Fx {
        Fx::ZERO.wrapping_sub(self)
    }

    pub fn checked_add(self, o: Fx) -> Option<Fx> {
        let s = self.wrapping_add(o);
        (s >= self).then_some(s)
    }

    #[inline]
    pub fn wrapping_mul_u64(self, m: u64) -> Fx {
        let p = self.lo as u128 * m as u128;
        Fx { hi: self.hi.wrapping_mul(m as u128).wrapping_add(p >> 64), lo: p as u64 }
    }

    /// Unsigned value in [0, 1) as a double (round-to-nearest on the top bits).
    #[inline]
    pub fn to_f64(self) -> f64 {
        if self.hi != 0 {
            let lz = self.hi.leading_zeros();
            let tail = match lz {
                0 => 0,
                1..=64 => (self.lo as u128) >> (64 - lz),
                _ => (self.lo as u128) << (lz - 64),
            };
            let top = (self.hi << lz) | tail;
            top as f64 * pow2(-128 - lz as i64)
        } else {
            self.lo as f64 * pow2(-192)
        }
    }

    /// The top 96 fractional bits, truncated.
    pub fn top96(self) -> u128 {
        self.hi >> 32
    }

    pub fn to_biguint(self) -> BigUint {
        (BigUint::from(self.hi) << 64usize) + BigUint::from(self.lo)
    }

    /// Reduces an integer count of ulps modulo 2¹⁹².
    pub fn from_bigint_mod(v: &BigInt) -> Fx {
        let modulus = BigInt::one() << 192usize;
        let r = ((v % &modulus) + &modulus) % &modulus;
        let r = r.to_biguint().expect("non-negative");
        let lo = (&r & BigUint::from(u64::MAX)).to_u64().expect("fits");
        let hi = (r >> 64usize).to_u128().expect("fits");
        Fx { hi, lo }
    }

    /// `(negative, |x|)` for the signed representative in (−1/2, 1/2].
    pub fn signed_magnitude(self) -> (bool, Fx) {
        if self > Fx::HALF {
            (true, self.wrapping_neg())
        } else {
            (false, self)
        }
    }
}

/// An enclosure `[value, value + width]` (mod 1) of a point of ℝ/ℤ, with
/// `width` in units of 2⁻¹⁹². `u128::MAX` marks an unknown width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub value: Fx,
    pub width: u128,
}

const MAX_CERT_WIDTH: u128 = 1 << 126;

impl FixedPoint {
    pub const ZERO: FixedPoint = FixedPoint { value: Fx::ZERO, width: 0 };

    /// Encloses the fractional part of `x`.
    pub fn from_real(x: &Real) -> FixedPoint {
        let scale = BigInt::one() << 192usize;
        match x {
            Real::Exact(q) => {
                let frac = q.add_int(&-q.floor());
                let scaled = frac.mul_int(&scale);
                let v = scaled.floor();
                let width = match scaled.as_ratio() {
                    Some(r) if r.is_integer() => 0,
                    _ => 1,
                };
                FixedPoint { value: Fx::from_bigint_mod(&v), width }
            }
            Real::Enclosure { lo, hi } => {
                let fl = lo.floor().to_integer();
                let lo_s = (lo - BigRational::from_integer(fl.clone())) * BigRational::from_integer(scale.clone());
                let v = lo_s.floor().to_integer();
                if hi.floor().to_integer() != fl {
                    return FixedPoint { value: Fx::from_bigint_mod(&v), width: u128::MAX };
                }
                let hi_s = (hi - BigRational::from_integer(fl)) * BigRational::from_integer(scale);
                let top = hi_s.ceil().to_integer();
                let width = (top - &v).to_u128().unwrap_or(u128::MAX);
                FixedPoint { value: Fx::from_bigint_mod(&v), width }
            }
        }
    }

    #[inline]
    pub fn add(self, o: FixedPoint) -> FixedPoint {
        FixedPoint { value: self.value.wrapping_add(o.value), width: self.width.saturating_add(o.width) }
    }

    /// The enclosure of `k·x`.
    #[inline]
    pub fn scale(self, k: u64) -> FixedPoint {
        FixedPoint { value: self.value.wrapping_mul_u64(k), width: self.width.saturating_mul(k as u128) }
    }

    /// Iterates `(k, k·x)` for `k = 1, 2, …`.
    pub fn multiples(self) -> Multiples {
        Multiples { step: self, cur: FixedPoint::ZERO, k: 0 }
    }

    /// Certified `{{x}}` with relative error ≤ 2⁻⁵⁰, or `None` when the
    /// enclosure touches 0 or ±1/2 or is too wide relative to `|x|`.
    #[inline]
    pub fn signed_frac(&self) -> Option<f64> {
        let w = self.width;
        if w > MAX_CERT_WIDTH {
            return None;
        }
        let w_fx = Fx::from_ulps(w);
        let guard = Fx::from_ulps_shl(w, 50)?;
        let half_w = Fx::from_ulps(w / 2);
        if self.value <= Fx::HALF {
            let upper = self.value.checked_add(w_fx)?;
            if upper > Fx::HALF || self.value.is_zero() || self.value < guard {
                return None;
            }
            Some(self.value.wrapping_add(half_w).to_f64())
        } else {
            let mag = self.value.wrapping_neg();
            if mag <= w_fx {
                return None;
            }
            let min_mag = mag.wrapping_sub(w_fx);
            if min_mag < guard {
                return None;
            }
            Some(-mag.wrapping_sub(half_w).to_f64())
        }
    }

    /// Certified lower bound on the distance to the nearest integer.
    pub fn dist_lower(&self) -> Fx {
        let w = Fx::from_ulps(self.width.min(MAX_CERT_WIDTH));
        let Some(upper) = self.value.checked_add(w) else {
            return Fx::ZERO;
        };
        let from_below = self.value;
        let from_above = upper.wrapping_neg();
        if upper.is_zero() {
            return Fx::ZERO;
        }
        match from_below.cmp(&from_above) {
            Ordering::Less => from_below,
            _ => from_above,
        }
    }

    /// The signed representative as an angle, absolute error below 2⁻⁹⁰.
    #[inline]
    pub fn angle(&self) -> Option<f64> {
        if self.width > 1 << 100 {
            return None;
        }
        let mid = self.value.wrapping_add(Fx::from_ulps(self.width / 2));
        let (neg, mag) = mid.signed_magnitude();
        let v = mag.to_f64();
        Some(if neg { -v } else { v })
    }
}

pub struct Multiples {
    step: FixedPoint,
    cur: FixedPoint,
    k: u64,
}

impl Iterator for Multiples {
    type Item = (u64, FixedPoint);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        self.k = self.k.checked_add(1)?;
        self.cur = self.cur.add(self.step);
        Some((self.k, self.cur))
    }
}

/// Exact comparison `x > 1/(2q)` for a fixed-point lower bound `x`.
pub fn exceeds_inverse(x: Fx, q: &BigInt) -> bool {
    if !q.is_positive() {
        return false;
    }
    let lhs = BigInt::from(x.to_biguint()) * q * 2;
    lhs > BigInt::one() << 192usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QuadElem;

    #[test]
    fn wrapping_arithmetic_carries() {
        let a = Fx::from_parts(0, u64::MAX);
        let b = Fx::from_ulps(1);
        assert_eq!(a.wrapping_add(b), Fx::from_parts(1, 0));
        assert_eq!(Fx::from_parts(1, 0).wrapping_sub(b), a);
        let x = Fx::from_parts(3, 1 << 63);
        assert_eq!(x.wrapping_mul_u64(2), Fx::from_parts(7, 0));
        assert_eq!(Fx::HALF.wrapping_mul_u64(2), Fx::ZERO);
    }

    #[test]
    fn shifted_ulps() {
        assert_eq!(Fx::from_ulps_shl(1, 64), Some(Fx::from_parts(1, 0)));
        assert_eq!(Fx::from_ulps_shl(3, 63), Some(Fx::from_parts(1, 1 << 63)));
        assert_eq!(Fx::from_ulps_shl(1, 191), Some(Fx::HALF));
        assert_eq!(Fx::from_ulps_shl(1, 192), None);
    }

    #[test]
    fn to_f64_matches_quarters() {
        assert_eq!(Fx::HALF.to_f64(), 0.5);
        assert_eq!(Fx::from_parts(1 << 126, 0).to_f64(), 0.25);
        assert_eq!(Fx::from_ulps(1 << 63).to_f64(), pow2(-129));
        assert_eq!(Fx::from_ulps_shl(1, 100).unwrap().to_f64(), pow2(-92));
    }

    #[test]
    fn phi_orbit_signed_fracs() {
        let phi = Real::Exact(QuadElem::surd(1, 5, 2));
        let fp = FixedPoint::from_real(&phi);
        let mut it = fp.multiples();
        let (_, p1) = it.next().unwrap();
        let (_, p2) = it.next().unwrap();
        let s5 = 5f64.sqrt();
        assert!((p1.signed_frac().unwrap() - (s5 - 3.0) / 2.0).abs() < 1e-15);
        assert!((p2.signed_frac().unwrap() - (s5 - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn wide_enclosures_are_not_certified() {
        let p = FixedPoint { value: Fx::from_ulps(1 << 100), width: 1 << 60 };
        assert_eq!(p.signed_frac(), None);
        let q = FixedPoint { value: Fx::HALF.wrapping_sub(Fx::from_ulps(5)), width: 10 };
        assert_eq!(q.signed_frac(), None);
        let near_zero = FixedPoint { value: Fx::ZERO.wrapping_sub(Fx::from_ulps(5)), width: 10 };
        assert_eq!(near_zero.signed_frac(), None);
        assert_eq!(near_zero.dist_lower(), Fx::ZERO);
    }

    #[test]
    fn exceeds_inverse_is_exact() {
        // 1/8 vs 1/(2·4): equal, so not strictly greater
        let eighth = Fx::from_parts(1 << 125, 0);
        assert!(!exceeds_inverse(eighth, &BigInt::from(4)));
        assert!(exceeds_inverse(eighth.wrapping_add(Fx::from_ulps(1)), &BigInt::from(4)));
    }
}
