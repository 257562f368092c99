//! Exact real values used to certify fractional parts.
//!
//! Quadratic irrationals are held exactly as elements of ℚ(√d); numbers known
//! only through a finite run of partial quotients are held as closed rational
//! enclosures. Every query that cannot be decided from an enclosure returns
//! `None` instead of guessing.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `(a + b√d) / c` with `c > 0`, kept in lowest terms.
///
/// Rational values carry `b = 0` and `d = 0`; mixing two irrational elements
/// with different radicands is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadElem {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        let mut e = QuadElem { a, b, c, d };
        e.normalize();
        e
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), BigInt::zero(), BigInt::one(), BigInt::zero())
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(num.into(), BigInt::zero(), den.into(), BigInt::zero())
    }

    /// `(p + √d) / q`.
    pub fn surd(p: impl Into<BigInt>, d: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Self::new(p.into(), BigInt::one(), q.into(), d.into())
    }

    fn normalize(&mut self) {
        if self.c.is_negative() {
            self.a = -&self.a;
            self.b = -&self.b;
            self.c = -&self.c;
        }
        if self.b.is_zero() {
            self.d = BigInt::zero();
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
    }

    /// Moves square factors of the radicand below 10⁴ into the coefficient.
    pub fn reduce_radicand(self) -> Self {
        if self.b.is_zero() {
            return self;
        }
        let (mut b, mut d) = (self.b.clone(), self.d.clone());
        let mut f = BigInt::from(2);
        let limit = BigInt::from(10_000);
        while f <= limit && &f * &f <= d {
            let sq = &f * &f;
            while (&d % &sq).is_zero() {
                d /= &sq;
                b *= &f;
            }
            f += 1;
        }
        let r = d.sqrt();
        if &r * &r == d {
            return Self::new(&self.a + &b * r, BigInt::zero(), self.c.clone(), BigInt::zero());
        }
        Self::new(self.a.clone(), b, self.c.clone(), d)
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_ratio(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    fn radicand<'a>(&'a self, other: &'a Self) -> &'a BigInt {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => &other.d,
            (false, true) => &self.d,
            (false, false) => {
                assert_eq!(self.d, other.d, "mixed quadratic fields");
                &self.d
            }
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.a * k, &self.b * k, self.c.clone(), self.d.clone())
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        Self::new(&self.a + k * &self.c, self.b.clone(), self.c.clone(), self.d.clone())
    }

    pub fn add_ratio(&self, r: &BigRational) -> Self {
        self + &QuadElem::from_ratio(r.numer().clone(), r.denom().clone())
    }

    pub fn recip(&self) -> Self {
        // c / (a + b√d) = c (a - b√d) / (a² - b² d)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        assert!(!norm.is_zero(), "reciprocal of zero");
        Self::new(&self.c * &self.a, -(&self.c * &self.b), norm, self.d.clone())
    }

    /// Sign of the value, decided exactly.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&BigInt::zero());
        let sb = self.b.cmp(&BigInt::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: the larger of a² and b²d wins
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// `⌊(a + b√d) / c⌋`, exact.
    pub fn floor(&self) -> BigInt {
        let root = (&self.b * &self.b * &self.d).sqrt();
        let floor_b_root = if !self.b.is_negative() {
            root
        } else if &root * &root == &self.b * &self.b * &self.d {
            -root
        } else {
            -root - 1
        };
        (&self.a + floor_b_root).div_floor(&self.c)
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    fn log2_estimate(&self) -> Option<i64> {
        if self.a.is_zero() && self.b.is_zero() {
            return None;
        }
        let la = self.a.bits() as i64;
        let lb = self.b.bits() as i64 + (self.d.bits() as i64 + 1) / 2;
        let lc = self.c.bits() as i64;
        let top = if self.b.is_zero() {
            la
        } else if self.a.is_zero() || self.a.is_negative() == self.b.is_negative() {
            la.max(lb)
        } else {
            let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
            norm.bits() as i64 - la.max(lb)
        };
        Some(top - lc)
    }

    /// Nearest-double rendering with relative error below 2⁻⁵².
    pub fn to_f64(&self) -> f64 {
        let Some(mut shift) = self.log2_estimate().map(|e| 64 - e) else {
            return 0.0;
        };
        loop {
            let scaled = if shift >= 0 {
                let k = BigInt::one() << shift as usize;
                Self::new(&self.a * &k, &self.b * &k, self.c.clone(), self.d.clone())
            } else {
                let k = BigInt::one() << (-shift) as usize;
                Self::new(self.a.clone(), self.b.clone(), &self.c * k, self.d.clone())
            };
            let f = scaled.floor();
            if f.bits() >= 58 {
                return f.to_f64().unwrap_or(f64::NAN) * pow2(-shift);
            }
            shift += 64;
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            write!(f, "({} + {}·√{})/{}", self.a, self.b, self.d, self.c)
        }
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        let d = self.radicand(rhs).clone();
        QuadElem::new(
            &self.a * &rhs.c + &rhs.a * &self.c,
            &self.b * &rhs.c + &rhs.b * &self.c,
            &self.c * &rhs.c,
            d,
        )
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self + &(-rhs)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        let d = self.radicand(rhs).clone();
        QuadElem::new(
            &self.a * &rhs.a + &self.b * &rhs.b * &d,
            &self.a * &rhs.b + &self.b * &rhs.a,
            &self.c * &rhs.c,
            d,
        )
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-&self.a, -&self.b, self.c.clone(), self.d.clone())
    }
}

/// `2^k` as a double, exact whenever the result is a normal number.
pub(crate) fn pow2(k: i64) -> f64 {
    if (-1022..=1023).contains(&k) {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        2f64.powi(k.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    QuadElem::from_ratio(r.numer().clone(), r.denom().clone()).to_f64()
}

/// A real number known exactly, or up to a closed rational enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Exact(QuadElem),
    Enclosure { lo: BigRational, hi: BigRational },
}

impl Real {
    pub fn from_ratio(r: BigRational) -> Self {
        Real::Exact(QuadElem::from_ratio(r.numer().clone(), r.denom().clone()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Real::Exact(QuadElem::from_int(n))
    }

    /// Enclosure spanning two rationals given in any order.
    pub fn between(x: BigRational, y: BigRational) -> Self {
        if x <= y {
            Real::Enclosure { lo: x, hi: y }
        } else {
            Real::Enclosure { lo: y, hi: x }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&QuadElem> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Enclosure { .. } => None,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q.mul_int(k)),
            Real::Enclosure { lo, hi } => {
                let k = BigRational::from_integer(k.clone());
                Real::between(lo * &k, hi * &k)
            }
        }
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q * &QuadElem::from_ratio(r.numer().clone(), r.denom().clone())),
            Real::Enclosure { lo, hi } => Real::between(lo * r, hi * r),
        }
    }

    pub fn add_ratio(&self, r: &BigRational) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q.add_ratio(r)),
            Real::Enclosure { lo, hi } => Real::Enclosure { lo: lo + r, hi: hi + r },
        }
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        self.add_ratio(&BigRational::from_integer(k.clone()))
    }

    /// Sign, or `None` when the enclosure straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        match self {
            Real::Exact(q) => Some(q.sign()),
            Real::Enclosure { lo, hi } => {
                if lo.is_positive() {
                    Some(Ordering::Greater)
                } else if hi.is_negative() {
                    Some(Ordering::Less)
                } else if lo.is_zero() && hi.is_zero() {
                    Some(Ordering::Equal)
                } else {
                    None
                }
            }
        }
    }

    /// Certified comparison against a rational.
    pub fn cmp_ratio(&self, r: &BigRational) -> Option<Ordering> {
        self.add_ratio(&-r).sign()
    }

    pub fn abs(&self) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(q.abs()),
            Real::Enclosure { lo, hi } => {
                if !lo.is_negative() {
                    self.clone()
                } else if !hi.is_positive() {
                    Real::between(-hi, -lo)
                } else {
                    Real::between(BigRational::zero(), (-lo).max(hi.clone()))
                }
            }
        }
    }

    pub fn floor(&self) -> Option<BigInt> {
        match self {
            Real::Exact(q) => Some(q.floor()),
            Real::Enclosure { lo, hi } => {
                let f = lo.floor().to_integer();
                (hi.floor().to_integer() == f).then_some(f)
            }
        }
    }

    /// The representative of the value modulo 1 in (−1/2, 1/2].
    pub fn signed_frac(&self) -> Option<Real> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let fl = self.floor()?;
        let frac = self.add_int(&-fl);
        match frac.cmp_ratio(&half)? {
            Ordering::Greater => Some(frac.add_int(&-BigInt::one())),
            _ => Some(frac),
        }
    }

    /// Double rendering with relative error at most 2⁻⁵⁰, or `None` when the
    /// enclosure is too wide to guarantee it.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Real::Exact(q) => Some(q.to_f64()),
            Real::Enclosure { lo, hi } => {
                if lo.is_zero() && hi.is_zero() {
                    return Some(0.0);
                }
                let same_sign = (lo.is_positive() && hi.is_positive()) || (lo.is_negative() && hi.is_negative());
                if !same_sign {
                    return None;
                }
                let min_mag = lo.abs().min(hi.abs());
                let limit = min_mag / BigRational::from_integer(BigInt::one() << 51usize);
                if hi - lo > limit {
                    return None;
                }
                let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
                Some(ratio_to_f64(&mid))
            }
        }
    }

    /// Best-effort double: exact rendering, or the enclosure midpoint.
    pub fn approx(&self) -> f64 {
        match self {
            Real::Exact(q) => q.to_f64(),
            Real::Enclosure { lo, hi } => {
                ratio_to_f64(&((lo + hi) / BigRational::from_integer(BigInt::from(2))))
            }
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => write!(f, "{q}"),
            Real::Enclosure { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}
