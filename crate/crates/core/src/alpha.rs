//! Irrationals, their continued fractions, and exact signed fractional parts.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{QuadElem, Real};
use crate::fixed::FixedPoint;

/// A symbolic irrational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlphaSpec {
    /// `(p + √d) / q`.
    Surd { p: BigInt, d: BigInt, q: BigInt },
    /// `[head; period, period, …]`, or just the finite head.
    PartialQuotients { head: Vec<BigInt>, period: Option<Vec<BigInt>> },
}

impl AlphaSpec {
    pub fn phi() -> Self {
        Self::surd(1, 5, 2)
    }

    pub fn sqrt(d: i64) -> Self {
        Self::surd(0, d, 1)
    }

    pub fn surd(p: impl Into<BigInt>, d: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        AlphaSpec::Surd { p: p.into(), d: d.into(), q: q.into() }
    }

    pub fn quotients(head: &[i64], period: Option<&[i64]>) -> Self {
        AlphaSpec::PartialQuotients {
            head: head.iter().map(|&a| BigInt::from(a)).collect(),
            period: period.map(|p| p.iter().map(|&a| BigInt::from(a)).collect()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlphaSpec::Surd { d, q, .. } => {
                if !d.is_positive() {
                    return Err(Error::InvalidSurd(format!("radicand {d} must be positive")));
                }
                let r = d.sqrt();
                if &(&r * &r) == d {
                    return Err(Error::InvalidSurd(format!("radicand {d} is a perfect square")));
                }
                if q.is_zero() {
                    return Err(Error::InvalidSurd("zero denominator".into()));
                }
                Ok(())
            }
            AlphaSpec::PartialQuotients { head, period } => {
                if head.is_empty() {
                    return Err(Error::InvalidQuotients("a_0 is required".into()));
                }
                if let Some((i, a)) = head.iter().enumerate().skip(1).find(|(_, a)| !a.is_positive()) {
                    return Err(Error::InvalidQuotients(format!("a_{i} = {a} must be at least 1")));
                }
                if let Some(period) = period {
                    if period.is_empty() {
                        return Err(Error::InvalidQuotients("periodic tail must be nonempty".into()));
                    }
                    if let Some(a) = period.iter().find(|a| !a.is_positive()) {
                        return Err(Error::InvalidQuotients(format!("periodic quotient {a} must be at least 1")));
                    }
                }
                Ok(())
            }
        }
    }

    /// Index of the last available partial quotient, if the expansion is finite.
    pub fn last_index(&self) -> Option<usize> {
        match self {
            AlphaSpec::PartialQuotients { head, period: None } => Some(head.len() - 1),
            _ => None,
        }
    }
}

impl fmt::Display for AlphaSpec {
    /// Canonical form, accepted back by the command-line parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Surd { p, d, q } => write!(f, "surd:{p},{d},{q}"),
            AlphaSpec::PartialQuotients { head, period } => {
                let join = |v: &[BigInt]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "cf:{}", head[0])?;
                let rest = join(&head[1..]);
                match period {
                    None if rest.is_empty() => Ok(()),
                    None => write!(f, ";{rest}"),
                    Some(p) if rest.is_empty() => write!(f, ";({})", join(p)),
                    Some(p) => write!(f, ";{rest},({})", join(p)),
                }
            }
        }
    }
}

/// Rescales `(p, d, q)` so that `q | d − p²`, as the periodic algorithm needs.
fn normalize_surd(p: &BigInt, d: &BigInt, q: &BigInt) -> (BigInt, BigInt, BigInt) {
    if (d - p * p).is_multiple_of(q) {
        (p.clone(), d.clone(), q.clone())
    } else {
        let aq = q.abs();
        (p * &aq, d * q * q, q * &aq)
    }
}

/// Lazily produces partial quotients of a spec.
enum QuotientStream<'a> {
    Surd { p: BigInt, q: BigInt, d: BigInt, root: BigInt },
    Listed { head: &'a [BigInt], period: Option<&'a [BigInt]>, i: usize },
}

impl<'a> QuotientStream<'a> {
    fn new(spec: &'a AlphaSpec) -> Self {
        match spec {
            AlphaSpec::Surd { p, d, q } => {
                let (p, d, q) = normalize_surd(p, d, q);
                let root = d.sqrt();
                QuotientStream::Surd { p, q, d, root }
            }
            AlphaSpec::PartialQuotients { head, period } => {
                QuotientStream::Listed { head, period: period.as_deref(), i: 0 }
            }
        }
    }

    fn next_quotient(&mut self) -> Option<BigInt> {
        match self {
            QuotientStream::Surd { p, q, d, root } => {
                // a = ⌊(p + √d)/q⌋ from ⌊p + √d⌋ = p + ⌊√d⌋ (or its ceiling for q < 0)
                let a = if q.is_positive() {
                    (&*p + &*root).div_floor(q)
                } else {
                    let up: BigInt = -(&*p + &*root) - 1;
                    up.div_floor(&-&*q)
                };
                let p_next = &a * &*q - &*p;
                let q_next = (&*d - &p_next * &p_next) / &*q;
                *p = p_next;
                *q = q_next;
                Some(a)
            }
            QuotientStream::Listed { head, period, i } => {
                let a = if *i < head.len() {
                    head[*i].clone()
                } else {
                    let period = (*period)?;
                    period[(*i - head.len()) % period.len()].clone()
                };
                *i += 1;
                Some(a)
            }
        }
    }
}

/// Partial quotients `a_0..=a_n`.
pub fn partial_quotients(spec: &AlphaSpec, n: usize) -> Result<Vec<BigInt>> {
    spec.validate()?;
    let mut stream = QuotientStream::new(spec);
    (0..=n)
        .map(|_| {
            stream
                .next_quotient()
                .ok_or_else(|| Error::InsufficientQuotients { requested: n, last: spec.last_index().unwrap_or(0) })
        })
        .collect()
}

/// Convergents `(p_k, q_k)` of `[a_0; a_1, …]`.
pub fn convergents(quotients: &[BigInt]) -> Result<Vec<(BigInt, BigInt)>> {
    if quotients.is_empty() {
        return Err(Error::InvalidQuotients("empty quotient list".into()));
    }
    if let Some((i, a)) = quotients.iter().enumerate().skip(1).find(|(_, a)| !a.is_positive()) {
        return Err(Error::InvalidQuotients(format!("a_{i} = {a} must be at least 1")));
    }
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    Ok(quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, p.clone());
            q2 = std::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect())
}

/// Partial quotients with their convergents, indices `0..=last_index()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    quotients: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn from_quotients(quotients: Vec<BigInt>) -> Result<Self> {
        let (p, q) = convergents(&quotients)?.into_iter().unzip();
        Ok(ContinuedFraction { quotients, p, q })
    }

    pub fn expand(spec: &AlphaSpec, n: usize) -> Result<Self> {
        Self::from_quotients(partial_quotients(spec, n)?)
    }

    pub fn last_index(&self) -> usize {
        self.quotients.len() - 1
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn a(&self, k: usize) -> &BigInt {
        &self.quotients[k]
    }

    pub fn p(&self, k: usize) -> &BigInt {
        &self.p[k]
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.q[k]
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k > self.last_index() {
            Err(Error::IndexOutOfRange { index: k, last: self.last_index() })
        } else {
            Ok(())
        }
    }

    /// `q_k` when it fits a machine word.
    pub fn q_u64(&self, k: usize) -> Option<u64> {
        self.q.get(k)?.to_u64()
    }

    pub fn convergent(&self, k: usize) -> (&BigInt, &BigInt) {
        (&self.p[k], &self.q[k])
    }
}

/// `{{m·α}}` together with its double rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedFrac {
    pub m: u64,
    pub exact: Real,
    pub approx: f64,
}

/// `ψ_n = α − p_n/q_n` and `ξ_n = q_n·q_{n+1}·ψ_n`.
///
/// The subscripted ψ_n is taken to be the convergent error itself; with that
/// reading `α = p_n/q_n + ξ_n/(q_n q_{n+1})` and `e(q_n m α) = e(m q_n ψ_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentError {
    pub n: usize,
    pub psi: Real,
    pub xi: Real,
}

impl ConvergentError {
    /// Certifies `1/2 < |ξ_n| < 1` and `sign ξ_n = (−1)^n`; `None` if undecidable.
    pub fn invariants_hold(&self) -> Option<bool> {
        use std::cmp::Ordering::*;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let abs = self.xi.abs();
        let lower = abs.cmp_ratio(&half)? == Greater;
        let upper = abs.cmp_ratio(&BigRational::one())? == Less;
        let want = if self.n.is_multiple_of(2) { Greater } else { Less };
        let sign = self.xi.sign()? == want;
        Some(lower && upper && sign)
    }

    pub fn xi_f64(&self) -> f64 {
        self.xi.approx()
    }
}

/// A prepared irrational: its spec, continued fraction, exact value and
/// fixed-point enclosure of `{α}`.
#[derive(Clone, Debug)]
pub struct Alpha {
    spec: AlphaSpec,
    cf: ContinuedFraction,
    value: Real,
    fixed: FixedPoint,
}

impl Alpha {
    pub const DEFAULT_DEPTH: usize = 64;

    pub fn new(spec: AlphaSpec) -> Result<Self> {
        Self::with_depth(spec, Self::DEFAULT_DEPTH)
    }

    /// Expands at least `min_depth` partial quotients (when available) and
    /// always far enough that `q_N ≥ 2¹²⁸`.
    pub fn with_depth(spec: AlphaSpec, min_depth: usize) -> Result<Self> {
        spec.validate()?;
        let mut stream = QuotientStream::new(&spec);
        let big = BigInt::one() << 128usize;
        let mut quotients = Vec::new();
        let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
        while let Some(a) = stream.next_quotient() {
            let q = &a * &q1 + &q2;
            quotients.push(a);
            q2 = std::mem::replace(&mut q1, q);
            if quotients.len() > min_depth && q1 >= big {
                break;
            }
        }
        let cf = ContinuedFraction::from_quotients(quotients)?;
        let value = exact_value(&spec, &cf);
        let fixed = FixedPoint::from_real(&value);
        Ok(Alpha { spec, cf, value, fixed })
    }

    pub fn spec(&self) -> &AlphaSpec {
        &self.spec
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    /// `α` exactly, or a rational enclosure for a finite head.
    pub fn value(&self) -> &Real {
        &self.value
    }

    /// Enclosure of `{α}` in 192-bit fixed point.
    pub fn fixed(&self) -> FixedPoint {
        self.fixed
    }

    pub fn is_exact(&self) -> bool {
        self.value.is_exact()
    }

    /// `{{k·α}}` as an exact value (or certified enclosure).
    pub fn frac_of(&self, k: &BigInt) -> Result<Real> {
        self.value
            .mul_int(k)
            .signed_frac()
            .ok_or_else(|| Error::precision(format!("{{{{{k}·α}}}}")))
    }

    /// `{{m·α}}` for `m ≥ 1`.
    pub fn frac_exact(&self, m: u64) -> Result<SignedFrac> {
        if m == 0 {
            return Err(Error::InvalidArgument("multiplier m must be at least 1".into()));
        }
        let exact = self.frac_of(&BigInt::from(m))?;
        let approx = exact
            .to_f64()
            .ok_or_else(|| Error::precision(format!("{{{{{m}·α}}}} to 2^-50 relative")))?;
        Ok(SignedFrac { m, exact, approx })
    }

    /// Certified double `{{m·α}}`, through fixed point when it suffices.
    #[inline]
    pub fn frac_f64(&self, m: u64) -> Result<f64> {
        match self.fixed.scale(m).signed_frac() {
            Some(v) => Ok(v),
            None => self.frac_exact(m).map(|s| s.approx),
        }
    }

    pub fn convergent_error(&self, n: usize) -> Result<ConvergentError> {
        self.cf.check_index(n + 1)?;
        let (p, q) = self.cf.convergent(n);
        let pq = BigRational::new(p.clone(), q.clone());
        let psi = self.value.add_ratio(&-pq);
        let xi = psi.mul_int(&(q * self.cf.q(n + 1)));
        Ok(ConvergentError { n, psi, xi })
    }

    /// `min_{0 ≤ n ≤ n_max} q_n·‖q_n α‖`.
    pub fn eps_alpha_estimate(&self, n_max: usize) -> Result<f64> {
        self.cf.check_index(n_max)?;
        let mut best = f64::INFINITY;
        for n in 0..=n_max {
            let q = self.cf.q(n);
            let v = self
                .frac_of(q)?
                .abs()
                .mul_int(q)
                .to_f64()
                .ok_or_else(|| Error::precision(format!("q_{n}·‖q_{n}·α‖")))?;
            best = best.min(v);
        }
        Ok(best)
    }
}

/// Exact `α` for surds and periodic expansions; a rational enclosure otherwise.
fn exact_value(spec: &AlphaSpec, cf: &ContinuedFraction) -> Real {
    match spec {
        AlphaSpec::Surd { p, d, q } => {
            Real::Exact(QuadElem::surd(p.clone(), d.clone(), q.clone()).reduce_radicand())
        }
        AlphaSpec::PartialQuotients { head, period: Some(period) } => {
            Real::Exact(periodic_value(head, period))
        }
        AlphaSpec::PartialQuotients { period: None, .. } => {
            // α lies between p_N/q_N and the mediant with the previous convergent
            let n = cf.last_index();
            let (p, q) = cf.convergent(n);
            let (pp, qp) = if n == 0 {
                (BigInt::one(), BigInt::zero())
            } else {
                (cf.p(n - 1).clone(), cf.q(n - 1).clone())
            };
            Real::between(BigRational::new(p.clone(), q.clone()), BigRational::new(p + pp, q + qp))
        }
    }
}

/// Solves `y = [b_0; …, b_{k−1}, y]` and composes with the head.
fn periodic_value(head: &[BigInt], period: &[BigInt]) -> QuadElem {
    let mobius = |quotients: &[BigInt]| {
        let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
        let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
        for a in quotients {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
        }
        (p1, p2, q1, q2)
    };
    let (p1, p2, q1, q2) = mobius(period);
    // q1·y² + (q2 − p1)·y − p2 = 0, positive root
    let disc = (&q2 - &p1) * (&q2 - &p1) + BigInt::from(4) * &q1 * &p2;
    let y = QuadElem::new(&p1 - &q2, BigInt::one(), BigInt::from(2) * &q1, disc);
    let (h1, h2, k1, k2) = mobius(head);
    let num = &y.mul_int(&h1) + &QuadElem::from_int(h2);
    let den = &y.mul_int(&k1) + &QuadElem::from_int(k2);
    (&num * &den.recip()).reduce_radicand()
}

/// The representative of `x` modulo 1 in (−1/2, 1/2].
pub fn signed_frac_scalar(x: &Real) -> Result<Real> {
    x.signed_frac().ok_or_else(|| Error::precision(format!("{{{{{x}}}}}")))
}
