//! The double exponential sum `T_M`, its split `1 + S′_M − S″_M`, and the
//! reciprocal sums `Σ 1/{{kα}}`.
//!
//! Every trigonometric evaluation happens at a reduced argument obtained from
//! the certified fixed-point orbit, never at a raw floating `mα`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::accum::{ComplexNeumaier, Neumaier};
use crate::alpha::Alpha;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Naive,
    Closed,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Closed => "closed",
        }
    }
}

/// `T_M`, `S′_M` and `S″_M` for one `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumReport {
    pub m: u64,
    pub t: Complex64,
    pub s1: Complex64,
    pub s2: Complex64,
    pub method: Method,
    /// Largest `|1/(e(mα) − 1)|` met during evaluation.
    pub max_term_magnitude: f64,
}

impl SumReport {
    /// `|T − (1 + S′ − S″)|`.
    pub fn split_residual(&self) -> f64 {
        (self.t - (Complex64::new(1.0, 0.0) + self.s1 - self.s2)).norm()
    }
}

/// `e(x) = exp(2πix)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (2.0 * PI * x).sin_cos();
    Complex64::new(c, s)
}

/// `e(x) − 1` without cancellation: `(−2 sin²(πx), 2 sin(πx) cos(πx))`.
#[inline]
pub fn e_minus_one(x: f64) -> Complex64 {
    let (s, c) = (PI * x).sin_cos();
    Complex64::new(-2.0 * s * s, 2.0 * s * c)
}

/// `(e(x), e(x) − 1)` from one half-angle evaluation.
#[inline]
fn e_pair(x: f64) -> (Complex64, Complex64) {
    let (s, c) = (PI * x).sin_cos();
    let im = 2.0 * s * c;
    let re1 = -2.0 * s * s;
    (Complex64::new(1.0 + re1, im), Complex64::new(re1, im))
}

/// `{{a·b·α}}` as a double with absolute error far below 2⁻⁵⁰.
#[inline]
pub(crate) fn reduced(alpha: &Alpha, a: u64, b: u64) -> Result<f64> {
    if let Some(x) = alpha.fixed().scale(a).scale(b).angle() {
        return Ok(x);
    }
    let k = BigInt::from(a) * BigInt::from(b);
    alpha
        .frac_of(&k)?
        .to_f64()
        .ok_or_else(|| Error::InsufficientPrecision { what: format!("{{{{{k}·α}}}}") })
}

fn check_m(m: u64) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidArgument("M must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `(1/M) Σ_{m<M} Σ_{n<M} e(nmα)` term by term, `O(M²)`.
pub fn t_sum_naive(alpha: &Alpha, m_max: u64) -> Result<Complex64> {
    check_m(m_max)?;
    let mut acc = ComplexNeumaier::new();
    // the row and column m·n = 0 contribute 2M − 1 ones
    acc.add(Complex64::new((2 * m_max - 1) as f64, 0.0));
    for m in 1..m_max {
        for n in 1..m_max {
            acc.add(e(reduced(alpha, m, n)?));
        }
    }
    Ok(acc.value() / m_max as f64)
}

/// `T_M = 1 + (1/M) Σ_{m=1}^{M−1} (e(Mmα) − 1)/(e(mα) − 1)`, `O(M)`.
pub fn t_sum_closed(alpha: &Alpha, m_max: u64) -> Result<SumReport> {
    check_m(m_max)?;
    let mut t = ComplexNeumaier::new();
    let mut s1 = ComplexNeumaier::new();
    let mut s2 = ComplexNeumaier::new();
    let mut max_term = 0.0f64;
    for m in 1..m_max {
        let x = reduced(alpha, m, 1)?;
        if x == 0.0 {
            return Err(Error::DegenerateDenominator { m });
        }
        let inv = e_minus_one(x).inv();
        max_term = max_term.max(inv.norm());
        let (ey, ey1) = e_pair(reduced(alpha, m, m_max)?);
        t.add(ey1 * inv);
        s1.add(ey * inv);
        s2.add(inv);
    }
    let scale = m_max as f64;
    Ok(SumReport {
        m: m_max,
        t: Complex64::new(1.0, 0.0) + t.value() / scale,
        s1: s1.value() / scale,
        s2: s2.value() / scale,
        method: Method::Closed,
        max_term_magnitude: max_term,
    })
}

/// `S″_M = −(M−1)/(2M) − (i/2M) Σ_{m=1}^{M−1} cot(π{{mα}})`.
pub fn s2_via_cot(alpha: &Alpha, m_max: u64) -> Result<Complex64> {
    check_m(m_max)?;
    let mut acc = Neumaier::new();
    for m in 1..m_max {
        let x = reduced(alpha, m, 1)?;
        if x == 0.0 {
            return Err(Error::DegenerateDenominator { m });
        }
        acc.add(cot_pi(x));
    }
    let scale = m_max as f64;
    Ok(Complex64::new(-((m_max - 1) as f64) / (2.0 * scale), -acc.value() / (2.0 * scale)))
}

/// `cot(πx)`, exactly zero at `x = ±1/2`.
#[inline]
pub fn cot_pi(x: f64) -> f64 {
    if x.abs() == 0.5 {
        return 0.0;
    }
    let (s, c) = (PI * x).sin_cos();
    c / s
}

/// `πt·cot(πt) − 1` on `(0, 1/2]`.
pub fn cot_remainder(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 0.5) {
        return Err(Error::Domain(t));
    }
    if t == 0.5 {
        return Ok(-1.0);
    }
    let x = PI * t;
    if x < 0.25 {
        let x2 = x * x;
        // x·cot x − 1 = −x²/3 − x⁴/45 − 2x⁶/945 − x⁸/4725 − 2x¹⁰/93555 − …
        let poly = 1.0 / 3.0
            + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (1.0 / 4725.0 + x2 * (2.0 / 93555.0))));
        return Ok(-x2 * poly);
    }
    let (s, c) = x.sin_cos();
    Ok(x * c / s - 1.0)
}

/// `Σ_{k=1}^{m} 1/{{kα}}` with the largest term magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecipSum {
    pub m: u64,
    pub value: f64,
    pub max_term: f64,
}

pub fn recip_sum(alpha: &Alpha, m: u64) -> Result<RecipSum> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    recip_range(alpha, 0, m).map(|(value, max_term)| RecipSum { m, value, max_term })
}

/// `Σ_{k=start+1}^{start+len} 1/{{kα}}` and the largest term magnitude.
pub fn recip_range(alpha: &Alpha, start: u64, len: u64) -> Result<(f64, f64)> {
    let mut acc = Neumaier::new();
    let mut max_term = 0.0f64;
    for k in start + 1..=start + len {
        let v = 1.0 / alpha.frac_f64(k)?;
        max_term = max_term.max(v.abs());
        acc.add(v);
    }
    Ok((acc.value(), max_term))
}

/// Prefix sums `R_k = Σ_{j=1}^{k} 1/(e(jα) − 1)` for `k = 1..=m`.
pub fn recip_e_prefix(alpha: &Alpha, m: u64) -> Result<Vec<Complex64>> {
    let mut acc = ComplexNeumaier::new();
    let mut out = Vec::with_capacity(m as usize);
    for k in 1..=m {
        let x = reduced(alpha, k, 1)?;
        if x == 0.0 {
            return Err(Error::DegenerateDenominator { m: k });
        }
        acc.add(e_minus_one(x).inv());
        out.push(acc.value());
    }
    Ok(out)
}
