//! Discrepancy of `{mα}` over circular arcs, the greedy-digit upper bound,
//! and the variation/discrepancy chain for `Σ 1/{{mα}}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::alpha::{Alpha, ContinuedFraction};
use crate::error::{Error, Result};
use crate::fixed::{exceeds_inverse, FixedPoint, Fx};
use crate::ostrowski::ostrowski_expand;
use crate::sums::recip_sum;

/// Default largest `N` accepted by the quadratic arc scan.
pub const DEFAULT_CAP: u64 = 8192;

const FRAC: u32 = 96;

/// Unnormalized `D_N` enclosed in `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Discrepancy {
    pub n: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Discrepancy {
    pub fn value(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `Some(true)` when `D_N ≤ bound` is certain, `Some(false)` when
    /// `D_N > bound` is, and `None` otherwise.
    pub fn at_most(&self, bound: f64) -> Option<bool> {
        if self.hi <= bound {
            Some(true)
        } else if self.lo > bound {
            Some(false)
        } else {
            None
        }
    }
}

/// Greedy digits `N = Σ t_j q_j` and the bound `3·Σ t_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmanBound {
    pub n: u64,
    pub t: Vec<u64>,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub d: Discrepancy,
    pub harman: HarmanBound,
}

/// Sup over arcs with endpoints at the sample points, all four endpoint
/// types, `O(N²)`. Points are enclosures of values in `[0, 1)`.
pub fn discrepancy_of_points(points: &[FixedPoint]) -> Result<Discrepancy> {
    let n = points.len() as u64;
    if n == 0 {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    if n >= 1 << 30 {
        return Err(Error::BudgetExceeded { work: n as u128, budget: 1 << 30 });
    }
    let mut sorted: Vec<FixedPoint> = points.to_vec();
    sorted.sort_by_key(|p| p.value);
    for p in &sorted {
        if p.value.checked_add(Fx::from_ulps(p.width)).is_none() || p.width >= 1 << 64 {
            return Err(Error::precision("point order near 0"));
        }
    }
    for w in sorted.windows(2) {
        let upper = w[0].value.wrapping_add(Fx::from_ulps(w[0].width));
        if upper >= w[1].value {
            return Err(Error::precision("point order"));
        }
    }
    // 96-bit truncations; each is within 2 units of its point
    let y: Vec<i128> = sorted.iter().map(|p| p.value.top96() as i128).collect();
    let one: i128 = 1 << FRAC;
    let nn = n as i128;
    let mut best: i128 = one;
    for (a, &ya) in y.iter().enumerate() {
        for (b, &yb) in y.iter().enumerate() {
            if a == b {
                continue;
            }
            let d = ((b + n as usize - a) % n as usize) as i128;
            let len = if yb >= ya { yb - ya } else { yb + one - ya };
            let closed = (d + 1) * one - nn * len;
            let open = nn * len - (d - 1) * one;
            best = best.max(closed).max(open);
        }
    }
    let err = 4.0 * n as f64;
    let scale = 2f64.powi(-(FRAC as i32));
    let v = best as f64 * scale;
    let slack = (err + 2.0) * scale + v * f64::EPSILON;
    Ok(Discrepancy { n, lo: (v - slack).max(1.0), hi: v + slack })
}

/// `D_N` of `{mα}`, `m = 1..N`.
pub fn discrepancy_exact(alpha: &Alpha, n: u64, cap: u64) -> Result<Discrepancy> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::BudgetExceeded { work: (n as u128) * (n as u128), budget: cap.saturating_mul(cap) });
    }
    let fp = alpha.fixed();
    let points: Vec<FixedPoint> = fp.multiples().take(n as usize).map(|(_, p)| p).collect();
    discrepancy_of_points(&points)
}

/// `3·Σ t_j` for the greedy decomposition `N = Σ t_j q_j`.
pub fn harman_bound(cf: &ContinuedFraction, n: u64) -> Result<HarmanBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let exp = ostrowski_expand(&BigInt::from(n), cf)?;
    let t: Vec<u64> = exp.coeffs.iter().map(|c| c.to_u64().expect("digit below N")).collect();
    let bound = 3 * t.iter().sum::<u64>();
    Ok(HarmanBound { n, t, bound })
}

pub fn discrepancy_report(alpha: &Alpha, n: u64, cap: u64) -> Result<DiscrepancyReport> {
    Ok(DiscrepancyReport { d: discrepancy_exact(alpha, n, cap)?, harman: harman_bound(alpha.cf(), n)? })
}

/// The chain `‖mα‖ > 1/(2q_n)`, `V(f) = 4q_n`, `|Σ_{m<q_n} 1/{{mα}}| ≤ 16q_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct KhReport {
    pub n: usize,
    pub q_n: u64,
    /// `m ≤ q_n − 1` attaining the smallest `‖mα‖`.
    pub argmin: u64,
    pub min_dist: f64,
    /// `min ‖mα‖ > 1/(2q_n)`, decided exactly.
    pub min_dist_ok: bool,
    pub variation: f64,
    pub sum_value: f64,
    pub bound: f64,
}

impl KhReport {
    pub fn ratio(&self) -> f64 {
        self.sum_value.abs() / self.q_n as f64
    }

    pub fn holds(&self) -> bool {
        self.min_dist_ok && self.sum_value.abs() <= self.bound
    }
}

/// Decides `‖mα‖ > 1/(2q)` exactly, refining through `frac_of` when the
/// fixed-point bound is inconclusive.
fn dist_exceeds(alpha: &Alpha, m: u64, p: &FixedPoint, q: &BigInt) -> Result<bool> {
    if exceeds_inverse(p.dist_lower(), q) {
        return Ok(true);
    }
    let limit = BigRational::new(BigInt::one(), BigInt::from(2) * q);
    let frac = alpha.frac_of(&BigInt::from(m))?.abs();
    match frac.cmp_ratio(&limit) {
        Some(std::cmp::Ordering::Greater) => Ok(true),
        Some(_) => Ok(false),
        None => Err(Error::precision(format!("‖{m}·α‖ against 1/(2q)"))),
    }
}

pub fn kh_lemma_check(alpha: &Alpha, n: usize, budget: u64) -> Result<KhReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("level n must be at least 1".into()));
    }
    let cf = alpha.cf();
    cf.check_index(n)?;
    let q = cf.q(n);
    let q_n = q.to_u64().filter(|&v| v <= budget).ok_or_else(|| Error::BudgetExceeded {
        work: q.to_u128().unwrap_or(u128::MAX),
        budget,
    })?;
    let mut min_dist_ok = true;
    let mut argmin = 0;
    let mut best = Fx::from_parts(u128::MAX, u64::MAX);
    for (m, p) in alpha.fixed().multiples().take(q_n.saturating_sub(1) as usize) {
        let lower = p.dist_lower();
        if lower < best {
            best = lower;
            argmin = m;
        }
        if !dist_exceeds(alpha, m, &p, q)? {
            min_dist_ok = false;
        }
    }
    let min_dist = if argmin == 0 {
        0.5
    } else {
        alpha.frac_f64(argmin).map(f64::abs)?
    };
    let sum_value = if q_n >= 2 { recip_sum(alpha, q_n - 1)?.value } else { 0.0 };
    let qf = q_n as f64;
    Ok(KhReport { n, q_n, argmin, min_dist, min_dist_ok, variation: 4.0 * qf, sum_value, bound: 16.0 * qf })
}

/// `1/{{x}}`, odd about `1/2` on `(0, 1)`.
pub fn kh_integrand(x: f64) -> f64 {
    let f = x - x.round();
    let f = if f == -0.5 { 0.5 } else { f };
    1.0 / f
}

/// `D_N` by the sorted-gap formula `1 + max g − min g`, `g(j) = j − N·y_(j)`.
/// Used only as a cross-check of the arc scan.
pub fn discrepancy_sorted_gaps(points: &[f64]) -> f64 {
    let mut y = points.to_vec();
    y.sort_by(|a, b| a.total_cmp(b));
    let n = y.len() as f64;
    let g = y.iter().enumerate().map(|(j, v)| j as f64 - n * v);
    let (lo, hi) = g.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    1.0 + hi - lo
}

/// `x` reduced into `[0, 1)` as a fixed-point enclosure of zero width.
pub fn point_from_ratio(num: u64, den: u64) -> FixedPoint {
    let shifted = BigInt::from(num % den) << 192usize;
    let scaled = &shifted / den;
    let exact = (&shifted % den).is_zero();
    FixedPoint { value: Fx::from_bigint_mod(&scaled), width: if exact { 0 } else { 1 } }
}
