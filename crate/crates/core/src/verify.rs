//! Bound checks over ranges of convergent levels, producing row reports.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::accum::{ComplexNeumaier, Neumaier};
use crate::alpha::{Alpha, ContinuedFraction};
use crate::discrepancy::{kh_lemma_check, KhReport};
use crate::error::{Error, Result};
use crate::segments::{ck_values, exceptional_closed_forms, exceptional_indices, plain_segment};
use crate::sums::{e, e_minus_one, recip_e_prefix, reduced, t_sum_closed};

/// Versioned caps. LEMMA_NEW and HARMAN are analytic constants;
/// the others were fixed once from independent oracle runs.
pub mod caps {
    /// `max ρ_n` for the level-wise bound on `|T_{q_n}|`.
    pub const THEOREM: f64 = 20.0;
    /// `|Σ_{m<q_n} 1/{{mα}}| ≤ 16·q_n`.
    pub const LEMMA_NEW: f64 = 16.0;
    /// `D_N ≤ 3·Σ t_j`.
    pub const HARMAN: f64 = 3.0;
    /// `max_{n ≤ 30} |T_{q_n}|` for the golden ratio (oracle: 1.42438).
    pub const SINAI_PHI: f64 = 1.5;
    /// `max_{n ≤ 25} |T_{q_n}|` for `√2` (oracle through n = 16: 1.31323).
    pub const SINAI_SQRT2: f64 = 1.5;
    /// `max_{M ≤ 10⁵} |S″_M|` for the golden ratio (oracle: 0.549058 at M = 75026).
    pub const HL_PHI: f64 = 0.6;
    /// `|Σ_{k≤m} 1/{{kα}}| / (q_n·max(1, ln a_i))` (oracle: 1.32225 for √3, n = 14).
    pub const LEMMA_OST: f64 = 1.5;
}

/// The named test irrationals: four badly approximable ones and two with
/// large or growing partial quotients.
pub mod suite {
    use crate::alpha::AlphaSpec;

    pub fn phi() -> AlphaSpec {
        AlphaSpec::phi()
    }

    pub fn sqrt2() -> AlphaSpec {
        AlphaSpec::sqrt(2)
    }

    pub fn sqrt3() -> AlphaSpec {
        AlphaSpec::sqrt(3)
    }

    /// `[0; (1, 2)]`, i.e. `√3 − 1`.
    pub fn periodic_1_2() -> AlphaSpec {
        AlphaSpec::quotients(&[0], Some(&[1, 2]))
    }

    /// `[0; 1, 2, 3, …, 60]`.
    pub fn growing() -> AlphaSpec {
        let head: Vec<i64> = (0..=60).collect();
        AlphaSpec::quotients(&head, None)
    }

    /// `[0; 1, 1, 1, 10⁶, 1, 1, …]` with 200 trailing ones.
    pub fn spike() -> AlphaSpec {
        let mut head = vec![0, 1, 1, 1, 1_000_000];
        head.extend(std::iter::repeat_n(1, 200));
        AlphaSpec::quotients(&head, None)
    }

    pub fn bounded() -> Vec<(&'static str, AlphaSpec)> {
        vec![("phi", phi()), ("sqrt2", sqrt2()), ("sqrt3", sqrt3()), ("cf:0;(1,2)", periodic_1_2())]
    }

    pub fn all() -> Vec<(&'static str, AlphaSpec)> {
        let mut v = bounded();
        v.push(("growing", growing()));
        v.push(("spike", spike()));
        v
    }
}

/// Default work budget (largest `q_n` or `M` evaluated).
pub const DEFAULT_BUDGET: u64 = 250_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not evaluated: beyond the work budget or the available quotients.
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub n: usize,
    pub a_n: BigInt,
    pub q_n: BigInt,
    pub t: Option<Complex64>,
    pub bound: f64,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub alpha_id: String,
    pub cap: f64,
    pub rows: Vec<BoundRow>,
    /// Largest ratio among evaluated rows.
    pub max_ratio: f64,
}

impl BoundReport {
    /// Pass only when every row was evaluated and none exceeds the cap.
    pub fn verdict(&self) -> Verdict {
        if self.rows.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.rows.iter().any(|r| r.verdict == Verdict::Skipped) {
            Verdict::Skipped
        } else {
            Verdict::Pass
        }
    }

    pub fn evaluated(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict != Verdict::Skipped).count()
    }
}

/// `B_n = max{ln(2·max_{1≤i≤n} a_i)/a_{n+1}, 1}` (the maximum runs over
/// `a_1` alone when `n = 0`).
pub fn theorem_bound(cf: &ContinuedFraction, n: usize) -> Result<f64> {
    cf.check_index(n + 1)?;
    let top = (1..=n.max(1)).map(|i| cf.a(i)).max().expect("nonempty");
    let ln = ln_big(&(top * 2));
    let next = cf.a(n + 1).to_f64().unwrap_or(f64::INFINITY);
    Ok((ln / next).max(1.0))
}

fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 60;
    (v >> shift as usize).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

fn t_rows(
    alpha: &Alpha,
    levels: RangeInclusive<usize>,
    budget: u64,
    cap: f64,
    bound_of: impl Fn(usize) -> Result<f64>,
) -> Result<BoundReport> {
    let cf = alpha.cf();
    let mut rows = Vec::new();
    let mut max_ratio = 0.0f64;
    for n in levels {
        if n > cf.last_index() {
            rows.push(BoundRow {
                n,
                a_n: BigInt::default(),
                q_n: BigInt::default(),
                t: None,
                bound: f64::NAN,
                ratio: None,
                verdict: Verdict::Skipped,
            });
            continue;
        }
        let bound = match bound_of(n) {
            Ok(b) => b,
            Err(Error::IndexOutOfRange { .. }) => f64::NAN,
            Err(e) => return Err(e),
        };
        let q = cf.q(n);
        let mut row = BoundRow {
            n,
            a_n: cf.a(n).clone(),
            q_n: q.clone(),
            t: None,
            bound,
            ratio: None,
            verdict: Verdict::Skipped,
        };
        if let Some(m) = q.to_u64().filter(|&m| m <= budget && bound.is_finite()) {
            let t = t_sum_closed(alpha, m)?.t;
            let ratio = t.norm() / bound;
            max_ratio = max_ratio.max(ratio);
            row.t = Some(t);
            row.ratio = Some(ratio);
            row.verdict = Verdict::of(ratio <= cap);
        }
        rows.push(row);
    }
    Ok(BoundReport { alpha_id: alpha.spec().to_string(), cap, rows, max_ratio })
}

/// `ρ_n = |T_{q_n}|/B_n` for each level; passes iff every `ρ_n ≤ cap`.
pub fn theorem_bound_check(
    alpha: &Alpha,
    levels: RangeInclusive<usize>,
    cap: f64,
    budget: u64,
) -> Result<BoundReport> {
    t_rows(alpha, levels, budget, cap, |n| theorem_bound(alpha.cf(), n))
}

/// `|T_{q_n}| ≤ cap` for each level (bound column fixed at 1).
pub fn sinai_ulcigrai_check(
    alpha: &Alpha,
    levels: RangeInclusive<usize>,
    cap: f64,
    budget: u64,
) -> Result<BoundReport> {
    t_rows(alpha, levels, budget, cap, |_| Ok(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HlReport {
    pub m_max: u64,
    pub max_abs: f64,
    pub argmax: u64,
    pub cap: f64,
    /// `(M, S″_M)` at powers of two and at `M_max`.
    pub trace: Vec<(u64, Complex64)>,
}

impl HlReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::of(self.max_abs <= self.cap)
    }
}

/// `max_{1≤M≤M_max} |S″_M|`, extending one running sum.
pub fn hardy_littlewood_scan(alpha: &Alpha, m_max: u64, cap: f64) -> Result<HlReport> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("M_max must be at least 1".into()));
    }
    let mut acc = ComplexNeumaier::new();
    let mut trace = vec![(1, Complex64::new(0.0, 0.0))];
    let (mut max_abs, mut argmax) = (0.0f64, 1u64);
    for m in 2..=m_max {
        let x = reduced(alpha, m - 1, 1)?;
        acc.add(e_minus_one(x).inv());
        let s2 = acc.value() / m as f64;
        if s2.norm() > max_abs {
            max_abs = s2.norm();
            argmax = m;
        }
        if m.is_power_of_two() || m == m_max {
            trace.push((m, s2));
        }
    }
    Ok(HlReport { m_max, max_abs, argmax, cap, trace })
}

/// The chain for one level, with its ratio `|Σ|/q_n` against 16.
pub fn lemma_new_check(alpha: &Alpha, n: usize, budget: u64) -> Result<KhReport> {
    kh_lemma_check(alpha, n, budget)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OstReport {
    pub n: usize,
    pub q_n: u64,
    /// `max_{1≤i≤n} max(1, ln a_i)`.
    pub log_factor: f64,
    pub checked: u64,
    pub argmax: u64,
    pub max_ratio: f64,
    pub cap: f64,
}

impl OstReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::of(self.max_ratio <= self.cap)
    }
}

/// `|Σ_{k≤m} 1/{{kα}}| / (q_n·max_i max(1, ln a_i))` over `m < q_n`:
/// every `m` when `samples` is `None`, else the listed ones.
pub fn lemma_ost_check(
    alpha: &Alpha,
    n: usize,
    samples: Option<&[u64]>,
    cap: f64,
    budget: u64,
) -> Result<OstReport> {
    let cf = alpha.cf();
    cf.check_index(n)?;
    let q = cf.q(n);
    let q_n = q
        .to_u64()
        .filter(|&v| v <= budget)
        .ok_or_else(|| Error::BudgetExceeded { work: q.to_u128().unwrap_or(u128::MAX), budget })?;
    let log_factor = (1..=n).map(|i| ln_big(cf.a(i)).max(1.0)).fold(1.0, f64::max);
    let mut targets: Vec<u64> = match samples {
        Some(s) => s.to_vec(),
        None => (1..q_n).collect(),
    };
    targets.sort_unstable();
    targets.dedup();
    if let Some(&bad) = targets.iter().find(|&&m| m == 0 || m >= q_n) {
        return Err(Error::InvalidArgument(format!("sample m = {bad} outside [1, q_{n} − 1]")));
    }
    let scale = q_n as f64 * log_factor;
    let mut acc = Neumaier::new();
    let (mut k, mut max_ratio, mut argmax) = (0u64, 0.0f64, 0u64);
    for &m in &targets {
        while k < m {
            k += 1;
            acc.add(1.0 / alpha.frac_f64(k)?);
        }
        let r = acc.value().abs() / scale;
        if r > max_ratio {
            max_ratio = r;
            argmax = m;
        }
    }
    Ok(OstReport { n, q_n, log_factor, checked: targets.len() as u64, argmax, max_ratio, cap })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TelescopeReport {
    pub m: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Both sides of the summation-by-parts identity for
/// `Σ_{m=1}^{M−1} e(Mmα)/(e(mα) − 1)`.
pub fn telescope_check(alpha: &Alpha, m_max: u64) -> Result<TelescopeReport> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("M must be at least 2".into()));
    }
    let prefix = recip_e_prefix(alpha, m_max - 1)?;
    let outer = |m: u64| reduced(alpha, m, m_max).map(e);
    let mut lhs = ComplexNeumaier::new();
    let mut rhs = ComplexNeumaier::new();
    let mut cur = outer(1)?;
    for m in 1..m_max {
        let next = outer(m + 1)?;
        let x = reduced(alpha, m, 1)?;
        lhs.add(cur * e_minus_one(x).inv());
        rhs.add((cur - next) * prefix[m as usize - 1]);
        cur = next;
    }
    // cur is now e(M·M·α)
    rhs.add(cur * prefix[m_max as usize - 2]);
    let (l, r) = (lhs.value(), rhs.value());
    let residual = (l - r).norm() / l.norm().max(r.norm()).max(f64::MIN_POSITIVE);
    Ok(TelescopeReport { m: m_max, lhs: l, rhs: r, residual })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OuterReport {
    pub n: usize,
    /// `|1 − e(q_n ψ_n)|`.
    pub chord: f64,
    /// `2π·|q_n ψ_n|`.
    pub arc: f64,
    /// `2π/q_{n+1}`.
    pub limit: f64,
    /// `|q_n ψ_n| < 1/q_{n+1}` and `‖q_n α‖ < 1/q_{n+1}`, decided exactly.
    pub exact_links: bool,
}

impl OuterReport {
    pub fn holds(&self) -> bool {
        self.exact_links && self.chord <= self.arc * (1.0 + 1e-12) && self.arc < self.limit
    }
}

pub fn outer_term_check(alpha: &Alpha, n: usize) -> Result<OuterReport> {
    use std::cmp::Ordering::*;
    let cf = alpha.cf();
    let ce = alpha.convergent_error(n)?;
    let q_next = cf.q(n + 1);
    let theta = ce.psi.mul_int(cf.q(n)).abs();
    let dist = alpha.frac_of(cf.q(n))?.abs();
    let inv_next = BigRational::new(BigInt::one(), q_next.clone());
    let theta_below = theta.cmp_ratio(&inv_next).ok_or_else(|| Error::precision("|q_n ψ_n| against 1/q_{n+1}"))?;
    let dist_below = dist.cmp_ratio(&inv_next).ok_or_else(|| Error::precision("‖q_n α‖ against 1/q_{n+1}"))?;
    let exact_links = theta_below == Less && dist_below == Less;
    let xi = ce.xi_f64();
    let qn1 = q_next.to_f64().unwrap_or(f64::INFINITY);
    let t = xi.abs() / qn1;
    Ok(OuterReport {
        n,
        chord: 2.0 * (PI * t).sin().abs(),
        arc: 2.0 * PI * t,
        limit: 2.0 * PI / qn1,
        exact_links,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkRow {
    pub i: usize,
    pub q_i: u64,
    pub segments: u64,
    pub terms: u64,
    /// Largest relative error of the `C_k` reconstruction.
    pub recon_err: f64,
    /// Largest `|C_k|` over terms with `|n′_k| ≥ 2`.
    pub max_abs_c: f64,
    /// Range of `C_k` over those terms.
    pub c_min: f64,
    pub c_max: f64,
    /// Largest relative error of the two exceptional closed forms.
    pub closed_err: f64,
    /// Whether `k_{(±1,c)} = k_{(±1,0)} + c·q_i` held for every segment.
    pub shift_law: bool,
    /// Whether each segment held exactly one multiple of `q_i`.
    pub one_multiple: bool,
}

impl CkRow {
    pub fn holds(&self, tol: f64) -> bool {
        self.recon_err < tol && self.closed_err < tol && self.max_abs_c < 2.0 && self.shift_law && self.one_multiple
    }
}

/// Residue analysis over the segments `(c·q_i, (c+1)·q_i]`, `c < a_{i+1}`.
pub fn ck_check(alpha: &Alpha, i: usize, budget: u64) -> Result<CkRow> {
    let cf = alpha.cf();
    cf.check_index(i + 1)?;
    let q_i = cf.q(i).to_u64().ok_or(Error::BudgetExceeded { work: u128::MAX, budget })?;
    if q_i < 4 {
        return Err(Error::DegenerateModulus { level: i, modulus: q_i });
    }
    let reps = cf.a(i + 1).to_u64().unwrap_or(u64::MAX);
    let work = q_i as u128 * reps as u128;
    if work > budget as u128 {
        return Err(Error::BudgetExceeded { work, budget });
    }
    let qf = q_i as f64;
    let mut row = CkRow {
        i,
        q_i,
        segments: reps,
        terms: 0,
        recon_err: 0.0,
        max_abs_c: 0.0,
        c_min: f64::INFINITY,
        c_max: f64::NEG_INFINITY,
        closed_err: 0.0,
        shift_law: true,
        one_multiple: true,
    };
    let base = exceptional_indices(&plain_segment(cf, i, 0)?, cf)?;
    for c in 0..reps {
        let seg = plain_segment(cf, i, c)?;
        let an = exceptional_indices(&seg, cf)?;
        row.shift_law &= an.k_plus == base.k_plus + c * q_i && an.k_minus == base.k_minus + c * q_i;
        let multiples = (seg.start + 1..=seg.end()).filter(|k| k % q_i == 0).count();
        row.one_multiple &= multiples == 1 && an.k_zero == (c + 1) * q_i;
        for v in ck_values(alpha, &an)? {
            let direct = 1.0 / alpha.frac_f64(v.k)?;
            row.recon_err = row.recon_err.max(((v.reconstruct(qf) - direct) / direct).abs());
            if v.n_prime.abs() >= 2 {
                row.max_abs_c = row.max_abs_c.max(v.c.abs());
                row.c_min = row.c_min.min(v.c);
                row.c_max = row.c_max.max(v.c);
            }
            row.terms += 1;
        }
        row.closed_err = row.closed_err.max(exceptional_closed_forms(alpha, &an)?.max_rel_error());
    }
    Ok(row)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthProbe {
    pub i: usize,
    pub count: u64,
    pub sum: f64,
    /// `sum / (q_{i+1}·ln(count + 1))`.
    pub ratio: f64,
    /// Signs of the first few terms.
    pub leading_signs: Vec<i8>,
}

/// `Σ_{c=0}^{C−1} 1/{{(c+1)·q_i·α}}` against `q_{i+1}·ln(C+1)`. Diagnostic only.
pub fn growth_probe(alpha: &Alpha, i: usize, count: u64) -> Result<GrowthProbe> {
    let cf = alpha.cf();
    cf.check_index(i + 1)?;
    if count == 0 {
        return Err(Error::InvalidArgument("C must be at least 1".into()));
    }
    let q_i = cf.q(i);
    let mut acc = Neumaier::new();
    let mut leading_signs = Vec::new();
    for c in 0..count {
        let k = q_i * BigInt::from(c + 1);
        let f = alpha
            .frac_of(&k)?
            .to_f64()
            .ok_or_else(|| Error::precision(format!("{{{{{k}·α}}}}")))?;
        if leading_signs.len() < 8 {
            leading_signs.push(if f > 0.0 { 1 } else { -1 });
        }
        acc.add(1.0 / f);
    }
    let q_next = cf.q(i + 1).to_f64().unwrap_or(f64::INFINITY);
    let sum = acc.value();
    Ok(GrowthProbe { i, count, sum, ratio: sum / (q_next * ((count + 1) as f64).ln()), leading_signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::AlphaSpec;

    #[test]
    fn phi_bound_is_one() {
        let a = Alpha::new(AlphaSpec::phi()).unwrap();
        for n in 0..30 {
            assert_eq!(theorem_bound(a.cf(), n).unwrap(), 1.0);
        }
    }

    #[test]
    fn large_next_quotient_hits_the_floor() {
        let a = Alpha::new(AlphaSpec::quotients(&[0, 1, 1, 1, 1_000_000, 1, 1], None)).unwrap();
        assert_eq!(theorem_bound(a.cf(), 3).unwrap(), 1.0);
        let b = theorem_bound(a.cf(), 4).unwrap();
        assert!((b - 2_000_000f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn hl_starts_at_zero() {
        let a = Alpha::new(AlphaSpec::phi()).unwrap();
        let r = hardy_littlewood_scan(&a, 1, 1.0).unwrap();
        assert_eq!(r.max_abs, 0.0);
        assert_eq!(r.trace, vec![(1, Complex64::new(0.0, 0.0))]);
    }

    #[test]
    fn telescope_small_cases() {
        let a = Alpha::new(AlphaSpec::sqrt(2)).unwrap();
        for m in [2, 3, 12, 257] {
            assert!(telescope_check(&a, m).unwrap().residual < 1e-12);
        }
    }

    #[test]
    fn outer_chain_for_phi() {
        let a = Alpha::new(AlphaSpec::phi()).unwrap();
        let r = outer_term_check(&a, 10).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn ck_rows_hold() {
        let a = Alpha::new(AlphaSpec::sqrt(2)).unwrap();
        for i in 2..8 {
            let r = ck_check(&a, i, 1 << 20).unwrap();
            assert!(r.holds(1e-10), "{r:?}");
        }
    }

    #[test]
    fn growth_probe_single_term() {
        let a = Alpha::new(AlphaSpec::sqrt(3)).unwrap();
        let g = growth_probe(&a, 4, 1).unwrap();
        let (q_i, q_next) = (a.cf().q(4).to_f64().unwrap(), a.cf().q(5).to_f64().unwrap());
        assert!(g.sum.abs() > q_next / 2.0 && g.sum.abs() < q_next + q_i);
    }
}
