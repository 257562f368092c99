//! Segment decomposition of `Σ_{k≤m} 1/{{kα}}` along the Ostrowski digits of
//! `m`, and the residue analysis inside one segment.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::alpha::{Alpha, ContinuedFraction};
use crate::error::{Error, Result};
use crate::ostrowski::ostrowski_expand;
use crate::sums::recip_range;

/// The block `(start, start + len]` with `len = q_level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub level: usize,
    pub rep: u64,
    pub start: u64,
    pub len: u64,
}

impl Segment {
    pub fn end(&self) -> u64 {
        self.start + self.len
    }

    pub fn contains(&self, k: u64) -> bool {
        k > self.start && k <= self.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentPlan {
    pub m: u64,
    pub segments: Vec<Segment>,
}

impl SegmentPlan {
    /// Consecutive blocks covering `[1, m]` exactly.
    pub fn is_partition(&self) -> bool {
        let mut at = 0;
        for s in &self.segments {
            if s.start != at || s.len == 0 {
                return false;
            }
            at = s.end();
        }
        at == self.m
    }
}

fn small(v: &BigInt, what: &str) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::RangeExceeded { value: format!("{what} = {v}"), limit: u64::MAX.to_string() })
}

/// Blocks `(n(i,c), n(i,c) + q_i]`, `n(i,c) = Σ_{j<i} c_{j+1} q_j + c·q_i`.
pub fn segment_plan(m: u64, cf: &ContinuedFraction) -> Result<SegmentPlan> {
    let exp = ostrowski_expand(&BigInt::from(m), cf)?;
    let mut segments = Vec::new();
    let mut start = 0u64;
    for (i, digit) in exp.coeffs.iter().enumerate() {
        let digit = small(digit, "digit")?;
        let len = small(cf.q(i), "q_i")?;
        for rep in 0..digit {
            segments.push(Segment { level: i, rep, start, len });
            start += len;
        }
    }
    Ok(SegmentPlan { m, segments })
}

/// `Σ_{l ∈ segment} 1/{{lα}}`.
pub fn segment_sum(alpha: &Alpha, seg: &Segment) -> Result<f64> {
    recip_range(alpha, seg.start, seg.len).map(|(v, _)| v)
}

/// The exceptional indices of one segment at level `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentAnalysis {
    pub segment: Segment,
    pub q: u64,
    pub p_mod_q: u64,
    /// `k` with `k·p_i ≡ 1 (mod q_i)`.
    pub k_plus: u64,
    /// `k` with `k·p_i ≡ −1 (mod q_i)`.
    pub k_minus: u64,
    /// `(c+1)·q_i`.
    pub k_zero: u64,
    /// Indices whose residue sits at or next to `q_i/2`.
    pub half_indices: Vec<u64>,
    /// Set when `q_i ≤ 3`: the ±1, zero and half residues overlap and are
    /// treated as one excluded set.
    pub merged: bool,
}

impl SegmentAnalysis {
    /// Every excluded index, sorted and deduplicated.
    pub fn excluded(&self) -> Vec<u64> {
        let mut v = vec![self.k_plus, self.k_minus, self.k_zero];
        v.extend(&self.half_indices);
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `n_k ∈ [0, q_i)` with `n_k ≡ k·p_i`.
    pub fn residue(&self, k: u64) -> u64 {
        ((k as u128 * self.p_mod_q as u128) % self.q as u128) as u64
    }

    /// The residue's nearest-to-zero representative `n′_k`.
    pub fn centered(&self, k: u64) -> i64 {
        let n = self.residue(k);
        if 2 * n <= self.q {
            n as i64
        } else {
            n as i64 - self.q as i64
        }
    }
}

/// The unique index in `(start, start + q]` congruent to `target` mod `q`.
fn lift(start: u64, target: u64, q: u64) -> u64 {
    let r = (target + q - start % q) % q;
    if r == 0 {
        start + q
    } else {
        start + r
    }
}

/// Locates the zero, ±1 and half residues of `k·p_i mod q_i` in `seg`.
pub fn exceptional_indices(seg: &Segment, cf: &ContinuedFraction) -> Result<SegmentAnalysis> {
    let i = seg.level;
    let q = small(cf.q(i), "q_i")?;
    if q <= 1 {
        return Err(Error::DegenerateModulus { level: i, modulus: q });
    }
    if seg.len != q {
        return Err(Error::InvalidArgument(format!("segment length {} differs from q_{i} = {q}", seg.len)));
    }
    let p_mod_q = small(&cf.p(i).mod_floor(cf.q(i)), "p_i mod q_i")?;
    let inv = BigInt::from(p_mod_q)
        .extended_gcd(&BigInt::from(q))
        .x
        .mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("inverse below q");
    let k_plus = lift(seg.start, inv, q);
    let k_minus = lift(seg.start, q - inv, q);
    let k_zero = lift(seg.start, 0, q);
    let halves: Vec<u64> = if q % 2 == 0 { vec![q / 2] } else { vec![(q - 1) / 2, q.div_ceil(2)] };
    let mut half_indices: Vec<u64> =
        halves.iter().map(|&h| lift(seg.start, (h as u128 * inv as u128 % q as u128) as u64, q)).collect();
    half_indices.sort_unstable();
    Ok(SegmentAnalysis {
        segment: *seg,
        q,
        p_mod_q,
        k_plus,
        k_minus,
        k_zero,
        half_indices,
        merged: q <= 3,
    })
}

/// `(k, n′_k, C_k)` for a non-exceptional `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CkValue {
    pub k: u64,
    pub n_prime: i64,
    pub c: f64,
    /// `k·ξ_i/(n′_k·q_{i+1})`.
    pub x: f64,
}

impl CkValue {
    /// `q_i/n′_k + C_k·k·ξ_i·q_i/((n′_k)²·q_{i+1})`.
    pub fn reconstruct(&self, q_i: f64) -> f64 {
        let n = self.n_prime as f64;
        q_i / n + self.c * self.x * q_i / n
    }
}

fn xi_parts(alpha: &Alpha, i: usize) -> Result<(f64, f64, f64)> {
    let cf = alpha.cf();
    let xi = alpha.convergent_error(i)?.xi_f64();
    let q_i = cf.q(i).to_f64().unwrap_or(f64::INFINITY);
    let q_next = cf.q(i + 1).to_f64().unwrap_or(f64::INFINITY);
    Ok((xi, q_i, q_next))
}

/// `C_k = −1/(1 + x)` with `x = k·ξ_i/(n′_k·q_{i+1})` for every non-exceptional
/// `k` in the segment.
pub fn ck_values(alpha: &Alpha, an: &SegmentAnalysis) -> Result<Vec<CkValue>> {
    let (xi, _, q_next) = xi_parts(alpha, an.segment.level)?;
    let excluded = an.excluded();
    let mut out = Vec::with_capacity(an.q as usize);
    for k in an.segment.start + 1..=an.segment.end() {
        if excluded.binary_search(&k).is_ok() {
            continue;
        }
        let n_prime = an.centered(k);
        let x = k as f64 * xi / (n_prime as f64 * q_next);
        out.push(CkValue { k, n_prime, c: -1.0 / (1.0 + x), x });
    }
    Ok(out)
}

/// The two closed forms for `1/{{k_{(±1,c)}α}}` beside their direct values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForms {
    pub plus_closed: f64,
    pub plus_direct: f64,
    pub minus_closed: f64,
    pub minus_direct: f64,
}

impl ClosedForms {
    pub fn max_rel_error(&self) -> f64 {
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        rel(self.plus_closed, self.plus_direct).max(rel(self.minus_closed, self.minus_direct))
    }
}

/// `q_i q_{i+1}/(q_{i+1} + k₊ξ_i)` and `−q_i q_{i+1}/(q_{i+1} − k₋ξ_i)`.
pub fn exceptional_closed_forms(alpha: &Alpha, an: &SegmentAnalysis) -> Result<ClosedForms> {
    if an.q < 4 {
        return Err(Error::DegenerateModulus { level: an.segment.level, modulus: an.q });
    }
    let (xi, q_i, q_next) = xi_parts(alpha, an.segment.level)?;
    let kp = an.k_plus as f64;
    let km = an.k_minus as f64;
    Ok(ClosedForms {
        plus_closed: q_i * q_next / (q_next + kp * xi),
        plus_direct: 1.0 / alpha.frac_f64(an.k_plus)?,
        minus_closed: -q_i * q_next / (q_next - km * xi),
        minus_direct: 1.0 / alpha.frac_f64(an.k_minus)?,
    })
}

/// The standalone segment `(c·q_i, (c+1)·q_i]`.
pub fn plain_segment(cf: &ContinuedFraction, i: usize, c: u64) -> Result<Segment> {
    cf.check_index(i)?;
    let q = small(cf.q(i), "q_i")?;
    Ok(Segment { level: i, rep: c, start: c * q, len: q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::AlphaSpec;
    use crate::sums::recip_sum;

    #[test]
    fn plan_for_ten_under_phi() {
        let a = Alpha::new(AlphaSpec::phi()).unwrap();
        let plan = segment_plan(10, a.cf()).unwrap();
        assert_eq!(
            plan.segments,
            vec![
                Segment { level: 2, rep: 0, start: 0, len: 2 },
                Segment { level: 5, rep: 0, start: 2, len: 8 },
            ]
        );
        assert!(plan.is_partition());
        let v = segment_sum(&a, &plan.segments[0]).unwrap();
        assert!((v - 1.618033988749895).abs() < 1e-12);
        let total: f64 = plan.segments.iter().map(|s| segment_sum(&a, s).unwrap()).sum();
        assert!((total - recip_sum(&a, 10).unwrap().value).abs() < 1e-10);
    }

    #[test]
    fn sqrt2_residues() {
        let a = Alpha::new(AlphaSpec::sqrt(2)).unwrap();
        let seg = plain_segment(a.cf(), 2, 0).unwrap();
        let an = exceptional_indices(&seg, a.cf()).unwrap();
        assert_eq!((an.k_plus, an.k_minus, an.k_zero), (3, 2, 5));
        assert!(!an.merged);
        // 7k ≡ 2 or 3 (mod 5) gives k = 1 or 4
        assert_eq!(an.half_indices, vec![1, 4]);
        let later = exceptional_indices(&plain_segment(a.cf(), 2, 1).unwrap(), a.cf()).unwrap();
        assert_eq!((later.k_plus, later.k_minus, later.k_zero), (8, 7, 10));
    }

    #[test]
    fn tiny_moduli_are_merged_or_rejected() {
        let a = Alpha::new(AlphaSpec::phi()).unwrap();
        let seg = plain_segment(a.cf(), 3, 0).unwrap();
        assert!(exceptional_indices(&seg, a.cf()).unwrap().merged);
        let seg = plain_segment(a.cf(), 1, 0).unwrap();
        assert!(matches!(exceptional_indices(&seg, a.cf()), Err(Error::DegenerateModulus { .. })));
    }

    #[test]
    fn ck_reconstruction_and_closed_forms() {
        let a = Alpha::new(AlphaSpec::sqrt(2)).unwrap();
        let seg = plain_segment(a.cf(), 3, 0).unwrap();
        let an = exceptional_indices(&seg, a.cf()).unwrap();
        let q_i = an.q as f64;
        for v in ck_values(&a, &an).unwrap() {
            let direct = 1.0 / a.frac_f64(v.k).unwrap();
            assert!(((v.reconstruct(q_i) - direct) / direct).abs() < 1e-12, "k = {}", v.k);
            if v.n_prime.abs() >= 2 {
                assert!(v.c.abs() < 2.0);
            }
        }
        let cl = exceptional_closed_forms(&a, &an).unwrap();
        assert!(cl.max_rel_error() < 1e-12);
    }
}
