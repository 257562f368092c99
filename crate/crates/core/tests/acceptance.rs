//! Acceptance suite: one line per criterion, `PASS` or `FAIL`.
//!
//! Runs as its own harness. The process exits non-zero when a criterion
//! fails that is not listed in `KNOWN_RED`, or when a listed one starts
//! passing (so the list cannot go stale).

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ostrowski_core::discrepancy::{discrepancy_exact, harman_bound, kh_lemma_check};
use ostrowski_core::segments::{exceptional_indices, plain_segment, segment_plan};
use ostrowski_core::sums::{cot_remainder, s2_via_cot, t_sum_closed, t_sum_naive};
use ostrowski_core::verify::{
    caps, ck_check, hardy_littlewood_scan, outer_term_check, suite, telescope_check, theorem_bound_check,
    Verdict,
};
use ostrowski_core::{ostrowski_eval, ostrowski_expand, Alpha, AlphaSpec, Error};

mod tol {
    /// Relative tolerance on the reciprocal sum against `16·q_n`.
    pub const LEMMA_SUM_REL: f64 = 1e-8;
    /// Largest `q_n` in the variation/discrepancy chain.
    pub const LEMMA_Q_MAX: u64 = 1_000_000;
    /// Largest `q_n` for the quadratic discrepancy scan.
    pub const DISC_Q_MAX: u64 = 4096;
    /// Random `N` per irrational for the digit-sum bound.
    pub const HARMAN_SAMPLES: usize = 200;
    /// `|naive − closed| < NAIVE_PER_M · M`.
    pub const NAIVE_PER_M: f64 = 1e-9;
    pub const NAIVE_M_MAX: u64 = 2048;
    pub const NAIVE_EXHAUSTIVE: u64 = 256;
    pub const NAIVE_RANDOM: usize = 6;
    /// Relative residual for every identity in the identity suite.
    pub const IDENTITY_REL: f64 = 1e-8;
    pub const IDENTITY_M_MAX: u64 = 2048;
    pub const COT_SAMPLES: u32 = 10_000;
    /// Residue analysis runs for `i ≤ CK_LEVEL_MAX` while `q_{i+1} ≤ CK_WORK_MAX`.
    pub const CK_LEVEL_MAX: usize = 20;
    pub const CK_WORK_MAX: u64 = 20_000_000;
    pub const OSTROWSKI_LEVEL: usize = 12;
    pub const PARTITION_LEVEL: usize = 10;
    pub const XI_LEVEL_MAX: usize = 40;
    pub const OUTER_LEVEL_MAX: usize = 30;
    /// Largest `q_n` whose `T_{q_n}` is evaluated (about a minute per 5·10⁸ terms).
    pub const THEOREM_BUDGET: u64 = 250_000_000;
    pub const HL_M_MAX: u64 = 100_000;
}

/// Criteria expected to report FAIL, with the reason.
const KNOWN_RED: &[(u32, &str)] = &[(
    7,
    "rows with q_n beyond the O(M) time budget cannot be evaluated; coverage of the required range is incomplete",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass_if(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn alpha(spec: AlphaSpec) -> Alpha {
    Alpha::new(spec).expect("suite irrational")
}

fn bounded() -> Vec<(&'static str, Alpha)> {
    suite::bounded().into_iter().map(|(n, s)| (n, alpha(s))).collect()
}

fn levels_up_to(a: &Alpha, q_max: u64) -> Vec<usize> {
    (1..=a.cf().last_index()).take_while(|&n| a.cf().q_u64(n).is_some_and(|q| q <= q_max)).collect()
}

fn criterion_1() -> Result<Outcome, Error> {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for (name, a) in bounded() {
        for n in levels_up_to(&a, tol::LEMMA_Q_MAX) {
            let r = kh_lemma_check(&a, n, tol::LEMMA_Q_MAX)?;
            worst = worst.max(r.ratio());
            let sum_ok = r.sum_value.abs() <= r.bound * (1.0 + tol::LEMMA_SUM_REL);
            if !(r.min_dist_ok && sum_ok && r.variation == 4.0 * r.q_n as f64) {
                bad.push(format!("{name} n={n}"));
            }
            checked += 1;
        }
    }
    Ok(pass_if(
        bad.is_empty(),
        format!("{checked} levels, max |Σ|/q_n = {worst:.4} (cap {}), failures {bad:?}", caps::LEMMA_NEW),
    ))
}

fn criterion_2() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut levels, mut worst, mut bad) = (0, 0.0f64, Vec::new());
    let mut samples = 0;
    for (name, a) in bounded() {
        for n in levels_up_to(&a, tol::DISC_Q_MAX) {
            let q = a.cf().q_u64(n).expect("small");
            let d = discrepancy_exact(&a, q, tol::DISC_Q_MAX)?;
            worst = worst.max(d.hi);
            if d.at_most(caps::HARMAN) != Some(true) {
                bad.push(format!("{name} D_{q} = {:.6}", d.value()));
            }
            levels += 1;
        }
        let q10 = a.cf().q_u64(10).expect("small");
        for _ in 0..tol::HARMAN_SAMPLES {
            let n = rng.gen_range(1..q10);
            let d = discrepancy_exact(&a, n, q10)?;
            let h = harman_bound(a.cf(), n)?;
            if d.at_most(h.bound as f64) != Some(true) {
                bad.push(format!("{name} N={n} D={:.6} > {}", d.value(), h.bound));
            }
            samples += 1;
        }
    }
    Ok(pass_if(
        bad.is_empty(),
        format!("{levels} denominators, max D_(q_n) ≤ {worst:.4}; {samples} random N dominated; failures {bad:?}"),
    ))
}

fn five_suite() -> Vec<(&'static str, Alpha)> {
    let mut v = bounded();
    v.push(("growing", alpha(suite::growing())));
    v
}

fn criterion_3() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut count, mut worst, mut bad) = (0, 0.0f64, Vec::new());
    for (name, a) in five_suite() {
        let mut ms: Vec<u64> = (1..=tol::NAIVE_EXHAUSTIVE).collect();
        ms.extend((0..tol::NAIVE_RANDOM).map(|_| rng.gen_range(tol::NAIVE_EXHAUSTIVE + 1..=tol::NAIVE_M_MAX)));
        for m in ms {
            let diff = (t_sum_naive(&a, m)? - t_sum_closed(&a, m)?.t).norm();
            worst = worst.max(diff / m as f64);
            if diff >= tol::NAIVE_PER_M * m as f64 {
                bad.push(format!("{name} M={m}"));
            }
            count += 1;
        }
    }
    Ok(pass_if(bad.is_empty(), format!("{count} (α, M) pairs, max |Δ|/M = {worst:.2e}, failures {bad:?}")))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn criterion_4() -> Result<Outcome, Error> {
    let mut bad = Vec::new();
    let (mut split, mut cot, mut tele, mut ck, mut closed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut ck_levels = 0;
    for (name, a) in five_suite() {
        for m in 1..=tol::IDENTITY_M_MAX {
            let r = t_sum_closed(&a, m)?;
            let one = Complex64::new(1.0, 0.0);
            split = split.max(rel(r.t, one + r.s1 - r.s2));
            cot = cot.max(rel(r.s2, s2_via_cot(&a, m)?));
        }
        let q6 = a.cf().q_u64(6).expect("small");
        for m in [2, 3, 10, 257, 1000, q6, tol::IDENTITY_M_MAX] {
            tele = tele.max(telescope_check(&a, m)?.residual);
        }
        for i in 0..=tol::CK_LEVEL_MAX {
            let fits = a.cf().q_u64(i + 1).is_some_and(|q| q <= tol::CK_WORK_MAX);
            if !fits || a.cf().q_u64(i).is_some_and(|q| q < 4) {
                continue;
            }
            let row = ck_check(&a, i, tol::CK_WORK_MAX)?;
            ck = ck.max(row.recon_err);
            closed = closed.max(row.closed_err);
            if !row.holds(tol::IDENTITY_REL) {
                bad.push(format!("{name} i={i} {row:?}"));
            }
            ck_levels += 1;
        }
    }
    for (label, v) in [("split", split), ("cot", cot), ("telescope", tele), ("C_k", ck), ("closed", closed)] {
        if v >= tol::IDENTITY_REL {
            bad.push(format!("{label} residual {v:.2e}"));
        }
    }
    let mut prev = 0.0f64;
    for j in 1..=tol::COT_SAMPLES {
        let t = 0.5 * j as f64 / (tol::COT_SAMPLES + 1) as f64;
        let v = cot_remainder(t)?;
        if !(v > -1.0 && v <= 0.0) || v > prev {
            bad.push(format!("cot remainder at t={t}: {v}"));
            break;
        }
        prev = v;
    }
    Ok(pass_if(
        bad.is_empty(),
        format!(
            "split {split:.1e}, cot {cot:.1e}, telescope {tele:.1e}, C_k {ck:.1e} over {ck_levels} levels, \
             closed forms {closed:.1e}; failures {bad:?}"
        ),
    ))
}

fn criterion_5() -> Result<Outcome, Error> {
    let mut bad = Vec::new();
    let mut trips = 0u64;
    for spec in [suite::phi(), suite::sqrt2()] {
        let a = alpha(spec.clone());
        let cf = a.cf();
        let q12 = cf.q_u64(tol::OSTROWSKI_LEVEL).expect("small");
        for m in 0..q12 {
            let m = BigInt::from(m);
            let e = ostrowski_expand(&m, cf)?;
            if !e.is_valid(cf) || ostrowski_eval(&e, cf)? != m {
                bad.push(format!("{spec} round trip m={m}"));
            }
            trips += 1;
        }
        let q10 = cf.q_u64(tol::PARTITION_LEVEL).expect("small");
        for m in 1..q10 {
            if !segment_plan(m, cf)?.is_partition() {
                bad.push(format!("{spec} partition m={m}"));
            }
        }
        for i in 0..=tol::OSTROWSKI_LEVEL {
            let q = cf.q_u64(i).expect("small");
            let reps = cf.a(i + 1).to_u64().expect("small");
            let base = (q >= 2).then(|| exceptional_indices(&plain_segment(cf, i, 0)?, cf)).transpose()?;
            for c in 0..reps {
                let seg = plain_segment(cf, i, c)?;
                let multiples = (seg.start + 1..=seg.end()).filter(|k| k % q == 0).count();
                if multiples != 1 {
                    bad.push(format!("{spec} i={i} c={c}: {multiples} multiples"));
                }
                if let Some(base) = &base {
                    let an = exceptional_indices(&seg, cf)?;
                    if an.k_plus != base.k_plus + c * q || an.k_minus != base.k_minus + c * q || an.k_zero != (c + 1) * q
                    {
                        bad.push(format!("{spec} i={i} c={c}: shift law"));
                    }
                }
            }
        }
    }
    Ok(pass_if(bad.is_empty(), format!("{trips} round trips, partitions and residue shifts; failures {bad:?}")))
}

fn criterion_6() -> Result<Outcome, Error> {
    let mut bad = Vec::new();
    let (mut xi_checked, mut outer_checked) = (0, 0);
    for (name, spec) in suite::all() {
        let a = alpha(spec);
        for n in 0..=tol::XI_LEVEL_MAX {
            if a.convergent_error(n)?.invariants_hold() != Some(true) {
                bad.push(format!("{name} ξ_{n}"));
            }
            xi_checked += 1;
        }
        for n in 0..=tol::OUTER_LEVEL_MAX {
            if !outer_term_check(&a, n)?.holds() {
                bad.push(format!("{name} outer n={n}"));
            }
            outer_checked += 1;
        }
    }
    Ok(pass_if(bad.is_empty(), format!("{xi_checked} ξ_n checked exactly, {outer_checked} outer chains; failures {bad:?}")))
}

fn criterion_7() -> Result<Outcome, Error> {
    let cases = [
        ("phi", suite::phi(), 30),
        ("sqrt2", suite::sqrt2(), 30),
        ("growing", suite::growing(), 20),
        ("spike", suite::spike(), 20),
    ];
    let (mut worst, mut evaluated, mut skipped, mut over) = (0.0f64, 0, Vec::new(), Vec::new());
    for (name, spec, n_max) in cases {
        let a = alpha(spec);
        let r = theorem_bound_check(&a, 0..=n_max, caps::THEOREM, tol::THEOREM_BUDGET)?;
        worst = worst.max(r.max_ratio);
        evaluated += r.evaluated();
        for row in &r.rows {
            match row.verdict {
                Verdict::Fail => over.push(format!("{name} n={}", row.n)),
                Verdict::Skipped => skipped.push(format!("{name} n={} (q_n = {})", row.n, row.q_n)),
                Verdict::Pass => {}
            }
        }
    }
    let first_skips: Vec<&String> = skipped.iter().take(4).collect();
    Ok(Outcome {
        pass: over.is_empty() && skipped.is_empty(),
        detail: format!(
            "{evaluated} rows evaluated, max ρ_n = {worst:.4} (cap {}), over cap {over:?}; \
             {} rows not evaluated, first {first_skips:?}",
            caps::THEOREM,
            skipped.len()
        ),
    })
}

fn criterion_8() -> Result<Outcome, Error> {
    let a = alpha(suite::phi());
    let r = hardy_littlewood_scan(&a, tol::HL_M_MAX, caps::HL_PHI)?;
    Ok(pass_if(
        r.verdict() == Verdict::Pass,
        format!("max |S″_M| = {:.6} at M = {} (cap {})", r.max_abs, r.argmax, caps::HL_PHI),
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Result<Outcome, Error>); 8] = [
        (1, "reciprocal sum within 16·q_n, exact gap check", criterion_1),
        (2, "discrepancy at denominators and digit-sum bound", criterion_2),
        (3, "naive and closed T_M agree", criterion_3),
        (4, "identity suite", criterion_4),
        (5, "Ostrowski and segment structure", criterion_5),
        (6, "convergent error invariants", criterion_6),
        (7, "level-wise bound on |T_(q_n)|", criterion_7),
        (8, "running maximum of |S″_M|", criterion_8),
    ];
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id);
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {id}: {status} [{secs:.1}s] {title}: {}", outcome.detail);
        match (outcome.pass, known) {
            (false, Some((_, why))) => println!("criterion {id}: known red: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("criterion {id}: listed as known red but passed; update KNOWN_RED");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
