use std::ops::RangeInclusive;

use num_traits::{ToPrimitive, Zero};
use ostrowski_core::discrepancy::discrepancy_exact;
use ostrowski_core::discrepancy::harman_bound;
use ostrowski_core::sums::{recip_sum, s2_via_cot, t_sum_closed, t_sum_naive};
use ostrowski_core::verify::{self, caps, DEFAULT_BUDGET};
use ostrowski_core::{ostrowski_expand, Alpha, BoundReport, Error, Verdict};

use crate::cli::{Check, Cli, Command, Opts, SumKind};
use crate::parse::{parse_alpha, ParseError};
use crate::report::{Meta, Report, Row, RowBuilder};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid --alpha {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(e) => e.code(),
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "io_error",
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

/// A finished command: its rows and whether it gates on a verdict.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub gated: bool,
}

impl Outcome {
    /// 1 when a gating command has a failing row, else 0.
    pub fn exit_code(&self) -> u8 {
        let failed = self.report.rows.iter().any(|r| r.get("verdict").and_then(|v| v.as_str()) == Some("fail"));
        u8::from(self.gated && failed)
    }

    pub fn skipped(&self) -> usize {
        self.report.rows.iter().filter(|r| r.get("verdict").and_then(|v| v.as_str()) == Some("skipped")).count()
    }
}

/// `OSTROWSKI_BUDGET` wins over `--budget`, which wins over the default.
pub fn resolve_budget(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(v) => v.trim().parse().or_else(|_| usage(format!("OSTROWSKI_BUDGET={v} is not a nonnegative integer"))),
        None => Ok(flag.unwrap_or(DEFAULT_BUDGET)),
    }
}

pub fn meta(cli: &Cli) -> Meta {
    let alpha = cli.opts.alpha.as_deref().map(|s| parse_alpha(s).map_or_else(|_| s.to_owned(), |a| a.to_string()));
    Meta {
        alpha: alpha.unwrap_or_default(),
        command: cli.command.name(),
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

pub fn run(cli: &Cli, budget: u64) -> Result<Outcome, CliError> {
    let o = &cli.opts;
    let Some(text) = o.alpha.as_deref() else {
        return usage("--alpha is required");
    };
    let spec = parse_alpha(text)?;
    let ctx = Ctx { opts: o, id: spec.to_string(), budget, spec };
    let (rows, gated) = match &cli.command {
        Command::Expand => (ctx.expand()?, false),
        Command::Convergents => (ctx.convergents()?, false),
        Command::Ostrowski => (ctx.ostrowski()?, false),
        Command::Sum { kind } => (ctx.sum(*kind)?, false),
        Command::Discrepancy => (ctx.discrepancy()?, true),
        Command::Scan => (ctx.bound_rows(false)?, false),
        Command::Verify { check } => (ctx.verify(*check)?, true),
    };
    Ok(Outcome { report: Report { meta: meta(cli), rows, error: None }, gated })
}

struct Ctx<'a> {
    opts: &'a Opts,
    spec: ostrowski_core::AlphaSpec,
    id: String,
    budget: u64,
}

impl Ctx<'_> {
    fn alpha(&self, depth: usize) -> Result<Alpha, CliError> {
        Ok(Alpha::with_depth(self.spec.clone(), depth.max(Alpha::DEFAULT_DEPTH))?)
    }

    fn row(&self) -> RowBuilder {
        RowBuilder::new(&self.id)
    }

    fn n(&self) -> Result<usize, CliError> {
        self.opts.n.map_or_else(|| usage("--n is required"), Ok)
    }

    fn big_m(&self) -> Result<u64, CliError> {
        self.opts.big_m.map_or_else(|| usage("--M is required"), Ok)
    }

    fn small_m(&self) -> Result<u64, CliError> {
        match &self.opts.m {
            None => usage("--m is required"),
            Some(m) => m.to_u64().map_or_else(|| usage(format!("--m {m} must be a nonnegative 64-bit integer")), Ok),
        }
    }

    /// `--n-max` gives `first..=n_max`, otherwise the single level `--n`.
    fn levels(&self, first: usize) -> Result<RangeInclusive<usize>, CliError> {
        match (self.opts.n_max, self.opts.n) {
            (Some(hi), _) => Ok(first..=hi),
            (None, Some(n)) => Ok(n..=n),
            (None, None) => usage("--n or --n-max is required"),
        }
    }

    fn within(&self, work: u64) -> Result<(), CliError> {
        if work > self.budget {
            return Err(Error::BudgetExceeded { work: work as u128, budget: self.budget }.into());
        }
        Ok(())
    }

    fn expand(&self) -> Result<Vec<Row>, CliError> {
        let n = self.n()?;
        let a = self.alpha(n + 1)?;
        a.cf().check_index(n)?;
        Ok((0..=n).map(|k| self.row().count("n", k as u64).int("a_n", a.cf().a(k)).build()).collect())
    }

    fn convergents(&self) -> Result<Vec<Row>, CliError> {
        let n = self.n()?;
        let a = self.alpha(n + 2)?;
        let cf = a.cf();
        cf.check_index(n)?;
        (0..=n)
            .map(|k| {
                let (p, q) = cf.convergent(k);
                let xi = match a.convergent_error(k) {
                    Ok(ce) => Some(ce.xi_f64()),
                    Err(Error::IndexOutOfRange { .. }) => None,
                    Err(e) => return Err(e.into()),
                };
                Ok(self.row().count("n", k as u64).int("a_n", cf.a(k)).int("p_n", p).int("q_n", q).opt_float("xi", xi).build())
            })
            .collect()
    }

    fn ostrowski(&self) -> Result<Vec<Row>, CliError> {
        let Some(m) = &self.opts.m else {
            return usage("--m is required");
        };
        let a = self.alpha(2 * m.bits() as usize + 4)?;
        let e = ostrowski_expand(m, a.cf())?;
        Ok(e.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| self.row().int("m", m).count("k", k as u64).int("q_k", a.cf().q(k)).int("digit", c).build())
            .collect())
    }

    fn sum(&self, kind: SumKind) -> Result<Vec<Row>, CliError> {
        let a = self.alpha(0)?;
        if kind == SumKind::Recip {
            let m = self.small_m()?;
            self.within(m)?;
            let r = recip_sum(&a, m)?;
            return Ok(vec![self.row().count("m", m).float("value", r.value).float("max_term", r.max_term).build()]);
        }
        let big_m = self.big_m()?;
        let row = self.row().count("M", big_m);
        let row = match kind {
            SumKind::Naive => {
                self.within(big_m.saturating_mul(big_m))?;
                let t = t_sum_naive(&a, big_m)?;
                row.text("method", "naive").float("re_T", t.re).float("im_T", t.im).float("abs_T", t.norm())
            }
            SumKind::Closed => {
                self.within(big_m)?;
                let r = t_sum_closed(&a, big_m)?;
                row.text("method", r.method.as_str())
                    .float("re_T", r.t.re)
                    .float("im_T", r.t.im)
                    .float("abs_T", r.t.norm())
                    .float("re_S1", r.s1.re)
                    .float("im_S1", r.s1.im)
                    .float("re_S2", r.s2.re)
                    .float("im_S2", r.s2.im)
                    .float("split_residual", r.split_residual())
            }
            SumKind::S2cot => {
                self.within(big_m)?;
                let s2 = s2_via_cot(&a, big_m)?;
                row.text("method", "s2cot").float("re_S2", s2.re).float("im_S2", s2.im)
            }
            SumKind::Recip => unreachable!(),
        };
        Ok(vec![row.build()])
    }

    fn discrepancy(&self) -> Result<Vec<Row>, CliError> {
        let n = self.n()? as u64;
        let a = self.alpha(0)?;
        let cap = self.opts.cap.unwrap_or(caps::HARMAN);
        let d = discrepancy_exact(&a, n, self.budget.isqrt())?;
        let h = harman_bound(a.cf(), n)?;
        let bound = cap * h.t.iter().sum::<u64>() as f64;
        let ok = d.at_most(bound).ok_or_else(|| Error::InsufficientPrecision { what: format!("D_{n} against {bound}") })?;
        Ok(vec![self
            .row()
            .count("N", n)
            .float("D_lo", d.lo)
            .float("D_hi", d.hi)
            .float("harman_bound", bound)
            .float("cap", cap)
            .text("verdict", verdict(ok).as_str())
            .build()])
    }

    fn bound_rows(&self, sinai: bool) -> Result<Vec<Row>, CliError> {
        let levels = self.levels(0)?;
        let a = self.alpha(levels.end() + 2)?;
        let r: BoundReport = if sinai {
            let cap = self.opts.cap.unwrap_or(caps::SINAI_PHI);
            verify::sinai_ulcigrai_check(&a, levels, cap, self.budget)?
        } else {
            let cap = self.opts.cap.unwrap_or(caps::THEOREM);
            verify::theorem_bound_check(&a, levels, cap, self.budget)?
        };
        Ok(r.rows
            .iter()
            .map(|row| {
                let b = self.row().count("n", row.n as u64);
                let b = if row.q_n.is_zero() { b.null("a_n").null("q_n") } else { b.int("a_n", &row.a_n).int("q_n", &row.q_n) };
                b.opt_float("re_T", row.t.map(|t| t.re))
                    .opt_float("im_T", row.t.map(|t| t.im))
                    .opt_float("abs_T", row.t.map(|t| t.norm()))
                    .float("bound", row.bound)
                    .opt_float("ratio", row.ratio)
                    .text("verdict", row.verdict.as_str())
                    .build()
            })
            .collect())
    }

    /// Runs `f` per level; levels beyond the budget or the quotients become skipped rows.
    fn per_level(
        &self,
        levels: RangeInclusive<usize>,
        key: &str,
        mut f: impl FnMut(usize) -> Result<Row, Error>,
    ) -> Result<Vec<Row>, CliError> {
        let mut rows = Vec::new();
        for n in levels {
            match f(n) {
                Ok(r) => rows.push(r),
                Err(Error::BudgetExceeded { .. } | Error::IndexOutOfRange { .. } | Error::InsufficientQuotients { .. }) => {
                    rows.push(self.row().count(key, n as u64).text("verdict", Verdict::Skipped.as_str()).build())
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(rows)
    }

    fn verify(&self, check: Check) -> Result<Vec<Row>, CliError> {
        match check {
            Check::Theorem => self.bound_rows(false),
            Check::Sinai => self.bound_rows(true),
            Check::Hl => {
                let m = self.big_m()?;
                self.within(m)?;
                let cap = self.opts.cap.unwrap_or(caps::HL_PHI);
                let r = verify::hardy_littlewood_scan(&self.alpha(0)?, m, cap)?;
                Ok(vec![self
                    .row()
                    .count("M", m)
                    .float("max_abs_S2", r.max_abs)
                    .count("argmax", r.argmax)
                    .float("cap", cap)
                    .text("verdict", r.verdict().as_str())
                    .build()])
            }
            Check::LemmaNew => {
                let levels = self.levels(1)?;
                let a = self.alpha(levels.end() + 1)?;
                let cap = self.opts.cap.unwrap_or(caps::LEMMA_NEW);
                self.per_level(levels, "n", |n| {
                    let r = verify::lemma_new_check(&a, n, self.budget)?;
                    let ok = r.min_dist_ok && r.ratio() <= cap;
                    Ok(self
                        .row()
                        .count("n", n as u64)
                        .count("q_n", r.q_n)
                        .count("argmin", r.argmin)
                        .float("min_dist", r.min_dist)
                        .flag("min_dist_ok", r.min_dist_ok)
                        .float("sum", r.sum_value)
                        .float("variation", r.variation)
                        .float("bound", cap * r.q_n as f64)
                        .float("ratio", r.ratio())
                        .float("cap", cap)
                        .text("verdict", verdict(ok).as_str())
                        .build())
                })
            }
            Check::LemmaOst => {
                let levels = self.levels(1)?;
                let a = self.alpha(levels.end() + 1)?;
                let cap = self.opts.cap.unwrap_or(caps::LEMMA_OST);
                let sample = self.opts.m.as_ref().map(|_| self.small_m()).transpose()?;
                let samples = sample.map(|m| vec![m]);
                self.per_level(levels, "n", |n| {
                    let r = verify::lemma_ost_check(&a, n, samples.as_deref(), cap, self.budget)?;
                    Ok(self
                        .row()
                        .count("n", n as u64)
                        .count("q_n", r.q_n)
                        .float("log_factor", r.log_factor)
                        .count("checked", r.checked)
                        .count("argmax", r.argmax)
                        .float("max_ratio", r.max_ratio)
                        .float("cap", cap)
                        .text("verdict", r.verdict().as_str())
                        .build())
                })
            }
            Check::Telescope => {
                let m = self.big_m()?;
                self.within(m)?;
                let cap = self.opts.cap.unwrap_or(1e-8);
                let r = verify::telescope_check(&self.alpha(0)?, m)?;
                Ok(vec![self
                    .row()
                    .count("M", m)
                    .float("re_lhs", r.lhs.re)
                    .float("im_lhs", r.lhs.im)
                    .float("re_rhs", r.rhs.re)
                    .float("im_rhs", r.rhs.im)
                    .float("residual", r.residual)
                    .float("cap", cap)
                    .text("verdict", verdict(r.residual <= cap).as_str())
                    .build()])
            }
            Check::Outer => {
                let levels = self.levels(0)?;
                let a = self.alpha(levels.end() + 2)?;
                self.per_level(levels, "n", |n| {
                    let r = verify::outer_term_check(&a, n)?;
                    Ok(self
                        .row()
                        .count("n", n as u64)
                        .float("chord", r.chord)
                        .float("arc", r.arc)
                        .float("limit", r.limit)
                        .flag("exact_links", r.exact_links)
                        .text("verdict", verdict(r.holds()).as_str())
                        .build())
                })
            }
            Check::Ck => {
                let levels = self.levels(0)?;
                let a = self.alpha(levels.end() + 2)?;
                let cap = self.opts.cap.unwrap_or(1e-8);
                self.per_level(levels, "i", |i| {
                    let r = match verify::ck_check(&a, i, self.budget) {
                        Err(Error::DegenerateModulus { .. }) if self.opts.n_max.is_some() => {
                            return Ok(self.row().count("i", i as u64).text("verdict", Verdict::Skipped.as_str()).build())
                        }
                        r => r?,
                    };
                    Ok(self
                        .row()
                        .count("i", i as u64)
                        .count("q_i", r.q_i)
                        .count("segments", r.segments)
                        .count("terms", r.terms)
                        .float("recon_err", r.recon_err)
                        .float("max_abs_c", r.max_abs_c)
                        .float("c_min", r.c_min)
                        .float("c_max", r.c_max)
                        .float("closed_err", r.closed_err)
                        .flag("shift_law", r.shift_law)
                        .flag("one_multiple", r.one_multiple)
                        .float("cap", cap)
                        .text("verdict", verdict(r.holds(cap)).as_str())
                        .build())
                })
            }
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}
