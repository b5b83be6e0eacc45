//! Sweeps over `n` with the row count `m` tied to `n` by a rule, producing
//! one Monte Carlo estimate per point alongside the exact bounds that apply.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formulas::{self, ExactProb, FormulaError};
use crate::gf::Field;
use crate::matroid::Matroid;
use crate::minor::{has_excluded_minor, HostRef, MinorError, SearchLimits};
use crate::sampler::{mc_event_prob, mc_minor_prob, sample_matrix, Estimate, Event, SamplerError, SeedSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("bad m rule `{0}`")]
    BadRule(String),
    #[error("bad n range: {0}")]
    BadRange(String),
    #[error("m rule {rule} gives a negative row count at n = {n}")]
    NegativeRows { rule: String, n: usize },
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Minor(#[from] MinorError),
}

/// How the number of rows follows the number of columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MRule {
    Constant(usize),
    NMinus(usize),
    NPlus(usize),
    /// `m = floor(r * n)`.
    Ratio(f64),
}

impl MRule {
    pub fn rows(&self, n: usize) -> Result<usize, SweepError> {
        match *self {
            MRule::Constant(c) => Ok(c),
            MRule::NMinus(d) => n.checked_sub(d).ok_or(SweepError::NegativeRows { rule: self.to_string(), n }),
            MRule::NPlus(d) => Ok(n + d),
            MRule::Ratio(r) => Ok((r * n as f64).floor() as usize),
        }
    }
}

impl FromStr for MRule {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::BadRule(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let int = || arg.trim().parse::<usize>().map_err(|_| bad());
        match kind {
            "constant" => Ok(MRule::Constant(int()?)),
            "n-minus" => Ok(MRule::NMinus(int()?)),
            "n-plus" => Ok(MRule::NPlus(int()?)),
            "ratio" => match arg.trim().parse::<f64>() {
                Ok(r) if r.is_finite() && r >= 0.0 => Ok(MRule::Ratio(r)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Constant(c) => write!(f, "constant:{c}"),
            MRule::NMinus(d) => write!(f, "n-minus:{d}"),
            MRule::NPlus(d) => write!(f, "n-plus:{d}"),
            MRule::Ratio(r) => write!(f, "ratio:{r}"),
        }
    }
}

/// The `n` values of a sweep: `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub stop: usize,
    pub step: usize,
}

impl NRange {
    pub fn new(start: usize, stop: usize, step: usize) -> Result<Self, SweepError> {
        if step == 0 || stop < start {
            return Err(SweepError::BadRange(format!("{start}..{stop} step {step}")));
        }
        Ok(NRange { start, stop, step })
    }

    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.stop).step_by(self.step).collect()
    }
}

#[derive(Debug, Clone)]
pub enum SweepTarget {
    Minor(Matroid),
    Event(Event),
    /// Frequency of not being graphic.
    NonGraphic,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub field: Field,
    pub n_range: NRange,
    pub m_rule: MRule,
    pub target: SweepTarget,
    pub trials: u64,
    pub seed: u64,
    pub limits: SearchLimits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub estimate: Estimate,
    pub lower: Option<ExactProb>,
    pub upper: Option<ExactProb>,
}

impl SweepRow {
    /// Bounds are consistent with the estimate when the Wilson interval,
    /// widened by unknowns, reaches each bound.
    pub fn consistent(&self) -> bool {
        let hi = self.estimate.wilson_hi.max(self.estimate.upper_bracket());
        let lower_ok = self.lower.as_ref().is_none_or(|l| l.to_f64() <= hi);
        let upper_ok = self.upper.as_ref().is_none_or(|u| u.to_f64() >= self.estimate.wilson_lo);
        lower_ok && upper_ok
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        for n in self.n_range.values() {
            self.m_rule.rows(n)?;
        }
        Ok(())
    }

    /// Runs every point in order of `n`.
    pub fn run(&self) -> Result<Vec<SweepRow>, SweepError> {
        self.validate()?;
        self.n_range.values().into_iter().map(|n| self.point(n)).collect()
    }

    fn point(&self, n: usize) -> Result<SweepRow, SweepError> {
        let m = self.m_rule.rows(n)?;
        let q = self.field.q();
        let (estimate, lower, upper) = match &self.target {
            SweepTarget::Minor(target) => {
                let est = mc_minor_prob(&self.field, m, n, target, self.trials, self.seed, self.limits)?;
                let (lo, up) = minor_bounds(m, n, q, target)?;
                (est, lo, up)
            }
            SweepTarget::Event(event) => {
                let est = mc_event_prob(&self.field, m, n, *event, self.trials, self.seed)?;
                let exact = event_exact(m, n, q, *event)?;
                (est, exact.clone(), exact)
            }
            SweepTarget::NonGraphic => (non_graphic_frequency(&self.field, m, n, self.trials, self.seed, self.limits)?, None, None),
        };
        Ok(SweepRow { n, m, estimate, lower, upper })
    }
}

/// Exact bounds on the probability that `target` is a minor: the exact value
/// for free targets, otherwise the lower and upper bounds where they apply.
pub fn minor_bounds(m: usize, n: usize, q: u32, target: &Matroid) -> Result<(Option<ExactProb>, Option<ExactProb>), SweepError> {
    if target.is_free() {
        let p = formulas::prob_free_minor(m, n, q, target.rank())?.value;
        return Ok((Some(p.clone()), Some(p)));
    }
    let stats = target.stats();
    let lower = if m >= stats.r && n >= stats.e {
        Some(formulas::lower_bound_nonfree(m, n, q, &stats)?.value)
    } else {
        None
    };
    let upper = if m >= n { Some(formulas::upper_bound_nonfree(m, n, q)?) } else { None };
    Ok((lower, upper))
}

fn event_exact(m: usize, n: usize, q: u32, event: Event) -> Result<Option<ExactProb>, SweepError> {
    Ok(Some(match event {
        Event::FullColumnRank | Event::IsFreeMatroid => formulas::prob_free_minor(m, n, q, n)?.value,
        Event::RankAtLeast(r) => formulas::prob_free_minor(m, n, q, r)?.value,
        Event::RankExactly(k) => {
            if k > m.min(n) {
                ExactProb::zero()
            } else {
                let total = num_traits::pow(num_bigint::BigUint::from(q), m * n);
                ExactProb::from_counts(&formulas::count_rank_matrices(m, n, q, k)?, &total)?
            }
        }
    }))
}

/// Fraction of sampled matrices with a verified excluded minor for the
/// graphic matroids; undecided searches count as unknowns.
pub fn non_graphic_frequency(field: &Field, m: usize, n: usize, trials: u64, seed: u64, limits: SearchLimits) -> Result<Estimate, SweepError> {
    use rayon::prelude::*;
    if trials == 0 {
        return Err(SamplerError::BadArguments("trials must be at least 1".into()).into());
    }
    let verdicts = (0..trials)
        .into_par_iter()
        .map(|i| {
            let a = sample_matrix(field, m, n, SeedSpec::new(seed, i));
            has_excluded_minor(HostRef::Matrix(&a), "graphic", limits, true).map(|r| r.is_member())
        })
        .collect::<Result<Vec<_>, MinorError>>()?;
    let hits = verdicts.iter().filter(|v| **v == Some(false)).count() as u64;
    let unknowns = verdicts.iter().filter(|v| v.is_none()).count() as u64;
    Ok(Estimate::new(trials, hits, unknowns, seed))
}

/// Row-count condition under which random representable matroids are
/// asymptotically not graphic: `m >= 3` over GF(2), `m >= 2` otherwise.
pub fn non_graphic_rows_condition(q: u32, m: usize) -> bool {
    if q == 2 {
        m >= 3
    } else {
        m >= 2
    }
}

pub const CSV_HEADER: &str = "n,m,trials,point,ci_lo,ci_hi,lower_bound,upper_bound,unknowns";

/// Formats like C's `%.12g`.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |p: &Option<ExactProb>| p.as_ref().map(|p| format_g12(p.to_f64())).unwrap_or_default();
    for r in rows {
        let e = &r.estimate;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.m,
            e.trials,
            format_g12(e.point),
            format_g12(e.wilson_lo),
            format_g12(e.wilson_hi),
            opt(&r.lower),
            opt(&r.upper),
            e.unknowns
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_parse_and_apply() {
        assert_eq!("n-minus:5".parse::<MRule>().unwrap().rows(12).unwrap(), 7);
        assert_eq!("n-plus:5".parse::<MRule>().unwrap().rows(12).unwrap(), 17);
        assert_eq!("constant:3".parse::<MRule>().unwrap().rows(12).unwrap(), 3);
        assert_eq!("ratio:0.5".parse::<MRule>().unwrap().rows(7).unwrap(), 3);
        assert!("n-minus:5".parse::<MRule>().unwrap().rows(4).is_err());
        for bad in ["n-minus", "ratio:-1", "times:2", "constant:x"] {
            assert!(bad.parse::<MRule>().is_err(), "{bad}");
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(NRange::new(10, 20, 5).unwrap().values(), vec![10, 15, 20]);
        assert_eq!(NRange::new(3, 3, 1).unwrap().values(), vec![3]);
        assert!(NRange::new(4, 3, 1).is_err());
        assert!(NRange::new(1, 3, 0).is_err());
    }

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(0.25), "0.25");
        assert_eq!(format_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g12(0.9375), "0.9375");
        assert_eq!(format_g12(1.5e-7), "1.5e-07");
        assert_eq!(format_g12(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_g12(0.00012345), "0.00012345");
    }

    #[test]
    fn rows_are_consistent_and_deterministic() {
        let spec = SweepSpec {
            field: Field::new(2).unwrap(),
            n_range: NRange::new(6, 10, 2).unwrap(),
            m_rule: MRule::NMinus(3),
            target: SweepTarget::Minor(Matroid::uniform(1, 2).unwrap()),
            trials: 500,
            seed: 3,
            limits: SearchLimits::default(),
        };
        let rows = spec.run().unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![6, 8, 10]);
        assert!(rows.iter().all(|r| r.lower.is_some() && r.upper.is_none() && r.consistent()));
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv, to_csv(&spec.run().unwrap()));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn event_rows_carry_exact_values() {
        let spec = SweepSpec {
            field: Field::new(3).unwrap(),
            n_range: NRange::new(2, 4, 1).unwrap(),
            m_rule: MRule::NPlus(1),
            target: SweepTarget::Event(Event::FullColumnRank),
            trials: 2000,
            seed: 1,
            limits: SearchLimits::default(),
        };
        for r in spec.run().unwrap() {
            assert_eq!(r.lower, r.upper);
            assert!(r.consistent(), "{r:?}");
        }
    }

    #[test]
    fn graphic_rows_condition() {
        assert!(!non_graphic_rows_condition(2, 2));
        assert!(non_graphic_rows_condition(2, 3));
        assert!(non_graphic_rows_condition(3, 2));
    }

    #[test]
    fn narrow_matrices_are_graphic() {
        // rank at most 2 over GF(2): every minor is binary of rank <= 2, hence graphic
        let est = non_graphic_frequency(&Field::new(2).unwrap(), 2, 8, 50, 1, SearchLimits::default()).unwrap();
        assert_eq!(est.successes, 0);
        assert_eq!(est.unknowns, 0);
    }
}
