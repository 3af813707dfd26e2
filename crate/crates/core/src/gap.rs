//! Per-constraint gaps between the achievable region and the outer bound, and
//! seeded randomized sweeps over channels.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{classify_regime, db_to_linear, ChannelRatios, Regime};
use crate::constraint::{ConstraintKind, ConstraintSet, KindClass};
use crate::error::{Error, Result};
use crate::hk::{achievable_constraints, etw_split, hk_parameters};
use crate::outer::{outer_constraints, outer_parameters};
use crate::polytope::{contains, to_f64};

/// Slack, in bits, required below each strict gap bound.
pub const GAP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapPair {
    pub kind: ConstraintKind,
    pub achievable_rhs: f64,
    pub outer_rhs: f64,
    /// `outer_rhs - achievable_rhs`
    pub delta: f64,
    pub bound: f64,
    pub rate_terms: u32,
    pub normalized: f64,
    pub pass: bool,
    /// Within tolerance of the bound; `exact_delta` holds the dyadic recomputation.
    pub flagged: bool,
    pub exact_delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub users: usize,
    pub regime: Regime,
    /// The two-bit bounds are only claimed in the weak regime.
    pub asserted: bool,
    pub pairs: Vec<GapPair>,
    pub max_normalized_gap: f64,
    pub min_delta: f64,
    pub seed: Option<u64>,
}

impl GapReport {
    /// Pairs that break a bound the regime asserts.
    pub fn violations(&self) -> Vec<&GapPair> {
        if !self.asserted {
            return Vec::new();
        }
        self.pairs.iter().filter(|p| !p.pass).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }
}

/// Bound on the gap of a constraint with `terms` rate terms: two bits per term.
pub fn gap_bound(terms: u32) -> f64 {
    2.0 * f64::from(terms)
}

/// Pairs rows of the two sets by kind and compares right-hand sides.
pub fn gap_report(ach: &ConstraintSet, out: &ConstraintSet, regime: Regime) -> Result<GapReport> {
    if ach.users != out.users || ach.len() != out.len() {
        return Err(Error::KindMismatch(format!(
            "achievable set has {} rows for K={}, outer set {} rows for K={}",
            ach.len(),
            ach.users,
            out.len(),
            out.users
        )));
    }
    let k = ach.users;
    let mut by_kind: BTreeMap<ConstraintKind, usize> = BTreeMap::new();
    for (idx, row) in out.rows.iter().enumerate() {
        if by_kind.insert(row.kind, idx).is_some() {
            return Err(Error::KindMismatch(format!("outer set repeats {}", row.kind)));
        }
    }
    let mut pairs = Vec::with_capacity(ach.len());
    for a in &ach.rows {
        let o = by_kind
            .remove(&a.kind)
            .map(|idx| &out.rows[idx])
            .ok_or_else(|| Error::KindMismatch(format!("no outer row for {}", a.kind)))?;
        let terms = a.kind.rate_terms(k);
        let bound = gap_bound(terms);
        let delta = o.rhs - a.rhs;
        let flagged = (delta - bound).abs() <= GAP_TOLERANCE;
        let exact_delta = if flagged {
            let exact = o.exact_rhs(&out.params)? - a.exact_rhs(&ach.params)?;
            Some(to_f64(&exact))
        } else {
            None
        };
        pairs.push(GapPair {
            kind: a.kind,
            achievable_rhs: a.rhs,
            outer_rhs: o.rhs,
            delta,
            bound,
            rate_terms: terms,
            normalized: delta / f64::from(terms),
            pass: delta <= bound - GAP_TOLERANCE,
            flagged,
            exact_delta,
        });
    }
    let max_normalized_gap = pairs.iter().map(|p| p.normalized).fold(f64::NEG_INFINITY, f64::max);
    let min_delta = pairs.iter().map(|p| p.delta).fold(f64::INFINITY, f64::min);
    Ok(GapReport {
        users: k,
        regime,
        asserted: regime == Regime::Weak,
        pairs,
        max_normalized_gap,
        min_delta,
        seed: None,
    })
}

/// Achievable (ETW split) and outer regions for one channel, plus their gap report.
pub fn analyze_channel(r: &ChannelRatios) -> Result<(ConstraintSet, ConstraintSet, GapReport)> {
    let regime = classify_regime(r);
    let ach = achievable_constraints(&hk_parameters(r, &etw_split(r))?)?;
    let out = outer_constraints(&outer_parameters(r))?;
    let report = gap_report(&ach, &out, regime)?;
    Ok((ach, out, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum InrSampling {
    /// `INR_dB ~ U[min(min_db, SNR_dB), SNR_dB]`; always weak.
    BelowSnr { min_db: f64 },
    /// `INR_dB ~ U[SNR_dB, SNR_dB + span_db]`; always strong.
    AboveSnr { span_db: f64 },
    Independent { min_db: f64, max_db: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeFilter {
    Weak,
    /// Strong or very strong.
    Strong,
    Mixed,
}

impl RegimeFilter {
    pub fn accepts(self, regime: Regime) -> bool {
        match self {
            RegimeFilter::Weak => regime == Regime::Weak,
            RegimeFilter::Strong => regime.is_strong(),
            RegimeFilter::Mixed => regime == Regime::Mixed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub users_min: usize,
    pub users_max: usize,
    pub samples: usize,
    pub snr_db_min: f64,
    pub snr_db_max: f64,
    pub inr: InrSampling,
    #[serde(default)]
    pub regime_filter: Option<RegimeFilter>,
    pub seed: u64,
    /// Run the exact containment check for samples with at most this many users.
    #[serde(default)]
    pub containment_max_users: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            users_min: 2,
            users_max: 6,
            samples: 1000,
            snr_db_min: 0.0,
            snr_db_max: 40.0,
            inr: InrSampling::BelowSnr { min_db: 0.0 },
            regime_filter: Some(RegimeFilter::Weak),
            seed: 7,
            containment_max_users: 0,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.users_min < 2 || self.users_max < self.users_min {
            return Err(Error::Validation(format!(
                "user range {}..={} must satisfy 2 <= min <= max",
                self.users_min, self.users_max
            )));
        }
        if !(self.snr_db_min <= self.snr_db_max) {
            return Err(Error::Validation("snr_db_min exceeds snr_db_max".into()));
        }
        Ok(())
    }

    /// Channel for sample `index`; depends only on the seed and the index.
    pub fn sample(&self, index: usize) -> Result<ChannelRatios> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let k = rng.gen_range(self.users_min..=self.users_max);
        let mut snr_db = Vec::with_capacity(k);
        let mut inr_db = Vec::with_capacity(k);
        for _ in 0..k {
            let s = uniform(&mut rng, self.snr_db_min, self.snr_db_max);
            let i = match self.inr {
                InrSampling::BelowSnr { min_db } => uniform(&mut rng, min_db.min(s), s),
                InrSampling::AboveSnr { span_db } => uniform(&mut rng, s, s + span_db),
                InrSampling::Independent { min_db, max_db } => uniform(&mut rng, min_db, max_db),
            };
            snr_db.push(s);
            inr_db.push(i);
        }
        let lin = |v: Vec<f64>| v.into_iter().map(db_to_linear).collect();
        let (snr, mut inr): (Vec<f64>, Vec<f64>) = (lin(snr_db.clone()), lin(inr_db.clone()));
        // dB sampling can round INR a hair past SNR at the interval ends
        for i in 0..k {
            match self.inr {
                InrSampling::BelowSnr { .. } if inr_db[i] == snr_db[i] => inr[i] = snr[i],
                InrSampling::AboveSnr { .. } if inr_db[i] == snr_db[i] => inr[i] = snr[i],
                _ => {}
            }
        }
        ChannelRatios::new(snr, inr)
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMax {
    pub class: KindClass,
    pub max_delta: f64,
    pub min_delta: f64,
    pub bound: f64,
    pub max_normalized: f64,
    pub pass: bool,
}

fn class_maxima(report: &GapReport) -> Vec<ClassMax> {
    let mut map: BTreeMap<KindClass, ClassMax> = BTreeMap::new();
    for p in &report.pairs {
        let entry = map.entry(p.kind.class()).or_insert(ClassMax {
            class: p.kind.class(),
            max_delta: f64::NEG_INFINITY,
            min_delta: f64::INFINITY,
            bound: p.bound,
            max_normalized: f64::NEG_INFINITY,
            pass: true,
        });
        merge_pair(entry, p.delta, p.delta, p.normalized, p.pass);
    }
    map.into_values().collect()
}

fn merge_pair(into: &mut ClassMax, max_delta: f64, min_delta: f64, normalized: f64, pass: bool) {
    into.max_delta = into.max_delta.max(max_delta);
    into.min_delta = into.min_delta.min(min_delta);
    into.max_normalized = into.max_normalized.max(normalized);
    into.pass &= pass;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub channel: ChannelRatios,
    pub regime: Regime,
    pub classes: Vec<ClassMax>,
    pub max_normalized_gap: f64,
    pub min_delta: f64,
    pub theorem_violations: usize,
    /// Weak-regime pairs whose outer bound falls below the achievable value.
    pub negative_deltas: usize,
    /// `Some(true)` when the achievable polytope was verified inside the outer bound.
    pub contained: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub attempted: usize,
    pub evaluated: usize,
    pub filtered_out: usize,
    pub regimes: BTreeMap<String, usize>,
    pub classes: Vec<ClassMax>,
    pub max_normalized_gap: f64,
    pub min_delta: f64,
    pub theorem_violations: usize,
    pub negative_deltas: usize,
    pub containment_checked: usize,
    pub containment_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<SampleRecord>,
    pub summary: SweepSummary,
    /// Channels that broke a weak-regime bound, delta sign or containment, for replay.
    pub failures: Vec<ChannelRatios>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.summary.theorem_violations == 0
            && self.summary.negative_deltas == 0
            && self.summary.containment_failures == 0
    }
}

fn evaluate(cfg: &SweepConfig, index: usize) -> Result<Option<SampleRecord>> {
    let channel = cfg.sample(index)?;
    let regime = classify_regime(&channel);
    if let Some(filter) = cfg.regime_filter {
        if !filter.accepts(regime) {
            return Ok(None);
        }
    }
    let (ach, out, report) = analyze_channel(&channel)?;
    let contained = if regime == Regime::Weak && channel.users() <= cfg.containment_max_users {
        Some(contains(&out.to_system()?, &ach.to_system()?)?.holds())
    } else {
        None
    };
    Ok(Some(SampleRecord {
        index,
        regime,
        classes: class_maxima(&report),
        max_normalized_gap: report.max_normalized_gap,
        min_delta: report.min_delta,
        theorem_violations: report.violations().len(),
        negative_deltas: if report.asserted {
            report.pairs.iter().filter(|p| p.delta < 0.0).count()
        } else {
            0
        },
        contained,
        channel,
    }))
}

/// Samples channels, classifies them, and checks the two-bit bounds on weak ones.
/// Samples are evaluated in parallel; the report does not depend on scheduling.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let results: Vec<Option<SampleRecord>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| evaluate(cfg, i))
        .collect::<Result<_>>()?;
    let records: Vec<SampleRecord> = results.into_iter().flatten().collect();
    if records.is_empty() {
        return Err(Error::EmptySweep {
            attempted: cfg.samples,
        });
    }

    let mut regimes = BTreeMap::new();
    let mut classes: BTreeMap<KindClass, ClassMax> = BTreeMap::new();
    let mut failures = Vec::new();
    let (mut violations, mut negative, mut checked, mut failed) = (0, 0, 0, 0);
    for rec in &records {
        *regimes.entry(rec.regime.to_string()).or_insert(0) += 1;
        for c in &rec.classes {
            let entry = classes.entry(c.class).or_insert_with(|| ClassMax {
                max_delta: f64::NEG_INFINITY,
                min_delta: f64::INFINITY,
                max_normalized: f64::NEG_INFINITY,
                pass: true,
                ..c.clone()
            });
            merge_pair(entry, c.max_delta, c.min_delta, c.max_normalized, c.pass);
        }
        violations += rec.theorem_violations;
        negative += rec.negative_deltas;
        if let Some(ok) = rec.contained {
            checked += 1;
            if !ok {
                failed += 1;
            }
        }
        if rec.theorem_violations > 0 || rec.negative_deltas > 0 || rec.contained == Some(false) {
            failures.push(rec.channel.clone());
        }
    }
    let summary = SweepSummary {
        attempted: cfg.samples,
        evaluated: records.len(),
        filtered_out: cfg.samples - records.len(),
        regimes,
        classes: classes.into_values().collect(),
        max_normalized_gap: records.iter().map(|r| r.max_normalized_gap).fold(f64::NEG_INFINITY, f64::max),
        min_delta: records.iter().map(|r| r.min_delta).fold(f64::INFINITY, f64::min),
        theorem_violations: violations,
        negative_deltas: negative,
        containment_checked: checked,
        containment_failures: failed,
    };
    Ok(SweepReport {
        config: cfg.clone(),
        records,
        summary,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_interference_gaps_vanish() {
        let r = ChannelRatios::new(vec![10.0, 300.0, 4.0], vec![0.0; 3]).unwrap();
        let (_, _, rep) = analyze_channel(&r).unwrap();
        assert_eq!(rep.regime, Regime::Weak);
        for p in &rep.pairs {
            if let ConstraintKind::Individual(_) = p.kind {
                assert_eq!(p.delta, 0.0);
            }
        }
    }

    #[test]
    fn degenerate_all_zero_channel() {
        let r = ChannelRatios::new(vec![0.0; 3], vec![0.0; 3]).unwrap();
        let (ach, out, rep) = analyze_channel(&r).unwrap();
        assert!(ach.rows.iter().chain(&out.rows).all(|row| row.rhs == 0.0));
        assert!(rep.pairs.iter().all(|p| p.delta == 0.0 && p.pass));
        // all-equal boundary counts as strong, so nothing is asserted
        assert!(!rep.asserted);
    }

    #[test]
    fn kind_mismatch_is_structural_error() {
        let r = ChannelRatios::symmetric(3, 100.0, 10.0).unwrap();
        let (ach, mut out, _) = analyze_channel(&r).unwrap();
        out.rows[0].kind = ConstraintKind::Individual(1);
        assert!(matches!(
            gap_report(&ach, &out, Regime::Weak),
            Err(Error::KindMismatch(_))
        ));
        out.rows.pop();
        assert!(matches!(
            gap_report(&ach, &out, Regime::Weak),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn flagged_near_bound() {
        let r = ChannelRatios::symmetric(2, 100.0, 10.0).unwrap();
        let (ach, mut out, _) = analyze_channel(&r).unwrap();
        out.rows[0].rhs = ach.rows[0].rhs + 2.0;
        let rep = gap_report(&ach, &out, Regime::Weak).unwrap();
        assert!(rep.pairs[0].flagged);
        assert!(!rep.pairs[0].pass);
        assert!(rep.pairs[0].exact_delta.is_some());
        assert_eq!(rep.violations().len(), 1);
    }

    #[test]
    fn sampling_is_deterministic_and_regime_respecting() {
        let cfg = SweepConfig {
            samples: 50,
            ..SweepConfig::default()
        };
        for i in 0..50 {
            let a = cfg.sample(i).unwrap();
            assert_eq!(a, cfg.sample(i).unwrap());
            assert_eq!(classify_regime(&a), Regime::Weak);
        }
        let strong = SweepConfig {
            inr: InrSampling::AboveSnr { span_db: 20.0 },
            ..cfg
        };
        for i in 0..50 {
            assert!(classify_regime(&strong.sample(i).unwrap()).is_strong());
        }
    }

    #[test]
    fn empty_after_filter() {
        let cfg = SweepConfig {
            samples: 5,
            inr: InrSampling::AboveSnr { span_db: 10.0 },
            regime_filter: Some(RegimeFilter::Weak),
            ..SweepConfig::default()
        };
        assert!(matches!(sweep(&cfg), Err(Error::EmptySweep { attempted: 5 })));
    }
}
