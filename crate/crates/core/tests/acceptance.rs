//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cyclic_ic::channel::{classify_regime, ChannelRatios, Regime};
use cyclic_ic::constraint::{ConstraintKind, ConstraintSet, RegionFamily};
use cyclic_ic::gap::{analyze_channel, sweep, InrSampling, RegimeFilter, SweepConfig, SweepReport, GAP_TOLERANCE};
use cyclic_ic::hk::{achievable_constraints, check_elimination, etw_split, hk_parameters};
use cyclic_ic::outer::{mac_intersection, outer_constraints, outer_parameters, strong_capacity};
use cyclic_ic::polytope::{
    eliminate_with, fourier_motzkin_eliminate, maximize, remove_redundant, set_equal, FmOptions,
    InequalitySystem, PolytopeError, Row, Q,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tolerance on the worked-example parameters, in bits.
const WORKED_TOLERANCE: f64 = 1e-9;
const SEED: u64 = 7;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:.2?}, budget {budget:?}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn branch_terms(set: &ConstraintSet, kind: ConstraintKind) -> Vec<Vec<String>> {
    let row = set.find(kind).expect("kind present");
    let mut out: Vec<Vec<String>> = row
        .branches
        .iter()
        .map(|b| {
            let mut t: Vec<String> = b.terms().iter().map(|t| t.to_string()).collect();
            t.sort();
            t
        })
        .collect();
    out.sort();
    out
}

fn expect_branches(set: &ConstraintSet, kind: ConstraintKind, want: &[&str]) -> Result<(), String> {
    let mut w: Vec<Vec<String>> = want
        .iter()
        .map(|b| {
            let mut t: Vec<String> = b.split('+').map(str::to_string).collect();
            t.sort();
            t
        })
        .collect();
    w.sort();
    let got = branch_terms(set, kind);
    ensure(got == w, || format!("{kind}: branches {got:?}, expected {w:?}"))
}

/// Two-user structure: five rows with the classical branch expressions.
fn k2_reduction() -> Check {
    let start = Instant::now();
    let channels = [
        ChannelRatios::symmetric(2, 100.0, 10.0).map_err(err)?,
        ChannelRatios::new(vec![1000.0, 30.0], vec![20.0, 0.5]).map_err(err)?,
    ];
    for r in &channels {
        let p = hk_parameters(r, &etw_split(r)).map_err(err)?;
        let set = achievable_constraints(&p).map_err(err)?;
        let kinds: Vec<ConstraintKind> = set.rows.iter().map(|r| r.kind).collect();
        ensure(
            kinds
                == [
                    ConstraintKind::Individual(0),
                    ConstraintKind::Individual(1),
                    ConstraintKind::TotalSum,
                    ConstraintKind::TotalSumPlus(0),
                    ConstraintKind::TotalSumPlus(1),
                ],
            || format!("kinds {kinds:?}"),
        )?;
        let coeffs: Vec<Vec<u32>> = set.rows.iter().map(|r| r.coeffs.clone()).collect();
        ensure(coeffs == [vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![1, 2]], || {
            format!("coefficients {coeffs:?}")
        })?;
        expect_branches(&set, ConstraintKind::Individual(0), &["d1", "a1+e2"])?;
        expect_branches(&set, ConstraintKind::Individual(1), &["d2", "a2+e1"])?;
        expect_branches(&set, ConstraintKind::TotalSum, &["e1+e2", "a1+g2", "a2+g1"])?;
        expect_branches(&set, ConstraintKind::TotalSumPlus(0), &["a1+g1+e2"])?;
        expect_branches(&set, ConstraintKind::TotalSumPlus(1), &["a2+g2+e1"])?;

        // right-hand sides are the minima of the named parameter sums
        let (a, d, e, g) = (&p.a, &p.d, &p.e, &p.g);
        let want = [
            d[0].min(a[0] + e[1]),
            d[1].min(a[1] + e[0]),
            (e[0] + e[1]).min(a[0] + g[1]).min(a[1] + g[0]),
            a[0] + g[0] + e[1],
            a[1] + g[1] + e[0],
        ];
        for (row, w) in set.rows.iter().zip(want) {
            ensure((row.rhs - w).abs() <= 1e-12, || format!("{}: rhs {} vs {w}", row.kind, row.rhs))?;
        }
    }
    within_budget(start, Duration::from_secs(1))?;
    Ok("5 rows, kinds, coefficients and branch provenance match".into())
}

fn constraint_counts() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 2..=8 {
        let snr: Vec<f64> = (0..k).map(|_| rng.gen_range(1.0..1e4)).collect();
        let inr: Vec<f64> = snr.iter().map(|s| s * rng.gen_range(0.0..1.0)).collect();
        let r = ChannelRatios::new(snr, inr).map_err(err)?;
        let ach = achievable_constraints(&hk_parameters(&r, &etw_split(&r)).map_err(err)?).map_err(err)?;
        let out = outer_constraints(&outer_parameters(&r)).map_err(err)?;
        ensure(ach.len() == k * k + 1 && out.len() == k * k + 1, || {
            format!("K={k}: {} achievable, {} outer rows", ach.len(), out.len())
        })?;
        let expect = k + k * (k - 2) + 1 + k;
        ensure(ach.len() == expect, || format!("K={k}: family breakdown"))?;
    }
    within_budget(start, Duration::from_secs(1))?;
    Ok("K^2+1 rows for K = 2..8 from both generators".into())
}

fn weak_sampler(k: usize, samples: usize, seed: u64) -> SweepConfig {
    SweepConfig {
        users_min: k,
        users_max: k,
        samples,
        seed,
        ..SweepConfig::default()
    }
}

fn fm_rederivation() -> Check {
    let mut findings = Vec::new();
    let mut timing = BTreeMap::new();
    for (k, n) in [(2, 20), (3, 20), (4, 3)] {
        let cfg = weak_sampler(k, n, SEED + k as u64);
        let t = Instant::now();
        for i in 0..n {
            let r = cfg.sample(i).map_err(err)?;
            let p = hk_parameters(&r, &etw_split(&r)).map_err(err)?;
            let closed = achievable_constraints(&p).map_err(err)?;
            let check = check_elimination(&p, &closed, &FmOptions::default()).map_err(err)?;
            if let Some(w) = check.verdict.witness() {
                findings.push(format!("K={k} sample {i} {:?}: NOT-EQUAL, witness {:?}", r, w));
            }
        }
        timing.insert(k, t.elapsed());
    }
    if !findings.is_empty() {
        return Err(findings.join("; "));
    }
    ensure(timing[&3] <= Duration::from_secs(300), || format!("K=3 took {:?}", timing[&3]))?;
    ensure(timing[&4] <= Duration::from_secs(1800), || format!("K=4 took {:?}", timing[&4]))?;
    Ok(format!(
        "20 + 20 + 3 channels set-equal (K=2 {:.2?}, K=3 {:.2?}, K=4 {:.2?})",
        timing[&2], timing[&3], timing[&4]
    ))
}

fn main_sweep() -> Result<(SweepReport, Duration), String> {
    let cfg = SweepConfig {
        users_min: 2,
        users_max: 6,
        samples: 1000,
        snr_db_min: 0.0,
        snr_db_max: 40.0,
        inr: InrSampling::BelowSnr { min_db: 0.0 },
        regime_filter: Some(RegimeFilter::Weak),
        seed: SEED,
        containment_max_users: 6,
    };
    let start = Instant::now();
    let report = sweep(&cfg).map_err(err)?;
    Ok((report, start.elapsed()))
}

fn containment(report: &SweepReport, took: Duration) -> Check {
    let s = &report.summary;
    ensure(s.evaluated == 1000, || format!("{} weak samples", s.evaluated))?;
    ensure(s.containment_checked == 1000, || format!("{} containment checks", s.containment_checked))?;
    if s.containment_failures > 0 {
        let failing: Vec<String> = report
            .records
            .iter()
            .filter(|r| r.contained == Some(false))
            .map(|r| format!("{:?}", r.channel))
            .collect();
        return Err(format!("{} violations: {}", s.containment_failures, failing.join("; ")));
    }
    ensure(took <= Duration::from_secs(600), || format!("sweep took {took:.2?}"))?;
    Ok(format!("1000 weak channels, K in 2..=6, all contained ({took:.2?})"))
}

fn two_bit_gap(report: &SweepReport) -> Check {
    let s = &report.summary;
    let mut problems = Vec::new();
    for rec in &report.records {
        if rec.theorem_violations > 0 || rec.negative_deltas > 0 || rec.max_normalized_gap >= 2.0 {
            problems.push(format!("sample {} {:?}", rec.index, rec.channel));
        }
        let k = rec.channel.users() as f64;
        for c in &rec.classes {
            use cyclic_ic::constraint::KindClass::*;
            let bound = match c.class {
                Individual => 2.0,
                AdjacentSum(l) => 2.0 * l as f64,
                TotalSum => 2.0 * k,
                TotalSumPlus => 2.0 * (k + 1.0),
            };
            if c.bound != bound || c.max_delta > bound - GAP_TOLERANCE {
                problems.push(format!("sample {} {}: {} vs {bound}", rec.index, c.class, c.max_delta));
            }
        }
    }
    // degenerate all-zero channel
    let zero = ChannelRatios::new(vec![0.0; 3], vec![0.0; 3]).map_err(err)?;
    let (ach, out, rep) = analyze_channel(&zero).map_err(err)?;
    if !(ach.rows.iter().chain(&out.rows).all(|r| r.rhs == 0.0) && rep.pairs.iter().all(|p| p.delta == 0.0 && p.pass)) {
        problems.push("all-zero channel does not collapse to zero".into());
    }
    // worked example
    let (_, _, rep) = analyze_channel(&ChannelRatios::symmetric(3, 100.0, 10.0).map_err(err)?).map_err(err)?;
    if !rep.all_pass() {
        problems.push("symmetric K=3 worked example fails".into());
    }
    if !problems.is_empty() {
        return Err(format!("{} problems: {}", problems.len(), problems.join("; ")));
    }
    Ok(format!(
        "zero violations at tolerance {GAP_TOLERANCE:e}; min delta {:.4}, max normalized gap {:.4} bits",
        s.min_delta, s.max_normalized_gap
    ))
}

fn strong_regime() -> Check {
    let start = Instant::now();
    let configs = [
        SweepConfig {
            users_min: 2,
            users_max: 5,
            samples: 100,
            snr_db_min: 0.0,
            snr_db_max: 30.0,
            inr: InrSampling::AboveSnr { span_db: 20.0 },
            regime_filter: None,
            seed: SEED,
            containment_max_users: 0,
        },
        SweepConfig {
            users_min: 2,
            users_max: 5,
            samples: 100,
            snr_db_min: 0.0,
            snr_db_max: 15.0,
            inr: InrSampling::AboveSnr { span_db: 60.0 },
            regime_filter: None,
            seed: SEED + 1,
            containment_max_users: 0,
        },
    ];
    let (mut strong, mut very) = (0, 0);
    for cfg in &configs {
        for i in 0..cfg.samples {
            let r = cfg.sample(i).map_err(err)?;
            let regime = classify_regime(&r);
            ensure(regime.is_strong(), || format!("{r:?} sampled as {regime}"))?;
            let region = strong_capacity(&r).map_err(err)?;
            let region_sys = region.to_system().map_err(err)?;
            let mac = remove_redundant(&mac_intersection(&r).to_system().map_err(err)?).map_err(err)?;
            let v = set_equal(&mac, &region_sys).map_err(err)?;
            ensure(v.is_equal(), || format!("{r:?}: reduced MAC differs from strong region: {v:?}"))?;
            if regime == Regime::VeryStrong {
                very += 1;
                ensure(region.family == RegionFamily::VeryStrongCapacity && region.len() == r.users(), || {
                    format!("{r:?}: very strong region has {} rows", region.len())
                })?;
                let boxed = ConstraintSet::box_system(&outer_parameters(&r).lambda).map_err(err)?;
                ensure(set_equal(&boxed, &region_sys).map_err(err)?.is_equal(), || {
                    format!("{r:?}: very strong region is not the box")
                })?;
            } else {
                strong += 1;
            }
        }
    }
    ensure(very > 0 && strong > 0, || format!("{strong} strong, {very} very strong samples"))?;
    within_budget(start, Duration::from_secs(120))?;
    Ok(format!(
        "{strong} strong + {very} very strong channels: MAC reduces to the region, very strong is the box ({:.2?})",
        start.elapsed()
    ))
}

fn zero_interference() -> Check {
    for snr in [vec![3.0, 15.0], vec![100.0, 0.5, 7.0], vec![1e4, 20.0, 1.0, 300.0], vec![2.0; 5]] {
        let k = snr.len();
        let r = ChannelRatios::new(snr, vec![0.0; k]).map_err(err)?;
        let (ach, out, rep) = analyze_channel(&r).map_err(err)?;
        let boxed = ConstraintSet::box_system(&outer_parameters(&r).lambda).map_err(err)?;
        let (a, o) = (ach.to_system().map_err(err)?, out.to_system().map_err(err)?);
        ensure(set_equal(&a, &boxed).map_err(err)?.is_equal(), || format!("K={k}: achievable is not the box"))?;
        ensure(set_equal(&o, &boxed).map_err(err)?.is_equal(), || format!("K={k}: outer is not the box"))?;
        for (x, y) in ach.rows.iter().zip(&out.rows) {
            let exact = y.exact_rhs(&out.params).map_err(err)? - x.exact_rhs(&ach.params).map_err(err)?;
            ensure(exact == Q::from_integer(0.into()), || format!("K={k} {}: exact gap {exact}", x.kind))?;
        }
        ensure(rep.pairs.iter().all(|p| p.delta == 0.0), || format!("K={k}: nonzero float gap"))?;
    }
    Ok("achievable = outer = box, every gap exactly 0, K = 2..5".into())
}

/// Independent scalar oracle: mutual informations as differences of Gaussian
/// output entropies, with the private/common split written out per receiver.
fn worked_example() -> Check {
    let (snr, inr) = (100.0f64, 10.0f64);
    let inr_p = inr.min(1.0);
    let snr_p = snr * inr_p / inr;
    let lg = f64::log2;
    // receiver i sees its own signal and the interferer's (private + common)
    let noise_p = 1.0 + inr_p;
    let oracle = [
        ("a", lg(1.0 + snr_p + inr_p) - lg(noise_p)),
        ("d", lg(1.0 + snr + inr_p) - lg(noise_p)),
        ("e", lg(1.0 + snr_p + inr) - lg(noise_p)),
        ("g", lg(1.0 + snr + inr) - lg(noise_p)),
        ("lambda", lg(1.0 + snr)),
        ("mu", lg(1.0 + inr)),
        ("beta", lg((1.0 + snr) / (1.0 + inr))),
        ("gamma", lg(1.0 + inr + snr)),
        ("alpha", lg(1.0 + inr + snr / (1.0 + inr))),
    ];
    // published approximations, to three decimals
    let printed = [
        ("a", 2.585),
        ("d", 5.672),
        ("e", 3.392),
        ("g", 5.794),
        ("lambda", 6.658),
        ("mu", 3.459),
        ("beta", 3.199),
        ("gamma", 6.794),
        ("alpha", 4.328),
    ];
    let closed = [
        ("a", lg(12.0) - 1.0),
        ("d", lg(102.0) - 1.0),
        ("e", lg(21.0) - 1.0),
        ("g", lg(111.0) - 1.0),
    ];

    let r = ChannelRatios::symmetric(3, snr, inr).map_err(err)?;
    let hk = hk_parameters(&r, &etw_split(&r)).map_err(err)?;
    let op = outer_parameters(&r);
    let lib = |name: &str, i: usize| match name {
        "a" => hk.a[i],
        "d" => hk.d[i],
        "e" => hk.e[i],
        "g" => hk.g[i],
        "lambda" => op.lambda[i],
        "mu" => op.mu[i],
        "beta" => op.beta[i],
        "gamma" => op.gamma[i],
        "alpha" => op.alpha[i],
        _ => unreachable!(),
    };
    let mut diffs = Vec::new();
    for (name, v) in oracle {
        for i in 0..3 {
            if (lib(name, i) - v).abs() > WORKED_TOLERANCE {
                diffs.push(format!("{name}{}: {} vs oracle {v}", i + 1, lib(name, i)));
            }
        }
    }
    for (name, p) in printed {
        let v = oracle.iter().find(|(n, _)| *n == name).unwrap().1;
        if (v - p).abs() > 5e-4 {
            diffs.push(format!("{name}: oracle {v} does not round to {p}"));
        }
    }
    for (name, c) in closed {
        if (lib(name, 0) - c).abs() > WORKED_TOLERANCE {
            diffs.push(format!("{name}: {} vs {c}", lib(name, 0)));
        }
    }

    let delta_oracle = oracle[4].1 - oracle[1].1.min(oracle[0].1 + oracle[2].1);
    let (_, _, rep) = analyze_channel(&r).map_err(err)?;
    for p in rep.pairs.iter().filter(|p| matches!(p.kind, ConstraintKind::Individual(_))) {
        if (p.delta - delta_oracle).abs() > WORKED_TOLERANCE || !(p.delta < 2.0) {
            diffs.push(format!("{}: delta {} vs oracle {delta_oracle}", p.kind, p.delta));
        }
    }
    if !diffs.is_empty() {
        return Err(diffs.join("; "));
    }
    Ok(format!(
        "a={:.4} d={:.4} e={:.4} g={:.4} lambda={:.4} alpha={:.4}, delta_Ri={:.6} < 2 (tolerance {WORKED_TOLERANCE:e})",
        hk.a[0], hk.d[0], hk.e[0], hk.g[0], op.lambda[0], op.alpha[0], delta_oracle
    ))
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> InequalitySystem {
    let names: Vec<String> = (0..n).map(|j| format!("x{j}")).collect();
    let mut sys = InequalitySystem::new(names);
    let rows = rng.gen_range(2..=7);
    for _ in 0..rows {
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        sys.push(Row::from_ints(&c, Q::from_integer(rng.gen_range(-2i64..=8).into()))).unwrap();
    }
    // a box keeps every instance bounded
    for j in 0..n {
        let mut c = vec![0; n];
        c[j] = 1;
        sys.push(Row::from_ints(&c, Q::from_integer(4.into()))).unwrap();
        c[j] = -1;
        sys.push(Row::from_ints(&c, Q::from_integer(4.into()))).unwrap();
    }
    sys
}

fn engine_soundness() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut probes, mut feasible, mut infeasible) = (0usize, 0usize, 0usize);
    for case in 0..500 {
        let n = rng.gen_range(2..=4);
        let sys = random_system(&mut rng, n);
        let elim_count = rng.gen_range(1..n);
        let names: Vec<String> = sys.variables()[n - elim_count..].to_vec();
        let elim: Vec<&str> = names.iter().map(String::as_str).collect();

        let projected = match fourier_motzkin_eliminate(&sys, &elim) {
            Ok(p) => p,
            Err(PolytopeError::Infeasible(_)) => {
                ensure(!maximize(&sys, &vec![Q::from_integer(0.into()); n]).is_feasible(), || {
                    format!("case {case}: FM reported infeasible for a feasible system")
                })?;
                infeasible += 1;
                continue;
            }
            Err(e) => return Err(format!("case {case}: {e}")),
        };
        feasible += 1;

        // membership in the projection equals feasibility of the lifted system
        let kept = n - elim_count;
        for _ in 0..8 {
            let point: Vec<Q> = (0..kept)
                .map(|_| Q::new(rng.gen_range(-10i64..=10).into(), rng.gen_range(1i64..=2).into()))
                .collect();
            let fixes: Vec<(usize, Q)> = point.iter().cloned().enumerate().collect();
            let lifted = sys.fix(&fixes);
            let lift_ok = maximize(&lifted, &vec![Q::from_integer(0.into()); elim_count]).is_feasible();
            ensure(projected.contains_point(&point) == lift_ok, || {
                format!("case {case}: membership mismatch at {point:?}")
            })?;
            probes += 1;
        }

        let reduced = remove_redundant(&sys).map_err(err)?;
        ensure(set_equal(&sys, &reduced).map_err(err)?.is_equal(), || {
            format!("case {case}: remove_redundant changed the set")
        })?;

        let mut reversed = elim.clone();
        reversed.reverse();
        let other = eliminate_with(&sys, &reversed, &FmOptions { keep_order: true, ..FmOptions::default() })
            .map_err(err)?;
        ensure(set_equal(&projected, &other).map_err(err)?.is_equal(), || {
            format!("case {case}: elimination order changed the projection")
        })?;
    }
    within_budget(start, Duration::from_secs(300))?;
    Ok(format!(
        "500 systems ({feasible} feasible, {infeasible} infeasible), {probes} probes agree; redundancy removal and order invariant ({:.2?})",
        start.elapsed()
    ))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Check)> = vec![
        ("1 two-user reduction", k2_reduction()),
        ("2 constraint count", constraint_counts()),
        ("3 FM re-derivation", fm_rederivation()),
    ];
    match main_sweep() {
        Ok((report, took)) => {
            results.push(("4 containment", containment(&report, took)));
            results.push(("5 two-bit gap", two_bit_gap(&report)));
        }
        Err(e) => {
            results.push(("4 containment", Err(e.clone())));
            results.push(("5 two-bit gap", Err(e)));
        }
    }
    results.push(("6 strong regime", strong_regime()));
    results.push(("7 zero interference", zero_interference()));
    results.push(("8 worked example", worked_example()));
    results.push(("9 engine soundness", engine_soundness()));

    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
