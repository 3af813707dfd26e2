//! Command-line verbs. Each writes its artifacts and a `manifest.json` into `--out`.
//!
//! Exit codes: 0 success, 2 invalid input, 3 wrong interference regime,
//! 4 a checked property failed (gap bound, FM projection, containment).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::channel::{classify_regime, ChannelRatios, Regime};
use crate::constraint::ConstraintSet;
use crate::error::{Error, Result};
use crate::gap::{analyze_channel, sweep, GapReport, InrSampling, RegimeFilter, SweepConfig, SweepSummary};
use crate::hk::{achievable_constraints, check_elimination_against, etw_split, hk_parameters, PowerSplit};
use crate::io::{
    read_channel, read_json, read_replay, write_constraints_csv, write_gap_csv, write_json, write_replay,
    write_sweep_csv, write_vertices_csv, ConstraintDocument,
};
use crate::manifest::RunManifest;
use crate::outer::{mac_intersection, outer_constraints, outer_parameters, strong_capacity};
use crate::polytope::{
    dyadic, enumerate_vertices, format_q, parse_system, remove_redundant, to_f64, write_system, Equality,
    FmOptions, InequalitySystem, PolytopeError, Row, Q,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_REGIME: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Largest user count `fm-check` runs without `--allow-large`.
pub const FM_MAX_USERS: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "cyclic-ic", version, about = "Rate regions and gap checks for the cyclic Gaussian interference channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Achievable region for a fixed power split.
    Region(RegionArgs),
    /// Outer bound on the capacity region.
    Outer(ChannelArgs),
    /// Capacity region of a strong or very strong channel.
    Strong(ChannelArgs),
    /// Intersection of the per-receiver MAC regions.
    Mac(ChannelArgs),
    /// Gap between the achievable region and the outer bound.
    Gap(GapArgs),
    /// Seeded randomized gap sweep.
    Sweep(SweepArgs),
    /// Re-derives the achievable region by exact Fourier-Motzkin elimination.
    FmCheck(FmCheckArgs),
    /// Vertices of a region or polytope file, optionally sliced.
    Vertices(VerticesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Channel spec (JSON).
    pub spec: PathBuf,
    /// Read every number in the spec as dB.
    #[arg(long)]
    pub db: bool,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    /// Private interference at the noise level.
    Etw,
    /// Everything private.
    None,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "etw")]
    pub split: SplitArg,
}

#[derive(Debug, Clone, Args)]
pub struct GapArgs {
    /// Channel spec (JSON); omit when using --replay.
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub db: bool,
    /// Report gaps outside the weak regime, where no bound is claimed.
    #[arg(long)]
    pub force: bool,
    /// Re-run every channel of a sweep replay file.
    #[arg(long, conflicts_with = "spec")]
    pub replay: Option<PathBuf>,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InrModeArg {
    Below,
    Above,
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Weak,
    Strong,
    Mixed,
    Any,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Sweep config (JSON); flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub users_min: Option<usize>,
    #[arg(long)]
    pub users_max: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub snr_db_min: Option<f64>,
    #[arg(long)]
    pub snr_db_max: Option<f64>,
    #[arg(long, value_enum)]
    pub inr_mode: Option<InrModeArg>,
    /// Lower end for `below` and `independent`.
    #[arg(long, default_value_t = 0.0)]
    pub inr_db_min: f64,
    /// Upper end for `independent`.
    #[arg(long, default_value_t = 40.0)]
    pub inr_db_max: f64,
    /// Width above SNR for `above`.
    #[arg(long, default_value_t = 20.0)]
    pub inr_span_db: f64,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Also check exact containment for samples with at most this many users.
    #[arg(long)]
    pub containment_max_users: Option<usize>,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FmCheckArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "etw")]
    pub split: SplitArg,
    /// Run for more than four users despite the cost.
    #[arg(long)]
    pub allow_large: bool,
    /// Abort elimination after this many seconds and report the partial system.
    #[arg(long)]
    pub timeout_secs: Option<f64>,
    /// Lowers the closed-form row with this 1-based index by one bit (negative control).
    #[arg(long, hide = true)]
    pub corrupt_row: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Achievable,
    Outer,
    Strong,
    Mac,
}

#[derive(Debug, Clone, Args)]
pub struct VerticesArgs {
    /// Channel spec (JSON).
    #[arg(required_unless_present = "system")]
    pub spec: Option<PathBuf>,
    /// Polytope text file instead of a channel spec.
    #[arg(long, conflicts_with = "spec")]
    pub system: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "achievable")]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value = "etw")]
    pub split: SplitArg,
    #[arg(long)]
    pub db: bool,
    /// Fix a variable, e.g. `R3=1.5` or `R3=3/2`; repeat to slice further.
    #[arg(long, value_name = "NAME=VALUE")]
    pub fix: Vec<String>,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// Summary printed to stdout.
    pub lines: Vec<String>,
    pub manifest: RunManifest,
}

/// Exit code for a command that stopped with an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_) | Error::Parse { .. } | Error::KindMismatch(_) | Error::EmptySweep { .. } => {
            EXIT_VALIDATION
        }
        Error::NotStrongRegime { .. } | Error::Refused { .. } => EXIT_REGIME,
        Error::Polytope(e) => match e {
            PolytopeError::Timeout(_) | PolytopeError::Infeasible(_) => EXIT_CHECK_FAILED,
            _ => EXIT_VALIDATION,
        },
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => EXIT_FAILURE,
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Region(a) => cmd_region(a),
        Command::Outer(a) => cmd_outer(a),
        Command::Strong(a) => cmd_strong(a),
        Command::Mac(a) => cmd_mac(a),
        Command::Gap(a) => cmd_gap(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::FmCheck(a) => cmd_fm_check(a),
        Command::Vertices(a) => cmd_vertices(a),
    }
}

struct Session {
    out: PathBuf,
    manifest: RunManifest,
    lines: Vec<String>,
}

impl Session {
    fn new(command: &str, out: &Path, input: &[u8]) -> Result<Self> {
        fs::create_dir_all(out)?;
        Ok(Self {
            out: out.to_path_buf(),
            manifest: RunManifest::new(command, input),
            lines: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn wrote(&mut self, name: &str) -> Result<()> {
        self.manifest.record(&self.out, name)?;
        self.lines.push(format!("wrote {}", self.path(name).display()));
        Ok(())
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn constraint_files(&mut self, stem: &str, set: ConstraintSet, regime: Regime) -> Result<()> {
        let doc = ConstraintDocument::new(set, regime);
        if let Some(a) = &doc.annotation {
            self.say(a.clone());
        }
        for note in &doc.set.notes {
            self.say(format!("note: {note}"));
        }
        write_constraints_csv(&self.path(&format!("{stem}.csv")), &doc.set)?;
        self.wrote(&format!("{stem}.csv"))?;
        write_json(&self.path(&format!("{stem}.json")), &doc)?;
        self.wrote(&format!("{stem}.json"))
    }

    fn finish(mut self, exit_code: i32) -> Result<Outcome> {
        let path = self.manifest.write(&self.out)?;
        self.lines.push(format!("wrote {}", path.display()));
        Ok(Outcome {
            exit_code,
            lines: self.lines,
            manifest: self.manifest,
        })
    }
}

fn load(args: &ChannelArgs) -> Result<(Vec<u8>, ChannelRatios)> {
    let bytes = fs::read(&args.spec)?;
    let r = read_channel(&args.spec, args.db)?;
    Ok((bytes, r))
}

fn split_for(r: &ChannelRatios, split: SplitArg) -> PowerSplit {
    match split {
        SplitArg::Etw => etw_split(r),
        SplitArg::None => PowerSplit::all_private(r),
    }
}

fn achievable(r: &ChannelRatios, split: SplitArg) -> Result<ConstraintSet> {
    achievable_constraints(&hk_parameters(r, &split_for(r, split))?)
}

fn cmd_region(a: &RegionArgs) -> Result<Outcome> {
    let (bytes, r) = load(&a.channel)?;
    let regime = classify_regime(&r);
    let mut s = Session::new("region", &a.channel.out, &bytes)?;
    s.manifest.regime = Some(regime);
    let set = achievable(&r, a.split)?;
    s.say(format!("K={} regime={regime} rows={}", r.users(), set.len()));
    if r.users() <= 3 {
        let sys = set.to_system()?;
        let verts = enumerate_vertices(&sys, false)?;
        write_vertices_csv(&s.path("vertices.csv"), sys.variables(), &verts)?;
        s.say(format!("{} vertices", verts.len()));
        s.wrote("vertices.csv")?;
    }
    s.constraint_files("achievable", set, regime)?;
    s.finish(EXIT_OK)
}

fn cmd_outer(a: &ChannelArgs) -> Result<Outcome> {
    let (bytes, r) = load(a)?;
    let regime = classify_regime(&r);
    let mut s = Session::new("outer", &a.out, &bytes)?;
    s.manifest.regime = Some(regime);
    let set = outer_constraints(&outer_parameters(&r))?;
    s.say(format!("K={} regime={regime} rows={}", r.users(), set.len()));
    s.constraint_files("outer", set, regime)?;
    s.finish(EXIT_OK)
}

fn cmd_strong(a: &ChannelArgs) -> Result<Outcome> {
    let (bytes, r) = load(a)?;
    let regime = classify_regime(&r);
    let set = strong_capacity(&r)?;
    let mut s = Session::new("strong", &a.out, &bytes)?;
    s.manifest.regime = Some(regime);
    s.say(format!("K={} regime={regime} rows={}", r.users(), set.len()));
    s.constraint_files("strong", set, regime)?;
    s.finish(EXIT_OK)
}

fn cmd_mac(a: &ChannelArgs) -> Result<Outcome> {
    let (bytes, r) = load(a)?;
    let regime = classify_regime(&r);
    let mut s = Session::new("mac", &a.out, &bytes)?;
    s.manifest.regime = Some(regime);
    let set = mac_intersection(&r);
    let reduced = remove_redundant(&set.to_system()?)?;
    s.say(format!(
        "K={} regime={regime} rows={} (irredundant: {})",
        r.users(),
        set.len(),
        reduced.len()
    ));
    fs::write(s.path("mac_reduced.txt"), write_system(&reduced))?;
    s.wrote("mac_reduced.txt")?;
    s.constraint_files("mac", set, regime)?;
    s.finish(EXIT_OK)
}

fn gap_lines(report: &GapReport) -> Vec<String> {
    let mut lines = vec![format!(
        "K={} regime={} max normalized gap {:.6} bits, min delta {:.6}",
        report.users, report.regime, report.max_normalized_gap, report.min_delta
    )];
    for p in &report.pairs {
        if !p.pass || p.flagged {
            lines.push(format!(
                "{}: delta {} vs bound {}{}",
                p.kind,
                p.delta,
                p.bound,
                if p.flagged { " (flagged)" } else { "" }
            ));
        }
    }
    lines
}

fn cmd_gap(a: &GapArgs) -> Result<Outcome> {
    if let Some(replay) = &a.replay {
        let bytes = fs::read(replay)?;
        let channels = read_replay(replay)?;
        let mut s = Session::new("gap", &a.out, &bytes)?;
        let mut reports = Vec::with_capacity(channels.len());
        for r in &channels {
            let (_, _, report) = analyze_channel(r)?;
            s.lines.extend(gap_lines(&report));
            reports.push(report);
        }
        let failed = reports.iter().any(|r| !r.violations().is_empty());
        write_json(&s.path("replay_gaps.json"), &reports)?;
        s.wrote("replay_gaps.json")?;
        return s.finish(if failed { EXIT_CHECK_FAILED } else { EXIT_OK });
    }
    let spec = a
        .spec
        .as_ref()
        .ok_or_else(|| Error::Validation("gap needs a channel spec or --replay".into()))?;
    let bytes = fs::read(spec)?;
    let r = read_channel(spec, a.db)?;
    let regime = classify_regime(&r);
    if regime != Regime::Weak && !a.force {
        return Err(Error::Refused {
            regime,
            reason: "the two-bit gap is only established for weak channels; pass --force to report anyway".into(),
        });
    }
    let mut s = Session::new("gap", &a.out, &bytes)?;
    s.manifest.regime = Some(regime);
    let (_, _, report) = analyze_channel(&r)?;
    s.lines.extend(gap_lines(&report));
    let violations = report.violations().len();
    write_gap_csv(&s.path("gap.csv"), &report.pairs)?;
    s.wrote("gap.csv")?;
    write_json(&s.path("gap.json"), &report)?;
    s.wrote("gap.json")?;
    if violations > 0 {
        s.say(format!("{violations} gap bound violations"));
    }
    s.finish(if violations > 0 { EXIT_CHECK_FAILED } else { EXIT_OK })
}

/// Resolves the sweep config from an optional file and flag overrides.
pub fn sweep_config(a: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &a.config {
        Some(path) => read_json(path)?,
        None => SweepConfig::default(),
    };
    if let Some(v) = a.users_min {
        cfg.users_min = v;
    }
    if let Some(v) = a.users_max {
        cfg.users_max = v;
    }
    if let Some(v) = a.samples {
        cfg.samples = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.snr_db_min {
        cfg.snr_db_min = v;
    }
    if let Some(v) = a.snr_db_max {
        cfg.snr_db_max = v;
    }
    if let Some(v) = a.containment_max_users {
        cfg.containment_max_users = v;
    }
    if let Some(mode) = a.inr_mode {
        cfg.inr = match mode {
            InrModeArg::Below => InrSampling::BelowSnr { min_db: a.inr_db_min },
            InrModeArg::Above => InrSampling::AboveSnr { span_db: a.inr_span_db },
            InrModeArg::Independent => InrSampling::Independent {
                min_db: a.inr_db_min,
                max_db: a.inr_db_max,
            },
        };
    }
    if let Some(regime) = a.regime {
        cfg.regime_filter = match regime {
            RegimeArg::Weak => Some(RegimeFilter::Weak),
            RegimeArg::Strong => Some(RegimeFilter::Strong),
            RegimeArg::Mixed => Some(RegimeFilter::Mixed),
            RegimeArg::Any => None,
        };
    }
    Ok(cfg)
}

/// Contents of `summary.json` written by `sweep`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummaryDoc {
    pub config: SweepConfig,
    pub summary: SweepSummary,
    pub passed: bool,
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let cfg = sweep_config(a)?;
    let canonical = serde_json::to_vec(&cfg)?;
    let report = sweep(&cfg)?;
    let mut s = Session::new("sweep", &a.out, &canonical)?;
    s.manifest.seed = Some(cfg.seed);
    let sm = &report.summary;
    s.say(format!(
        "{} of {} samples evaluated; max normalized gap {:.6} bits; min delta {:.6}",
        sm.evaluated, sm.attempted, sm.max_normalized_gap, sm.min_delta
    ));
    for c in &sm.classes {
        s.say(format!(
            "  {:<14} max delta {:>10.6} (bound {:>3}) {}",
            c.class.to_string(),
            c.max_delta,
            c.bound,
            if c.pass { "ok" } else { "FAIL" }
        ));
    }
    s.say(format!(
        "violations: {} gap, {} negative delta, {} of {} containment",
        sm.theorem_violations, sm.negative_deltas, sm.containment_failures, sm.containment_checked
    ));
    write_sweep_csv(&s.path("sweep.csv"), &report)?;
    s.wrote("sweep.csv")?;
    write_json(
        &s.path("summary.json"),
        &SweepSummaryDoc {
            config: cfg.clone(),
            summary: sm.clone(),
            passed: report.passed(),
        },
    )?;
    s.wrote("summary.json")?;
    write_replay(&s.path("replay.json"), &report.failures)?;
    s.wrote("replay.json")?;
    s.finish(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Contents of `verdict.json` written by `fm-check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FmVerdict {
    pub users: usize,
    /// `EQUAL`, `NOT-EQUAL` or `TIMEOUT`.
    pub verdict: String,
    pub projected_rows: usize,
    pub closed_form_rows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eliminated: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub remaining: Vec<String>,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// Which system contains the point.
    pub inside: String,
    pub point: Vec<String>,
    pub point_f64: Vec<f64>,
    /// 0-based row of the other system that the point violates.
    pub violated_row: Option<usize>,
}

fn corrupt(sys: InequalitySystem, row: usize) -> Result<InequalitySystem> {
    if row == 0 || row > sys.len() {
        return Err(Error::Validation(format!(
            "--corrupt-row {row} is outside 1..={}",
            sys.len()
        )));
    }
    let names = sys.variables().to_vec();
    let mut rows: Vec<Row> = sys.rows().to_vec();
    rows[row - 1].rhs -= Q::from_integer(1.into());
    Ok(InequalitySystem::with_rows(names, rows)?)
}

fn cmd_fm_check(a: &FmCheckArgs) -> Result<Outcome> {
    let (bytes, r) = load(&a.channel)?;
    let k = r.users();
    let mut s = Session::new("fm-check", &a.channel.out, &bytes)?;
    if k > FM_MAX_USERS {
        if !a.allow_large {
            return Err(Error::Validation(format!(
                "fm-check is limited to K <= {FM_MAX_USERS} (got {k}); pass --allow-large to run anyway"
            )));
        }
        s.say(format!("warning: K={k}; elimination may take very long"));
    }
    let regime = classify_regime(&r);
    s.manifest.regime = Some(regime);
    let params = hk_parameters(&r, &split_for(&r, a.split))?;
    let mut closed = achievable_constraints(&params)?.to_system()?;
    if let Some(row) = a.corrupt_row {
        closed = corrupt(closed, row)?;
        s.say(format!("closed form row {row} lowered by one bit"));
    }
    let opts = FmOptions {
        keep_order: false,
        deadline: a.timeout_secs.map(|t| Instant::now() + Duration::from_secs_f64(t)),
    };
    let closed_rows = closed.len();
    fs::write(s.path("closed_form.txt"), write_system(&closed))?;
    s.wrote("closed_form.txt")?;

    let started = Instant::now();
    let (verdict, code) = match check_elimination_against(&params, closed, &opts) {
        Ok(check) => {
            fs::write(s.path("projected.txt"), write_system(&check.projected))?;
            s.wrote("projected.txt")?;
            let witness = match &check.verdict {
                Equality::Equal => None,
                Equality::OnlyInFirst(w) => Some(("projected", w)),
                Equality::OnlyInSecond(w) => Some(("closed_form", w)),
            }
            .map(|(inside, w)| WitnessDoc {
                inside: inside.into(),
                point: w.point.iter().map(format_q).collect(),
                point_f64: w.point.iter().map(to_f64).collect(),
                violated_row: w.violated_row,
            });
            let equal = check.is_equal();
            (
                FmVerdict {
                    users: k,
                    verdict: if equal { "EQUAL" } else { "NOT-EQUAL" }.into(),
                    projected_rows: check.projected.len(),
                    closed_form_rows: closed_rows,
                    witness,
                    eliminated: Vec::new(),
                    remaining: Vec::new(),
                    elapsed_secs: started.elapsed().as_secs_f64(),
                },
                if equal { EXIT_OK } else { EXIT_CHECK_FAILED },
            )
        }
        Err(Error::Polytope(PolytopeError::Timeout(t))) => {
            fs::write(s.path("partial.txt"), write_system(&t.partial))?;
            s.wrote("partial.txt")?;
            (
                FmVerdict {
                    users: k,
                    verdict: "TIMEOUT".into(),
                    projected_rows: t.partial.len(),
                    closed_form_rows: closed_rows,
                    witness: None,
                    eliminated: t.eliminated.clone(),
                    remaining: t.remaining.clone(),
                    elapsed_secs: started.elapsed().as_secs_f64(),
                },
                EXIT_CHECK_FAILED,
            )
        }
        Err(e) => return Err(e),
    };
    s.say(format!(
        "K={k}: {} ({} projected rows, {} closed-form rows, {:.3}s)",
        verdict.verdict, verdict.projected_rows, verdict.closed_form_rows, verdict.elapsed_secs
    ));
    if let Some(w) = &verdict.witness {
        s.say(format!("witness in {} only: ({})", w.inside, w.point.join(", ")));
    }
    write_json(&s.path("verdict.json"), &verdict)?;
    s.wrote("verdict.json")?;
    s.finish(code)
}

/// Parses `NAME=VALUE`; the value is an exact rational `p/q` or a float rounded to the dyadic grid.
pub fn parse_fix(sys: &InequalitySystem, spec: &str) -> Result<(usize, Q)> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| Error::Validation(format!("--fix `{spec}` is not NAME=VALUE")))?;
    let idx = sys.index_of(name.trim())?;
    let value = value.trim();
    let q = match value.parse::<Q>() {
        Ok(q) => q,
        Err(_) => {
            let f: f64 = value
                .parse()
                .map_err(|_| Error::Validation(format!("--fix value `{value}` is not a number")))?;
            dyadic(f)?
        }
    };
    Ok((idx, q))
}

fn cmd_vertices(a: &VerticesArgs) -> Result<Outcome> {
    let (bytes, sys, regime) = match (&a.system, &a.spec) {
        (Some(path), _) => {
            let bytes = fs::read(path)?;
            let sys = parse_system(&String::from_utf8_lossy(&bytes)).map_err(|e| match e {
                PolytopeError::Parse { line, message } => Error::Parse {
                    path: path.clone(),
                    line,
                    message,
                },
                other => other.into(),
            })?;
            (bytes, sys, None)
        }
        (None, Some(spec)) => {
            let bytes = fs::read(spec)?;
            let r = read_channel(spec, a.db)?;
            let set = match a.family {
                FamilyArg::Achievable => achievable(&r, a.split)?,
                FamilyArg::Outer => outer_constraints(&outer_parameters(&r))?,
                FamilyArg::Strong => strong_capacity(&r)?,
                FamilyArg::Mac => mac_intersection(&r),
            };
            (bytes, set.to_system()?, Some(classify_regime(&r)))
        }
        (None, None) => return Err(Error::Validation("vertices needs a channel spec or --system".into())),
    };
    let fixes = a
        .fix
        .iter()
        .map(|f| parse_fix(&sys, f))
        .collect::<Result<Vec<_>>>()?;
    let sliced = sys.fix(&fixes);
    let verts = enumerate_vertices(&sliced, false)?;
    let mut s = Session::new("vertices", &a.out, &bytes)?;
    s.manifest.regime = regime;
    s.say(format!(
        "{} vertices over ({})",
        verts.len(),
        sliced.variables().join(", ")
    ));
    write_vertices_csv(&s.path("vertices.csv"), sliced.variables(), &verts)?;
    s.wrote("vertices.csv")?;
    s.finish(EXIT_OK)
}
