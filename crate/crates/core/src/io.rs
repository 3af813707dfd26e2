//! File formats: channel specs, constraint sets, gap and sweep reports, vertex lists.
//!
//! All floats are written with Rust's shortest round-trip formatting, so reading
//! a file back reproduces every value bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{db_to_linear, derive_ratios, ChannelInstance, ChannelRatios, Regime};
use crate::constraint::{ConstraintKind, ConstraintSet, Expr, LinearConstraint, ParamTable, RegionFamily};
use crate::error::{Error, Result};
use crate::gap::{GapPair, SweepReport};
use crate::polytope::{format_q, to_f64, Q, DYADIC_BITS};

/// Channel spec document. Either ratio vectors or the physical model, with an
/// optional user count that must agree with the vector lengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ChannelSpec {
    Ratios {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        users: Option<usize>,
        snr: Vec<f64>,
        inr: Vec<f64>,
    },
    Physical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        users: Option<usize>,
        direct_gains: Vec<f64>,
        cross_gains: Vec<f64>,
        powers: Vec<f64>,
        noise: f64,
    },
}

impl ChannelSpec {
    pub fn from_ratios(r: &ChannelRatios) -> Self {
        ChannelSpec::Ratios {
            users: Some(r.users()),
            snr: r.snr().to_vec(),
            inr: r.inr().to_vec(),
        }
    }

    /// Linear ratios. With `db`, every number in the document is read in dB.
    pub fn to_ratios(&self, db: bool) -> Result<ChannelRatios> {
        let conv = |v: &[f64]| -> Vec<f64> {
            if db {
                v.iter().copied().map(db_to_linear).collect()
            } else {
                v.to_vec()
            }
        };
        let (users, r) = match self {
            ChannelSpec::Ratios { users, snr, inr } => (*users, ChannelRatios::new(conv(snr), conv(inr))?),
            ChannelSpec::Physical {
                users,
                direct_gains,
                cross_gains,
                powers,
                noise,
            } => {
                let ch = ChannelInstance {
                    direct_gains: conv(direct_gains),
                    cross_gains: conv(cross_gains),
                    powers: conv(powers),
                    noise: if db { db_to_linear(*noise) } else { *noise },
                };
                (*users, derive_ratios(&ch)?)
            }
        };
        if let Some(k) = users {
            if k != r.users() {
                return Err(Error::Validation(format!(
                    "users = {k} but the vectors have {} entries",
                    r.users()
                )));
            }
        }
        Ok(r)
    }
}

fn parse_error(path: &Path, e: &serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: format!("column {}: {e}", e.column()),
    }
}

pub fn parse_channel(text: &str, path: &Path, db: bool) -> Result<ChannelRatios> {
    let spec: ChannelSpec = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            // untagged enums lose the field-level detail; say what is accepted
            Error::Parse {
                path: path.to_path_buf(),
                line: e.line(),
                message: "expected {users, snr, inr} or {users, direct_gains, cross_gains, powers, noise} with numeric values"
                    .into(),
            }
        } else {
            parse_error(path, &e)
        }
    })?;
    spec.to_ratios(db)
}

pub fn read_channel(path: &Path, db: bool) -> Result<ChannelRatios> {
    parse_channel(&fs::read_to_string(path)?, path, db)
}

pub fn write_channel(path: &Path, r: &ChannelRatios) -> Result<()> {
    write_json(path, &ChannelSpec::from_ratios(r))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| parse_error(path, &e))
}

/// Constraint set plus the context needed to interpret it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDocument {
    pub regime: Regime,
    /// Set when the region's meaning is not claimed for this regime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
    /// Exact polytopes round parameters to multiples of `2^-dyadic_bits`.
    pub dyadic_bits: u32,
    #[serde(flatten)]
    pub set: ConstraintSet,
}

impl ConstraintDocument {
    pub fn new(set: ConstraintSet, regime: Regime) -> Self {
        let annotation = (!set.family.asserted_in(regime))
            .then(|| format!("regime: {regime}, bound unasserted"));
        Self {
            regime,
            annotation,
            dyadic_bits: DYADIC_BITS,
            set,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    kind: String,
    coeffs: String,
    rhs: f64,
    attained: String,
    branches: String,
}

/// One row per constraint: `kind,coeffs,rhs,attained,branches`, with
/// space-separated coefficients and `|`-separated branch expressions.
pub fn write_constraints_csv(path: &Path, set: &ConstraintSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in &set.rows {
        let coeffs: Vec<String> = row.coeffs.iter().map(u32::to_string).collect();
        let branches: Vec<String> = row.branches.iter().map(Expr::to_string).collect();
        w.serialize(CsvRow {
            kind: row.kind.to_string(),
            coeffs: coeffs.join(" "),
            rhs: row.rhs,
            attained: row.attained().to_string(),
            branches: branches.join("|"),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows written by [`write_constraints_csv`]. The parameter table is not
/// part of the CSV, so exact right-hand sides fall back to the stored floats.
pub fn read_constraints_csv(path: &Path, family: RegionFamily) -> Result<ConstraintSet> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for (idx, rec) in r.deserialize::<CsvRow>().enumerate() {
        // header is line 1
        let line = idx + 2;
        let bad = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let rec = rec?;
        let kind: ConstraintKind = rec.kind.parse().map_err(bad)?;
        let coeffs = rec
            .coeffs
            .split_whitespace()
            .map(|c| c.parse::<u32>().map_err(|e| bad(format!("coefficient `{c}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let branches = rec
            .branches
            .split('|')
            .map(|b| b.parse::<Expr>().map_err(bad))
            .collect::<Result<Vec<_>>>()?;
        let attained: Expr = rec.attained.parse().map_err(bad)?;
        let branch = branches
            .iter()
            .position(|b| *b == attained)
            .ok_or_else(|| bad(format!("attained branch `{attained}` is not among the alternatives")))?;
        rows.push(LinearConstraint {
            kind,
            coeffs,
            rhs: rec.rhs,
            branches,
            branch,
        });
    }
    let users = rows.first().map_or(0, |r| r.coeffs.len());
    if let Some(pos) = rows.iter().position(|r| r.coeffs.len() != users || r.kind.coeffs(users) != r.coeffs) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: pos + 2,
            message: "coefficients do not match the constraint kind".into(),
        });
    }
    Ok(ConstraintSet {
        users,
        family,
        rows,
        params: ParamTable::default(),
        notes: Vec::new(),
    })
}

pub fn write_gap_csv(path: &Path, pairs: &[GapPair]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for p in pairs {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_gap_csv(path: &Path) -> Result<Vec<GapPair>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub sample: usize,
    pub users: usize,
    pub regime: Regime,
    pub class: String,
    pub max_delta: f64,
    pub min_delta: f64,
    pub bound: f64,
    pub max_normalized: f64,
    pub pass: bool,
}

/// One row per sample per constraint class.
pub fn write_sweep_csv(path: &Path, report: &SweepReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for rec in &report.records {
        for c in &rec.classes {
            w.serialize(SweepCsvRow {
                sample: rec.index,
                users: rec.channel.users(),
                regime: rec.regime,
                class: c.class.to_string(),
                max_delta: c.max_delta,
                min_delta: c.min_delta,
                bound: c.bound,
                max_normalized: c.max_normalized,
                pass: c.pass,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepCsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Channels to re-run, as a list of channel spec documents.
pub fn write_replay(path: &Path, channels: &[ChannelRatios]) -> Result<()> {
    let specs: Vec<ChannelSpec> = channels.iter().map(ChannelSpec::from_ratios).collect();
    write_json(path, &specs)
}

pub fn read_replay(path: &Path) -> Result<Vec<ChannelRatios>> {
    let specs: Vec<ChannelSpec> = read_json(path)?;
    specs.iter().map(|s| s.to_ratios(false)).collect()
}

/// Vertex list with exact coordinates and their float approximations.
pub fn write_vertices_csv(path: &Path, names: &[String], vertices: &[Vec<Q>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = names.to_vec();
    header.extend(names.iter().map(|n| format!("{n}_exact")));
    w.write_record(&header)?;
    for v in vertices {
        let mut rec: Vec<String> = v.iter().map(|x| to_f64(x).to_string()).collect();
        rec.extend(v.iter().map(format_q));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Exact coordinates from a file written by [`write_vertices_csv`].
pub fn read_vertices_csv(path: &Path) -> Result<Vec<Vec<Q>>> {
    let mut r = csv::Reader::from_path(path)?;
    let n = r.headers()?.len() / 2;
    let mut out = Vec::new();
    for (idx, rec) in r.records().enumerate() {
        let rec = rec?;
        let point = (n..2 * n)
            .map(|j| {
                rec[j].parse::<Q>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: idx + 2,
                    message: format!("coordinate `{}`: {e}", &rec[j]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(point);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hk::{achievable_constraints, etw_split, hk_parameters};

    #[test]
    fn channel_spec_forms() {
        let p = Path::new("spec.json");
        let r = parse_channel(r#"{"users": 2, "snr": [100, 100], "inr": [10, 10]}"#, p, false).unwrap();
        assert_eq!(r.snr(), &[100.0, 100.0]);
        let db = parse_channel(r#"{"snr": [20, 20], "inr": [10, 10]}"#, p, true).unwrap();
        assert!((db.snr()[0] - 100.0).abs() < 1e-9);
        let phys = parse_channel(
            r#"{"direct_gains": [1, 2], "cross_gains": [0.5, 0.1], "powers": [10, 10], "noise": 2}"#,
            p,
            false,
        )
        .unwrap();
        assert_eq!(phys.snr(), &[5.0, 10.0]);
        assert_eq!(phys.inr(), &[2.5, 0.5]);
    }

    #[test]
    fn channel_spec_diagnostics() {
        let p = Path::new("bad.json");
        match parse_channel("{\n  \"snr\": [1, 2,\n}", p, false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_channel(r#"{"users": 3, "snr": [1, 2], "inr": [1, 1]}"#, p, false),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_channel(r#"{"snr": [1], "inr": [1]}"#, p, false),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_channel(r#"{"snr": [1, 2], "inr": [1, "x"]}"#, p, false),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn constraint_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = ChannelRatios::new(vec![123.4, 7.5, 1000.0], vec![3.3, 0.2, 99.9]).unwrap();
        let set = achievable_constraints(&hk_parameters(&r, &etw_split(&r)).unwrap()).unwrap();

        let csv_path = dir.path().join("a.csv");
        write_constraints_csv(&csv_path, &set).unwrap();
        let back = read_constraints_csv(&csv_path, RegionFamily::Achievable).unwrap();
        assert_eq!(back.rows, set.rows);

        let json_path = dir.path().join("a.json");
        let doc = ConstraintDocument::new(set, Regime::Weak);
        write_json(&json_path, &doc).unwrap();
        let back: ConstraintDocument = read_json(&json_path).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.set.to_system().unwrap(), doc.set.to_system().unwrap());
    }
}
