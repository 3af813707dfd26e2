//! Rate-region constraints over `R_1..R_K` with symbolic right-hand sides.
//!
//! Every right-hand side is the minimum of one or more branches, each a sum of
//! named parameters such as `a1+e3`. The float value is kept for reporting; the
//! exact polytope is rebuilt from the branch expressions and the parameter table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::Regime;
use crate::polytope::{dyadic, InequalitySystem, PolytopeError, Row, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symbol {
    A,
    D,
    E,
    G,
    Alpha,
    Beta,
    Gamma,
    Lambda,
    Mu,
}

impl Symbol {
    pub const ALL: [Symbol; 9] = [
        Symbol::A,
        Symbol::D,
        Symbol::E,
        Symbol::G,
        Symbol::Alpha,
        Symbol::Beta,
        Symbol::Gamma,
        Symbol::Lambda,
        Symbol::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symbol::A => "a",
            Symbol::D => "d",
            Symbol::E => "e",
            Symbol::G => "g",
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::Gamma => "gamma",
            Symbol::Lambda => "lambda",
            Symbol::Mu => "mu",
        }
    }
}

/// A parameter of one user, e.g. `e3`. `user` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub symbol: Symbol,
    pub user: usize,
}

impl Term {
    pub fn new(symbol: Symbol, user: usize) -> Self {
        Self { symbol, user }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.symbol.name(), self.user + 1)
    }
}

impl FromStr for Term {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| format!("term `{s}` has no user index"))?;
        let (name, idx) = s.split_at(split);
        let symbol = Symbol::ALL
            .into_iter()
            .find(|sym| sym.name() == name)
            .ok_or_else(|| format!("unknown parameter `{name}`"))?;
        let user: usize = idx.parse().map_err(|_| format!("bad user index in `{s}`"))?;
        if user == 0 {
            return Err(format!("user indices start at 1 in `{s}`"));
        }
        Ok(Term::new(symbol, user - 1))
    }
}

/// Sum of parameter terms; the empty sum is `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr(pub Vec<Term>);

impl Expr {
    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn eval(&self, params: &ParamTable) -> Option<f64> {
        self.0
            .iter()
            .try_fold(0.0, |acc, t| params.get(*t).map(|v| acc + v))
    }

    pub fn eval_exact(&self, params: &ParamTable) -> Option<Result<Q, PolytopeError>> {
        let mut acc = Q::zero();
        for t in &self.0 {
            match params.get(*t).map(dyadic) {
                None => return None,
                Some(Err(e)) => return Some(Err(e)),
                Some(Ok(v)) => acc += v,
            }
        }
        Some(Ok(acc))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Expr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Expr::default());
        }
        s.split('+').map(|t| t.trim().parse()).collect::<Result<_, _>>().map(Expr)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Individual(usize),
    /// `R_start + ... + R_{start+len-1}` (cyclic), `2 <= len < K`.
    AdjacentSum { start: usize, len: usize },
    TotalSum,
    /// All rates plus `R_i` once more.
    TotalSumPlus(usize),
}

impl ConstraintKind {
    pub fn coeffs(self, k: usize) -> Vec<u32> {
        let mut c = vec![0; k];
        match self {
            ConstraintKind::Individual(i) => c[i] = 1,
            ConstraintKind::AdjacentSum { start, len } => {
                for t in 0..len {
                    c[(start + t) % k] += 1;
                }
            }
            ConstraintKind::TotalSum => c.iter_mut().for_each(|x| *x = 1),
            ConstraintKind::TotalSumPlus(i) => {
                c.iter_mut().for_each(|x| *x = 1);
                c[i] += 1;
            }
        }
        c
    }

    /// Number of rate terms on the left-hand side.
    pub fn rate_terms(self, k: usize) -> u32 {
        match self {
            ConstraintKind::Individual(_) => 1,
            ConstraintKind::AdjacentSum { len, .. } => len as u32,
            ConstraintKind::TotalSum => k as u32,
            ConstraintKind::TotalSumPlus(_) => k as u32 + 1,
        }
    }

    /// Bound class used to aggregate per-kind maxima (user index dropped).
    pub fn class(self) -> KindClass {
        match self {
            ConstraintKind::Individual(_) => KindClass::Individual,
            ConstraintKind::AdjacentSum { len, .. } => KindClass::AdjacentSum(len),
            ConstraintKind::TotalSum => KindClass::TotalSum,
            ConstraintKind::TotalSumPlus(_) => KindClass::TotalSumPlus,
        }
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintKind::Individual(i) => write!(f, "individual:{}", i + 1),
            ConstraintKind::AdjacentSum { start, len } => write!(f, "adjacent:{}:{}", start + 1, len),
            ConstraintKind::TotalSum => f.write_str("total"),
            ConstraintKind::TotalSumPlus(i) => write!(f, "total_plus:{}", i + 1),
        }
    }
}

impl FromStr for ConstraintKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let idx = |p: &str| -> Result<usize, String> {
            match p.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(format!("bad index `{p}` in kind `{s}`")),
            }
        };
        match parts.as_slice() {
            ["individual", i] => Ok(ConstraintKind::Individual(idx(i)?)),
            ["adjacent", m, l] => Ok(ConstraintKind::AdjacentSum {
                start: idx(m)?,
                len: l.parse().map_err(|_| format!("bad length in kind `{s}`"))?,
            }),
            ["total"] => Ok(ConstraintKind::TotalSum),
            ["total_plus", i] => Ok(ConstraintKind::TotalSumPlus(idx(i)?)),
            _ => Err(format!("unknown constraint kind `{s}`")),
        }
    }
}

impl Serialize for ConstraintKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConstraintKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindClass {
    Individual,
    AdjacentSum(usize),
    TotalSum,
    TotalSumPlus,
}

impl fmt::Display for KindClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KindClass::Individual => f.write_str("individual"),
            KindClass::AdjacentSum(l) => write!(f, "adjacent_l{l}"),
            KindClass::TotalSum => f.write_str("total"),
            KindClass::TotalSumPlus => f.write_str("total_plus"),
        }
    }
}

/// Parameter values in bits, keyed by term.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "BTreeMap<String, f64>", try_from = "BTreeMap<String, f64>")]
pub struct ParamTable(BTreeMap<Term, f64>);

impl ParamTable {
    pub fn insert(&mut self, symbol: Symbol, values: &[f64]) {
        for (i, &v) in values.iter().enumerate() {
            self.0.insert(Term::new(symbol, i), v);
        }
    }

    pub fn get(&self, t: Term) -> Option<f64> {
        self.0.get(&t).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<ParamTable> for BTreeMap<String, f64> {
    fn from(t: ParamTable) -> Self {
        t.0.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

impl TryFrom<BTreeMap<String, f64>> for ParamTable {
    type Error = String;

    fn try_from(m: BTreeMap<String, f64>) -> Result<Self, Self::Error> {
        m.into_iter()
            .map(|(k, v)| k.parse().map(|t| (t, v)))
            .collect::<Result<_, _>>()
            .map(ParamTable)
    }
}

/// `coeffs · R <= rhs`, where `rhs` is the smallest of `branches`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub kind: ConstraintKind,
    pub coeffs: Vec<u32>,
    pub rhs: f64,
    pub branches: Vec<Expr>,
    /// Index into `branches` of the minimizing branch.
    pub branch: usize,
}

impl LinearConstraint {
    /// Evaluates each branch in floating point and keeps the smallest (first on ties).
    pub fn min_of(kind: ConstraintKind, k: usize, branches: Vec<Expr>, params: &ParamTable) -> Self {
        let values: Vec<f64> = branches
            .iter()
            .map(|b| b.eval(params).expect("branch terms present in parameter table"))
            .collect();
        let mut branch = 0;
        for (j, v) in values.iter().enumerate() {
            if *v < values[branch] {
                branch = j;
            }
        }
        Self {
            kind,
            coeffs: kind.coeffs(k),
            rhs: values[branch],
            branches,
            branch,
        }
    }

    pub fn attained(&self) -> &Expr {
        &self.branches[self.branch]
    }

    /// Exact right-hand side: minimum over branches of the dyadic parameter sums,
    /// or the dyadic float `rhs` when the table lacks a term.
    pub fn exact_rhs(&self, params: &ParamTable) -> Result<Q, PolytopeError> {
        let mut best: Option<Q> = None;
        for b in &self.branches {
            match b.eval_exact(params) {
                None => return dyadic(self.rhs),
                Some(v) => {
                    let v = v?;
                    if best.as_ref().is_none_or(|cur| v < *cur) {
                        best = Some(v);
                    }
                }
            }
        }
        match best {
            Some(v) => Ok(v),
            None => dyadic(self.rhs),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionFamily {
    /// Han-Kobayashi achievable region for one fixed power split.
    Achievable,
    /// Genie-aided outer bound, asserted in the weak regime.
    OuterBound,
    /// Capacity region in the strong regime (pairwise sums).
    StrongCapacity,
    /// Capacity region in the very strong regime (box).
    VeryStrongCapacity,
    /// Intersection of the K two-user MAC regions.
    MacIntersection,
}

impl RegionFamily {
    /// Whether the region carries its stated meaning for a channel in `regime`.
    pub fn asserted_in(self, regime: Regime) -> bool {
        match self {
            RegionFamily::Achievable | RegionFamily::MacIntersection => true,
            RegionFamily::OuterBound => regime == Regime::Weak,
            RegionFamily::StrongCapacity => regime.is_strong(),
            RegionFamily::VeryStrongCapacity => regime == Regime::VeryStrong,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub users: usize,
    pub family: RegionFamily,
    pub rows: Vec<LinearConstraint>,
    pub params: ParamTable,
    /// Human-readable diagnostics attached while building the set.
    #[serde(default)]
    pub notes: Vec<String>,
}

pub fn rate_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("R{i}")).collect()
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn find(&self, kind: ConstraintKind) -> Option<&LinearConstraint> {
        self.rows.iter().find(|r| r.kind == kind)
    }

    /// Exact polytope over `R1..RK`, nonnegativity included.
    pub fn to_system(&self) -> Result<InequalitySystem, PolytopeError> {
        let mut sys = InequalitySystem::new(rate_names(self.users));
        for row in &self.rows {
            let coeffs = row.coeffs.iter().map(|&c| Q::from_integer(c.into())).collect();
            sys.push(Row::new(coeffs, row.exact_rhs(&self.params)?))?;
        }
        sys.push_nonnegativity();
        Ok(sys)
    }

    /// Box `0 <= R_i <= bound_i`, exact.
    pub fn box_system(bounds: &[f64]) -> Result<InequalitySystem, PolytopeError> {
        let k = bounds.len();
        let mut sys = InequalitySystem::new(rate_names(k));
        for (i, b) in bounds.iter().enumerate() {
            let mut coeffs = vec![Q::zero(); k];
            coeffs[i] = Q::one();
            sys.push(Row::new(coeffs, dyadic(*b)?))?;
        }
        sys.push_nonnegativity();
        Ok(sys)
    }
}
