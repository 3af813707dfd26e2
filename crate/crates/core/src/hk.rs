//! Han-Kobayashi rate parameters under a power split, the resulting
//! `K^2 + 1`-row achievable region, and the rate-split system it is projected from.

use serde::{Deserialize, Serialize};

use crate::channel::{next, prev, ChannelRatios};
use crate::constraint::{
    rate_names, ConstraintKind, ConstraintSet, Expr, LinearConstraint, ParamTable, RegionFamily,
    Symbol, Term,
};
use crate::error::{Error, Result};
use crate::polytope::{
    dyadic, eliminate_with, set_equal, Equality, FmOptions, InequalitySystem, Q, Row,
};

/// Private-part SNR and INR per user. `inr_private[i]` is seen at receiver `i-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub snr_private: Vec<f64>,
    pub inr_private: Vec<f64>,
}

const SPLIT_REL_TOL: f64 = 1e-9;

impl PowerSplit {
    /// Every user sends only a private message.
    pub fn all_private(r: &ChannelRatios) -> Self {
        Self {
            snr_private: r.snr().to_vec(),
            inr_private: r.inr().to_vec(),
        }
    }

    /// Keeps fraction `frac[i]` of user `i`'s power in the private part.
    pub fn with_private_fraction(r: &ChannelRatios, frac: &[f64]) -> Result<Self> {
        if frac.len() != r.users() || frac.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::Validation(
                "private fractions must be K values in [0, 1]".into(),
            ));
        }
        Ok(Self {
            snr_private: r.snr().iter().zip(frac).map(|(s, f)| s * f).collect(),
            inr_private: r.inr().iter().zip(frac).map(|(s, f)| s * f).collect(),
        })
    }

    pub fn validate(&self, r: &ChannelRatios) -> Result<()> {
        let k = r.users();
        if self.snr_private.len() != k || self.inr_private.len() != k {
            return Err(Error::Validation(format!("power split must have {k} entries")));
        }
        for i in 0..k {
            let (snr, inr) = (r.snr()[i], r.inr()[i]);
            let (sp, ip) = (self.snr_private[i], self.inr_private[i]);
            if !(0.0..=snr).contains(&sp) || !(0.0..=inr).contains(&ip) {
                return Err(Error::Validation(format!(
                    "user {}: private SNR/INR ({sp}, {ip}) outside [0, ({snr}, {inr})]",
                    i + 1
                )));
            }
            if inr > 0.0 {
                let lhs = sp * inr;
                let rhs = snr * ip;
                if (lhs - rhs).abs() > SPLIT_REL_TOL * lhs.abs().max(rhs.abs()).max(1e-300) {
                    return Err(Error::Validation(format!(
                        "user {}: private SNR and INR imply different power fractions",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Private interference at the noise floor: `INR_ip = min(INR_i, 1)`.
///
/// A user whose full interference is already at or below the noise floor keeps
/// all of its power private.
pub fn etw_split(r: &ChannelRatios) -> PowerSplit {
    let (snr, inr) = (r.snr(), r.inr());
    let mut sp = Vec::with_capacity(r.users());
    let mut ip = Vec::with_capacity(r.users());
    for i in 0..r.users() {
        if inr[i] > 1.0 {
            ip.push(1.0);
            sp.push(snr[i] / inr[i]);
        } else {
            ip.push(inr[i]);
            sp.push(snr[i]);
        }
    }
    PowerSplit {
        snr_private: sp,
        inr_private: ip,
    }
}

/// Mutual-information parameters in bits; see [`hk_parameters`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HkParams {
    pub a: Vec<f64>,
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub g: Vec<f64>,
    pub r: Vec<f64>,
}

impl HkParams {
    pub fn users(&self) -> usize {
        self.a.len()
    }

    pub fn table(&self) -> ParamTable {
        let mut t = ParamTable::default();
        t.insert(Symbol::A, &self.a);
        t.insert(Symbol::D, &self.d);
        t.insert(Symbol::E, &self.e);
        t.insert(Symbol::G, &self.g);
        t
    }

    fn check(&self) -> Result<usize> {
        let k = self.users();
        if k < 2 {
            return Err(Error::Validation(format!("need at least 2 users, got {k}")));
        }
        if [&self.d, &self.e, &self.g].iter().any(|v| v.len() != k) {
            return Err(Error::Validation("parameter vectors differ in length".into()));
        }
        if [&self.a, &self.d, &self.e, &self.g]
            .iter()
            .any(|v| v.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::Validation("parameters must be finite".into()));
        }
        Ok(k)
    }
}

/// `r_i = a_{i-1} + g_i + sum of e_j over j not in {i, i-1}`.
fn r_expr(i: usize, k: usize) -> Expr {
    let mut terms = vec![Term::new(Symbol::A, prev(i, k)), Term::new(Symbol::G, i)];
    terms.extend(
        (0..k)
            .filter(|&j| j != i && j != prev(i, k))
            .map(|j| Term::new(Symbol::E, j)),
    );
    Expr(terms)
}

/// Gaussian inputs with the interferer's private part treated as noise.
///
/// At receiver `i` the noise floor is `1 + INR_{(i+1)p}` and the decodable part
/// of the interference is `INR_{i+1} - INR_{(i+1)p}`.
pub fn hk_parameters(r: &ChannelRatios, s: &PowerSplit) -> Result<HkParams> {
    s.validate(r)?;
    let k = r.users();
    let (mut a, mut d, mut e, mut g) = (vec![0.0; k], vec![0.0; k], vec![0.0; k], vec![0.0; k]);
    for i in 0..k {
        let j = next(i, k);
        let floor = 1.0 + s.inr_private[j];
        let common = (r.inr()[j] - s.inr_private[j]).max(0.0);
        let sp = s.snr_private[i];
        let snr = r.snr()[i];
        a[i] = (1.0 + sp / floor).log2();
        d[i] = (1.0 + snr / floor).log2();
        e[i] = (1.0 + (sp + common) / floor).log2();
        g[i] = (1.0 + (snr + common) / floor).log2();
    }
    let mut p = HkParams {
        a,
        d,
        e,
        g,
        r: Vec::new(),
    };
    let table = p.table();
    p.r = (0..k)
        .map(|i| r_expr(i, k).eval(&table).expect("complete table"))
        .collect();
    Ok(p)
}

fn terms(symbol: Symbol, users: impl IntoIterator<Item = usize>) -> impl Iterator<Item = Term> {
    users.into_iter().map(move |u| Term::new(symbol, u))
}

/// The achievable region for fixed parameters: `K` individual rows, `K(K-2)`
/// adjacent-sum rows, one total-sum row and `K` total-plus-one rows.
pub fn achievable_constraints(p: &HkParams) -> Result<ConstraintSet> {
    let k = p.check()?;
    let table = p.table();
    let wrap = |x: usize| x % k;
    let mut rows = Vec::with_capacity(k * k + 1);

    for i in 0..k {
        rows.push(LinearConstraint::min_of(
            ConstraintKind::Individual(i),
            k,
            vec![
                Expr(vec![Term::new(Symbol::D, i)]),
                Expr(vec![Term::new(Symbol::A, i), Term::new(Symbol::E, prev(i, k))]),
            ],
            &table,
        ));
    }

    for len in 2..k {
        for m in 0..k {
            let last = wrap(m + len - 1);
            let mut first: Vec<Term> = vec![Term::new(Symbol::G, m)];
            first.extend(terms(Symbol::E, (1..len - 1).map(|t| wrap(m + t))));
            first.push(Term::new(Symbol::A, last));
            let mut second: Vec<Term> = terms(Symbol::E, (0..len).map(|t| wrap(m + k - 1 + t))).collect();
            second.push(Term::new(Symbol::A, last));
            rows.push(LinearConstraint::min_of(
                ConstraintKind::AdjacentSum { start: m, len },
                k,
                vec![Expr(first), Expr(second)],
                &table,
            ));
        }
    }

    let mut total = vec![Expr(terms(Symbol::E, 0..k).collect())];
    total.extend((0..k).map(|i| r_expr(i, k)));
    rows.push(LinearConstraint::min_of(ConstraintKind::TotalSum, k, total, &table));

    for i in 0..k {
        let mut t = vec![Term::new(Symbol::A, i), Term::new(Symbol::G, i)];
        t.extend(terms(Symbol::E, (0..k).filter(|&j| j != i)));
        rows.push(LinearConstraint::min_of(
            ConstraintKind::TotalSumPlus(i),
            k,
            vec![Expr(t)],
            &table,
        ));
    }

    Ok(ConstraintSet {
        users: k,
        family: RegionFamily::Achievable,
        rows,
        params: table,
        notes: Vec::new(),
    })
}

pub fn split_variable_names(k: usize) -> (Vec<String>, Vec<String>) {
    (
        (1..=k).map(|i| format!("S{i}")).collect(),
        (1..=k).map(|i| format!("T{i}")).collect(),
    )
}

/// Rate-split system over `S_i` (private), `T_i` (common) and `R_i = S_i + T_i`.
///
/// Receiver `i` decodes its own private and common parts and the common part of
/// user `i+1`: `S_i <= a_i`, `S_i + T_i <= d_i`, `S_i + T_{i+1} <= e_i`,
/// `S_i + T_i + T_{i+1} <= g_i`.
pub fn pre_elimination_system(p: &HkParams) -> Result<InequalitySystem> {
    let k = p.check()?;
    let (s_names, t_names) = split_variable_names(k);
    let mut names = s_names;
    names.extend(t_names);
    names.extend(rate_names(k));
    let n = 3 * k;
    let (s, t, r) = (|i: usize| i, |i: usize| k + i, |i: usize| 2 * k + i);

    let row = |entries: &[(usize, i64)], rhs: Q| -> Row {
        let mut c = vec![Q::from_integer(0.into()); n];
        for &(col, v) in entries {
            c[col] += Q::from_integer(v.into());
        }
        Row::new(c, rhs)
    };
    let zero = || Q::from_integer(0.into());

    let mut sys = InequalitySystem::new(names);
    for i in 0..k {
        let j = next(i, k);
        sys.push(row(&[(s(i), -1)], zero()))?;
        sys.push(row(&[(t(i), -1)], zero()))?;
        sys.push(row(&[(r(i), 1), (s(i), -1), (t(i), -1)], zero()))?;
        sys.push(row(&[(r(i), -1), (s(i), 1), (t(i), 1)], zero()))?;
        sys.push(row(&[(s(i), 1)], dyadic(p.a[i])?))?;
        sys.push(row(&[(s(i), 1), (t(i), 1)], dyadic(p.d[i])?))?;
        sys.push(row(&[(s(i), 1), (t(j), 1)], dyadic(p.e[i])?))?;
        sys.push(row(&[(s(i), 1), (t(i), 1), (t(j), 1)], dyadic(p.g[i])?))?;
    }
    Ok(sys)
}

/// Outcome of projecting the rate-split system and comparing with the closed form.
#[derive(Clone, Debug)]
pub struct EliminationCheck {
    pub projected: InequalitySystem,
    pub closed_form: InequalitySystem,
    pub verdict: Equality,
}

impl EliminationCheck {
    pub fn is_equal(&self) -> bool {
        self.verdict.is_equal()
    }
}

/// Eliminates all `S_i`, `T_i` from [`pre_elimination_system`] and compares the
/// projection with `closed_form` (normally [`achievable_constraints`] of the same parameters).
pub fn check_elimination(
    p: &HkParams,
    closed_form: &ConstraintSet,
    opts: &FmOptions,
) -> Result<EliminationCheck> {
    check_elimination_against(p, closed_form.to_system()?, opts)
}

/// As [`check_elimination`], against an arbitrary polytope over `R1..RK`.
pub fn check_elimination_against(
    p: &HkParams,
    closed_form: InequalitySystem,
    opts: &FmOptions,
) -> Result<EliminationCheck> {
    let k = p.check()?;
    let sys = pre_elimination_system(p)?;
    let (s_names, t_names) = split_variable_names(k);
    let elim: Vec<&str> = s_names.iter().chain(&t_names).map(String::as_str).collect();
    let projected = eliminate_with(&sys, &elim, opts)?;
    let verdict = set_equal(&projected, &closed_form)?;
    Ok(EliminationCheck {
        projected,
        closed_form,
        verdict,
    })
}
