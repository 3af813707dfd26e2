//! Genie-aided outer bound and the strong-regime capacity regions.

use serde::{Deserialize, Serialize};

use crate::channel::{classify_regime, next, prev, ChannelRatios, Regime};
use crate::constraint::{
    ConstraintKind, ConstraintSet, Expr, LinearConstraint, ParamTable, RegionFamily, Symbol, Term,
};
use crate::error::{Error, Result};
use crate::polytope::dyadic;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterParams {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub rho: Vec<f64>,
}

impl OuterParams {
    pub fn users(&self) -> usize {
        self.alpha.len()
    }

    pub fn table(&self) -> ParamTable {
        let mut t = ParamTable::default();
        t.insert(Symbol::Alpha, &self.alpha);
        t.insert(Symbol::Beta, &self.beta);
        t.insert(Symbol::Gamma, &self.gamma);
        t.insert(Symbol::Lambda, &self.lambda);
        t.insert(Symbol::Mu, &self.mu);
        t
    }
}

fn rho_expr(i: usize, k: usize) -> Expr {
    let mut t = vec![Term::new(Symbol::Beta, prev(i, k)), Term::new(Symbol::Gamma, i)];
    t.extend(
        (0..k)
            .filter(|&j| j != i && j != prev(i, k))
            .map(|j| Term::new(Symbol::Alpha, j)),
    );
    Expr(t)
}

/// Evaluates the outer-bound parameters for any regime. `beta` is computed as
/// `lambda - mu`, so that identity holds bit for bit.
pub fn outer_parameters(r: &ChannelRatios) -> OuterParams {
    let k = r.users();
    let (snr, inr) = (r.snr(), r.inr());
    let lambda: Vec<f64> = snr.iter().map(|s| (1.0 + s).log2()).collect();
    let mu: Vec<f64> = inr.iter().map(|x| (1.0 + x).log2()).collect();
    let beta = lambda.iter().zip(&mu).map(|(l, m)| l - m).collect();
    let alpha = (0..k)
        .map(|i| (1.0 + inr[next(i, k)] + snr[i] / (1.0 + inr[i])).log2())
        .collect();
    let gamma = (0..k)
        .map(|i| (1.0 + inr[next(i, k)] + snr[i]).log2())
        .collect();
    let mut p = OuterParams {
        alpha,
        beta,
        gamma,
        lambda,
        mu,
        rho: Vec::new(),
    };
    let table = p.table();
    p.rho = (0..k)
        .map(|i| rho_expr(i, k).eval(&table).expect("complete table"))
        .collect();
    p
}

fn single(symbol: Symbol, user: usize) -> Expr {
    Expr(vec![Term::new(symbol, user)])
}

fn negative_rhs_notes(rows: &[LinearConstraint]) -> Vec<String> {
    rows.iter()
        .filter(|r| r.rhs < 0.0)
        .map(|r| {
            format!(
                "{} has negative right-hand side {} ({}); kept as computed",
                r.kind,
                r.rhs,
                r.attained()
            )
        })
        .collect()
}

/// The outer bound, row for row pairable with the achievable region.
pub fn outer_constraints(p: &OuterParams) -> Result<ConstraintSet> {
    let k = p.users();
    if k < 2 {
        return Err(Error::Validation(format!("need at least 2 users, got {k}")));
    }
    let table = p.table();
    let wrap = |x: usize| x % k;
    let alphas = |range: std::ops::Range<usize>, from: usize| {
        range
            .map(move |t| Term::new(Symbol::Alpha, (from + t) % k))
            .collect::<Vec<_>>()
    };
    let mut rows = Vec::with_capacity(k * k + 1);

    for i in 0..k {
        rows.push(LinearConstraint::min_of(
            ConstraintKind::Individual(i),
            k,
            vec![single(Symbol::Lambda, i)],
            &table,
        ));
    }

    for len in 2..k {
        for m in 0..k {
            let last = Term::new(Symbol::Beta, wrap(m + len - 1));
            let mut first = vec![Term::new(Symbol::Gamma, m)];
            first.extend(alphas(1..len - 1, m));
            first.push(last);
            let mut second = vec![Term::new(Symbol::Mu, m)];
            second.extend(alphas(0..len - 1, m));
            second.push(last);
            rows.push(LinearConstraint::min_of(
                ConstraintKind::AdjacentSum { start: m, len },
                k,
                vec![Expr(first), Expr(second)],
                &table,
            ));
        }
    }

    let mut total = vec![Expr(alphas(0..k, 0))];
    total.extend((0..k).map(|i| rho_expr(i, k)));
    rows.push(LinearConstraint::min_of(ConstraintKind::TotalSum, k, total, &table));

    for i in 0..k {
        let mut t = vec![Term::new(Symbol::Beta, i), Term::new(Symbol::Gamma, i)];
        t.extend((0..k).filter(|&j| j != i).map(|j| Term::new(Symbol::Alpha, j)));
        rows.push(LinearConstraint::min_of(
            ConstraintKind::TotalSumPlus(i),
            k,
            vec![Expr(t)],
            &table,
        ));
    }

    let mut notes = negative_rhs_notes(&rows);
    for (i, b) in p.beta.iter().enumerate() {
        if *b < 0.0 {
            notes.push(format!("beta{} = {b} < 0: INR exceeds SNR for user {}", i + 1, i + 1));
        }
    }
    Ok(ConstraintSet {
        users: k,
        family: RegionFamily::OuterBound,
        rows,
        params: table,
        notes,
    })
}

/// Capacity region in the strong regime: `R_i <= lambda_i`, `R_i + R_{i+1} <= gamma_i`.
///
/// Under the very strong condition the pairwise rows are dropped once they are
/// verified (exactly, on the dyadic grid) to be implied by the box.
pub fn strong_capacity(r: &ChannelRatios) -> Result<ConstraintSet> {
    let regime = classify_regime(r);
    if !regime.is_strong() {
        let index = r.first_weak_user().map_or(1, |i| i + 1);
        return Err(Error::NotStrongRegime { regime, index });
    }
    let k = r.users();
    let p = outer_parameters(r);
    let table = p.table();
    let boxes: Vec<LinearConstraint> = (0..k)
        .map(|i| {
            LinearConstraint::min_of(ConstraintKind::Individual(i), k, vec![single(Symbol::Lambda, i)], &table)
        })
        .collect();
    let pairs: Vec<LinearConstraint> = (0..k)
        .map(|i| {
            LinearConstraint::min_of(
                ConstraintKind::AdjacentSum { start: i, len: 2 },
                k,
                vec![single(Symbol::Gamma, i)],
                &table,
            )
        })
        .collect();

    let mut notes = Vec::new();
    let (family, rows) = if regime == Regime::VeryStrong {
        let mut rows = boxes;
        let mut kept = 0;
        for (i, row) in pairs.into_iter().enumerate() {
            let j = next(i, k);
            if dyadic(p.lambda[i])? + dyadic(p.lambda[j])? <= dyadic(p.gamma[i])? {
                continue;
            }
            kept += 1;
            rows.push(row);
        }
        if kept == 0 {
            notes.push("very strong regime: every pairwise sum row is implied by the box".into());
        } else {
            notes.push(format!(
                "very strong regime, but {kept} pairwise rows are not implied after dyadic rounding; kept"
            ));
        }
        (RegionFamily::VeryStrongCapacity, rows)
    } else {
        let mut rows = boxes;
        rows.extend(pairs);
        (RegionFamily::StrongCapacity, rows)
    };
    Ok(ConstraintSet {
        users: k,
        family,
        rows,
        params: table,
        notes,
    })
}

/// Intersection of the `K` MAC regions `(X_i, X_{i+1}) -> Y_i`, `3K` rows.
pub fn mac_intersection(r: &ChannelRatios) -> ConstraintSet {
    let k = r.users();
    let p = outer_parameters(r);
    let table = p.table();
    let mut rows = Vec::with_capacity(3 * k);
    let mut notes = Vec::new();
    for i in 0..k {
        let j = next(i, k);
        rows.push(LinearConstraint::min_of(ConstraintKind::Individual(i), k, vec![single(Symbol::Lambda, i)], &table));
        rows.push(LinearConstraint::min_of(ConstraintKind::Individual(j), k, vec![single(Symbol::Mu, j)], &table));
        rows.push(LinearConstraint::min_of(
            ConstraintKind::AdjacentSum { start: i, len: 2 },
            k,
            vec![single(Symbol::Gamma, i)],
            &table,
        ));
        if r.inr()[j] == 0.0 {
            notes.push(format!(
                "INR{} = 0: the MAC at receiver {} forces R{} <= 0",
                j + 1,
                i + 1,
                j + 1
            ));
        }
    }
    ConstraintSet {
        users: k,
        family: RegionFamily::MacIntersection,
        rows,
        params: table,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_interference_parameters() {
        let r = ChannelRatios::new(vec![7.0, 31.0], vec![0.0, 0.0]).unwrap();
        let p = outer_parameters(&r);
        for i in 0..2 {
            assert_eq!(p.alpha[i], p.lambda[i]);
            assert_eq!(p.gamma[i], p.lambda[i]);
            assert_eq!(p.beta[i], p.lambda[i]);
            assert_eq!(p.mu[i], 0.0);
        }
    }

    #[test]
    fn zero_signal_gives_negative_beta_and_note() {
        let r = ChannelRatios::new(vec![0.0, 0.0], vec![3.0, 3.0]).unwrap();
        let p = outer_parameters(&r);
        assert_eq!(p.beta[0], -2.0);
        let set = outer_constraints(&p).unwrap();
        assert!(set.notes.iter().any(|n| n.contains("beta1")));
    }

    #[test]
    fn k2_outer_rows() {
        let r = ChannelRatios::symmetric(2, 100.0, 10.0).unwrap();
        let set = outer_constraints(&outer_parameters(&r)).unwrap();
        assert_eq!(set.len(), 5);
        let total = set.find(ConstraintKind::TotalSum).unwrap();
        let names: Vec<String> = total.branches.iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["alpha1+alpha2", "beta2+gamma1", "beta1+gamma2"]);
        let plus = set.find(ConstraintKind::TotalSumPlus(0)).unwrap();
        assert_eq!(plus.attained().to_string(), "beta1+gamma1+alpha2");
    }

    #[test]
    fn weak_channel_rejected_by_strong_capacity() {
        let r = ChannelRatios::new(vec![10.0, 10.0, 10.0], vec![20.0, 5.0, 20.0]).unwrap();
        match strong_capacity(&r) {
            Err(Error::NotStrongRegime { regime, index }) => {
                assert_eq!(regime, Regime::Mixed);
                assert_eq!(index, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strong_and_very_strong_rows() {
        let strong = strong_capacity(&ChannelRatios::symmetric(3, 10.0, 100.0).unwrap()).unwrap();
        assert_eq!(strong.family, RegionFamily::StrongCapacity);
        assert_eq!(strong.len(), 6);
        let very = strong_capacity(&ChannelRatios::symmetric(3, 10.0, 200.0).unwrap()).unwrap();
        assert_eq!(very.family, RegionFamily::VeryStrongCapacity);
        assert_eq!(very.len(), 3);
    }

    #[test]
    fn mac_rows_and_zero_inr_note() {
        let r = ChannelRatios::new(vec![10.0, 10.0], vec![100.0, 0.0]).unwrap();
        let set = mac_intersection(&r);
        assert_eq!(set.len(), 6);
        assert_eq!(set.notes.len(), 1);
    }
}
