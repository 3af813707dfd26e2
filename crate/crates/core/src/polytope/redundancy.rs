use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::lp::{feasible_point, solve, LpOutcome};
use super::{InequalitySystem, PolytopeError, Row, Witness, Q};

/// A minimal infeasible subsystem: dropping any one of its rows makes it feasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Containment {
    Contained,
    /// A point of the inner set that violates `witness.violated_row` of the outer set.
    Violated(Witness),
    /// The inner set is unbounded in the direction of an outer row.
    Unbounded { witness: Witness, ray: Vec<Q> },
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Contained)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Containment::Contained => None,
            Containment::Violated(w) | Containment::Unbounded { witness: w, .. } => Some(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    Equal,
    /// Point of the first set outside the second; `violated_row` indexes the second.
    OnlyInFirst(Witness),
    /// Point of the second set outside the first; `violated_row` indexes the first.
    OnlyInSecond(Witness),
}

impl Equality {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Equality::Equal => None,
            Equality::OnlyInFirst(w) | Equality::OnlyInSecond(w) => Some(w),
        }
    }
}

/// Drops every row implied by the others. Row order of survivors is preserved.
pub fn remove_redundant(sys: &InequalitySystem) -> Result<InequalitySystem, PolytopeError> {
    let n = sys.dim();
    let mut rows: Vec<Row> = Vec::with_capacity(sys.len());
    let mut seen: HashMap<Vec<Q>, usize> = HashMap::new();
    for row in sys.rows() {
        if row.is_zero() {
            if row.rhs.is_negative() {
                return Err(PolytopeError::Infeasible(Certificate {
                    variables: sys.variables().to_vec(),
                    rows: vec![row.clone()],
                }));
            }
            continue;
        }
        let norm = row.normalized();
        match seen.get(&norm.coeffs) {
            Some(&idx) => {
                if norm.rhs < rows[idx].rhs {
                    rows[idx].rhs = norm.rhs;
                }
            }
            None => {
                seen.insert(norm.coeffs.clone(), rows.len());
                rows.push(norm);
            }
        }
    }

    {
        let refs: Vec<&Row> = rows.iter().collect();
        if feasible_point(n, &refs).is_none() {
            return Err(PolytopeError::Infeasible(minimal_infeasible(
                sys.variables(),
                rows,
            )));
        }
    }

    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others: Vec<&Row> = rows
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && keep[j])
            .map(|(_, r)| r)
            .collect();
        if let LpOutcome::Optimal { value, .. } = solve(n, &others, &rows[i].coeffs) {
            if value <= rows[i].rhs {
                keep[i] = false;
            }
        }
    }
    let survivors = rows
        .into_iter()
        .zip(keep)
        .filter_map(|(r, k)| k.then_some(r))
        .collect();
    Ok(InequalitySystem::from_parts(sys.variables().to_vec(), survivors))
}

fn minimal_infeasible(variables: &[String], mut rows: Vec<Row>) -> Certificate {
    let n = variables.len();
    let mut i = 0;
    while i < rows.len() {
        let rest: Vec<&Row> = rows
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| r)
            .collect();
        if feasible_point(n, &rest).is_none() {
            rows.remove(i);
        } else {
            i += 1;
        }
    }
    Certificate {
        variables: variables.to_vec(),
        rows,
    }
}

/// Decides `inner ⊆ outer` by maximizing each outer row over `inner`.
pub fn contains(
    outer: &InequalitySystem,
    inner: &InequalitySystem,
) -> Result<Containment, PolytopeError> {
    outer.ensure_same_variables(inner)?;
    let n = inner.dim();
    let inner_rows: Vec<&Row> = inner.rows().iter().collect();
    if feasible_point(n, &inner_rows).is_none() {
        return Ok(Containment::Contained);
    }
    let failure = outer
        .rows()
        .par_iter()
        .enumerate()
        .find_map_first(|(i, row)| match solve(n, &inner_rows, &row.coeffs) {
            LpOutcome::Optimal { value, point } => (value > row.rhs).then_some(Containment::Violated(Witness {
                point,
                violated_row: Some(i),
            })),
            LpOutcome::Unbounded { point, ray } => {
                let slope = row.lhs_at(&ray);
                let gap = &row.rhs - row.lhs_at(&point);
                let t = if gap.is_negative() {
                    Q::zero()
                } else {
                    gap / slope + Q::one()
                };
                let far = point.iter().zip(&ray).map(|(p, d)| p + d * &t).collect();
                Some(Containment::Unbounded {
                    witness: Witness {
                        point: far,
                        violated_row: Some(i),
                    },
                    ray,
                })
            }
            LpOutcome::Infeasible => unreachable!("inner system was checked feasible"),
        });
    Ok(failure.unwrap_or(Containment::Contained))
}

pub fn set_equal(
    first: &InequalitySystem,
    second: &InequalitySystem,
) -> Result<Equality, PolytopeError> {
    if let Some(w) = contains(first, second)?.witness() {
        return Ok(Equality::OnlyInSecond(w.clone()));
    }
    if let Some(w) = contains(second, first)?.witness() {
        return Ok(Equality::OnlyInFirst(w.clone()));
    }
    Ok(Equality::Equal)
}
