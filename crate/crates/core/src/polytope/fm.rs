use std::time::Instant;

use num_traits::{Signed, Zero};

use super::redundancy::remove_redundant;
use super::{InequalitySystem, PolytopeError, Row, Q};

#[derive(Clone, Debug, Default)]
pub struct FmOptions {
    /// Eliminate exactly in the order given instead of picking the cheapest variable each pass.
    pub keep_order: bool,
    pub deadline: Option<Instant>,
}

/// State reached when the deadline expired between two eliminations.
#[derive(Clone, Debug)]
pub struct FmTimeout {
    pub eliminated: Vec<String>,
    pub remaining: Vec<String>,
    pub partial: InequalitySystem,
}

/// Projects `sys` onto the variables not listed in `elim`.
pub fn fourier_motzkin_eliminate(
    sys: &InequalitySystem,
    elim: &[&str],
) -> Result<InequalitySystem, PolytopeError> {
    eliminate_with(sys, elim, &FmOptions::default())
}

pub fn eliminate_with(
    sys: &InequalitySystem,
    elim: &[&str],
    opts: &FmOptions,
) -> Result<InequalitySystem, PolytopeError> {
    for name in elim {
        sys.index_of(name)?;
    }
    let mut pending: Vec<String> = elim.iter().map(|s| s.to_string()).collect();
    let mut done = Vec::new();
    let mut current = sys.clone();
    while !pending.is_empty() {
        if let Some(deadline) = opts.deadline {
            if Instant::now() >= deadline {
                return Err(PolytopeError::Timeout(Box::new(FmTimeout {
                    eliminated: done,
                    remaining: pending,
                    partial: current,
                })));
            }
        }
        let pick = if opts.keep_order {
            0
        } else {
            cheapest(&current, &pending)?
        };
        let name = pending.remove(pick);
        let col = current.index_of(&name)?;
        current = remove_redundant(&eliminate_one(&current, col))?;
        done.push(name);
    }
    Ok(current)
}

fn pairing_cost(sys: &InequalitySystem, col: usize) -> i64 {
    let (mut pos, mut neg) = (0i64, 0i64);
    for row in sys.rows() {
        if row.coeffs[col].is_positive() {
            pos += 1;
        } else if row.coeffs[col].is_negative() {
            neg += 1;
        }
    }
    pos * neg - pos - neg
}

fn cheapest(sys: &InequalitySystem, pending: &[String]) -> Result<usize, PolytopeError> {
    let mut best = (0, i64::MAX);
    for (k, name) in pending.iter().enumerate() {
        let cost = pairing_cost(sys, sys.index_of(name)?);
        if cost < best.1 {
            best = (k, cost);
        }
    }
    Ok(best.0)
}

fn eliminate_one(sys: &InequalitySystem, col: usize) -> InequalitySystem {
    let drop_col = |coeffs: &[Q]| -> Vec<Q> {
        coeffs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != col)
            .map(|(_, c)| c.clone())
            .collect()
    };
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut rows = Vec::new();
    for row in sys.rows() {
        let c = &row.coeffs[col];
        if c.is_zero() {
            rows.push(Row::new(drop_col(&row.coeffs), row.rhs.clone()));
        } else {
            // scale so the eliminated coefficient is +1 or -1
            let s = c.abs();
            let scaled = Row::new(
                row.coeffs.iter().map(|x| x / &s).collect(),
                &row.rhs / &s,
            );
            if c.is_positive() {
                upper.push(scaled);
            } else {
                lower.push(scaled);
            }
        }
    }
    for up in &upper {
        for lo in &lower {
            let coeffs: Vec<Q> = up.coeffs.iter().zip(&lo.coeffs).map(|(a, b)| a + b).collect();
            rows.push(Row::new(drop_col(&coeffs), &up.rhs + &lo.rhs));
        }
    }
    let (mut vars, _) = sys.clone().into_parts();
    vars.remove(col);
    InequalitySystem::from_parts(vars, rows)
}
