//! Exact rational simplex over free variables, Bland's rule throughout.
//!
//! The problem is `max c·x` subject to `A x <= b` with `x` unrestricted in sign.
//! Each row gets a slack `s = b - A x >= 0`. Free variables are pivoted into the
//! basis first and never leave it again; their rows only serve to recover `x`.

use num_traits::{One, Signed, Zero};

use super::{InequalitySystem, Row, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    /// `point` is feasible and the objective grows without bound along `ray`.
    Unbounded { point: Vec<Q>, ray: Vec<Q> },
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn point(&self) -> Option<&[Q]> {
        match self {
            LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
        }
    }
}

/// Maximizes `objective · x` over the system.
pub fn maximize(sys: &InequalitySystem, objective: &[Q]) -> LpOutcome {
    assert_eq!(objective.len(), sys.dim(), "objective length");
    let rows: Vec<&Row> = sys.rows().iter().collect();
    solve(sys.dim(), &rows, objective)
}

pub(crate) fn feasible_point(n: usize, rows: &[&Row]) -> Option<Vec<Q>> {
    let zero = vec![Q::zero(); n];
    match solve(n, rows, &zero) {
        LpOutcome::Infeasible => None,
        other => other.point().map(<[Q]>::to_vec),
    }
}

pub(crate) fn solve(n: usize, rows: &[&Row], objective: &[Q]) -> LpOutcome {
    let mut dict = Dictionary::new(n, rows);
    dict.pivot_in_free_variables();
    if !dict.restore_feasibility() {
        return LpOutcome::Infeasible;
    }
    dict.set_objective(objective);
    dict.optimize()
}

/// `basic[r] = consts[r] + sum_c table[r][c] * nonbasic[c]`.
struct Dictionary {
    n: usize,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    consts: Vec<Q>,
    table: Vec<Vec<Q>>,
    obj: Vec<Q>,
    obj_const: Q,
    /// Rows whose basic variable is an original free variable.
    defining: Vec<bool>,
    /// Free variables that appear in no remaining constraint row.
    stuck: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded(usize),
    Pivoted,
}

impl Dictionary {
    fn new(n: usize, rows: &[&Row]) -> Self {
        let m = rows.len();
        Self {
            n,
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            consts: rows.iter().map(|r| r.rhs.clone()).collect(),
            table: rows
                .iter()
                .map(|r| r.coeffs.iter().map(|c| -c).collect())
                .collect(),
            obj: vec![Q::zero(); n],
            obj_const: Q::zero(),
            defining: vec![false; m],
            stuck: vec![false; n],
        }
    }

    fn is_free(&self, var: usize) -> bool {
        var < self.n
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.table[r][c];
        let width = self.nonbasic.len();
        let mut new_row: Vec<Q> = self.table[r].iter().map(|t| -(t * &inv)).collect();
        new_row[c] = inv.clone();
        let new_const = -(&self.consts[r] * &inv);

        for s in 0..self.table.len() {
            if s == r || self.table[s][c].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut self.table[s][c], Q::zero());
            for k in 0..width {
                if !new_row[k].is_zero() {
                    let delta = &f * &new_row[k];
                    self.table[s][k] += delta;
                }
            }
            self.consts[s] += &f * &new_const;
        }
        if !self.obj[c].is_zero() {
            let f = std::mem::replace(&mut self.obj[c], Q::zero());
            for k in 0..width {
                if !new_row[k].is_zero() {
                    let delta = &f * &new_row[k];
                    self.obj[k] += delta;
                }
            }
            self.obj_const += &f * &new_const;
        }
        self.table[r] = new_row;
        self.consts[r] = new_const;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[c]);
    }

    fn pivot_in_free_variables(&mut self) {
        for c in 0..self.nonbasic.len() {
            debug_assert!(self.is_free(self.nonbasic[c]));
            let row = (0..self.table.len()).find(|&r| !self.defining[r] && !self.table[r][c].is_zero());
            match row {
                Some(r) => {
                    self.pivot(r, c);
                    self.defining[r] = true;
                }
                None => self.stuck[c] = true,
            }
        }
    }

    fn column_is_stuck(&self, c: usize) -> bool {
        self.is_free(self.nonbasic[c]) && self.stuck[c]
    }

    /// Phase one with a single auxiliary variable. Returns false if infeasible.
    fn restore_feasibility(&mut self) -> bool {
        let worst = (0..self.table.len())
            .filter(|&r| !self.defining[r] && self.consts[r].is_negative())
            .min_by(|&a, &b| {
                self.consts[a]
                    .cmp(&self.consts[b])
                    .then(self.basic[a].cmp(&self.basic[b]))
            });
        let Some(worst) = worst else {
            return true;
        };

        let art = self.n + self.table.len();
        let art_col = self.nonbasic.len();
        self.nonbasic.push(art);
        self.stuck.push(false);
        for (r, row) in self.table.iter_mut().enumerate() {
            row.push(if self.defining[r] { Q::zero() } else { Q::one() });
        }
        self.obj = vec![Q::zero(); self.nonbasic.len()];
        self.obj[art_col] = -Q::one();
        self.obj_const = Q::zero();

        self.pivot(worst, art_col);
        loop {
            match self.step() {
                Step::Pivoted => continue,
                Step::Optimal => break,
                Step::Unbounded(_) => unreachable!("auxiliary objective is bounded by zero"),
            }
        }
        if self.obj_const.is_negative() {
            return false;
        }

        if let Some(r) = self.basic.iter().position(|&v| v == art) {
            match (0..self.nonbasic.len())
                .find(|&c| !self.column_is_stuck(c) && !self.table[r][c].is_zero())
            {
                Some(c) => self.pivot(r, c),
                None => {
                    self.remove_row(r);
                }
            }
        }
        if let Some(c) = self.nonbasic.iter().position(|&v| v == art) {
            self.nonbasic.remove(c);
            self.stuck.remove(c);
            for row in &mut self.table {
                row.remove(c);
            }
        }
        true
    }

    fn remove_row(&mut self, r: usize) {
        self.basic.remove(r);
        self.consts.remove(r);
        self.table.remove(r);
        self.defining.remove(r);
    }

    fn set_objective(&mut self, objective: &[Q]) {
        let width = self.nonbasic.len();
        self.obj = vec![Q::zero(); width];
        self.obj_const = Q::zero();
        for (j, cj) in objective.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            if let Some(c) = self.nonbasic.iter().position(|&v| v == j) {
                self.obj[c] += cj;
            } else {
                let r = self.basic.iter().position(|&v| v == j).expect("free variable is basic");
                for k in 0..width {
                    let delta = cj * &self.table[r][k];
                    self.obj[k] += delta;
                }
                self.obj_const += cj * &self.consts[r];
            }
        }
    }

    fn step(&mut self) -> Step {
        // a stuck free variable with nonzero cost is an unbounded direction on its own
        if let Some(c) = (0..self.nonbasic.len()).find(|&c| self.column_is_stuck(c) && !self.obj[c].is_zero()) {
            return Step::Unbounded(c);
        }
        let entering = (0..self.nonbasic.len())
            .filter(|&c| !self.column_is_stuck(c) && self.obj[c].is_positive())
            .min_by_key(|&c| self.nonbasic[c]);
        let Some(c) = entering else {
            return Step::Optimal;
        };
        let mut best: Option<(usize, Q)> = None;
        for r in 0..self.table.len() {
            if self.defining[r] || !self.table[r][c].is_negative() {
                continue;
            }
            let ratio = &self.consts[r] / -&self.table[r][c];
            let better = match &best {
                None => true,
                Some((br, bq)) => ratio < *bq || (ratio == *bq && self.basic[r] < self.basic[*br]),
            };
            if better {
                best = Some((r, ratio));
            }
        }
        match best {
            None => Step::Unbounded(c),
            Some((r, _)) => {
                self.pivot(r, c);
                Step::Pivoted
            }
        }
    }

    fn current_point(&self) -> Vec<Q> {
        (0..self.n)
            .map(|j| match self.basic.iter().position(|&v| v == j) {
                Some(r) => self.consts[r].clone(),
                None => Q::zero(),
            })
            .collect()
    }

    fn ray(&self, c: usize) -> Vec<Q> {
        let sign = if self.column_is_stuck(c) && self.obj[c].is_negative() {
            -Q::one()
        } else {
            Q::one()
        };
        (0..self.n)
            .map(|j| {
                if self.nonbasic[c] == j {
                    sign.clone()
                } else {
                    match self.basic.iter().position(|&v| v == j) {
                        Some(r) => &sign * &self.table[r][c],
                        None => Q::zero(),
                    }
                }
            })
            .collect()
    }

    fn optimize(mut self) -> LpOutcome {
        loop {
            match self.step() {
                Step::Pivoted => continue,
                Step::Optimal => {
                    return LpOutcome::Optimal {
                        value: self.obj_const.clone(),
                        point: self.current_point(),
                    }
                }
                Step::Unbounded(c) => {
                    return LpOutcome::Unbounded {
                        point: self.current_point(),
                        ray: self.ray(c),
                    }
                }
            }
        }
    }
}
