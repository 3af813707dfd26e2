use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::lp::{maximize, LpOutcome};
use super::{InequalitySystem, PolytopeError, Q};

/// Lists every vertex of a bounded polytope of dimension at most three.
///
/// An infeasible system yields an empty list. Two-dimensional output runs
/// counterclockwise around the centroid; otherwise vertices are sorted lexicographically.
pub fn enumerate_vertices(
    sys: &InequalitySystem,
    nonneg: bool,
) -> Result<Vec<Vec<Q>>, PolytopeError> {
    let n = sys.dim();
    if n > 3 {
        return Err(PolytopeError::DimensionTooLarge(n));
    }
    let mut sys = sys.clone();
    if nonneg {
        sys.push_nonnegativity();
    }
    if !maximize(&sys, &vec![Q::zero(); n]).is_feasible() {
        return Ok(Vec::new());
    }
    for j in 0..n {
        for sign in [Q::one(), -Q::one()] {
            let mut dir = vec![Q::zero(); n];
            dir[j] = sign;
            if let LpOutcome::Unbounded { ray, .. } = maximize(&sys, &dir) {
                return Err(PolytopeError::Unbounded { ray });
            }
        }
    }
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }

    let mut vertices: Vec<Vec<Q>> = Vec::new();
    let mut pick = Vec::with_capacity(n);
    for_each_subset(sys.len(), n, 0, &mut pick, &mut |subset| {
        let a: Vec<Vec<Q>> = subset.iter().map(|&i| sys.rows()[i].coeffs.clone()).collect();
        let b: Vec<Q> = subset.iter().map(|&i| sys.rows()[i].rhs.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if sys.contains_point(&x) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    });

    match n {
        2 => sort_counterclockwise(&mut vertices),
        _ => vertices.sort(),
    }
    Ok(vertices)
}

fn for_each_subset(
    m: usize,
    k: usize,
    start: usize,
    pick: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..m {
        pick.push(i);
        for_each_subset(m, k, i + 1, pick, f);
        pick.pop();
    }
}

/// Gaussian elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &f * &b[col];
            b[r] -= delta;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn sort_counterclockwise(points: &mut [Vec<Q>]) {
    if points.len() < 3 {
        points.sort();
        return;
    }
    let count = Q::from_integer(points.len().into());
    let cx = points.iter().fold(Q::zero(), |acc, p| acc + &p[0]) / &count;
    let cy = points.iter().fold(Q::zero(), |acc, p| acc + &p[1]) / &count;
    // half 0: angle in [0, pi), half 1: [pi, 2 pi)
    let half = |p: &[Q]| -> u8 {
        let dy = &p[1] - &cy;
        let dx = &p[0] - &cx;
        u8::from(dy.is_negative() || (dy.is_zero() && dx.is_negative()))
    };
    points.sort_by(|p, r| {
        half(p).cmp(&half(r)).then_with(|| {
            let cross = (&p[0] - &cx) * (&r[1] - &cy) - (&p[1] - &cy) * (&r[0] - &cx);
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{q, Row};

    fn sys(names: &[&str], rows: &[(&[i64], i64)]) -> InequalitySystem {
        InequalitySystem::with_rows(
            names.iter().copied(),
            rows.iter().map(|(c, b)| Row::from_ints(c, q(*b))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn box_vertices_counterclockwise() {
        let s = sys(&["R1", "R2"], &[(&[1, 0], 1), (&[0, 1], 2)]);
        let v = enumerate_vertices(&s, true).unwrap();
        let expected = [
            vec![q(1), q(2)],
            vec![q(0), q(2)],
            vec![q(0), q(0)],
            vec![q(1), q(0)],
        ];
        assert_eq!(v.len(), 4);
        // same cyclic order, whichever vertex comes first
        let start = v.iter().position(|p| *p == expected[0]).unwrap();
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(&v[(start + k) % 4], e);
        }
    }

    #[test]
    fn infeasible_is_empty_not_error() {
        let s = sys(&["x"], &[(&[1], -1)]);
        assert_eq!(enumerate_vertices(&s, true).unwrap(), Vec::<Vec<Q>>::new());
    }

    #[test]
    fn unbounded_is_error() {
        let s = sys(&["x", "y"], &[(&[1, 0], 1)]);
        assert!(matches!(
            enumerate_vertices(&s, true),
            Err(PolytopeError::Unbounded { .. })
        ));
    }

    #[test]
    fn four_dimensions_rejected() {
        let s = sys(&["a", "b", "c", "d"], &[(&[1, 1, 1, 1], 1)]);
        assert!(matches!(
            enumerate_vertices(&s, true),
            Err(PolytopeError::DimensionTooLarge(4))
        ));
    }

    #[test]
    fn simplex_in_three_dimensions() {
        let s = sys(&["a", "b", "c"], &[(&[1, 1, 1], 1)]);
        let v = enumerate_vertices(&s, true).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.contains(&vec![q(0), q(0), q(1)]));
    }
}
