//! Exact-arithmetic polyhedral machinery.
//!
//! Everything in this module works over arbitrary-precision rationals. Floating
//! point values only enter through [`dyadic`], which rounds to a fixed binary
//! grid once, at the boundary.

mod fm;
mod lp;
mod redundancy;
mod text;
mod vertices;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use fm::{eliminate_with, fourier_motzkin_eliminate, FmOptions, FmTimeout};
pub use lp::{maximize, LpOutcome};
pub use redundancy::{contains, remove_redundant, set_equal, Certificate, Containment, Equality};
pub use text::{parse_system, write_system};
pub use vertices::enumerate_vertices;

/// Exact rational scalar used throughout the engine.
pub type Q = BigRational;

/// Bits of binary resolution used when a float enters the exact domain.
pub const DYADIC_BITS: u32 = 40;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("row {row} has {got} coefficients, expected {expected}")]
    RowLength {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("system is infeasible ({} rows in certificate)", .0.rows.len())]
    Infeasible(Certificate),

    #[error("polytope is unbounded along ray {}", fmt_point(.ray))]
    Unbounded { ray: Vec<Q> },

    #[error("vertex enumeration supports at most 3 dimensions, got {0}")]
    DimensionTooLarge(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("non-finite value {0} cannot be converted to a rational")]
    NonFinite(f64),

    #[error("elimination deadline expired with {} variables left", .0.remaining.len())]
    Timeout(Box<FmTimeout>),
}

/// One inequality `coeffs · x <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
}

impl Row {
    pub fn new(coeffs: Vec<Q>, rhs: Q) -> Self {
        Self { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rhs: Q) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| Q::from_integer(c.into())).collect(),
            rhs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn lhs_at(&self, point: &[Q]) -> Q {
        self.coeffs
            .iter()
            .zip(point)
            .fold(Q::zero(), |acc, (c, x)| acc + c * x)
    }

    pub fn satisfied_by(&self, point: &[Q]) -> bool {
        self.lhs_at(point) <= self.rhs
    }

    /// Scale so the first nonzero coefficient has absolute value one.
    pub fn normalized(&self) -> Row {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => {
                let s = lead.abs();
                Row {
                    coeffs: self.coeffs.iter().map(|c| c / &s).collect(),
                    rhs: &self.rhs / &s,
                }
            }
        }
    }
}

/// A named-variable system of `<=` rows over exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    variables: Vec<String>,
    rows: Vec<Row>,
}

impl InequalitySystem {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        Self {
            variables: variables.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_rows<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        rows: Vec<Row>,
    ) -> Result<Self, PolytopeError> {
        let mut sys = Self::new(variables);
        for row in rows {
            sys.push(row)?;
        }
        Ok(sys)
    }

    pub fn push(&mut self, row: Row) -> Result<(), PolytopeError> {
        if row.coeffs.len() != self.variables.len() {
            return Err(PolytopeError::RowLength {
                row: self.rows.len(),
                got: row.coeffs.len(),
                expected: self.variables.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds `-x_j <= 0` for every variable.
    pub fn push_nonnegativity(&mut self) {
        let n = self.dim();
        for j in 0..n {
            let mut coeffs = vec![Q::zero(); n];
            coeffs[j] = -Q::one();
            self.rows.push(Row::new(coeffs, Q::zero()));
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PolytopeError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolytopeError::UnknownVariable(name.to_string()))
    }

    pub fn contains_point(&self, point: &[Q]) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(point))
    }

    /// First row violated by `point`, if any.
    pub fn violated_row(&self, point: &[Q]) -> Option<usize> {
        self.rows.iter().position(|r| !r.satisfied_by(point))
    }

    /// Restricts the system to the points whose listed variables take fixed values.
    pub fn fix(&self, assignments: &[(usize, Q)]) -> InequalitySystem {
        let keep: Vec<usize> = (0..self.dim())
            .filter(|j| assignments.iter().all(|(k, _)| k != j))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let shift = assignments
                    .iter()
                    .fold(Q::zero(), |acc, (k, v)| acc + &r.coeffs[*k] * v);
                Row::new(
                    keep.iter().map(|&j| r.coeffs[j].clone()).collect(),
                    &r.rhs - shift,
                )
            })
            .collect();
        InequalitySystem {
            variables: keep.iter().map(|&j| self.variables[j].clone()).collect(),
            rows,
        }
    }

    pub(crate) fn from_parts(variables: Vec<String>, rows: Vec<Row>) -> Self {
        Self { variables, rows }
    }

    pub(crate) fn into_parts(self) -> (Vec<String>, Vec<Row>) {
        (self.variables, self.rows)
    }

    pub(crate) fn ensure_same_variables(&self, other: &Self) -> Result<(), PolytopeError> {
        if self.variables != other.variables {
            return Err(PolytopeError::VariableMismatch(
                self.variables.clone(),
                other.variables.clone(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for InequalitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_system(self))
    }
}

/// A point, optionally tagged with the row of the other system it violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Vec<Q>,
    pub violated_row: Option<usize>,
}

/// Rounds `x` to the nearest multiple of `2^-DYADIC_BITS`, exactly.
pub fn dyadic(x: f64) -> Result<Q, PolytopeError> {
    if !x.is_finite() {
        return Err(PolytopeError::NonFinite(x));
    }
    // scaling by a power of two is exact, so only the final rounding loses bits
    let scaled = (x * 2f64.powi(DYADIC_BITS as i32)).round();
    let numer = BigInt::from_f64(scaled).ok_or(PolytopeError::NonFinite(x))?;
    Ok(Q::new(numer, BigInt::one() << DYADIC_BITS))
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn fmt_point(p: &[Q]) -> String {
    let parts: Vec<String> = p.iter().map(format_q).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_is_exact_on_grid_values() {
        assert_eq!(dyadic(0.5).unwrap(), ratio(1, 2));
        assert_eq!(dyadic(-3.0).unwrap(), q(-3));
        assert_eq!(dyadic(0.0).unwrap(), q(0));
    }

    #[test]
    fn dyadic_rounds_to_grid() {
        let x = 6.658211482751795_f64;
        let d = dyadic(x).unwrap();
        assert!((to_f64(&d) - x).abs() <= 2f64.powi(-41));
        assert!(((BigInt::one() << DYADIC_BITS) % d.denom()).is_zero());
        assert!(dyadic(f64::NAN).is_err());
        assert!(dyadic(f64::INFINITY).is_err());
    }

    #[test]
    fn normalization_scales_by_leading_magnitude() {
        let r = Row::from_ints(&[0, -2, 4], q(6)).normalized();
        assert_eq!(r, Row::from_ints(&[0, -1, 2], q(3)));
    }

    #[test]
    fn fix_substitutes_values() {
        let sys =
            InequalitySystem::with_rows(["x", "y"], vec![Row::from_ints(&[1, 1], q(3))]).unwrap();
        let sliced = sys.fix(&[(1, q(1))]);
        assert_eq!(sliced.variables(), ["x".to_string()]);
        assert_eq!(sliced.rows()[0], Row::from_ints(&[1], q(2)));
    }

    #[test]
    fn push_rejects_wrong_length() {
        let mut sys = InequalitySystem::new(["x", "y"]);
        assert!(matches!(
            sys.push(Row::from_ints(&[1], q(0))),
            Err(PolytopeError::RowLength { .. })
        ));
    }
}
