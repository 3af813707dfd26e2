//! Plain-text interchange for inequality systems.
//!
//! ```text
//! # optional comment lines
//! R1 R2
//! 1 0 <= 7/2
//! -1 1 <= 0
//! ```

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{format_q, InequalitySystem, PolytopeError, Row, Q};

pub fn write_system(sys: &InequalitySystem) -> String {
    let mut out = String::new();
    out.push_str(&sys.variables().join(" "));
    out.push('\n');
    for row in sys.rows() {
        for c in &row.coeffs {
            let _ = write!(out, "{} ", format_q(c));
        }
        let _ = writeln!(out, "<= {}", format_q(&row.rhs));
    }
    out
}

fn parse_q(token: &str, line: usize) -> Result<Q, PolytopeError> {
    let err = || PolytopeError::Parse {
        line,
        message: format!("`{token}` is not a rational of the form p or p/q"),
    };
    let (n, d) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(PolytopeError::Parse {
            line,
            message: "zero denominator".into(),
        });
    }
    Ok(Q::new(n, d))
}

pub fn parse_system(text: &str) -> Result<InequalitySystem, PolytopeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(PolytopeError::Parse {
        line: 1,
        message: "missing variable header".into(),
    })?;
    let variables: Vec<String> = header.split_whitespace().map(String::from).collect();
    let mut sys = InequalitySystem::new(variables);
    for (line, text) in lines {
        let (lhs, rhs) = text.split_once("<=").ok_or(PolytopeError::Parse {
            line,
            message: "expected `<=`".into(),
        })?;
        let coeffs = lhs
            .split_whitespace()
            .map(|t| parse_q(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != sys.dim() {
            return Err(PolytopeError::Parse {
                line,
                message: format!("{} coefficients for {} variables", coeffs.len(), sys.dim()),
            });
        }
        let rhs = parse_q(rhs.trim(), line)?;
        sys.push(Row::new(coeffs, rhs))?;
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{q, ratio};

    #[test]
    fn parses_documented_example() {
        let sys = parse_system("# demo\nR1 R2\n1 0 <= 7/2\n-1 1 <= 0\n").unwrap();
        assert_eq!(sys.variables(), ["R1", "R2"]);
        assert_eq!(sys.rows()[0], Row::new(vec![q(1), q(0)], ratio(7, 2)));
        assert_eq!(write_system(&sys), "R1 R2\n1 0 <= 7/2\n-1 1 <= 0\n");
    }

    #[test]
    fn line_diagnostics() {
        match parse_system("x y\n1 <= 2\n") {
            Err(PolytopeError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_system("x\n1 <= 1/0\n") {
            Err(PolytopeError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_system("x\n1 >= 2").is_err());
        assert!(parse_system("").is_err());
    }
}
