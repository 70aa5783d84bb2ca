use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::SExponents;
use crate::error::{Error, Result};

/// A tuple (x, y, a, b, c, m, n) with x² + 5^a·13^b·17^c = 2^m·y^n and gcd(x, y) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolutionTuple {
    pub x: BigUint,
    pub y: BigUint,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub m: u32,
    pub n: u32,
}

/// Why a candidate tuple is not a solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonPositive,
    EquationMismatch { lhs: BigUint, rhs: BigUint },
    NotCoprime { gcd: BigUint },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive => write!(f, "x and y must be positive"),
            Violation::EquationMismatch { lhs, rhs } => {
                write!(f, "equation mismatch: lhs {lhs} != rhs {rhs}")
            }
            Violation::NotCoprime { gcd } => write!(f, "gcd(x, y) = {gcd}"),
        }
    }
}

/// Checks the equation and the coprimality condition without constructing a tuple.
pub fn check_tuple(
    x: &BigUint,
    y: &BigUint,
    a: u32,
    b: u32,
    c: u32,
    m: u32,
    n: u32,
) -> std::result::Result<(), Violation> {
    if x.is_zero() || y.is_zero() {
        return Err(Violation::NonPositive);
    }
    let lhs = x * x + SExponents::new(a, b, c).value();
    let rhs = y.pow(n) << m;
    if lhs != rhs {
        return Err(Violation::EquationMismatch { lhs, rhs });
    }
    let g = x.gcd(y);
    if !g.is_one() {
        return Err(Violation::NotCoprime { gcd: g });
    }
    Ok(())
}

impl SolutionTuple {
    /// Builds a tuple, verifying the equation exactly and gcd(x, y) = 1.
    pub fn new(x: BigUint, y: BigUint, a: u32, b: u32, c: u32, m: u32, n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSolution(format!("exponent n = {n} < 3")));
        }
        check_tuple(&x, &y, a, b, c, m, n)
            .map_err(|v| Error::InvalidSolution(format!("({x}, {y}, {a}, {b}, {c}, {m}, {n}): {v}")))?;
        Ok(SolutionTuple { x, y, a, b, c, m, n })
    }

    pub fn from_u64(x: u64, y: u64, a: u32, b: u32, c: u32, m: u32, n: u32) -> Result<Self> {
        Self::new(BigUint::from(x), BigUint::from(y), a, b, c, m, n)
    }

    pub fn exponents(&self) -> SExponents {
        SExponents::new(self.a, self.b, self.c)
    }

    fn key(&self) -> (u32, &BigUint, &BigUint, u32, u32, u32, u32) {
        (self.n, &self.y, &self.x, self.a, self.b, self.c, self.m)
    }
}

impl Ord for SolutionTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for SolutionTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SolutionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {}, {}, {})",
            self.x, self.y, self.a, self.b, self.c, self.m, self.n
        )
    }
}

/// Serializes as a number when it fits in u64, otherwise as a decimal string.
pub(crate) fn serialize_big<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

struct Big<'a>(&'a BigUint);

impl Serialize for Big<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_big(self.0, s)
    }
}

impl Serialize for SolutionTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SolutionTuple", 7)?;
        st.serialize_field("x", &Big(&self.x))?;
        st.serialize_field("y", &Big(&self.y))?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("n", &self.n)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks_equation_and_gcd() {
        assert!(SolutionTuple::from_u64(716, 81, 1, 1, 2, 0, 3).is_ok());
        assert!(SolutionTuple::from_u64(188000497, 260473, 8, 4, 0, 1, 3).is_ok());
        assert!(SolutionTuple::from_u64(33, 7, 2, 2, 1, 1, 3).is_err());
        assert!(SolutionTuple::from_u64(1, 1, 0, 0, 0, 1, 2).is_err());
        // m ≥ 2 never satisfies the equation
        assert!(SolutionTuple::from_u64(1, 1, 0, 0, 0, 2, 3).is_err());
    }

    #[test]
    fn json_has_stable_key_order() {
        let t = SolutionTuple::from_u64(70, 17, 0, 1, 0, 0, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"x":70,"y":17,"a":0,"b":1,"c":0,"m":0,"n":3}"#
        );
    }

    #[test]
    fn ordering_is_by_exponent_then_y() {
        let a = SolutionTuple::from_u64(716, 3, 1, 1, 2, 0, 12).unwrap();
        let b = SolutionTuple::from_u64(70, 17, 0, 1, 0, 0, 3).unwrap();
        let c = SolutionTuple::from_u64(7, 3, 1, 0, 0, 1, 3).unwrap();
        let mut v = vec![a.clone(), b.clone(), c.clone()];
        v.sort();
        assert_eq!(v, vec![c, b, a]);
    }
}
