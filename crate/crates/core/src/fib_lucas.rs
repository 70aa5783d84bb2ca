//! Fibonacci and Lucas numbers, their square classification, and the
//! exponent-5 analysis driven by the Fibonacci/Lucas families of defective
//! Lehmer pairs.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    is_perfect_square, square_times_squarefree, squarefree_split, SExponents, ADMISSIBLE_D,
};
use crate::lehmer::{is_lehmer_pair, lehmer_number, LehmerInstance};
use crate::solution::SolutionTuple;

pub fn fibonacci(k: u32) -> BigUint {
    fib_pair(k).0
}

pub fn lucas(k: u32) -> BigUint {
    // L_k = F_{k−1} + F_{k+1} = 2F_{k+1} − F_k
    let (f, f1) = fib_pair(k);
    (f1 << 1u32) - f
}

/// (F_k, F_{k+1}) by fast doubling.
fn fib_pair(k: u32) -> (BigUint, BigUint) {
    if k == 0 {
        return (BigUint::zero(), BigUint::from(1u32));
    }
    let (a, b) = fib_pair(k / 2);
    let c = &a * ((&b << 1u32) - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Fibonacci,
    Lucas,
}

impl Family {
    pub fn term(self, k: u32) -> BigUint {
        match self {
            Family::Fibonacci => fibonacci(k),
            Family::Lucas => lucas(k),
        }
    }
}

/// The four shapes classified for Fibonacci and Lucas numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CohnKind {
    FibonacciSquare,
    FibonacciTwiceSquare,
    LucasSquare,
    LucasTwiceSquare,
}

impl CohnKind {
    pub const ALL: [CohnKind; 4] = [
        CohnKind::FibonacciSquare,
        CohnKind::FibonacciTwiceSquare,
        CohnKind::LucasSquare,
        CohnKind::LucasTwiceSquare,
    ];

    pub fn family(self) -> Family {
        match self {
            CohnKind::FibonacciSquare | CohnKind::FibonacciTwiceSquare => Family::Fibonacci,
            CohnKind::LucasSquare | CohnKind::LucasTwiceSquare => Family::Lucas,
        }
    }

    pub fn twice(self) -> bool {
        matches!(self, CohnKind::FibonacciTwiceSquare | CohnKind::LucasTwiceSquare)
    }

    /// The complete list of (k, |x|), as known from Cohn's theorems.
    pub fn known_solutions(self) -> &'static [(u32, u64)] {
        match self {
            CohnKind::FibonacciSquare => &[(0, 0), (1, 1), (2, 1), (12, 12)],
            CohnKind::FibonacciTwiceSquare => &[(0, 0), (3, 1), (6, 2)],
            CohnKind::LucasSquare => &[(1, 1), (3, 2)],
            CohnKind::LucasTwiceSquare => &[(0, 1), (6, 3)],
        }
    }
}

impl fmt::Display for CohnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CohnKind::FibonacciSquare => "F=x^2",
            CohnKind::FibonacciTwiceSquare => "F=2x^2",
            CohnKind::LucasSquare => "L=x^2",
            CohnKind::LucasTwiceSquare => "L=2x^2",
        };
        f.write_str(s)
    }
}

/// Brute-force list of k ≤ limit whose term has the given shape, with |x|.
pub fn cohn_classify(kind: CohnKind, limit: u32) -> Vec<(u32, BigUint)> {
    (0..=limit)
        .filter_map(|k| {
            let t = kind.family().term(k);
            if kind.twice() {
                if t.bit(0) {
                    return None;
                }
                is_perfect_square(&(t >> 1u32)).map(|x| (k, x))
            } else {
                is_perfect_square(&t).map(|x| (k, x))
            }
        })
        .collect()
}

/// One parameter match (2^(2−m)u², 2^(2−m)v²d) = (G_{k−2ε}, 4G_k − G_{k−2ε}).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FLCandidate {
    pub family: Family,
    pub k: u32,
    pub eps: i32,
    pub m: u32,
    pub u: u64,
    /// Second parameter 4G_k − G_{k−2ε}.
    pub second: i64,
    /// v and d from second / 2^(2−m) = v²·d, when that quotient is a positive integer.
    pub v: Option<u64>,
    pub d: Option<u64>,
}

impl FLCandidate {
    pub fn index(&self) -> u32 {
        (self.k as i64 - 2 * self.eps as i64) as u32
    }
}

/// x² + N = 2^m·y^n with N = d·z².
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalEquation {
    pub constant: u64,
    pub m: u32,
    pub y: u64,
    pub n: u32,
}

impl FinalEquation {
    /// The unique x ≥ 0 solving the equation, if any.
    pub fn integer_root(&self) -> Option<BigUint> {
        let rhs = BigInt::from(BigUint::from(self.y).pow(self.n) << self.m);
        let diff = rhs - BigInt::from(self.constant);
        crate::arith::is_square_int(&diff)
    }
}

impl fmt::Display for FinalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = if self.m == 1 { "2*" } else { "" };
        write!(f, "x^2 + {} = {}{}^{}", self.constant, lead, self.y, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rejection {
    /// 2^(2−m)u² = G_{k−2ε} forces u to be a half-integer.
    UNotIntegral,
    SecondNotPositive,
    SecondNotDivisible,
    /// m = 1 needs u, v, d odd.
    Parity,
    DNotSupportedOnS,
    NotLehmerPair,
    /// z = v·|𝔏_5| has a prime factor outside S.
    ZNotSUnit { z: u64, equation: FinalEquation },
    NoIntegerX { equation: FinalEquation },
    NotCoprime { equation: FinalEquation },
}

impl Rejection {
    pub fn final_equation(&self) -> Option<&FinalEquation> {
        match self {
            Rejection::ZNotSUnit { equation, .. }
            | Rejection::NoIntegerX { equation }
            | Rejection::NotCoprime { equation } => Some(equation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum P5Outcome {
    Rejected(Rejection),
    Solution(SolutionTuple),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P5Entry {
    pub candidate: FLCandidate,
    pub outcome: P5Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P5Analysis {
    pub kmax: u32,
    pub entries: Vec<P5Entry>,
}

impl P5Analysis {
    pub fn candidates(&self) -> impl Iterator<Item = &FLCandidate> {
        self.entries.iter().map(|e| &e.candidate)
    }

    pub fn rejections(&self) -> impl Iterator<Item = (&FLCandidate, &Rejection)> {
        self.entries.iter().filter_map(|e| match &e.outcome {
            P5Outcome::Rejected(r) => Some((&e.candidate, r)),
            P5Outcome::Solution(_) => None,
        })
    }

    pub fn rejected_final_equations(&self) -> Vec<&FinalEquation> {
        self.rejections().filter_map(|(_, r)| r.final_equation()).collect()
    }

    pub fn solutions(&self) -> Vec<SolutionTuple> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .filter_map(|e| match &e.outcome {
                P5Outcome::Solution(s) => Some(s.clone()),
                P5Outcome::Rejected(_) => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Runs every Fibonacci/Lucas parameter match with k ≤ kmax through the
/// exponent-5 reduction and records how each one ends.
pub fn p5_case_analysis(kmax: u32) -> P5Analysis {
    assert!(kmax >= 3, "kmax must be at least 3");
    let limit = kmax + 2;
    let classified: Vec<(CohnKind, Vec<(u32, BigUint)>)> = CohnKind::ALL
        .iter()
        .map(|&kind| (kind, cohn_classify(kind, limit)))
        .collect();

    let mut entries = Vec::new();
    for family in [Family::Fibonacci, Family::Lucas] {
        for k in 0..=kmax {
            let allowed = match family {
                Family::Fibonacci => k >= 3,
                Family::Lucas => k != 1,
            };
            if !allowed {
                continue;
            }
            for eps in [1i32, -1] {
                let index = k as i64 - 2 * eps as i64;
                if index < 0 {
                    continue;
                }
                let index = index as u32;
                for m in 0..=1u32 {
                    // m = 0: G = 4u² = (2u)²; m = 1: G = 2u²
                    let wanted_twice = m == 1;
                    let Some(root) = classified
                        .iter()
                        .filter(|(kind, _)| kind.family() == family && kind.twice() == wanted_twice)
                        .flat_map(|(_, list)| list.iter())
                        .find(|(i, _)| *i == index)
                        .map(|(_, x)| x.to_u64().expect("small root"))
                    else {
                        continue;
                    };
                    if root == 0 {
                        continue;
                    }
                    let first = family.term(index).to_i64().expect("small term");
                    let second = 4 * family.term(k).to_i64().expect("small term") - first;
                    let (u, u_ok) = if m == 0 { (root / 2, root % 2 == 0) } else { (root, true) };
                    let mut cand = FLCandidate { family, k, eps, m, u, second, v: None, d: None };
                    let outcome = if !u_ok {
                        P5Outcome::Rejected(Rejection::UNotIntegral)
                    } else {
                        evaluate(&mut cand)
                    };
                    entries.push(P5Entry { candidate: cand, outcome });
                }
            }
        }
    }
    P5Analysis { kmax, entries }
}

fn evaluate(cand: &mut FLCandidate) -> P5Outcome {
    use P5Outcome::Rejected;
    let scale = 1i64 << (2 - cand.m);
    if cand.second <= 0 {
        return Rejected(Rejection::SecondNotPositive);
    }
    if cand.second % scale != 0 {
        return Rejected(Rejection::SecondNotDivisible);
    }
    let (v, d) = square_times_squarefree((cand.second / scale) as u64);
    cand.v = Some(v);
    cand.d = Some(d);
    let u = cand.u;
    if cand.m == 1 && (u.is_multiple_of(2) || v % 2 == 0 || d % 2 == 0) {
        return Rejected(Rejection::Parity);
    }
    if !ADMISSIBLE_D.contains(&d) {
        return Rejected(Rejection::DNotSupportedOnS);
    }
    if !is_lehmer_pair(u, v, d, cand.m) {
        return Rejected(Rejection::NotLehmerPair);
    }
    let inst = LehmerInstance::new(u, v, d, cand.m).expect("validated");
    let l5 = lehmer_number(&inst, 5).expect("exact for a Lehmer pair");
    let z = (BigUint::from(v) * l5.magnitude()).to_u64().expect("small z");
    let y = inst.norm().expect("Lehmer pair has integral norm");
    let equation = FinalEquation { constant: d * z * z, m: cand.m, y, n: 5 };
    let Some(z_exps) = SExponents::from_value(&BigUint::from(z)) else {
        return Rejected(Rejection::ZNotSUnit { z, equation });
    };
    let Some(x) = equation.integer_root() else {
        return Rejected(Rejection::NoIntegerX { equation });
    };
    let exps = SExponents::from_value(&BigUint::from(d)).expect("admissible d") + z_exps.scale(2);
    debug_assert_eq!(squarefree_split(exps).d, d);
    match SolutionTuple::new(x, BigUint::from(y), exps.e5, exps.e13, exps.e17, cand.m, 5) {
        Ok(sol) => P5Outcome::Solution(sol),
        Err(_) => Rejected(Rejection::NotCoprime { equation }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(fibonacci(0), b(0));
        assert_eq!(fibonacci(12), b(144));
        assert_eq!(fibonacci(6), b(8));
        assert_eq!(lucas(0), b(2));
        assert_eq!(lucas(3), b(4));
        assert_eq!(lucas(6), b(18));
    }

    #[test]
    fn recurrences_and_identity_hold() {
        for k in 2..=60 {
            assert_eq!(fibonacci(k), fibonacci(k - 1) + fibonacci(k - 2));
            assert_eq!(lucas(k), lucas(k - 1) + lucas(k - 2));
        }
        for k in 1..=60 {
            assert_eq!(lucas(k), fibonacci(k - 1) + fibonacci(k + 1));
        }
        assert_eq!(lucas(1), b(1));
    }

    #[test]
    fn cohn_examples() {
        let as_u64 = |v: Vec<(u32, BigUint)>| {
            v.into_iter().map(|(k, x)| (k, x.to_u64().unwrap())).collect::<Vec<_>>()
        };
        assert_eq!(
            as_u64(cohn_classify(CohnKind::FibonacciSquare, 50)),
            vec![(0, 0), (1, 1), (2, 1), (12, 12)]
        );
        assert_eq!(as_u64(cohn_classify(CohnKind::LucasSquare, 50)), vec![(1, 1), (3, 2)]);
        assert_eq!(
            as_u64(cohn_classify(CohnKind::FibonacciTwiceSquare, 50)),
            vec![(0, 0), (3, 1), (6, 2)]
        );
        for kind in CohnKind::ALL {
            assert_eq!(as_u64(cohn_classify(kind, 60)), kind.known_solutions().to_vec());
        }
    }

    fn find(a: &P5Analysis, family: Family, k: u32, m: u32) -> &P5Entry {
        a.entries
            .iter()
            .find(|e| e.candidate.family == family && e.candidate.k == k && e.candidate.m == m)
            .unwrap_or_else(|| panic!("no candidate {family:?} k={k} m={m}"))
    }

    #[test]
    fn fibonacci_index_three_is_rejected() {
        let a = p5_case_analysis(30);
        let e = find(&a, Family::Fibonacci, 5, 1);
        assert_eq!((e.candidate.u, e.candidate.v, e.candidate.d), (1, Some(3), Some(1)));
        // |𝔏_5| = 1 so z = v = 3, which is not a product of 5, 13, 17
        match &e.outcome {
            P5Outcome::Rejected(Rejection::ZNotSUnit { z, equation }) => {
                assert_eq!(*z, 3);
                assert_eq!(equation.y, 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lucas_index_six_gives_solutions() {
        let a = p5_case_analysis(30);
        let e = find(&a, Family::Lucas, 4, 1);
        assert_eq!((e.candidate.u, e.candidate.v, e.candidate.d), (3, Some(1), Some(5)));
        let expected = SolutionTuple::from_u64(183, 7, 3, 0, 0, 1, 5).unwrap();
        assert_eq!(e.outcome, P5Outcome::Solution(expected));
        let e = find(&a, Family::Lucas, 8, 1);
        assert_eq!(e.candidate.d, Some(85));
        let expected = SolutionTuple::from_u64(21417, 47, 3, 0, 1, 1, 5).unwrap();
        assert_eq!(e.outcome, P5Outcome::Solution(expected));
    }

    #[test]
    fn even_vd_is_rejected_before_the_final_equation() {
        let a = p5_case_analysis(30);
        // F_6 = 8 = 2·2² gives even u with m = 1
        let e = find(&a, Family::Fibonacci, 8, 1);
        assert_eq!(e.outcome, P5Outcome::Rejected(Rejection::Parity));
    }

    #[test]
    fn analysis_is_stable_under_larger_kmax() {
        let small = p5_case_analysis(30);
        let large = p5_case_analysis(60);
        assert_eq!(small.solutions(), large.solutions());
        assert_eq!(
            small.solutions(),
            vec![
                SolutionTuple::from_u64(19, 3, 3, 0, 0, 1, 5).unwrap(),
                SolutionTuple::from_u64(183, 7, 3, 0, 0, 1, 5).unwrap(),
                SolutionTuple::from_u64(21417, 47, 3, 0, 1, 1, 5).unwrap(),
            ]
        );
        for e in &small.entries {
            let c = &e.candidate;
            let first = c.family.term(c.index());
            if e.outcome != P5Outcome::Rejected(Rejection::UNotIntegral) {
                assert_eq!(first, BigUint::from(c.u * c.u) << (2 - c.m));
            }
            assert_eq!(c.second, 4 * c.family.term(c.k).to_i64().unwrap() - first.to_i64().unwrap());
        }
    }

    #[test]
    fn final_equation_roots() {
        let e = FinalEquation { constant: 1, m: 1, y: 5, n: 5 };
        assert_eq!(e.integer_root(), None);
        assert_eq!(e.to_string(), "x^2 + 1 = 2*5^5");
        let e = FinalEquation { constant: 5, m: 1, y: 7, n: 5 };
        assert_eq!(e.integer_root(), None);
        let e = FinalEquation { constant: 125, m: 1, y: 7, n: 5 };
        assert_eq!(e.integer_root(), Some(b(183)));
    }
}
