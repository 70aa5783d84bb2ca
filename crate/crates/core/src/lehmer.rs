//! Lehmer pairs α = (u + v√−d)/√(2^m), their Lehmer numbers, and the
//! primitive-divisor arguments that rule out large prime exponents.
//!
//! All quantities are computed from the exact expansion
//! (u + v√−d)^n = R_n + I_n·√−d in integers; no algebraic-number type is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_u64, is_prime, is_square_u128, jacobi_symbol, ADMISSIBLE_D};
use crate::error::{Error, Result};

/// The pair (α, ᾱ) with α = (u + v√−d)/√(2^m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LehmerInstance {
    pub u: u64,
    pub v: u64,
    pub d: u64,
    pub m: u32,
}

impl LehmerInstance {
    pub fn new(u: u64, v: u64, d: u64, m: u32) -> Result<Self> {
        if m > 1 {
            return Err(Error::InvalidM(m));
        }
        if u == 0 || v == 0 || d == 0 {
            return Err(Error::InvalidArgument(format!(
                "u, v, d must be positive (got {u}, {v}, {d})"
            )));
        }
        Ok(LehmerInstance { u, v, d, m })
    }

    /// (α + ᾱ)² = 2^(2−m)·u².
    pub fn param_a(&self) -> BigInt {
        BigInt::from(self.u).pow(2) << (2 - self.m)
    }

    /// (α − ᾱ)² = −2^(2−m)·v²·d.
    pub fn param_b(&self) -> BigInt {
        -((BigInt::from(self.v).pow(2) * self.d) << (2 - self.m))
    }

    /// αᾱ = (u² + d·v²)/2^m, when integral.
    pub fn norm(&self) -> Option<u64> {
        let s = self.u as u128 * self.u as u128 + self.d as u128 * self.v as u128 * self.v as u128;
        s.is_multiple_of(1 << self.m).then(|| (s >> self.m) as u64)
    }

    /// (R_n, I_n) with (u + v√−d)^n = R_n + I_n·√−d.
    pub fn expand(&self, n: u32) -> (BigInt, BigInt) {
        let (u, v) = (BigInt::from(self.u), BigInt::from(self.v));
        let neg_d = -BigInt::from(self.d);
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        let mut binom = BigInt::one();
        for j in 0..=n {
            let term = &binom * u.pow(n - j) * v.pow(j) * neg_d.pow(j / 2);
            if j % 2 == 0 {
                re += term;
            } else {
                im += term;
            }
            binom = binom * (n - j) / (j + 1);
        }
        (re, im)
    }

    fn odd_denominator(&self, n: u32) -> BigInt {
        BigInt::from(self.v) << (self.m * (n - 1) / 2)
    }

    fn even_denominator(&self, n: u32) -> BigInt {
        (BigInt::from(2 * self.u) * self.v) << (self.m * (n - 2) / 2)
    }
}

fn exact_div(num: &BigInt, den: &BigInt, index: u32) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision { index })
    }
}

/// Lehmer pair test: gcd(u, dv) = 1, uvd odd for m = 1, (α+ᾱ)² coprime to αᾱ,
/// and α/ᾱ not a root of unity.
pub fn is_lehmer_pair(u: u64, v: u64, d: u64, m: u32) -> bool {
    let Ok(inst) = LehmerInstance::new(u, v, d, m) else {
        return false;
    };
    if gcd_u64(u, d * v) != 1 {
        return false;
    }
    if m == 1 && (u * v * d).is_multiple_of(2) {
        return false;
    }
    let Some(norm) = inst.norm() else {
        return false;
    };
    let a = inst.param_a();
    if !a.gcd(&BigInt::from(norm)).is_one() {
        return false;
    }
    // Roots of unity in an imaginary quadratic field have order 1, 2, 3, 4 or 6,
    // so α/ᾱ is one iff α^k is real for some k ≤ 6, i.e. I_k = 0.
    (1..=6).all(|k| !inst.expand(k).1.is_zero())
}

/// 𝔏_n for odd n: I_n / (v·2^(m(n−1)/2)).
pub fn lehmer_number(inst: &LehmerInstance, n: u32) -> Result<BigInt> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenIndex(n));
    }
    exact_div(&inst.expand(n).1, &inst.odd_denominator(n), n)
}

/// 𝔏_n for odd n, through I_{k+2} = 2u·I_{k+1} − (u² + dv²)·I_k.
pub fn lehmer_number_by_recurrence(inst: &LehmerInstance, n: u32) -> Result<BigInt> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenIndex(n));
    }
    exact_div(&imaginary_by_recurrence(inst, n), &inst.odd_denominator(n), n)
}

fn imaginary_by_recurrence(inst: &LehmerInstance, n: u32) -> BigInt {
    let two_u = BigInt::from(2 * inst.u);
    let s = BigInt::from(inst.u).pow(2) + BigInt::from(inst.d) * BigInt::from(inst.v).pow(2);
    let mut prev = BigInt::from(inst.v);
    let mut cur = &two_u * inst.v;
    if n == 1 {
        return prev;
    }
    for _ in 2..n {
        let next = &two_u * &cur - &s * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// 𝔏_n for any n ≥ 1, with the even-index denominator α² − ᾱ² when n is even.
pub fn lehmer_number_any(inst: &LehmerInstance, n: u32) -> Result<BigInt> {
    assert!(n >= 1);
    if n % 2 == 1 {
        lehmer_number(inst, n)
    } else {
        exact_div(&inst.expand(n).1, &inst.even_denominator(n), n)
    }
}

/// (α² − ᾱ²)² = −2^(4−2m)·u²·v²·d.
pub fn squared_diff(inst: &LehmerInstance) -> BigInt {
    -((BigInt::from(inst.u).pow(2) * BigInt::from(inst.v).pow(2) * inst.d) << (4 - 2 * inst.m))
}

pub fn is_primitive_divisor(q: u64, inst: &LehmerInstance, n: u32) -> Result<bool> {
    let q_big = BigInt::from(q);
    let ln = lehmer_number_any(inst, n)?;
    if !(ln % &q_big).is_zero() {
        return Ok(false);
    }
    if (squared_diff(inst) % &q_big).is_zero() {
        return Ok(false);
    }
    for k in 1..n {
        if (lehmer_number_any(inst, k)? % &q_big).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Necessary condition for q to be a primitive divisor of 𝔏_p: q ≡ ε (mod p)
/// with ε = (−4d | q) ∈ {±1}.
pub fn congruence_criterion(q: u64, p: u64, d: u64) -> bool {
    let eps = match q % p {
        1 => 1,
        r if r == p - 1 => -1,
        _ => return false,
    };
    q % 2 == 1 && jacobi_symbol(-4 * d as i64, q) == eps
}

/// Parameters ((α+ᾱ)², −(α−ᾱ)²) of defective Lehmer pairs relevant to an exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DefectiveParams {
    /// Sporadic pairs, given as (A, B) with B = −(α−ᾱ)².
    Pairs(Vec<(i64, i64)>),
    /// The two Fibonacci/Lucas parametric families (exponent 5).
    FibonacciLucasFamilies,
    /// Exponent 3 is handled through Mordell curves instead.
    NotApplicable,
}

/// Only the table entries the reduction needs are embedded; the full tables of
/// defective Lehmer pairs are not reproduced.
pub fn defective_params(p: u64) -> DefectiveParams {
    match p {
        3 => DefectiveParams::NotApplicable,
        5 => DefectiveParams::FibonacciLucasFamilies,
        7 => DefectiveParams::Pairs(vec![(1, 7), (1, 19), (3, 5), (5, 7), (13, 3), (14, 22)]),
        13 => DefectiveParams::Pairs(vec![(1, 7)]),
        _ => DefectiveParams::Pairs(Vec::new()),
    }
}

/// Whether (A, B) can equal (2^(2−m)u², 2^(2−m)v²d) for some m ∈ {0, 1},
/// u, v ≥ 1 and squarefree d ≥ 1.
pub fn defective_pair_realizable(pair: (i64, i64)) -> bool {
    let (a, b) = pair;
    (0..=1u32).any(|m| {
        let scale = 1i64 << (2 - m);
        a > 0
            && b > 0
            && a % scale == 0
            && b % scale == 0
            && is_square_u128((a / scale) as u128).is_some_and(|u| u > 0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCheck {
    pub q: u64,
    pub d: u64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectiveCheck {
    pub pair: (i64, i64),
    pub realizable: bool,
}

/// Record of the facts that rule out a prime exponent p > 7.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCertificate {
    pub p: u64,
    pub congruence_checks: Vec<CongruenceCheck>,
    pub defective_checks: Vec<DefectiveCheck>,
}

impl EliminationCertificate {
    /// Re-derives every recorded fact and confirms the elimination.
    pub fn verify(&self) -> bool {
        let full = self.congruence_checks.len() == 3 * ADMISSIBLE_D.len();
        let congruences = self
            .congruence_checks
            .iter()
            .all(|c| !c.passes && congruence_criterion(c.q, self.p, c.d) == c.passes);
        let defective = match defective_params(self.p) {
            DefectiveParams::Pairs(pairs) => {
                pairs.len() == self.defective_checks.len()
                    && self.defective_checks.iter().zip(&pairs).all(|(c, p)| {
                        c.pair == *p
                            && !c.realizable
                            && defective_pair_realizable(c.pair) == c.realizable
                    })
            }
            _ => false,
        };
        full && congruences && defective
    }
}

pub fn eliminate_p_gt_7(p: u64) -> Result<EliminationCertificate> {
    if p <= 7 || !is_prime(p) {
        return Err(Error::NotLargePrime(p));
    }
    let mut congruence_checks = Vec::new();
    for q in [5, 13, 17] {
        for d in ADMISSIBLE_D {
            let passes = congruence_criterion(q, p, d);
            if passes {
                return Err(Error::EliminationFailed(format!(
                    "q = {q} may be a primitive divisor for p = {p}, d = {d}"
                )));
            }
            congruence_checks.push(CongruenceCheck { q, d, passes });
        }
    }
    let pairs = match defective_params(p) {
        DefectiveParams::Pairs(pairs) => pairs,
        other => unreachable!("p > 7 has sporadic entries only, got {other:?}"),
    };
    let mut defective_checks = Vec::new();
    for pair in pairs {
        let realizable = defective_pair_realizable(pair);
        if realizable {
            return Err(Error::EliminationFailed(format!(
                "defective pair {pair:?} is realizable for p = {p}"
            )));
        }
        defective_checks.push(DefectiveCheck { pair, realizable });
    }
    Ok(EliminationCertificate { p, congruence_checks, defective_checks })
}

/// |𝔏_n| as an unsigned value, convenience for callers comparing with z / v.
pub fn lehmer_abs(inst: &LehmerInstance, n: u32) -> Result<BigInt> {
    Ok(lehmer_number(inst, n)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn inst(u: u64, v: u64, d: u64, m: u32) -> LehmerInstance {
        LehmerInstance::new(u, v, d, m).unwrap()
    }

    #[test]
    fn lehmer_pair_examples() {
        assert!(!is_lehmer_pair(1, 1, 1, 1));
        assert!(is_lehmer_pair(3, 1, 1, 1));
        assert!(is_lehmer_pair(2, 1, 5, 0));
        // 1 + √−3 has argument π/3
        assert!(!is_lehmer_pair(1, 1, 3, 0));
    }

    #[test]
    fn lehmer_number_examples() {
        assert_eq!(lehmer_number(&inst(3, 1, 1, 1), 3), Ok(BigInt::from(13)));
        assert_eq!(lehmer_number(&inst(7, 2, 13, 0), 1), Ok(BigInt::one()));
        assert_eq!(lehmer_number(&inst(1, 1, 5, 1), 3), Ok(BigInt::from(-1)));
        assert_eq!(lehmer_number(&inst(1, 1, 5, 1), 4), Err(Error::EvenIndex(4)));
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(lehmer_number_by_recurrence(&inst(3, 1, 1, 1), 3), Ok(BigInt::from(13)));
        // I_5 = 5 − 50 + 25 = −20, divided by 2^2
        assert_eq!(lehmer_number_by_recurrence(&inst(1, 1, 5, 1), 5), Ok(BigInt::from(-5)));
        assert_eq!(lehmer_number(&inst(1, 1, 5, 1), 5), Ok(BigInt::from(-5)));
        assert_eq!(lehmer_number_by_recurrence(&inst(4, 9, 2, 0), 1), Ok(BigInt::one()));
    }

    #[test]
    fn inexact_division_is_reported() {
        // u + v not even: 2 ∤ I_3 with m = 1
        let bad = inst(2, 1, 1, 1);
        assert_eq!(lehmer_number(&bad, 3), Err(Error::InexactDivision { index: 3 }));
    }

    #[test]
    fn squared_diff_examples() {
        assert_eq!(squared_diff(&inst(3, 1, 1, 1)), BigInt::from(-36));
        assert_eq!(squared_diff(&inst(1, 1, 5, 1)), BigInt::from(-20));
        assert_eq!(squared_diff(&inst(1, 1, 1, 0)), BigInt::from(-16));
    }

    #[test]
    fn squared_diff_matches_parameters() {
        // (α² − ᾱ²)² = (α+ᾱ)²(α−ᾱ)²
        for (u, v, d, m) in [(3, 1, 1, 1), (2, 1, 13, 0), (5, 3, 17, 1)] {
            let i = inst(u, v, d, m);
            assert_eq!(squared_diff(&i), i.param_a() * i.param_b());
        }
    }

    #[test]
    fn primitive_divisor_examples() {
        let i = inst(3, 1, 1, 1);
        assert_eq!(is_primitive_divisor(13, &i, 3), Ok(true));
        assert_eq!(is_primitive_divisor(3, &i, 3), Ok(false));
        for n in 3..8 {
            assert_eq!(is_primitive_divisor(2, &i, n), Ok(false));
            assert_eq!(is_primitive_divisor(2, &inst(2, 1, 5, 0), n), Ok(false));
        }
    }

    #[test]
    fn congruence_examples() {
        assert!(congruence_criterion(13, 7, 5));
        assert!(!congruence_criterion(13, 7, 1));
        for d in ADMISSIBLE_D {
            assert!(!congruence_criterion(5, 5, d));
        }
        let kept: Vec<_> = ADMISSIBLE_D
            .into_iter()
            .filter(|&d| congruence_criterion(13, 7, d))
            .collect();
        assert_eq!(kept, vec![5, 85]);
    }

    #[test]
    fn defective_param_examples() {
        assert_eq!(defective_params(13), DefectiveParams::Pairs(vec![(1, 7)]));
        match defective_params(7) {
            DefectiveParams::Pairs(p) => assert_eq!(p.len(), 6),
            other => panic!("{other:?}"),
        }
        assert_eq!(defective_params(11), DefectiveParams::Pairs(vec![]));
        assert_eq!(defective_params(5), DefectiveParams::FibonacciLucasFamilies);
        assert_eq!(defective_params(3), DefectiveParams::NotApplicable);
        assert!(defective_pair_realizable((4, 20)));
        assert!(defective_pair_realizable((2, 10)));
        assert!(!defective_pair_realizable((14, 22)));
    }

    #[test]
    fn elimination_examples() {
        let c11 = eliminate_p_gt_7(11).unwrap();
        assert!(c11.defective_checks.is_empty() && c11.verify());
        let c13 = eliminate_p_gt_7(13).unwrap();
        assert_eq!(c13.defective_checks, vec![DefectiveCheck { pair: (1, 7), realizable: false }]);
        assert!(c13.verify());
        assert!(eliminate_p_gt_7(19).unwrap().verify());
        assert_eq!(eliminate_p_gt_7(7), Err(Error::NotLargePrime(7)));
        assert_eq!(eliminate_p_gt_7(21), Err(Error::NotLargePrime(21)));
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let mut c = eliminate_p_gt_7(13).unwrap();
        c.defective_checks.clear();
        assert!(!c.verify());
        let mut c = eliminate_p_gt_7(11).unwrap();
        c.p = 7;
        assert!(!c.verify());
    }

    fn valid_instances(max: u64, ds: &[u64]) -> Vec<LehmerInstance> {
        let mut out = Vec::new();
        for m in 0..=1 {
            for &d in ds {
                for u in 1..=max {
                    for v in 1..=max {
                        if is_lehmer_pair(u, v, d, m) {
                            out.push(inst(u, v, d, m));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn binomial_and_recurrence_paths_agree() {
        let ds: Vec<u64> = (1..=20).filter(|&d| crate::arith::is_squarefree(d)).collect();
        let all = valid_instances(20, &ds);
        assert!(!all.is_empty());
        for i in all {
            for n in (1..=15).step_by(2) {
                let a = lehmer_number(&i, n).expect("exact");
                let b = lehmer_number_by_recurrence(&i, n).expect("exact");
                assert_eq!(a, b, "{i:?} n={n}");
                assert!(!a.is_zero());
            }
            for n in (2..=14).step_by(2) {
                lehmer_number_any(&i, n).expect("exact even index");
            }
        }
    }

    #[test]
    fn primitive_divisors_obey_the_congruence() {
        let primes = primes_up_to(1000);
        for i in valid_instances(10, &[1, 5, 13, 17]) {
            for p in [3u64, 5, 7] {
                for &q in &primes {
                    if is_primitive_divisor(q, &i, p as u32).unwrap() {
                        assert!(congruence_criterion(q, p, i.d), "q={q} p={p} {i:?}");
                    }
                }
            }
        }
    }
}
