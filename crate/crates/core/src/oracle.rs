//! Brute-force ground truth: exhaustive search over a bounded box and
//! per-tuple verification. Shares no code with the curve and Lehmer paths.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_perfect_square, is_square_u128, Residue, SExponents};
use crate::error::{Error, Result};
use crate::solution::{check_tuple, SolutionTuple, Violation};
use crate::tables::{corrected_golden_set, golden_rows, RawRow};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    pub a_max: u32,
    pub b_max: u32,
    pub c_max: u32,
    pub m_max: u32,
    pub n_set: BTreeSet<u32>,
    pub y_max: u64,
}

impl SearchBox {
    pub fn new(
        a_max: u32,
        b_max: u32,
        c_max: u32,
        m_max: u32,
        n_set: impl IntoIterator<Item = u32>,
        y_max: u64,
    ) -> Result<Self> {
        let b = SearchBox { a_max, b_max, c_max, m_max, n_set: n_set.into_iter().collect(), y_max };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_set.is_empty() {
            return Err(Error::InvalidArgument("empty exponent set".into()));
        }
        if let Some(n) = self.n_set.iter().find(|&&n| n < 3) {
            return Err(Error::InvalidArgument(format!("exponent {n} < 3")));
        }
        if self.y_max == 0 {
            return Err(Error::InvalidArgument("y_max must be positive".into()));
        }
        if self.m_max > 126 {
            return Err(Error::InvalidArgument(format!("m_max {} too large", self.m_max)));
        }
        Ok(())
    }

    pub fn contains(&self, t: &SolutionTuple) -> bool {
        t.a <= self.a_max
            && t.b <= self.b_max
            && t.c <= self.c_max
            && t.m <= self.m_max
            && self.n_set.contains(&t.n)
            && t.y <= BigUint::from(self.y_max)
    }
}

/// Outcome of checking one candidate tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub diagnostic: Option<Violation>,
}

pub fn verify_solution(x: &BigUint, y: &BigUint, a: u32, b: u32, c: u32, m: u32, n: u32) -> Verification {
    match check_tuple(x, y, a, b, c, m, n) {
        Ok(()) => Verification { valid: true, diagnostic: None },
        Err(v) => Verification { valid: false, diagnostic: Some(v) },
    }
}

pub fn verify_raw(r: RawRow) -> Verification {
    let (x, y, a, b, c, m, n) = r;
    verify_solution(&BigUint::from(x), &BigUint::from(y), a, b, c, m, n)
}

struct SValue {
    exps: SExponents,
    value: BigUint,
    small: Option<u128>,
    residue: Residue,
}

const SHARD: u64 = 2048;

/// Every tuple in the box, found by testing 2^m·y^n − 5^a·13^b·17^c for squareness.
pub fn brute_force_search(search: &SearchBox) -> Result<Vec<SolutionTuple>> {
    search.validate()?;
    let mut svals: Vec<SValue> = SExponents::box_up_to([search.a_max, search.b_max, search.c_max])
        .into_iter()
        .map(|exps| {
            let value = exps.value();
            let small = u128::try_from(&value).ok();
            let residue = Residue::from_biguint(&value);
            SValue { exps, value, small, residue }
        })
        .collect();
    svals.sort_by(|p, q| p.value.cmp(&q.value));

    let shards: Vec<(u32, u64)> = search
        .n_set
        .iter()
        .flat_map(|&n| (0..search.y_max.div_ceil(SHARD)).map(move |s| (n, s)))
        .collect();
    let mut out: Vec<SolutionTuple> = shards
        .par_iter()
        .flat_map_iter(|&(n, s)| {
            let lo = s * SHARD + 1;
            let hi = ((s + 1) * SHARD).min(search.y_max);
            search_shard(n, lo, hi, search.m_max, &svals)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn search_shard(n: u32, lo: u64, hi: u64, m_max: u32, svals: &[SValue]) -> Vec<SolutionTuple> {
    let mut out = Vec::new();
    let two = Residue::from_u64(2);
    for y in lo..=hi {
        let ry = Residue::from_u64(y).pow(n);
        let yn_small = (y as u128).checked_pow(n);
        let yn_big = if yn_small.is_none() { Some(BigUint::from(y).pow(n)) } else { None };
        let mut r = ry;
        for m in 0..=m_max {
            if m > 0 {
                r = r * two;
            }
            let rhs_small = yn_small.and_then(|v| v.checked_mul(1u128 << m)).filter(|v| v >> 127 == 0);
            for s in svals {
                if !(r - s.residue).may_be_square() {
                    continue;
                }
                let x = match (rhs_small, s.small) {
                    (Some(rhs), Some(sv)) => {
                        if sv >= rhs {
                            break;
                        }
                        is_square_u128(rhs - sv).map(BigUint::from)
                    }
                    _ => {
                        let rhs = match &yn_big {
                            Some(b) => b << m,
                            None => BigUint::from(yn_small.unwrap()) << m,
                        };
                        if s.value >= rhs {
                            break;
                        }
                        is_perfect_square(&(rhs - &s.value))
                    }
                };
                let Some(x) = x else { continue };
                if x.gcd(&BigUint::from(y)) != BigUint::from(1u32) {
                    continue;
                }
                let e = s.exps;
                let t = SolutionTuple::new(x, BigUint::from(y), e.e5, e.e13, e.e17, m, n)
                    .expect("square test guarantees the equation");
                out.push(t);
            }
        }
    }
    out
}

/// Comparison of a brute-force run with the published tables.
#[derive(Debug, Clone, Serialize)]
pub struct ReproductionReport {
    pub boxes: Vec<SearchBox>,
    pub found: Vec<SolutionTuple>,
    /// Corrected table tuples the search found.
    pub matched: Vec<SolutionTuple>,
    /// Corrected table tuples the search did not find.
    pub missing: Vec<SolutionTuple>,
    /// Found tuples absent from the tables.
    pub extra: Vec<SolutionTuple>,
    /// Printed rows that fail verification, paired with their correction and whether the search found it.
    pub errata: Vec<(RawRow, SolutionTuple, bool)>,
}

impl ReproductionReport {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn slice(&self, n: u32) -> Vec<&SolutionTuple> {
        self.found.iter().filter(|t| t.n == n).collect()
    }
}

pub fn table_reproduction(y_max_cube: u64, y_max_other: u64) -> Result<ReproductionReport> {
    let cube = SearchBox::new(10, 4, 3, 1, [3], y_max_cube)?;
    let other = SearchBox::new(10, 4, 3, 1, 4..=12, y_max_other)?;
    let mut found = brute_force_search(&cube)?;
    found.extend(brute_force_search(&other)?);
    found.sort();

    let in_box = |t: &SolutionTuple| cube.contains(t) || other.contains(t);
    let golden: Vec<_> = corrected_golden_set().into_iter().filter(in_box).collect();
    let found_set: BTreeSet<_> = found.iter().cloned().collect();
    let golden_set: BTreeSet<_> = golden.iter().cloned().collect();
    let matched = golden.iter().filter(|t| found_set.contains(t)).cloned().collect();
    let missing = golden.iter().filter(|t| !found_set.contains(t)).cloned().collect();
    let extra = found.iter().filter(|t| !golden_set.contains(t)).cloned().collect();
    let errata = golden_rows()
        .filter_map(|r| r.correction.map(|_| (r.row, r.corrected())))
        .map(|(row, c)| {
            let hit = found_set.contains(&c);
            (row, c, hit)
        })
        .collect();
    Ok(ReproductionReport { boxes: vec![cube, other], found, matched, missing, extra, errata })
}

/// The full reproduction box: y ≤ 270000 for n = 3, y ≤ 5000 for 4 ≤ n ≤ 12.
pub fn full_table_reproduction() -> Result<ReproductionReport> {
    table_reproduction(270_000, 5_000)
}
