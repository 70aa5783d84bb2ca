//! The full case analysis: 4 | n through quartic curves, p = 3 through
//! Mordell curves, p = 5 through the Fibonacci/Lucas parametrisation, p = 7
//! through cubic curves, p > 7 through primitive-divisor certificates, and
//! composition up to a bound on n.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_perfect_power, is_prime, ADMISSIBLE_D, S_PRIMES};
use crate::curves::{
    backsubstitute_cubic, backsubstitute_mordell, backsubstitute_quartic, enumerate_mordell_curves,
    enumerate_p7_curves, enumerate_quartic_curves, mordell_point_of, quartic_point_of,
    s_points_cubic, s_points_mordell, s_points_quartic, sweep, CubicCurve, CubicOutcome,
    CurvePoint, MordellCurve, P7Family, QuarticCurve, SearchBounds,
};
use crate::error::{Error, Result};
use crate::fib_lucas::{p5_case_analysis, FinalEquation, P5Analysis};
use crate::lehmer::{
    congruence_criterion, defective_pair_realizable, defective_params, eliminate_p_gt_7,
    CongruenceCheck, DefectiveCheck, DefectiveParams, EliminationCertificate,
};
use crate::solution::SolutionTuple;

pub const MOD4_NOTE: &str =
    "5, 13 and 17 are 1 mod 4, so m >= 2 would force x^2 = 3 mod 4";

/// Whether 2^m is possible at all: only m ∈ {0, 1} survives reduction mod 4.
pub fn mod4_filter(m: u32) -> bool {
    m <= 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseTag {
    Quartic,
    P3,
    P5,
    P7,
    PGt7,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Quartic => "quartic",
            CaseTag::P3 => "p3",
            CaseTag::P5 => "p5",
            CaseTag::P7 => "p7",
            CaseTag::PGt7 => "pgt7",
        }
    }
}

impl std::str::FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [CaseTag::Quartic, CaseTag::P3, CaseTag::P5, CaseTag::P7, CaseTag::PGt7]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    /// The branch produces these solutions (possibly none).
    Solutions(Vec<SolutionTuple>),
    /// An elimination branch proved there is nothing.
    NoSolutions,
    /// An elimination branch was expected to be empty but produced valid tuples.
    Contradiction(Vec<SolutionTuple>),
}

impl Conclusion {
    fn for_elimination(solutions: Vec<SolutionTuple>) -> Self {
        if solutions.is_empty() {
            Conclusion::NoSolutions
        } else {
            Conclusion::Contradiction(solutions)
        }
    }

    pub fn solutions(&self) -> &[SolutionTuple] {
        match self {
            Conclusion::Solutions(s) | Conclusion::Contradiction(s) => s,
            Conclusion::NoSolutions => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CurveRef {
    Quartic(QuarticCurve),
    Mordell(MordellCurve),
    Cubic(CubicCurve),
}

impl std::fmt::Display for CurveRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveRef::Quartic(c) => c.fmt(f),
            CurveRef::Mordell(c) => c.fmt(f),
            CurveRef::Cubic(c) => c.fmt(f),
        }
    }
}

/// A point found by the sweep and the tuples it back-substitutes to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveHit {
    pub curve: CurveRef,
    pub point: CurvePoint,
    pub solutions: Vec<SolutionTuple>,
}

/// An expected tuple pushed through the forward map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifiedPoint {
    pub tuple: SolutionTuple,
    pub curve: CurveRef,
    pub point: CurvePoint,
    pub on_curve: bool,
    pub in_family: bool,
    pub recovered: bool,
}

impl VerifiedPoint {
    pub fn ok(&self) -> bool {
        self.on_curve && self.in_family && self.recovered
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicHit {
    pub curve: CubicCurve,
    pub point: CurvePoint,
    pub outcome: CubicOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P7FamilyReport {
    pub family: P7Family,
    pub curves: usize,
    pub hits: Vec<CubicHit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ReportDetails {
    CurveSweep {
        curves: usize,
        bounds: SearchBounds,
        hits: Vec<CurveHit>,
        verified: Vec<VerifiedPoint>,
    },
    FibonacciLucas {
        analysis: P5Analysis,
        rejected_equations: Vec<FinalEquation>,
    },
    Cubic {
        /// Pairs that would be needed when 𝔏_7 has no primitive divisor (b1 = 0, or a1 = b1 = c1 = 0).
        defective_checks: Vec<DefectiveCheck>,
        congruence_checks: Vec<CongruenceCheck>,
        /// Values of d for which 13 can be a primitive divisor of 𝔏_7.
        d_restriction: Vec<u64>,
        bounds: SearchBounds,
        families: Vec<P7FamilyReport>,
    },
    Certificates(Vec<EliminationCertificate>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub case: CaseTag,
    pub details: ReportDetails,
    pub conclusion: Conclusion,
    pub notes: Vec<String>,
}

impl EliminationReport {
    pub fn solutions(&self) -> &[SolutionTuple] {
        self.conclusion.solutions()
    }
}

fn sorted(mut v: Vec<SolutionTuple>) -> Vec<SolutionTuple> {
    v.sort();
    v.dedup();
    v
}

/// Brings a tuple with 3 | n down to exponent 3 by replacing y with y^(n/3).
fn to_cubic_level(t: &SolutionTuple) -> Option<SolutionTuple> {
    if !t.n.is_multiple_of(3) {
        return None;
    }
    let y = t.y.pow(t.n / 3);
    SolutionTuple::new(t.x.clone(), y, t.a, t.b, t.c, t.m, 3).ok()
}

/// 4 | n: sweep the 128 quartic curves and back-substitute with t = 1..=tmax.
pub fn solve_multiple_of_4(
    bounds: SearchBounds,
    tmax: u32,
    verify: &[SolutionTuple],
) -> EliminationReport {
    let curves = enumerate_quartic_curves();
    let swept = sweep(&curves, |c| s_points_quartic(c, bounds));
    let mut solutions = Vec::new();
    let mut hits = Vec::new();
    for (curve, points) in swept {
        for point in points {
            let found: Vec<_> =
                (1..=tmax).filter_map(|t| backsubstitute_quartic(&point, &curve, t)).collect();
            solutions.extend(found.iter().cloned());
            hits.push(CurveHit { curve: CurveRef::Quartic(curve), point, solutions: found });
        }
    }

    let mut verified = Vec::new();
    for t in verify.iter().filter(|t| t.n % 4 == 0) {
        let (curve, point) = quartic_point_of(t).expect("4 | n");
        let back = backsubstitute_quartic(&point, &curve, t.n / 4);
        let v = VerifiedPoint {
            tuple: t.clone(),
            on_curve: curve.contains(&point),
            in_family: curves.contains(&curve),
            recovered: back.as_ref() == Some(t),
            curve: CurveRef::Quartic(curve),
            point,
        };
        if v.ok() {
            solutions.push(t.clone());
        }
        verified.push(v);
    }

    EliminationReport {
        case: CaseTag::Quartic,
        details: ReportDetails::CurveSweep { curves: curves.len(), bounds, hits, verified },
        conclusion: Conclusion::Solutions(sorted(solutions)),
        notes: vec![format!("back-substitution for t = 1..={tmax}")],
    }
}

/// p = 3: sweep the 432 Mordell curves.
pub fn solve_p3(bounds: SearchBounds, verify: &[SolutionTuple]) -> EliminationReport {
    let curves = enumerate_mordell_curves();
    let swept = sweep(&curves, |c| s_points_mordell(c, bounds));
    let mut solutions = Vec::new();
    let mut hits = Vec::new();
    for (curve, points) in swept {
        for point in points {
            let found: Vec<_> = backsubstitute_mordell(&point, &curve).into_iter().collect();
            solutions.extend(found.iter().cloned());
            hits.push(CurveHit { curve: CurveRef::Mordell(curve), point, solutions: found });
        }
    }

    let mut verified = Vec::new();
    for t in verify.iter().filter_map(to_cubic_level) {
        let (curve, point) = mordell_point_of(&t).expect("n = 3");
        let back = backsubstitute_mordell(&point, &curve);
        let v = VerifiedPoint {
            on_curve: curve.contains(&point),
            in_family: curves.contains(&curve),
            recovered: back.as_ref() == Some(&t),
            tuple: t.clone(),
            curve: CurveRef::Mordell(curve),
            point,
        };
        if v.ok() {
            solutions.push(t);
        }
        verified.push(v);
    }

    EliminationReport {
        case: CaseTag::P3,
        details: ReportDetails::CurveSweep { curves: curves.len(), bounds, hits, verified },
        conclusion: Conclusion::Solutions(sorted(solutions)),
        notes: Vec::new(),
    }
}

pub const DEFAULT_P5_KMAX: u32 = 60;

/// p = 5: every Fibonacci/Lucas parameter match pushed through to a final equation.
pub fn solve_p5(kmax: u32) -> EliminationReport {
    let analysis = p5_case_analysis(kmax);
    let rejected_equations = analysis.rejected_final_equations().into_iter().cloned().collect();
    let solutions = analysis.solutions();
    EliminationReport {
        case: CaseTag::P5,
        conclusion: Conclusion::for_elimination(solutions),
        details: ReportDetails::FibonacciLucas { analysis, rejected_equations },
        notes: vec!["5, 13 and 17 are not 1 or -1 mod 5, so every pair is defective".into()],
    }
}

/// p = 7: defective pairs, the congruence restriction to d ∈ {5, 85}, and the four cubic families.
pub fn solve_p7(bounds: SearchBounds) -> EliminationReport {
    let defective_checks = match defective_params(7) {
        DefectiveParams::Pairs(pairs) => pairs
            .into_iter()
            .map(|pair| DefectiveCheck { pair, realizable: defective_pair_realizable(pair) })
            .collect(),
        _ => Vec::new(),
    };
    let mut congruence_checks = Vec::new();
    let mut d_restriction = BTreeSet::new();
    for q in S_PRIMES {
        for d in ADMISSIBLE_D {
            let passes = congruence_criterion(q, 7, d);
            if passes {
                d_restriction.insert(d);
            }
            congruence_checks.push(CongruenceCheck { q, d, passes });
        }
    }

    let families: Vec<P7FamilyReport> = P7Family::ALL
        .par_iter()
        .map(|&family| {
            let curves = enumerate_p7_curves(family);
            let hits = curves
                .iter()
                .flat_map(|curve| {
                    s_points_cubic(curve, bounds).into_iter().map(move |point| CubicHit {
                        outcome: backsubstitute_cubic(&point, curve),
                        curve: curve.clone(),
                        point,
                    })
                })
                .collect();
            P7FamilyReport { family, curves: curves.len(), hits }
        })
        .collect();

    let solutions = sorted(
        families
            .iter()
            .flat_map(|f| &f.hits)
            .filter_map(|h| match &h.outcome {
                CubicOutcome::Solution(s) => Some(s.clone()),
                CubicOutcome::Rejected(_) => None,
            })
            .collect(),
    );
    let mut notes = Vec::new();
    if defective_checks.iter().any(|c: &DefectiveCheck| c.realizable) {
        notes.push("a defective pair for p = 7 is realizable".into());
    }
    EliminationReport {
        case: CaseTag::P7,
        details: ReportDetails::Cubic {
            defective_checks,
            congruence_checks,
            d_restriction: d_restriction.into_iter().collect(),
            bounds,
            families,
        },
        conclusion: Conclusion::for_elimination(solutions),
        notes,
    }
}

/// p > 7: one certificate per prime 7 < p ≤ pmax.
pub fn solve_p_gt7(pmax: u64) -> Result<EliminationReport> {
    if pmax < 11 {
        return Err(Error::InvalidArgument(format!("pmax = {pmax} < 11")));
    }
    let primes: Vec<u64> = (11..=pmax).filter(|&p| is_prime(p)).collect();
    let certs = primes.par_iter().map(|&p| eliminate_p_gt_7(p)).collect::<Result<Vec<_>>>()?;
    Ok(EliminationReport {
        case: CaseTag::PGt7,
        details: ReportDetails::Certificates(certs),
        conclusion: Conclusion::NoSolutions,
        notes: Vec::new(),
    })
}

fn odd_prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n.is_multiple_of(2) && n > 0 {
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lifts prime-exponent solutions to every n ≤ nmax with an odd prime factor p,
/// keeping those whose y is a perfect (n/p)-th power.
pub fn compose_general_n(prime_solutions: &[SolutionTuple], nmax: u32) -> Vec<SolutionTuple> {
    let mut out = Vec::new();
    for n in 3..=nmax {
        for p in odd_prime_factors(n) {
            let l = n / p;
            for s in prime_solutions.iter().filter(|s| s.n == p) {
                if let Some(root) = is_perfect_power(&s.y, l) {
                    let t = SolutionTuple::new(s.x.clone(), root, s.a, s.b, s.c, s.m, n)
                        .expect("a root of y gives a solution at the higher exponent");
                    out.push(t);
                }
            }
        }
    }
    sorted(out)
}

/// The y = 1 family: 1 + 1 = 2·1^n for every n, and nothing else has y = 1.
pub fn trivial_solutions(nmax: u32) -> Vec<SolutionTuple> {
    (3..=nmax)
        .map(|n| SolutionTuple::new(BigUint::from(1u32), BigUint::from(1u32), 0, 0, 0, 1, n).unwrap())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverConfig {
    pub nmax: u32,
    pub bounds: SearchBounds,
    pub pmax: u64,
    pub p5_kmax: u32,
    /// Expected tuples checked against their predicted curve points.
    pub verify: Vec<SolutionTuple>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            nmax: 16,
            bounds: SearchBounds::default(),
            pmax: 16,
            p5_kmax: DEFAULT_P5_KMAX,
            verify: Vec::new(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nmax < 3 {
            return Err(Error::InvalidArgument(format!("nmax = {} < 3", self.nmax)));
        }
        if self.p5_kmax < 3 {
            return Err(Error::InvalidArgument(format!("kmax = {} < 3", self.p5_kmax)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MasterResult {
    pub solutions: Vec<SolutionTuple>,
    pub reports: Vec<EliminationReport>,
}

impl MasterResult {
    pub fn slice(&self, n: u32) -> Vec<&SolutionTuple> {
        self.solutions.iter().filter(|t| t.n == n).collect()
    }

    pub fn report(&self, case: CaseTag) -> Option<&EliminationReport> {
        self.reports.iter().find(|r| r.case == case)
    }
}

pub fn solve_master(cfg: &SolverConfig) -> Result<MasterResult> {
    cfg.validate()?;
    let ((quartic, p3), (p5, p7)) = rayon::join(
        || rayon::join(|| solve_multiple_of_4(cfg.bounds, cfg.nmax / 4, &cfg.verify), || solve_p3(cfg.bounds, &cfg.verify)),
        || rayon::join(|| solve_p5(cfg.p5_kmax), || solve_p7(cfg.bounds)),
    );
    let pgt7 = solve_p_gt7(cfg.pmax.max(11))?;

    let prime_level: Vec<SolutionTuple> =
        [&p3, &p5, &p7].iter().flat_map(|r| r.solutions().iter().cloned()).collect();
    let mut solutions = compose_general_n(&prime_level, cfg.nmax);
    solutions.extend(quartic.solutions().iter().filter(|t| t.n <= cfg.nmax).cloned());
    solutions.extend(trivial_solutions(cfg.nmax));
    solutions.retain(|t| mod4_filter(t.m));
    let solutions = sorted(solutions);

    Ok(MasterResult { solutions, reports: vec![quartic, p3, p5, p7, pgt7] })
}

/// Which of a, b, c must vanish; `nontrivial` also drops the y = 1 tuples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ExponentConstraint {
    pub a_zero: bool,
    pub b_zero: bool,
    pub c_zero: bool,
    pub nontrivial: bool,
}

pub fn corollary_filter(solutions: &[SolutionTuple], k: ExponentConstraint) -> Vec<SolutionTuple> {
    let one = BigUint::from(1u32);
    solutions
        .iter()
        .filter(|t| {
            (!k.a_zero || t.a == 0)
                && (!k.b_zero || t.b == 0)
                && (!k.c_zero || t.c == 0)
                && (!k.nontrivial || t.y != one)
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::corrected_golden_set;

    fn t(x: u64, y: u64, a: u32, b: u32, c: u32, m: u32, n: u32) -> SolutionTuple {
        SolutionTuple::from_u64(x, y, a, b, c, m, n).unwrap()
    }

    fn small() -> SearchBounds {
        SearchBounds { denom_bound: 1, numer_bound: 2000 }
    }

    #[test]
    fn mod4_examples() {
        assert!(mod4_filter(0));
        assert!(mod4_filter(1));
        assert!(!mod4_filter(2));
        // the reason, checked directly: x² + s ≡ 0 (mod 4) is impossible when s ≡ 1
        for x in 0..4u32 {
            assert_ne!((x * x + 1) % 4, 0);
        }
    }

    #[test]
    fn quartic_branch_examples() {
        let r = solve_multiple_of_4(small(), 3, &[]);
        for e in [t(4, 3, 1, 1, 0, 0, 4), t(36, 7, 1, 1, 1, 0, 4), t(1, 1, 0, 0, 0, 1, 4), t(716, 3, 1, 1, 2, 0, 12)] {
            assert!(r.solutions().contains(&e), "missing {e}");
        }
    }

    #[test]
    fn p3_branch_examples() {
        let r = solve_p3(small(), &[]);
        for e in [t(70, 17, 0, 1, 0, 0, 3), t(2034, 161, 3, 0, 2, 0, 3), t(253, 73, 2, 4, 0, 1, 3)] {
            assert!(r.solutions().contains(&e), "missing {e}");
        }
        assert!(r.solutions().iter().all(|s| s.n == 3));
    }

    #[test]
    fn verification_mode_reaches_rows_beyond_the_sweep() {
        let far = t(188000497, 260473, 8, 4, 0, 1, 3);
        let r = solve_p3(small(), std::slice::from_ref(&far));
        assert!(r.solutions().contains(&far));
        let ReportDetails::CurveSweep { verified, .. } = &r.details else { panic!() };
        assert!(verified.iter().all(VerifiedPoint::ok));
    }

    #[test]
    fn p5_report_lists_solutions_the_reduction_misses() {
        let r = solve_p5(30);
        assert_eq!(
            r.solutions(),
            &[t(19, 3, 3, 0, 0, 1, 5), t(183, 7, 3, 0, 0, 1, 5), t(21417, 47, 3, 0, 1, 1, 5)]
        );
        assert!(matches!(r.conclusion, Conclusion::Contradiction(_)));
        let ReportDetails::FibonacciLucas { rejected_equations, .. } = &r.details else { panic!() };
        let shown: Vec<_> = rejected_equations.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, vec!["x^2 + 9 = 2*5^5"]);
    }

    #[test]
    fn p7_restricts_d_and_counts_families() {
        let r = solve_p7(SearchBounds { denom_bound: 1, numer_bound: 300 });
        let ReportDetails::Cubic { d_restriction, families, defective_checks, .. } = &r.details else {
            panic!()
        };
        assert_eq!(d_restriction, &vec![5, 85]);
        let counts: Vec<_> = families.iter().map(|f| f.curves).collect();
        assert_eq!(counts, vec![64, 32, 32, 16]);
        assert!(defective_checks.iter().all(|c| !c.realizable));
        assert_eq!(r.conclusion, Conclusion::NoSolutions);
    }

    #[test]
    fn p_gt7_certificates() {
        let r = solve_p_gt7(100).unwrap();
        let ReportDetails::Certificates(certs) = &r.details else { panic!() };
        assert_eq!(certs.len(), 21);
        assert!(certs.iter().all(EliminationCertificate::verify));
        let c13 = certs.iter().find(|c| c.p == 13).unwrap();
        assert_eq!(c13.defective_checks, vec![DefectiveCheck { pair: (1, 7), realizable: false }]);
        let c11 = certs.iter().find(|c| c.p == 11).unwrap();
        assert!(c11.defective_checks.is_empty());
        assert!(solve_p_gt7(7).is_err());
    }

    #[test]
    fn composition_examples() {
        let base = [t(716, 81, 1, 1, 2, 0, 3), t(70, 17, 0, 1, 0, 0, 3)];
        let out = compose_general_n(&base, 12);
        assert!(out.contains(&t(716, 9, 1, 1, 2, 0, 6)));
        assert!(out.contains(&t(716, 3, 1, 1, 2, 0, 12)));
        assert!(!out.iter().any(|s| s.n == 9));
    }

    #[test]
    fn master_slices_and_dedup() {
        let cfg = SolverConfig { bounds: small(), ..SolverConfig::default() };
        let res = solve_master(&cfg).unwrap();
        let mut uniq = res.solutions.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), res.solutions.len());
        let nontrivial = |n| -> Vec<SolutionTuple> {
            res.slice(n).into_iter().filter(|s| s.y != BigUint::from(1u32)).cloned().collect()
        };
        assert_eq!(nontrivial(6), vec![t(716, 9, 1, 1, 2, 0, 6)]);
        assert_eq!(nontrivial(12), vec![t(716, 3, 1, 1, 2, 0, 12)]);
        for n in [7, 8, 9, 10, 11, 13, 14, 15, 16] {
            assert!(nontrivial(n).is_empty(), "n = {n}");
        }
        assert_eq!(nontrivial(5).len(), 3);
        assert_eq!(res.slice(16), vec![&t(1, 1, 0, 0, 0, 1, 16)]);
    }

    #[test]
    fn corollary_examples() {
        let golden = corrected_golden_set();
        let k = |a, b, c| ExponentConstraint { a_zero: a, b_zero: b, c_zero: c, nontrivial: true };
        let ab = corollary_filter(&golden, k(true, true, false));
        assert_eq!(ab, vec![t(8, 3, 0, 0, 1, 0, 4), t(31, 5, 0, 0, 2, 1, 4), t(239, 13, 0, 0, 0, 1, 4)]);
        assert_eq!(corollary_filter(&golden, k(true, false, false)).len(), 5);
        let bc = corollary_filter(&golden, k(false, true, true));
        assert_eq!(bc, vec![t(7, 3, 1, 0, 0, 1, 3), t(99, 17, 2, 0, 0, 1, 3), t(239, 13, 0, 0, 0, 1, 4)]);
        for s in corollary_filter(&golden, ExponentConstraint::default()) {
            assert!(golden.contains(&s));
        }
    }
}
