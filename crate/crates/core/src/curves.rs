//! The reduction curves and a bounded search for their S-integral points,
//! S = {5, 13, 17}.
//!
//! * quartic:   X² = 2^m·Y⁴ − N,  N = 5^a1·13^b1·17^c1, exponents in 0..=3
//! * Mordell:   X² = Y³ − A,      A = 2^(2m)·5^a1·13^b1·17^c1, exponents in 0..=5
//! * exponent 7 cubic: V² = U³ − 35dD·U² + 147d²D²·U − 49d³D³
//!
//! Point search is exhaustive only inside the given bounds: denominators are
//! S-units with every exponent ≤ `denom_bound`, numerators are bounded by
//! `numer_bound` in absolute value. Points are reported up to X → −X.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_perfect_power, is_perfect_square, is_square_int, Residue, SExponents};
use crate::error::{Error, Result};
use crate::lehmer::{is_lehmer_pair, LehmerInstance};
use crate::solution::SolutionTuple;

/// A rational number whose denominator is supported on {5, 13, 17}, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SRational {
    pub num: BigInt,
    pub den: SExponents,
}

impl SRational {
    pub fn new(num: BigInt, den: SExponents) -> Self {
        let mut num = num;
        let mut den = den;
        let mut reduce = |e: &mut u32, p: u32| {
            let p = BigInt::from(p);
            while *e > 0 && !num.is_zero() && (&num % &p).is_zero() {
                num /= &p;
                *e -= 1;
            }
            if num.is_zero() {
                *e = 0;
            }
        };
        reduce(&mut den.e5, 5);
        reduce(&mut den.e13, 13);
        reduce(&mut den.e17, 17);
        SRational { num, den }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        SRational { num: n.into(), den: SExponents::ONE }
    }

    pub fn denominator(&self) -> BigUint {
        self.den.value()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::from(self.denominator()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn sort_key(&self) -> (BigUint, BigInt) {
        (self.denominator(), self.num.clone())
    }
}

impl Serialize for SRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for SRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

/// A point (first, second) on one of the curves: (X, Y) for the quartic and
/// Mordell curves, (U, V) for the cubic ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CurvePoint {
    pub first: SRational,
    pub second: SRational,
}

impl CurvePoint {
    pub fn new(first: SRational, second: SRational) -> Self {
        CurvePoint { first, second }
    }

    fn sort_key(&self) -> ((BigUint, BigInt), (BigUint, BigInt)) {
        (self.second.sort_key(), self.first.sort_key())
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

fn sort_points(points: &mut [CurvePoint]) {
    points.sort_by_key(|p| p.sort_key());
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub denom_bound: u32,
    pub numer_bound: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { denom_bound: 2, numer_bound: 10_000 }
    }
}

fn coprime_to(n: u64, den: SExponents) -> bool {
    (den.e5 == 0 || !n.is_multiple_of(5)) && (den.e13 == 0 || !n.is_multiple_of(13)) && (den.e17 == 0 || !n.is_multiple_of(17))
}

// Quartic curves -----------------------------------------------------------

/// X² = 2^m·Y⁴ − N with N = 5^a1·13^b1·17^c1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuarticCurve {
    pub m: u32,
    pub exps: SExponents,
}

impl QuarticCurve {
    pub fn constant(&self) -> BigUint {
        self.exps.value()
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        let x = p.first.to_rational();
        let y = p.second.to_rational();
        let two_m = BigRational::from_integer(BigInt::from(1u32 << self.m));
        let n = BigRational::from_integer(BigInt::from(self.constant()));
        &x * &x == two_m * y.pow(4) - n
    }
}

impl fmt::Display for QuarticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^2 = {}Y^4 - {}", 1u32 << self.m, self.constant())
    }
}

/// The 128 curves a1, b1, c1 ∈ 0..=3, m ∈ {0, 1}, ordered by (m, a1, b1, c1).
pub fn enumerate_quartic_curves() -> Vec<QuarticCurve> {
    (0..=1)
        .flat_map(|m| SExponents::all_up_to(3).into_iter().map(move |exps| QuarticCurve { m, exps }))
        .collect()
}

pub fn s_points_quartic(curve: &QuarticCurve, bounds: SearchBounds) -> Vec<CurvePoint> {
    let n = curve.constant();
    let ymax = bounds.numer_bound;
    let limit = BigUint::from(ymax).pow(4) << curve.m;
    let mut points = Vec::new();
    for z in SExponents::all_up_to(bounds.denom_bound) {
        let zv = z.value();
        let nz4 = &n * zv.pow(4);
        if nz4 > limit {
            continue;
        }
        let nz4_res = Residue::from_biguint(&nz4);
        let two_m = Residue::from_u64(1 << curve.m);
        for y in 1..=ymax {
            if !coprime_to(y, z) {
                continue;
            }
            if !(two_m * Residue::from_u64(y).pow(4) - nz4_res).may_be_square() {
                continue;
            }
            let rhs = BigInt::from(BigUint::from(y).pow(4) << curve.m) - BigInt::from(nz4.clone());
            if let Some(x) = is_square_int(&rhs) {
                points.push(CurvePoint::new(
                    SRational::new(BigInt::from(x), z.scale(2)),
                    SRational::new(BigInt::from(y), z),
                ));
            }
        }
    }
    sort_points(&mut points);
    points
}

/// Recovers (x, y, a, b, c, m, 4t) from X = x/z², Y = y^t/z.
pub fn backsubstitute_quartic(
    point: &CurvePoint,
    curve: &QuarticCurve,
    t: u32,
) -> Option<SolutionTuple> {
    let (x, y) = (&point.first, &point.second);
    if x.is_zero() || y.is_zero() || t == 0 {
        return None;
    }
    let z = y.den;
    if x.den != z.scale(2) {
        return None;
    }
    let (xn, yn) = (x.num.magnitude(), y.num.magnitude());
    if !xn.gcd(yn).is_one() {
        return None;
    }
    let root = is_perfect_power(yn, t)?;
    let e = curve.exps + z.scale(4);
    SolutionTuple::new(xn.clone(), root, e.e5, e.e13, e.e17, curve.m, 4 * t).ok()
}

/// The curve and point a solution with 4 | n lands on.
pub fn quartic_point_of(sol: &SolutionTuple) -> Option<(QuarticCurve, CurvePoint)> {
    if !sol.n.is_multiple_of(4) {
        return None;
    }
    let t = sol.n / 4;
    let e = sol.exponents();
    let exps = SExponents::new(e.e5 % 4, e.e13 % 4, e.e17 % 4);
    let z = SExponents::new(e.e5 / 4, e.e13 / 4, e.e17 / 4);
    let curve = QuarticCurve { m: sol.m, exps };
    let point = CurvePoint::new(
        SRational::new(BigInt::from(sol.x.clone()), z.scale(2)),
        SRational::new(BigInt::from(sol.y.pow(t)), z),
    );
    Some((curve, point))
}

// Mordell curves -----------------------------------------------------------

/// X² = Y³ − A with A = 2^(2m)·5^a1·13^b1·17^c1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MordellCurve {
    pub m: u32,
    pub exps: SExponents,
}

impl MordellCurve {
    pub fn constant(&self) -> BigUint {
        self.exps.value() << (2 * self.m)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        let x = p.first.to_rational();
        let y = p.second.to_rational();
        let a = BigRational::from_integer(BigInt::from(self.constant()));
        &x * &x == y.pow(3) - a
    }
}

impl fmt::Display for MordellCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^2 = Y^3 - {}", self.constant())
    }
}

/// The 432 curves a1, b1, c1 ∈ 0..=5, m ∈ {0, 1}, ordered by (m, a1, b1, c1).
pub fn enumerate_mordell_curves() -> Vec<MordellCurve> {
    (0..=1)
        .flat_map(|m| SExponents::all_up_to(5).into_iter().map(move |exps| MordellCurve { m, exps }))
        .collect()
}

pub fn s_points_mordell(curve: &MordellCurve, bounds: SearchBounds) -> Vec<CurvePoint> {
    let a = curve.constant();
    let ymax = bounds.numer_bound;
    let limit = BigUint::from(ymax).pow(3);
    let mut points = Vec::new();
    for z in SExponents::all_up_to(bounds.denom_bound) {
        let az6 = &a * z.value().pow(6);
        if az6 > limit {
            continue;
        }
        let az6_res = Residue::from_biguint(&az6);
        for y in 1..=ymax {
            if !coprime_to(y, z) {
                continue;
            }
            if !(Residue::from_u64(y).pow(3) - az6_res).may_be_square() {
                continue;
            }
            let rhs = BigInt::from(BigUint::from(y).pow(3)) - BigInt::from(az6.clone());
            if let Some(x) = is_square_int(&rhs) {
                points.push(CurvePoint::new(
                    SRational::new(BigInt::from(x), z.scale(3)),
                    SRational::new(BigInt::from(y), z.scale(2)),
                ));
            }
        }
    }
    sort_points(&mut points);
    points
}

/// Recovers (x, y, a, b, c, m, 3) from X = 2^m·x/z³, Y = 2^m·y/z².
pub fn backsubstitute_mordell(point: &CurvePoint, curve: &MordellCurve) -> Option<SolutionTuple> {
    let (x, y) = (&point.first, &point.second);
    if x.is_zero() || y.is_zero() {
        return None;
    }
    let z = SExponents::new(y.den.e5 / 2, y.den.e13 / 2, y.den.e17 / 2);
    if y.den != z.scale(2) || x.den != z.scale(3) {
        return None;
    }
    let (xn, yn) = (x.num.magnitude(), y.num.magnitude());
    let two_m = BigUint::one() << curve.m;
    let (xq, xr) = xn.div_rem(&two_m);
    let (yq, yr) = yn.div_rem(&two_m);
    if !xr.is_zero() || !yr.is_zero() || !xq.gcd(&yq).is_one() {
        return None;
    }
    let e = curve.exps + z.scale(6);
    SolutionTuple::new(xq, yq, e.e5, e.e13, e.e17, curve.m, 3).ok()
}

/// The curve and point a solution with n = 3 lands on.
pub fn mordell_point_of(sol: &SolutionTuple) -> Option<(MordellCurve, CurvePoint)> {
    if sol.n != 3 {
        return None;
    }
    let e = sol.exponents();
    let exps = SExponents::new(e.e5 % 6, e.e13 % 6, e.e17 % 6);
    let z = SExponents::new(e.e5 / 6, e.e13 / 6, e.e17 / 6);
    let curve = MordellCurve { m: sol.m, exps };
    let point = CurvePoint::new(
        SRational::new(BigInt::from(&sol.x << sol.m), z.scale(3)),
        SRational::new(BigInt::from(&sol.y << sol.m), z.scale(2)),
    );
    Some((curve, point))
}

// Exponent-7 cubic curves -------------------------------------------------

/// Which part of z the integer v absorbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum P7Family {
    /// v = 1: integral points.
    VOne,
    /// v = 5^a1: {5}-integral points.
    VFivePower,
    /// v = 17^c1: {17}-integral points.
    VSeventeenPower,
    /// v = 5^a1·17^c1: {5, 17}-integral points.
    VFiveSeventeenPower,
}

impl P7Family {
    pub const ALL: [P7Family; 4] = [
        P7Family::VOne,
        P7Family::VFivePower,
        P7Family::VSeventeenPower,
        P7Family::VFiveSeventeenPower,
    ];

    /// Primes allowed in denominators of points.
    pub fn s_subset(self) -> &'static [u64] {
        match self {
            P7Family::VOne => &[],
            P7Family::VFivePower => &[5],
            P7Family::VSeventeenPower => &[17],
            P7Family::VFiveSeventeenPower => &[5, 17],
        }
    }

    /// Which of 5, 13, 17 may appear in D (the rest sit in v).
    fn d_primes(self) -> [bool; 3] {
        match self {
            P7Family::VOne => [true, true, true],
            P7Family::VFivePower => [false, true, true],
            P7Family::VSeventeenPower => [true, true, false],
            P7Family::VFiveSeventeenPower => [false, true, false],
        }
    }

    fn v_matches(self, v: SExponents) -> bool {
        v.e13 == 0
            && match self {
                P7Family::VOne => v.e5 == 0 && v.e17 == 0,
                P7Family::VFivePower => v.e5 >= 1 && v.e17 == 0,
                P7Family::VSeventeenPower => v.e5 == 0 && v.e17 >= 1,
                P7Family::VFiveSeventeenPower => v.e5 >= 1 && v.e17 >= 1,
            }
    }

    pub fn name(self) -> &'static str {
        match self {
            P7Family::VOne => "v=1",
            P7Family::VFivePower => "v=5^a",
            P7Family::VSeventeenPower => "v=17^c",
            P7Family::VFiveSeventeenPower => "v=5^a*17^c",
        }
    }
}

impl std::str::FromStr for P7Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        P7Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown curve family {s:?}")))
    }
}

/// V² = U³ + c2·U² + c1·U + c0 with (c2, c1, c0) = (−35dD, 147d²D², −49d³D³).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicCurve {
    pub d: u64,
    pub family: P7Family,
    pub sign: i32,
    pub m: u32,
    /// Odd part of |D| as exponents of 5, 13, 17 (each 0 or 1).
    pub d_exps: SExponents,
}

impl CubicCurve {
    pub fn big_d(&self) -> BigInt {
        let mag = BigInt::from(self.d_exps.value() << self.m);
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }

    pub fn coefficients(&self) -> (BigInt, BigInt, BigInt) {
        let d = BigInt::from(self.d);
        let dd = &d * self.big_d();
        (-(&dd * BigInt::from(35)), dd.pow(2) * BigInt::from(147), -(dd.pow(3) * BigInt::from(49)))
    }

    pub fn rhs(&self, u: &BigRational) -> BigRational {
        let (c2, c1, c0) = self.coefficients();
        let r = |c: BigInt| BigRational::from_integer(c);
        u.pow(3) + r(c2) * u.pow(2) + r(c1) * u + r(c0)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        let v = p.second.to_rational();
        &v * &v == self.rhs(&p.first.to_rational())
    }
}

impl fmt::Display for CubicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c2, c1, c0) = self.coefficients();
        write!(
            f,
            "[{} d={} D={}] V^2 = U^3 + ({c2})U^2 + ({c1})U + ({c0})",
            self.family.name(),
            self.d,
            self.big_d()
        )
    }
}

/// Curves of one family: d ∈ {5, 85}, D = ±2^m·5^i·13^j·17^k over the primes the family allows.
pub fn enumerate_p7_curves(family: P7Family) -> Vec<CubicCurve> {
    let allowed = family.d_primes();
    let range = |ok: bool| if ok { 0..=1 } else { 0..=0 };
    let mut out = Vec::new();
    for d in [5u64, 85] {
        for m in 0..=1 {
            for i in range(allowed[0]) {
                for j in range(allowed[1]) {
                    for k in range(allowed[2]) {
                        for sign in [1, -1] {
                            let d_exps = SExponents::new(i, j, k);
                            out.push(CubicCurve { d, family, sign, m, d_exps });
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn s_points_cubic(curve: &CubicCurve, bounds: SearchBounds) -> Vec<CurvePoint> {
    let s = curve.family.s_subset();
    let bound = |p: u64| if s.contains(&p) { bounds.denom_bound } else { 0 };
    let (c2, c1, c0) = curve.coefficients();
    let b = bounds.numer_bound as i64;
    let mut points = Vec::new();
    for w in SExponents::box_up_to([bound(5), 0, bound(17)]) {
        let wv = BigInt::from(w.value());
        let (k2, k1, k0) = (&c2 * wv.pow(2), &c1 * wv.pow(4), &c0 * wv.pow(6));
        let (r2, r1, r0) = (
            Residue::from_bigint(&k2),
            Residue::from_bigint(&k1),
            Residue::from_bigint(&k0),
        );
        for u in -b..=b {
            if !coprime_to(u.unsigned_abs(), w) || (u == 0 && !w.is_one()) {
                continue;
            }
            let ru = Residue::from_i64(u);
            if !(ru.pow(3) + r2 * ru.pow(2) + r1 * ru + r0).may_be_square() {
                continue;
            }
            let ub = BigInt::from(u);
            let rhs = ub.pow(3) + &k2 * ub.pow(2) + &k1 * &ub + &k0;
            if let Some(v) = is_square_int(&rhs) {
                points.push(CurvePoint::new(
                    SRational::new(ub, w.scale(2)),
                    SRational::new(BigInt::from(v), w.scale(3)),
                ));
            }
        }
    }
    sort_points(&mut points);
    points
}

/// How a cubic-curve point fails to give a solution with n = 7.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CubicRejection {
    ZeroOrdinate,
    /// U / 7D is not the square of a rational u/v with v of the family's shape.
    NotSquareRatio,
    VOutsideFamily,
    NotLehmerPair,
    /// The seventh power does not reduce to an S-unit z (or is not divisible by 2^(3m)).
    ZNotSUnit,
    NotASolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CubicOutcome {
    Rejected(CubicRejection),
    Solution(SolutionTuple),
}

/// Reads (u, v) off X = U/(7D) = u²/v² and rebuilds x + z√−d = (u + v√−d)^7 / 2^(3m).
pub fn backsubstitute_cubic(point: &CurvePoint, curve: &CubicCurve) -> CubicOutcome {
    use CubicOutcome::Rejected;
    if point.second.is_zero() {
        return Rejected(CubicRejection::ZeroOrdinate);
    }
    let x_ratio = point.first.to_rational() / BigRational::from_integer(curve.big_d() * 7);
    if !x_ratio.is_positive() {
        return Rejected(CubicRejection::NotSquareRatio);
    }
    let (Some(u), Some(v)) = (
        is_perfect_square(x_ratio.numer().magnitude()),
        is_perfect_square(x_ratio.denom().magnitude()),
    ) else {
        return Rejected(CubicRejection::NotSquareRatio);
    };
    match SExponents::from_value(&v) {
        Some(ve) if curve.family.v_matches(ve) => {}
        _ => return Rejected(CubicRejection::VOutsideFamily),
    }
    let (Some(u), Some(v)) = (u.to_u64(), v.to_u64()) else {
        return Rejected(CubicRejection::NotLehmerPair);
    };
    if !is_lehmer_pair(u, v, curve.d, curve.m) {
        return Rejected(CubicRejection::NotLehmerPair);
    }
    let inst = LehmerInstance::new(u, v, curve.d, curve.m).expect("validated");
    let (re, im) = inst.expand(7);
    let scale = BigInt::one() << (3 * curve.m);
    let (xq, xr) = re.magnitude().div_rem(scale.magnitude());
    let (zq, zr) = im.magnitude().div_rem(scale.magnitude());
    if !xr.is_zero() || !zr.is_zero() || zq.is_zero() {
        return Rejected(CubicRejection::ZNotSUnit);
    }
    let Some(z) = SExponents::from_value(&zq) else {
        return Rejected(CubicRejection::ZNotSUnit);
    };
    let e = SExponents::from_value(&BigUint::from(curve.d)).expect("d is 5 or 85") + z.scale(2);
    let y = inst.norm().expect("Lehmer pair has integral norm");
    match SolutionTuple::new(xq, BigUint::from(y), e.e5, e.e13, e.e17, curve.m, 7) {
        Ok(sol) => CubicOutcome::Solution(sol),
        Err(_) => Rejected(CubicRejection::NotASolution),
    }
}

/// Sweeps every curve in parallel, keeping the input order of curves.
pub fn sweep<C, F>(curves: &[C], search: F) -> Vec<(C, Vec<CurvePoint>)>
where
    C: Clone + Send + Sync,
    F: Fn(&C) -> Vec<CurvePoint> + Send + Sync,
{
    curves.par_iter().map(|c| (c.clone(), search(c))).collect()
}
