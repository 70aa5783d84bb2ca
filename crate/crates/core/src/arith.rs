//! Exact integer utilities shared by the rest of the crate.
//!
//! Everything here works on arbitrary-precision integers; the `u128` and
//! residue helpers are fast paths that never change a result.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// The prime set S = {5, 13, 17}.
pub const S_PRIMES: [u64; 3] = [5, 13, 17];

/// Squarefree parts of 5^a 13^b 17^c.
pub const ADMISSIBLE_D: [u64; 8] = [1, 5, 13, 17, 65, 85, 221, 1105];

/// Exponents of 5, 13 and 17.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct SExponents {
    pub e5: u32,
    pub e13: u32,
    pub e17: u32,
}

impl SExponents {
    pub const ONE: SExponents = SExponents { e5: 0, e13: 0, e17: 0 };

    pub fn new(e5: u32, e13: u32, e17: u32) -> Self {
        SExponents { e5, e13, e17 }
    }

    /// 5^e5 · 13^e13 · 17^e17.
    pub fn value(&self) -> BigUint {
        BigUint::from(5u32).pow(self.e5)
            * BigUint::from(13u32).pow(self.e13)
            * BigUint::from(17u32).pow(self.e17)
    }

    /// Inverse of [`SExponents::value`]; `None` unless `n` is supported on S.
    pub fn from_value(n: &BigUint) -> Option<Self> {
        if n.is_zero() {
            return None;
        }
        let (exps, cofactor) = s_factor(n, &S_PRIMES);
        cofactor.is_one().then(|| SExponents {
            e5: exps.get(&5).copied().unwrap_or(0),
            e13: exps.get(&13).copied().unwrap_or(0),
            e17: exps.get(&17).copied().unwrap_or(0),
        })
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn scale(&self, k: u32) -> Self {
        SExponents::new(self.e5 * k, self.e13 * k, self.e17 * k)
    }

    /// All vectors with every component in `0..=bound`, in lexicographic order.
    pub fn all_up_to(bound: u32) -> Vec<SExponents> {
        Self::box_up_to([bound, bound, bound])
    }

    /// All vectors with components bounded by `bounds` (for 5, 13, 17).
    pub fn box_up_to(bounds: [u32; 3]) -> Vec<SExponents> {
        let mut out = Vec::new();
        for e5 in 0..=bounds[0] {
            for e13 in 0..=bounds[1] {
                for e17 in 0..=bounds[2] {
                    out.push(SExponents::new(e5, e13, e17));
                }
            }
        }
        out
    }
}

impl Add for SExponents {
    type Output = SExponents;
    fn add(self, rhs: Self) -> Self {
        SExponents::new(self.e5 + rhs.e5, self.e13 + rhs.e13, self.e17 + rhs.e17)
    }
}

/// 5^a 13^b 17^c written as d · z² with d squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeSplit {
    pub d: u64,
    pub z: BigUint,
    pub source: SExponents,
}

/// Exact square root, or `None` if `n` is not a perfect square.
pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    if !square_mod_64(n.iter_u64_digits().next().unwrap_or(0)) {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Same as [`is_perfect_square`] for a signed value; negatives are never squares.
pub fn is_square_int(n: &BigInt) -> Option<BigUint> {
    match n.sign() {
        Sign::Minus => None,
        Sign::NoSign => Some(BigUint::zero()),
        Sign::Plus => is_perfect_square(n.magnitude()),
    }
}

pub fn is_square_u128(n: u128) -> Option<u128> {
    if !square_mod_64(n as u64) {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

fn square_mod_64(low: u64) -> bool {
    // bit i set iff i is a square mod 64
    const MASK: u64 = 0x0202_0212_0203_0213;
    MASK >> (low & 63) & 1 == 1
}

/// Exact k-th root of `n`, or `None` if `n` is not a perfect k-th power.
pub fn is_perfect_power(n: &BigUint, k: u32) -> Option<BigUint> {
    assert!(k >= 1, "root index must be positive");
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

/// Jacobi symbol (a | n) for odd positive n; 0 when gcd(a, n) > 1.
pub fn jacobi_symbol(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "Jacobi symbol needs an odd modulus, got {n}");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Splits `n` into its S-part (as an exponent map) and a cofactor coprime to S.
pub fn s_factor(n: &BigUint, primes: &[u64]) -> (BTreeMap<u64, u32>, BigUint) {
    assert!(!n.is_zero(), "s_factor needs a positive argument");
    let mut exps = BTreeMap::new();
    let mut rest = n.clone();
    for &p in primes {
        let p_big = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            exps.insert(p, e);
        }
    }
    (exps, rest)
}

pub fn squarefree_split(exps: SExponents) -> SquarefreeSplit {
    let d = 5u64.pow(exps.e5 % 2) * 13u64.pow(exps.e13 % 2) * 17u64.pow(exps.e17 % 2);
    let z = SExponents::new(exps.e5 / 2, exps.e13 / 2, exps.e17 / 2).value();
    SquarefreeSplit { d, z, source: exps }
}

/// Writes `w = v² · d` with `d` squarefree (trial division; `w` is small here).
pub fn square_times_squarefree(w: u64) -> (u64, u64) {
    assert!(w > 0);
    let (mut v, mut d, mut rest) = (1u64, 1u64, w);
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        v *= p.pow(e / 2);
        d *= p.pow(e % 2);
        p += 1;
    }
    (v, d * rest)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && square_times_squarefree(n).0 == 1
}

/// Deterministic trial-division primality test; fine for the small primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime(p)).collect()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}

// Residue sieve ------------------------------------------------------------

const M1: u64 = 64 * 63 * 65;
const M2: u64 = 11 * 17 * 19 * 23 * 29;

struct SquareTables {
    t1: Vec<bool>,
    t2: Vec<bool>,
}

fn tables() -> &'static SquareTables {
    static TABLES: OnceLock<SquareTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let build = |m: u64| {
            let mut t = vec![false; m as usize];
            for i in 0..m {
                t[(i * i % m) as usize] = true;
            }
            t
        };
        SquareTables { t1: build(M1), t2: build(M2) }
    })
}

/// An integer reduced modulo two fixed composite moduli, used to reject
/// non-squares before any big-integer work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue(u64, u64);

impl Residue {
    pub fn from_u64(n: u64) -> Self {
        Residue(n % M1, n % M2)
    }

    pub fn from_i64(n: i64) -> Self {
        Residue(n.rem_euclid(M1 as i64) as u64, n.rem_euclid(M2 as i64) as u64)
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        Residue(
            (n % M1).to_u64().expect("residue fits"),
            (n % M2).to_u64().expect("residue fits"),
        )
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let r = |m: u64| {
            let m = BigInt::from(m);
            n.mod_floor(&m).to_u64().expect("residue fits")
        };
        Residue(r(M1), r(M2))
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Residue(1 % M1, 1 % M2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// False only if the integer is certainly not a square.
    pub fn may_be_square(self) -> bool {
        let t = tables();
        t.t1[self.0 as usize] && t.t2[self.1 as usize]
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Self) -> Self {
        Residue((self.0 + rhs.0) % M1, (self.1 + rhs.1) % M2)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Self) -> Self {
        Residue((self.0 + M1 - rhs.0) % M1, (self.1 + M2 - rhs.1) % M2)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Self {
        Residue(0, 0) - self
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Self) -> Self {
        Residue(self.0 * rhs.0 % M1, self.1 * rhs.1 % M2)
    }
}
