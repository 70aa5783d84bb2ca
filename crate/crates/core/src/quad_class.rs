//! Class numbers of imaginary quadratic fields via reduced binary quadratic
//! forms, and representations 2^m·y = u² + d·v².

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_u64, is_square_u128, is_squarefree};
use crate::error::{Error, Result};

/// The form a·x² + b·xy + c·y².
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }
}

/// A solution of u² + d·v² = 2^m·y with gcd(u, d·v) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Representation {
    pub u: u64,
    pub v: u64,
    pub d: u64,
    pub m: u32,
    pub y: u64,
}

/// Fundamental discriminant of Q(√−d).
pub fn discriminant_of(d: u64) -> Result<i64> {
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let d = d as i64;
    Ok(if d % 4 == 3 { -d } else { -4 * d })
}

/// All reduced primitive positive-definite forms of discriminant `disc`, sorted.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadraticForm>> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(disc));
    }
    let n = -disc;
    let mut forms = Vec::new();
    // reduced forms have 3a² ≤ |disc|
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadraticForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                forms.push(f);
            }
        }
        a += 1;
    }
    forms.sort();
    Ok(forms)
}

/// h(−d), the class number of Q(√−d).
pub fn class_number(d: u64) -> Result<u64> {
    Ok(reduced_forms(discriminant_of(d)?)?.len() as u64)
}

/// Every (u, v) with u, v ≥ 1, u² + d·v² = 2^m·y and gcd(u, d·v) = 1, ordered by u.
pub fn represent(y: u64, d: u64, m: u32) -> Vec<Representation> {
    let target = (y as u128) << m;
    let mut out = Vec::new();
    let mut v: u64 = 1;
    loop {
        let dv2 = d as u128 * v as u128 * v as u128;
        if dv2 >= target {
            break;
        }
        if let Some(u) = is_square_u128(target - dv2) {
            let u = u as u64;
            if gcd_u64(u, d * v) == 1 {
                out.push(Representation { u, v, d, m, y });
            }
        }
        v += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ADMISSIBLE_D;
    use std::collections::BTreeSet;

    /// Gauss reduction, written independently of `reduced_forms`.
    fn reduce(mut f: (i64, i64, i64)) -> (i64, i64, i64) {
        loop {
            let (a, b, c) = f;
            if b > a || b <= -a {
                // translate b into (-a, a]
                let two_a = 2 * a;
                let mut k = (a - b).div_euclid(two_a);
                if b + k * two_a <= -a {
                    k += 1;
                }
                let nb = b + k * two_a;
                let nc = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
                f = (a, nb, nc);
            } else if a > c {
                f = (c, -b, a);
            } else if a == c && b < 0 {
                f = (a, -b, c);
            } else {
                return f;
            }
        }
    }

    fn class_number_oracle(d: u64) -> usize {
        let disc = discriminant_of(d).unwrap();
        let mut classes = BTreeSet::new();
        for a in 1..=40i64 {
            for b in -a..=a {
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                classes.insert(reduce((a, b, c)));
            }
        }
        classes.len()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant_of(5), Ok(-20));
        assert_eq!(discriminant_of(3), Ok(-3));
        assert_eq!(discriminant_of(221), Ok(-884));
        assert_eq!(discriminant_of(12), Err(Error::NotSquarefree(12)));
    }

    #[test]
    fn reduced_forms_examples() {
        let f = |a, b, c| QuadraticForm::new(a, b, c);
        assert_eq!(reduced_forms(-4).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(reduced_forms(-20).unwrap(), vec![f(1, 0, 5), f(2, 2, 3)]);
        assert_eq!(reduced_forms(-3).unwrap(), vec![f(1, 1, 1)]);
        assert!(reduced_forms(-6).is_err());
        assert!(reduced_forms(5).is_err());
    }

    #[test]
    fn reduced_forms_satisfy_predicates() {
        for d in ADMISSIBLE_D {
            let disc = discriminant_of(d).unwrap();
            for f in reduced_forms(disc).unwrap() {
                assert_eq!(f.discriminant(), disc);
                assert!(f.is_positive_definite() && f.is_reduced() && f.is_primitive());
            }
        }
    }

    #[test]
    fn class_numbers_match_reduction_oracle() {
        assert_eq!(class_number(1), Ok(1));
        assert_eq!(class_number(5), Ok(2));
        for d in ADMISSIBLE_D {
            let h = class_number(d).unwrap();
            assert_eq!(h as usize, class_number_oracle(d), "d = {d}");
            assert!([1, 2, 4, 8, 16].contains(&h), "h(-{d}) = {h}");
        }
    }

    #[test]
    fn represent_examples() {
        let pairs = |y, d, m| {
            represent(y, d, m)
                .into_iter()
                .map(|r| (r.u, r.v))
                .collect::<Vec<_>>()
        };
        assert_eq!(pairs(5, 1, 1), vec![(1, 3), (3, 1)]);
        assert_eq!(pairs(17, 13, 0), vec![(2, 1)]);
        assert_eq!(pairs(3, 5, 1), vec![(1, 1)]);
        assert!(pairs(3, 1, 0).is_empty());
    }

    #[test]
    fn represent_is_exhaustive() {
        for d in ADMISSIBLE_D {
            for m in 0..=1 {
                for y in 1..400u64 {
                    let target = y << m;
                    let mut brute = Vec::new();
                    for u in 1..=target.isqrt() {
                        for v in 1..=target.isqrt() {
                            if u * u + d * v * v == target && gcd_u64(u, d * v) == 1 {
                                brute.push((u, v));
                            }
                        }
                    }
                    let got: Vec<_> = represent(y, d, m).iter().map(|r| (r.u, r.v)).collect();
                    assert_eq!(got, brute, "y={y} d={d} m={m}");
                    for r in represent(y, d, m) {
                        if m == 1 {
                            assert!(r.u % 2 == 1 && r.v % 2 == 1 && r.y % 2 == 1);
                        }
                    }
                }
            }
        }
    }
}
