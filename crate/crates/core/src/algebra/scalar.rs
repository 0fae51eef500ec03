//! Exact coefficient fields: the rationals and prime fields `GF(p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus for prime-field mode.
pub const DEFAULT_PRIME: u64 = 32003;

/// Descriptor of a coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Builds a prime field, rejecting composite or out-of-range moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..(1 << 32)).contains(&p) || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Modular {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let r = ((n % &m) + &m) % &m;
                Scalar::Modular {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den` in this field; `None` when `den` vanishes.
    pub fn from_fraction(self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        d.inv().map(|d| n.mul(&d))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 4 {
        return p >= 2;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element in canonical form.
///
/// Rationals are kept reduced with positive denominator (guaranteed by
/// `BigRational`); residues live in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                let s = a + b;
                Scalar::Modular {
                    value: if s >= *p { s - p } else { s },
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch: {:?} vs {:?}", self.field(), other.field()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { value: a, modulus: p }, Scalar::Modular { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Modular {
                    value: (a * b) % p,
                    modulus: *p,
                }
            }
            _ => panic!("scalar field mismatch: {:?} vs {:?}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// Sign used when printing: residues above `p/2` print as negatives.
    pub fn is_negative_display(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Modular { value, modulus } => *value > modulus / 2,
        }
    }

    /// Absolute value for printing, as a decimal string (`n` or `n/d`).
    pub(crate) fn abs_display(&self) -> String {
        match self {
            Scalar::Rational(q) => {
                let a = q.abs();
                if a.is_integer() {
                    a.numer().to_string()
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                }
            }
            Scalar::Modular { value, modulus } => {
                if *value > modulus / 2 {
                    (modulus - value).to_string()
                } else {
                    value.to_string()
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative_display() {
            write!(f, "-{}", self.abs_display())
        } else {
            write!(f, "{}", self.abs_display())
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic_matches_integer_oracle() {
        let f = Field::prime(5).unwrap();
        // 2 * 3 = 6 = 1 mod 5
        assert!(f.from_i64(2).mul(&f.from_i64(3)).is_one());
        for a in 1..5i64 {
            let inv = f.from_i64(a).inv().unwrap();
            assert!(inv.mul(&f.from_i64(a)).is_one());
        }
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(matches!(Field::prime(32004), Err(Error::NonPrimeModulus(32004))));
        assert!(Field::prime(32003).is_ok());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn rationals_are_canonical() {
        let f = Field::Rationals;
        let half = f.from_fraction(&BigInt::from(2), &BigInt::from(-4)).unwrap();
        assert_eq!(half.to_string(), "-1/2");
        assert!(half.add(&half).add(&f.one()).is_zero());
    }

    #[test]
    fn display_uses_symmetric_residues() {
        let f = Field::Prime(7);
        assert_eq!(f.from_i64(-2).to_string(), "-2");
        assert_eq!(f.from_i64(3).to_string(), "3");
    }
}
