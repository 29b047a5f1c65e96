use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field: either the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarField {
    Rationals,
    PrimeField(u64),
}

/// An exact field element.
///
/// Over a prime field the value is always an integer in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(BigRational);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub(crate) fn from_rational_unchecked(q: BigRational) -> Self {
        Scalar(q)
    }
}

impl ScalarField {
    pub fn rationals() -> Self {
        ScalarField::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(ScalarField::PrimeField(p))
        } else {
            Err(Error::Schema(format!("characteristic {p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarField::Rationals => 0,
            ScalarField::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar(BigRational::from_integer(v.clone())),
            ScalarField::PrimeField(p) => {
                Scalar(BigRational::from_integer(v.mod_floor(&BigInt::from(*p))))
            }
        }
    }

    /// Maps an arbitrary rational into the field. Fails over `F_p` when the
    /// denominator is divisible by `p`.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            ScalarField::Rationals => Ok(Scalar(q.clone())),
            ScalarField::PrimeField(p) => {
                let pb = BigInt::from(*p);
                let d = q.denom().mod_floor(&pb);
                if d.is_zero() {
                    return Err(Error::Schema(format!(
                        "rational {q} has no image in F_{p}"
                    )));
                }
                let n = q.numer().mod_floor(&pb);
                let dinv = mod_inverse(d.to_u64().unwrap(), *p);
                let v = (n * BigInt::from(dinv)).mod_floor(&pb);
                Ok(Scalar(BigRational::from_integer(v)))
            }
        }
    }

    fn reduce(&self, q: BigRational) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar(q),
            ScalarField::PrimeField(p) => {
                debug_assert!(q.is_integer());
                Scalar(BigRational::from_integer(
                    q.to_integer().mod_floor(&BigInt::from(*p)),
                ))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(&a.0 - &b.0)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.is_zero() || b.is_zero() {
            return Scalar::zero();
        }
        self.reduce(&a.0 * &b.0)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a.0.clone())
    }

    /// Multiplicative inverse. Panics on zero, which is always a caller bug.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            ScalarField::Rationals => Scalar(a.0.recip()),
            ScalarField::PrimeField(p) => {
                let v = a.0.to_integer().to_u64().unwrap();
                Scalar(BigRational::from_integer(BigInt::from(mod_inverse(v, *p))))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Parses the problem-file spelling: `"QQ"` or `{"prime": p}` handled by
    /// the caller; this covers the string forms `QQ`, `Q`, `GF(p)`, `F_p`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "QQ" || t == "Q" {
            return Ok(ScalarField::Rationals);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix("FF"));
        match inner.and_then(|d| d.parse::<u64>().ok()) {
            Some(p) => ScalarField::prime(p),
            None => Err(Error::Schema(format!("unknown field `{s}`"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ScalarField::Rationals => "QQ".to_string(),
            ScalarField::PrimeField(p) => format!("GF({p})"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = ScalarField::prime(7).unwrap();
        for v in 1..7 {
            let a = f.from_i64(v);
            assert!(f.mul(&a, &f.inv(&a)).is_one());
        }
        assert_eq!(f.from_i64(-1), f.from_i64(6));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(ScalarField::prime(6).is_err());
        assert!(ScalarField::prime(1).is_err());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = ScalarField::prime(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap(), f.from_i64(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(f.from_rational(&fifth).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!(ScalarField::parse("QQ").unwrap(), ScalarField::Rationals);
        assert_eq!(ScalarField::parse("GF(2)").unwrap(), ScalarField::PrimeField(2));
        assert_eq!(ScalarField::parse("F_7").unwrap(), ScalarField::PrimeField(7));
    }
}
