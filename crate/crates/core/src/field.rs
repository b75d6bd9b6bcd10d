//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Every polynomial and matrix in the crate carries a [`FieldSpec`] and
//! stores [`FieldElem`] values. Arithmetic never rounds. Elements of
//! different fields never mix; the checked `try_*` methods report
//! [`FieldError::MixedFields`], the operator impls panic on it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields ({0} and {1})")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field `{0}`: expected `q` or `p:<prime>`")]
    BadFieldSyntax(String),
}

/// The ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// `F_p`, rejecting composite moduli. Trial division; moduli are small in practice.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match *self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                FieldElem::Residue { value: r, modulus: p }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match *self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => {
                let m = BigInt::from(p);
                let r = ((n % &m) + &m) % &m;
                FieldElem::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den` in this field.
    pub fn fraction(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem, FieldError> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        n.try_div(&d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let bad = || FieldError::BadFieldSyntax(s.to_string());
        let rest = s.strip_prefix("p:").or_else(|| s.strip_prefix("P:")).ok_or_else(bad)?;
        let p: u64 = rest.trim().parse().map_err(|_| bad())?;
        FieldSpec::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`FieldSpec`]. Rationals are kept in lowest terms with
/// positive denominator; residues are kept in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl FieldElem {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElem::Rational(_) => FieldSpec::Rationals,
            FieldElem::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_zero(),
            FieldElem::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_one(),
            FieldElem::Residue { value, .. } => *value == 1,
        }
    }

    /// True for rationals `< 0`; residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Rational(q) => q.is_negative(),
            FieldElem::Residue { .. } => false,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        let (a, b) = (self.spec(), other.spec());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::MixedFields(a, b))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (FieldElem::Residue { value: a, modulus }, FieldElem::Residue { value: b, .. }) => {
                let s = (*a as u128 + *b as u128) % *modulus as u128;
                FieldElem::Residue {
                    value: s as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldElem::Residue { value: a, modulus }, FieldElem::Residue { value: b, .. }) => {
                let s = (*a as u128 * *b as u128) % *modulus as u128;
                FieldElem::Residue {
                    value: s as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(q) => FieldElem::Rational(q.recip()),
            FieldElem::Residue { value, modulus } => FieldElem::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            FieldElem::Rational(q) => FieldElem::Rational(-q),
            FieldElem::Residue { value, modulus } => FieldElem::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut base = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElem::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl serde::Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field operands must share a field")
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

/// Draw one nonzero element, deterministically from `rng_seed`.
///
/// Over the rationals the value lies in `{±1, …, ±pool_bound}`; over `F_p` in
/// `{1, …, min(p-1, pool_bound)}`.
pub fn sample_nonzero(spec: FieldSpec, rng_seed: u64, pool_bound: u64) -> FieldElem {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_nonzero_with(&mut rng, spec, pool_bound)
}

/// Same contract as [`sample_nonzero`], drawing from a caller-owned generator.
pub fn sample_nonzero_with<R: Rng + ?Sized>(rng: &mut R, spec: FieldSpec, pool_bound: u64) -> FieldElem {
    let bound = pool_bound.max(1);
    match spec {
        FieldSpec::Rationals => {
            let mag = rng.gen_range(1..=bound) as i64;
            let v = if rng.gen_bool(0.5) { mag } else { -mag };
            spec.from_i64(v)
        }
        FieldSpec::Prime(p) => {
            let top = bound.min(p - 1);
            let v = rng.gen_range(1..=top);
            FieldElem::Residue { value: v, modulus: p }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElem {
        FieldSpec::Rationals
            .fraction(&BigInt::from(n), &BigInt::from(d))
            .unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q(1, 3) + &q(1, 6), q(1, 2));
    }

    #[test]
    fn residue_product() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(&f7.from_i64(3) * &f7.from_i64(5), f7.one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(FieldSpec::Rationals.zero().inv(), Err(FieldError::DivisionByZero));
        let f5 = FieldSpec::Prime(5);
        assert_eq!(f5.one().try_div(&f5.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FieldSpec::Rationals.one();
        let b = FieldSpec::Prime(3).one();
        assert!(matches!(a.try_add(&b), Err(FieldError::MixedFields(..))));
    }

    #[test]
    fn normalization() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
        assert_eq!(q(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn field_syntax() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("p:65521".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(65521));
        assert_eq!("p:9".parse::<FieldSpec>(), Err(FieldError::NotPrime(9)));
        assert!("r".parse::<FieldSpec>().is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2).is_ok());
    }

    #[test]
    fn sampling_contract() {
        for seed in 0..50 {
            let v = sample_nonzero(FieldSpec::Rationals, seed, 3);
            let n = match &v {
                FieldElem::Rational(r) => r.to_integer().to_i64().unwrap(),
                _ => unreachable!(),
            };
            assert!((1..=3).contains(&n.abs()));
            assert_eq!(sample_nonzero(FieldSpec::Prime(2), seed, 9), FieldSpec::Prime(2).one());
        }
        assert_eq!(
            sample_nonzero(FieldSpec::Rationals, 1, 3),
            sample_nonzero(FieldSpec::Rationals, 1, 3)
        );
    }

    fn elem(spec: FieldSpec) -> impl Strategy<Value = FieldElem> {
        (-1000i64..1000, 1i64..50).prop_map(move |(n, d)| match spec {
            FieldSpec::Rationals => FieldSpec::Rationals
                .fraction(&BigInt::from(n), &BigInt::from(d))
                .unwrap(),
            FieldSpec::Prime(_) => spec.from_i64(n),
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rational_field_axioms(a in elem(FieldSpec::Rationals), b in elem(FieldSpec::Rationals)) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).try_div(&b).unwrap(), a.clone());
            }
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn prime_field_axioms(a in elem(FieldSpec::Prime(65521)), b in elem(FieldSpec::Prime(65521))) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).try_div(&b).unwrap(), a.clone());
            }
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }
}
