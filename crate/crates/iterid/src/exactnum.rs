//! Exact arithmetic for the ring Z[1/p] and the quasi-cyclic group Z_{p^inf}.
//!
//! Everything is arbitrary precision: powers p^k stay exact for any exponent
//! a test asks for. Elements are kept in canonical form at all times, so
//! structural equality is semantic equality.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A validated prime, the ambient parameter of every value in this crate.
///
/// Mixing values built over different primes is a hard error: the arithmetic
/// operations panic rather than coerce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// p^k as an exact integer.
    pub fn pow(self, k: u32) -> BigUint {
        BigUint::from(self.0).pow(k)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial division. The primes used here are small; a
/// probabilistic test would be pointless complexity.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[track_caller]
pub(crate) fn assert_same_prime(a: Prime, b: Prime) {
    assert_eq!(
        a, b,
        "mixed ambient primes: one value is over p={}, the other over p={}",
        a.0, b.0
    );
}

/// An element of Z[1/p]: `numerator / p^exponent` in reduced form
/// (p does not divide the numerator unless it is zero, and zero has
/// exponent zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicFraction {
    prime: Prime,
    numerator: BigInt,
    exponent: u32,
}

impl PAdicFraction {
    /// Canonical reduced form of `numerator / p^exponent`.
    pub fn reduce(prime: Prime, numerator: BigInt, exponent: u32) -> Self {
        let p = BigInt::from(prime.0);
        let mut num = numerator;
        let mut exp = exponent;
        while exp > 0 && !num.is_zero() && (&num % &p).is_zero() {
            num /= &p;
            exp -= 1;
        }
        if num.is_zero() {
            exp = 0;
        }
        PAdicFraction {
            prime,
            numerator: num,
            exponent: exp,
        }
    }

    pub fn zero(prime: Prime) -> Self {
        PAdicFraction {
            prime,
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn add(&self, other: &PAdicFraction) -> PAdicFraction {
        assert_same_prime(self.prime, other.prime);
        let exp = self.exponent.max(other.exponent);
        let p = BigInt::from(self.prime.0);
        let num = &self.numerator * p.pow(exp - self.exponent)
            + &other.numerator * p.pow(exp - other.exponent);
        PAdicFraction::reduce(self.prime, num, exp)
    }

    pub fn neg(&self) -> PAdicFraction {
        PAdicFraction {
            prime: self.prime,
            numerator: -&self.numerator,
            exponent: self.exponent,
        }
    }

    /// The image modulo 1: the quotient map Z[1/p] -> Z_{p^inf}.
    pub fn mod1(&self) -> PruferElement {
        PruferElement::reduce(self.prime, self.numerator.clone(), self.exponent)
    }

    /// Parses `"n"` or `"n/d"` where `d` is a power of p. Unreduced input is
    /// accepted and canonicalized.
    pub fn parse(prime: Prime, text: &str) -> Result<PAdicFraction> {
        let (num, exp) = parse_fraction(prime, text, "element of Z[1/p]")?;
        Ok(PAdicFraction::reduce(prime, num, exp))
    }
}

impl fmt::Display for PAdicFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.prime.pow(self.exponent))
        }
    }
}

impl Serialize for PAdicFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An element of the quasi-cyclic group Z_{p^inf} = Z[1/p]/Z, stored as
/// `numerator / p^exponent` with `0 <= numerator < p^exponent`, p not
/// dividing the numerator unless the element is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferElement {
    prime: Prime,
    numerator: BigUint,
    exponent: u32,
}

impl PruferElement {
    /// Canonical representative of `numerator / p^exponent` modulo 1.
    /// Negative input wraps.
    pub fn reduce(prime: Prime, numerator: BigInt, exponent: u32) -> Self {
        let modulus = BigInt::from(prime.pow(exponent));
        let wrapped = numerator.mod_floor(&modulus);
        let mut num = wrapped.to_biguint().expect("mod_floor is nonnegative");
        let p = BigUint::from(prime.0);
        let mut exp = exponent;
        while exp > 0 && !num.is_zero() && (&num % &p).is_zero() {
            num /= &p;
            exp -= 1;
        }
        if num.is_zero() {
            exp = 0;
        }
        PruferElement {
            prime,
            numerator: num,
            exponent: exp,
        }
    }

    pub fn zero(prime: Prime) -> Self {
        PruferElement {
            prime,
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    /// `1/p^exponent`, the standard generator of the p^exponent-torsion.
    pub fn unit(prime: Prime, exponent: u32) -> Self {
        PruferElement::reduce(prime, BigInt::from(1), exponent)
    }

    /// Convenience constructor from machine integers, canonicalizing.
    pub fn new(prime: Prime, numerator: i64, exponent: u32) -> Self {
        PruferElement::reduce(prime, BigInt::from(numerator), exponent)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, other: &PruferElement) -> PruferElement {
        assert_same_prime(self.prime, other.prime);
        let exp = self.exponent.max(other.exponent);
        let p = BigInt::from(self.prime.0);
        let num = BigInt::from(self.numerator.clone()) * p.pow(exp - self.exponent)
            + BigInt::from(other.numerator.clone()) * p.pow(exp - other.exponent);
        PruferElement::reduce(self.prime, num, exp)
    }

    pub fn sub(&self, other: &PruferElement) -> PruferElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PruferElement {
        PruferElement::reduce(
            self.prime,
            -BigInt::from(self.numerator.clone()),
            self.exponent,
        )
    }

    /// The n-fold sum. Scaling by p strictly reduces the exponent by one.
    pub fn scale(&self, n: &BigInt) -> PruferElement {
        PruferElement::reduce(
            self.prime,
            n * BigInt::from(self.numerator.clone()),
            self.exponent,
        )
    }

    pub fn scale_i64(&self, n: i64) -> PruferElement {
        self.scale(&BigInt::from(n))
    }

    /// The order: the least n >= 1 with n·a = 0, always p^exponent.
    pub fn order(&self) -> BigUint {
        self.prime.pow(self.exponent)
    }

    /// Parses `"n"` or `"n/d"` where `d` is a power of p; unreduced and
    /// negative input is accepted and wrapped modulo 1.
    pub fn parse(prime: Prime, text: &str) -> Result<PruferElement> {
        let (num, exp) = parse_fraction(prime, text, "element of Z_{p^inf}")?;
        Ok(PruferElement::reduce(prime, num, exp))
    }

    /// Uniform sample over the p^max_exponent-torsion subgroup.
    pub fn random(rng: &mut crate::rng::SplitMix64, prime: Prime, max_exponent: u32) -> Self {
        let modulus = prime
            .0
            .checked_pow(max_exponent)
            .expect("sampling modulus fits in u64");
        let num = rng.below(modulus);
        PruferElement::reduce(prime, BigInt::from(num), max_exponent)
    }
}

impl fmt::Display for PruferElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numerator, self.prime.pow(self.exponent))
        }
    }
}

/// Serializes as the canonical textual form.
impl Serialize for PruferElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Values order as rationals in [0,1), compared by cross-multiplication;
/// elements over distinct primes order by prime first so that the order is
/// total. This is the canonical serialization order of base-function terms.
impl Ord for PruferElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prime.cmp(&other.prime).then_with(|| {
            let lhs = &self.numerator
                * other
                    .prime
                    .pow(other.exponent.max(self.exponent) - self.exponent);
            let rhs = &other.numerator
                * self
                    .prime
                    .pow(self.exponent.max(other.exponent) - other.exponent);
            lhs.cmp(&rhs)
        })
    }
}

impl PartialOrd for PruferElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn parse_fraction(prime: Prime, text: &str, expected: &'static str) -> Result<(BigInt, u32)> {
    let bad = |reason: String| Error::ParseValue {
        input: text.to_string(),
        expected,
        reason,
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(bad("empty string".into()));
    }
    let (num_text, den_text) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num: BigInt = num_text
        .parse()
        .map_err(|_| bad(format!("invalid integer {num_text:?}")))?;
    let exp = match den_text {
        None => 0,
        Some(d) => {
            let mut den: BigUint = d
                .parse()
                .map_err(|_| bad(format!("invalid denominator {d:?}")))?;
            if den.is_zero() {
                return Err(bad("denominator is zero".into()));
            }
            let p = BigUint::from(prime.0);
            let mut exp = 0u32;
            while (&den % &p).is_zero() {
                den /= &p;
                exp += 1;
            }
            if den != BigUint::from(1u32) {
                return Err(bad(format!("denominator is not a power of {}", prime)));
            }
            exp
        }
    };
    Ok((num, exp))
}
