//! The restricted wreath product of two quasi-cyclic groups: pairs
//! `(f, u^{b0})` of a finitely supported base function and a top
//! translation, multiplied by
//!
//! ```text
//! (f, u^{b0}) (f', u^{b0'}) = (f + translate(f', b0), u^{b0 + b0'})
//! ```
//!
//! Conventions, fixed once for the whole crate:
//! commutator `[a,b] = a^{-1} b^{-1} a b`, conjugate `a^b = b^{-1} a b`.
//! Under this convention a base-only element `(f, 1)` commutated with any
//! element of top `u^c` yields `((u^{-c} - 1) f, 1)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::{assert_same_prime, Prime, PruferElement};
use crate::groupring::{split_top_level, BaseFunction};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathElement {
    base: BaseFunction,
    top: PruferElement,
}

impl WreathElement {
    pub fn new(base: BaseFunction, top: PruferElement) -> Self {
        assert_same_prime(base.prime(), top.prime());
        WreathElement { base, top }
    }

    pub fn identity(prime: Prime) -> Self {
        WreathElement {
            base: BaseFunction::zero(prime),
            top: PruferElement::zero(prime),
        }
    }

    /// A base-only element `(f, 1)`.
    pub fn from_base(base: BaseFunction) -> Self {
        let top = PruferElement::zero(base.prime());
        WreathElement { base, top }
    }

    /// A top-only element `(0, u^top)`.
    pub fn from_top(top: PruferElement) -> Self {
        let base = BaseFunction::zero(top.prime());
        WreathElement { base, top }
    }

    pub fn prime(&self) -> Prime {
        self.base.prime()
    }

    pub fn base(&self) -> &BaseFunction {
        &self.base
    }

    pub fn top(&self) -> &PruferElement {
        &self.top
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_zero() && self.top.is_zero()
    }

    pub fn mul(&self, other: &WreathElement) -> WreathElement {
        assert_same_prime(self.prime(), other.prime());
        WreathElement {
            base: self.base.add(&other.base.translate(&self.top)),
            top: self.top.add(&other.top),
        }
    }

    /// `(f, u^b)^{-1} = (-translate(f, -b), u^{-b})`, forced by the product
    /// formula.
    pub fn inv(&self) -> WreathElement {
        let neg_top = self.top.neg();
        WreathElement {
            base: self.base.translate(&neg_top).neg(),
            top: neg_top,
        }
    }

    /// Square-and-multiply power for arbitrary signed exponents.
    pub fn pow(&self, n: &BigInt) -> WreathElement {
        let (mag, base) = if n.is_negative() {
            (n.magnitude().clone(), self.inv())
        } else {
            (n.magnitude().clone(), self.clone())
        };
        let mut acc = WreathElement::identity(self.prime());
        let bits = mag.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc);
            if mag.bit(i) {
                acc = acc.mul(&base);
            }
        }
        acc
    }

    pub fn pow_i64(&self, n: i64) -> WreathElement {
        self.pow(&BigInt::from(n))
    }

    /// `[a,b] = a^{-1} b^{-1} a b`.
    pub fn commutator(&self, other: &WreathElement) -> WreathElement {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    /// `a^b = b^{-1} a b`.
    pub fn conjugate(&self, by: &WreathElement) -> WreathElement {
        by.inv().mul(self).mul(by)
    }

    /// Exact order, via the structure of the product rather than iteration:
    /// with `m` the order of the top, `(f, u^b)^m = (S, 1)` where `S` sums
    /// the translates of `f` over the whole cyclic subgroup generated by
    /// `b`, so the order is `m * order(S)`.
    ///
    /// `S` is never materialized: its coefficient on a coset of the
    /// subgroup `<1/p^e>` is the sum of `f` over that coset, and cosets are
    /// classified by multiplication with `p^e`. Elements of order p^40 cost
    /// the same as elements of order p.
    pub fn order(&self) -> BigUint {
        let e = self.top.exponent();
        if e == 0 {
            return self.base.order();
        }
        let m = self.prime().pow(e);
        let scale = BigInt::from(m.clone());
        let mut coset_sums: std::collections::BTreeMap<PruferElement, PruferElement> =
            std::collections::BTreeMap::new();
        for (x, c) in self.base.terms() {
            let class = x.scale(&scale);
            match coset_sums.remove(&class) {
                None => {
                    coset_sums.insert(class, c.clone());
                }
                Some(acc) => {
                    coset_sums.insert(class, acc.add(c));
                }
            }
        }
        let sum_order = coset_sums.values().map(|s| s.exponent()).max().unwrap_or(0);
        m * self.prime().pow(sum_order)
    }

    /// Parses the canonical textual form `(<base>; u^<top>)`.
    pub fn parse(prime: Prime, text: &str) -> Result<WreathElement> {
        let bad = |reason: String| Error::ParseValue {
            input: text.to_string(),
            expected: "wreath element",
            reason,
        };
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected '(<base>; u^<top>)'".into()))?;
        let parts = split_top_level(inner, ';');
        if parts.len() != 2 {
            return Err(bad("expected exactly one top-level ';'".into()));
        }
        let base = BaseFunction::parse(prime, parts[0])?;
        let top_text = parts[1].trim();
        let top_text = top_text
            .strip_prefix("u^")
            .ok_or_else(|| bad("top component must be written 'u^<value>'".into()))?;
        let top_text = if let Some(inner) = top_text.strip_prefix('{') {
            inner
                .strip_suffix('}')
                .ok_or_else(|| bad("unclosed '{' in top component".into()))?
        } else {
            top_text
        };
        let top = PruferElement::parse(prime, top_text)?;
        Ok(WreathElement::new(base, top))
    }

    pub fn random(rng: &mut SplitMix64, prime: Prime, max_terms: u64, max_exponent: u32) -> Self {
        WreathElement {
            base: BaseFunction::random(rng, prime, max_terms, max_exponent),
            top: PruferElement::random(rng, prime, max_exponent),
        }
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; u^{{{}}})", self.base, self.top)
    }
}

/// Serializes as a struct nesting the component serializations.
impl serde::Serialize for WreathElement {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = serializer.serialize_struct("WreathElement", 2)?;
        state.serialize_field("base", &self.base)?;
        state.serialize_field("top", &self.top)?;
        state.end()
    }
}
