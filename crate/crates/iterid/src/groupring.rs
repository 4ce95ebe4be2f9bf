//! Finitely supported functions Z_{p^inf} -> Z_{p^inf}, written as formal
//! sums `sum_b a_b u^b`. This is the base group of the wreath product; the
//! top group acts on it by translating exponents.
//!
//! Only the operations the group law needs exist here: pointwise addition,
//! integer scaling, translation by `u^{b0}`, and the binomial expansion of
//! `coeff * (u^b - 1)^j`. There is deliberately no general product of two
//! base functions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::exactnum::{assert_same_prime, Prime, PruferElement};
use crate::rng::SplitMix64;

/// A finitely supported map from exponents to coefficients, both in
/// Z_{p^inf}. Stored coefficients are never zero; iteration order is
/// ascending by the exponent's value in [0,1), which makes the textual
/// serialization canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFunction {
    prime: Prime,
    terms: BTreeMap<PruferElement, PruferElement>,
}

impl BaseFunction {
    pub fn zero(prime: Prime) -> Self {
        BaseFunction {
            prime,
            terms: BTreeMap::new(),
        }
    }

    /// The single-term function `coeff * u^exponent`; zero coefficients
    /// produce the zero function.
    pub fn delta(exponent: PruferElement, coeff: PruferElement) -> Self {
        assert_same_prime(exponent.prime(), coeff.prime());
        let prime = exponent.prime();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        BaseFunction { prime, terms }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&PruferElement, &PruferElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &PruferElement) -> PruferElement {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(|| PruferElement::zero(self.prime))
    }

    fn insert_summed(&mut self, exponent: PruferElement, coeff: PruferElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&exponent) {
            None => {
                self.terms.insert(exponent, coeff);
            }
            Some(existing) => {
                let sum = existing.add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(exponent, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &BaseFunction) -> BaseFunction {
        assert_same_prime(self.prime, other.prime);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_summed(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &BaseFunction) -> BaseFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BaseFunction {
        BaseFunction {
            prime: self.prime,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> BaseFunction {
        let mut out = BaseFunction::zero(self.prime);
        for (e, c) in &self.terms {
            out.insert_summed(e.clone(), c.scale(n));
        }
        out
    }

    /// Multiplication by `u^{b0}`: every exponent shifts by `b0`, the
    /// coefficients are untouched. Support size is preserved because the
    /// shift is a bijection of Z_{p^inf}.
    pub fn translate(&self, b0: &PruferElement) -> BaseFunction {
        assert_same_prime(self.prime, b0.prime());
        BaseFunction {
            prime: self.prime,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(b0), c.clone()))
                .collect(),
        }
    }

    /// The expansion of `coeff * (u^b - 1)^j`: the term at `k*b` carries
    /// `C(j,k) * (-1)^(j-k) * coeff`, and coefficients land on the same
    /// canonical exponent when `k*b` collides modulo 1 -- that collision is
    /// what collapses high iterates.
    pub fn engel_expand(coeff: &PruferElement, b: &PruferElement, j: u32) -> BaseFunction {
        assert_same_prime(coeff.prime(), b.prime());
        let mut out = BaseFunction::zero(coeff.prime());
        for k in 0..=j {
            let mut c = num_integer::binomial(BigInt::from(j), BigInt::from(k));
            if (j - k) % 2 == 1 {
                c = -c;
            }
            out.insert_summed(b.scale(&BigInt::from(k)), coeff.scale(&c));
        }
        out
    }

    /// The least n >= 1 with `n * f = 0`: the maximum coefficient order,
    /// 1 for the zero function, always a power of p.
    pub fn order(&self) -> BigUint {
        let max_exp = self.terms.values().map(|c| c.exponent()).max().unwrap_or(0);
        self.prime.pow(max_exp)
    }

    /// Parses the canonical textual form: `0`, or terms
    /// `(coeff)·u^{exponent}` joined by `+` (an ASCII `*` is accepted in
    /// place of `·`, and the exponent braces may be parentheses or absent).
    pub fn parse(prime: Prime, text: &str) -> Result<BaseFunction> {
        let bad = |reason: String| Error::ParseValue {
            input: text.to_string(),
            expected: "base function",
            reason,
        };
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(BaseFunction::zero(prime));
        }
        let mut out = BaseFunction::zero(prime);
        for raw in split_top_level(trimmed, '+') {
            let term = raw.trim();
            let rest = term
                .strip_prefix('(')
                .ok_or_else(|| bad(format!("term {term:?} does not start with '('")))?;
            let close = find_matching_paren(rest)
                .ok_or_else(|| bad(format!("unbalanced parentheses in {term:?}")))?;
            let coeff = PruferElement::parse(prime, &rest[..close])?;
            let mut tail = rest[close + 1..].trim_start();
            for sep in ["·", "*"] {
                if let Some(stripped) = tail.strip_prefix(sep) {
                    tail = stripped.trim_start();
                    break;
                }
            }
            let tail = tail
                .strip_prefix("u^")
                .ok_or_else(|| bad(format!("term {term:?} is missing 'u^'")))?
                .trim();
            let exp_text = if let Some(inner) = tail.strip_prefix('{') {
                inner
                    .strip_suffix('}')
                    .ok_or_else(|| bad(format!("unclosed '{{' in {term:?}")))?
            } else if let Some(inner) = tail.strip_prefix('(') {
                inner
                    .strip_suffix(')')
                    .ok_or_else(|| bad(format!("unclosed '(' in {term:?}")))?
            } else {
                tail
            };
            let exponent = PruferElement::parse(prime, exp_text)?;
            out.insert_summed(exponent, coeff);
        }
        Ok(out)
    }

    /// A small random function: up to `max_terms` terms with exponents and
    /// coefficients in the p^max_exponent-torsion.
    pub fn random(
        rng: &mut SplitMix64,
        prime: Prime,
        max_terms: u64,
        max_exponent: u32,
    ) -> BaseFunction {
        let mut out = BaseFunction::zero(prime);
        for _ in 0..rng.below(max_terms + 1) {
            let e = PruferElement::random(rng, prime, max_exponent);
            let c = PruferElement::random(rng, prime, max_exponent);
            out.insert_summed(e, c);
        }
        out
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})·u^{{{e}}}")?;
        }
        Ok(())
    }
}

/// Serializes as the list of exponent/coefficient pairs in canonical form
/// and canonical order.
impl serde::Serialize for BaseFunction {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter())
    }
}

/// Splits on `sep` at paren/brace depth zero.
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '{' | '[' => depth += 1,
            ')' | '}' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Index of the ')' matching an already-consumed '(' at depth one.
pub(crate) fn find_matching_paren(text: &str) -> Option<usize> {
    let mut depth = 1i32;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn pe(p: Prime, n: i64, e: u32) -> PruferElement {
        PruferElement::new(p, n, e)
    }

    #[test]
    fn zero_and_delta() {
        assert!(BaseFunction::zero(p2()).is_zero());
        assert!(
            BaseFunction::delta(PruferElement::zero(p2()), PruferElement::zero(p2())).is_zero()
        );
        let one_term = BaseFunction::delta(pe(p2(), 1, 1), pe(p2(), 1, 2));
        assert_eq!(one_term.support_len(), 1);
        assert_eq!(one_term.coefficient(&pe(p2(), 1, 1)), pe(p2(), 1, 2));
    }

    #[test]
    fn add_examples() {
        let f = BaseFunction::random(&mut SplitMix64::new(3), p2(), 4, 3);
        assert!(f.add(&f.neg()).is_zero());

        let half_at_zero = BaseFunction::delta(PruferElement::zero(p2()), pe(p2(), 1, 1));
        assert!(half_at_zero.add(&half_at_zero).is_zero());

        let f = BaseFunction::delta(PruferElement::zero(p2()), pe(p2(), 1, 2));
        let g = BaseFunction::delta(pe(p2(), 1, 1), pe(p2(), 1, 1));
        assert_eq!(f.add(&g).support_len(), 2);
    }

    #[test]
    fn translate_examples() {
        let f = BaseFunction::random(&mut SplitMix64::new(5), p2(), 4, 3);
        assert_eq!(f.translate(&PruferElement::zero(p2())), f);

        let shifted =
            BaseFunction::delta(pe(p2(), 1, 1), pe(p2(), 1, 2)).translate(&pe(p2(), 1, 1));
        assert_eq!(
            shifted,
            BaseFunction::delta(PruferElement::zero(p2()), pe(p2(), 1, 2))
        );

        let b = pe(p2(), 3, 3);
        assert_eq!(f.translate(&b).translate(&b.neg()), f);
        assert_eq!(f.translate(&b).support_len(), f.support_len());
    }

    #[test]
    fn engel_expand_examples() {
        let half = pe(p2(), 1, 1);
        // j = 0: the empty product is the constant term
        assert_eq!(
            BaseFunction::engel_expand(&half, &half, 0),
            BaseFunction::delta(PruferElement::zero(p2()), half.clone())
        );
        // (1/2)(u^{1/2} - 1): both coefficients are 1/2 since -1/2 = 1/2
        let j1 = BaseFunction::engel_expand(&half, &half, 1);
        assert_eq!(j1.coefficient(&PruferElement::zero(p2())), half);
        assert_eq!(j1.coefficient(&half), half);
        assert_eq!(j1.support_len(), 2);
        // (1/2)(u^{1/2} - 1)^2 collapses completely: u^1 = u^0 and 2*(1/2) = 0
        assert!(BaseFunction::engel_expand(&half, &half, 2).is_zero());

        let c = pe(p3(), 1, 2);
        let b = pe(p3(), 2, 2);
        let f = BaseFunction::engel_expand(&c, &b, 1);
        assert_eq!(f.coefficient(&PruferElement::zero(p3())), pe(p3(), 8, 2));
        assert_eq!(f.coefficient(&b), pe(p3(), 1, 2));
        assert_eq!(f.support_len(), 2);
    }

    #[test]
    fn engel_expand_matches_bracket_recursion() {
        // expand(c,b,j+1) = translate(e, b) - e with e = expand(c,b,j)
        for (p, c_num, c_exp, b_num, b_exp) in [
            (2u64, 1i64, 3u32, 1i64, 3u32),
            (3, 1, 2, 2, 2),
            (5, 2, 1, 4, 2),
        ] {
            let p = Prime::new(p).unwrap();
            let c = pe(p, c_num, c_exp);
            let b = pe(p, b_num, b_exp);
            for j in 0..8 {
                let e = BaseFunction::engel_expand(&c, &b, j);
                let next = BaseFunction::engel_expand(&c, &b, j + 1);
                assert_eq!(next, e.translate(&b).sub(&e));
            }
        }
    }

    #[test]
    fn engel_expand_constant_term_survives() {
        // for j below the order of b the exponents k*b are pairwise distinct
        // and the constant term is exactly (-1)^j * coeff
        let p = p3();
        let c = pe(p, 1, 2);
        let b = pe(p, 2, 2);
        let order_b = 9u32;
        for j in 0..order_b {
            let f = BaseFunction::engel_expand(&c, &b, j);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                f.coefficient(&PruferElement::zero(p)),
                c.scale_i64(sign),
                "constant coefficient at j={j}"
            );
        }
    }

    #[test]
    fn order_examples() {
        assert!(BaseFunction::zero(p2()).order().is_one());
        for i in 0..6 {
            let f = BaseFunction::delta(pe(p2(), 1, 1), PruferElement::unit(p2(), i));
            assert_eq!(f.order(), p2().pow(i));
        }
        // order p^i for the bracket expansion with j < i
        for i in 1..6u32 {
            for j in 0..i {
                let c = PruferElement::unit(p2(), i);
                let b = pe(p2(), 1, i);
                assert_eq!(BaseFunction::engel_expand(&c, &b, j).order(), p2().pow(i));
            }
        }
    }

    #[test]
    fn order_is_minimal() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let f = BaseFunction::random(&mut rng, p3(), 4, 3);
            let ord = BigInt::from(f.order());
            assert!(f.scale(&ord).is_zero());
            if !f.is_zero() {
                assert!(!f.scale(&(ord / 3)).is_zero());
            }
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let f = BaseFunction::delta(PruferElement::zero(p2()), pe(p2(), 1, 2))
            .add(&BaseFunction::delta(pe(p2(), 1, 1), pe(p2(), 1, 1)));
        assert_eq!(f.to_string(), "(1/4)·u^{0} + (1/2)·u^{1/2}");
        assert_eq!(BaseFunction::parse(p2(), &f.to_string()).unwrap(), f);
        assert_eq!(
            BaseFunction::parse(p2(), "0").unwrap(),
            BaseFunction::zero(p2())
        );
        // ASCII variant and unreduced fractions canonicalize
        assert_eq!(
            BaseFunction::parse(p2(), "(2/8)*u^(2/4)")
                .unwrap()
                .to_string(),
            "(1/4)·u^{1/2}"
        );
        assert!(BaseFunction::parse(p2(), "(1/2 u").is_err());
        assert!(BaseFunction::parse(p2(), "1/2").is_err());
    }

    fn arb_base(p: u64) -> impl Strategy<Value = BaseFunction> {
        proptest::collection::vec((any::<i64>(), 0u32..4, any::<i64>(), 0u32..4), 0..5).prop_map(
            move |terms| {
                let p = Prime::new(p).unwrap();
                let mut f = BaseFunction::zero(p);
                for (en, ee, cn, ce) in terms {
                    f = f.add(&BaseFunction::delta(
                        PruferElement::reduce(p, BigInt::from(en), ee),
                        PruferElement::reduce(p, BigInt::from(cn), ce),
                    ));
                }
                f
            },
        )
    }

    proptest! {
        #[test]
        fn abelian_group_axioms(f in arb_base(2), g in arb_base(2), h in arb_base(2)) {
            prop_assert_eq!(f.add(&g), g.add(&f));
            prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
            prop_assert_eq!(f.add(&BaseFunction::zero(f.prime())), f.clone());
            prop_assert!(f.add(&f.neg()).is_zero());
        }

        #[test]
        fn translation_is_an_automorphism(
            f in arb_base(3),
            g in arb_base(3),
            bn in any::<i64>(),
            be in 0u32..4,
            cn in any::<i64>(),
            ce in 0u32..4,
        ) {
            let p = Prime::new(3).unwrap();
            let b1 = PruferElement::reduce(p, BigInt::from(bn), be);
            let b2 = PruferElement::reduce(p, BigInt::from(cn), ce);
            prop_assert_eq!(f.add(&g).translate(&b1), f.translate(&b1).add(&g.translate(&b1)));
            prop_assert_eq!(f.translate(&b1.add(&b2)), f.translate(&b1).translate(&b2));
        }
    }
}
