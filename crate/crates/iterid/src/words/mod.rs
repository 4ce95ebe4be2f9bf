//! Words on letters x1..xn and their evaluation over any group carrier.
//!
//! A word is a finite tree of products, inverses, integer powers,
//! commutators and conjugations. Iteration substitutes the previous iterate
//! into the first variable slot and nothing else:
//!
//! ```text
//! w^(0) = w,    w^(j+1) = w(w^(j), x2, ..., xn)
//! ```
//!
//! The textual grammar (also produced by `Display`):
//! variables `x1`, `x2`, ...; juxtaposition or `*` for products;
//! `^<int>` for powers with `^-1` denoting the inverse; `[a,b]` for
//! commutators and `[a,_n b]` as shorthand for the n-fold Engel bracket;
//! `a^b` for conjugation when the exponent is a word; parentheses for
//! grouping. Power binds tighter than juxtaposition and suffix chains
//! associate to the left, so `x1^2^x2` is `(x1^2)^x2`. Whitespace is
//! insignificant.

mod parse;

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::PruferElement;
use crate::finite_oracle::FiniteWreathElement;
use crate::rng::SplitMix64;
use crate::wreath::WreathElement;

/// The carrier interface for word evaluation: identity, multiplication,
/// inverse, plus derived powers, commutators and conjugation. `identity`
/// takes a receiver because the ambient group (the prime, or the oracle
/// parameters) lives inside each element.
pub trait GroupElement: Clone + PartialEq {
    fn identity(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;

    fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mag = n.unsigned_abs();
        let mut acc = self.identity();
        for i in (0..u64::BITS - mag.leading_zeros()).rev() {
            acc = acc.mul(&acc);
            if mag >> i & 1 == 1 {
                acc = acc.mul(&base);
            }
        }
        acc
    }

    /// `[a,b] = a^{-1} b^{-1} a b`.
    fn commutator(&self, other: &Self) -> Self {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    /// `a^b = b^{-1} a b`.
    fn conjugate(&self, by: &Self) -> Self {
        by.inv().mul(self).mul(by)
    }

    fn is_identity(&self) -> bool {
        *self == self.identity()
    }
}

impl GroupElement for WreathElement {
    fn identity(&self) -> Self {
        WreathElement::identity(self.prime())
    }

    fn mul(&self, other: &Self) -> Self {
        WreathElement::mul(self, other)
    }

    fn inv(&self) -> Self {
        WreathElement::inv(self)
    }

    fn pow(&self, n: i64) -> Self {
        WreathElement::pow_i64(self, n)
    }

    fn is_identity(&self) -> bool {
        WreathElement::is_identity(self)
    }
}

/// The quasi-cyclic group as a multiplicative carrier: the word `x1^p`
/// evaluates to p-fold addition.
impl GroupElement for PruferElement {
    fn identity(&self) -> Self {
        PruferElement::zero(self.prime())
    }

    fn mul(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn inv(&self) -> Self {
        self.neg()
    }

    fn pow(&self, n: i64) -> Self {
        self.scale_i64(n)
    }

    fn is_identity(&self) -> bool {
        self.is_zero()
    }
}

impl GroupElement for FiniteWreathElement {
    fn identity(&self) -> Self {
        FiniteWreathElement::identity(self.params())
    }

    fn mul(&self, other: &Self) -> Self {
        FiniteWreathElement::mul(self, other)
    }

    fn inv(&self) -> Self {
        FiniteWreathElement::inv(self)
    }

    fn is_identity(&self) -> bool {
        FiniteWreathElement::is_identity(self)
    }
}

/// The n-fold Engel bracket `[a,_n b]`, with `[a,_0 b] = a`.
pub fn engel<G: GroupElement>(a: &G, b: &G, n: u32) -> G {
    let mut out = a.clone();
    for _ in 0..n {
        out = out.commutator(b);
    }
    out
}

/// A word as an abstract syntax tree. Variables are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    Variable(u32),
    Product(Vec<Word>),
    Inverse(Box<Word>),
    Power(Box<Word>, i64),
    Commutator(Box<Word>, Box<Word>),
    Conjugate(Box<Word>, Box<Word>),
}

impl Word {
    pub fn parse(text: &str) -> Result<Word> {
        parse::parse(text)
    }

    pub fn variable(index: u32) -> Word {
        assert!(index >= 1, "variables are 1-based");
        Word::Variable(index)
    }

    /// The number of variable slots: the largest index that occurs.
    pub fn arity(&self) -> u32 {
        match self {
            Word::Variable(i) => *i,
            Word::Product(ws) => ws.iter().map(Word::arity).max().unwrap_or(0),
            Word::Inverse(w) | Word::Power(w, _) => w.arity(),
            Word::Commutator(a, b) | Word::Conjugate(a, b) => a.arity().max(b.arity()),
        }
    }

    /// Replaces every occurrence of the given variable by `replacement`.
    pub fn substitute(&self, index: u32, replacement: &Word) -> Word {
        match self {
            Word::Variable(i) => {
                if *i == index {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Word::Product(ws) => Word::Product(
                ws.iter()
                    .map(|w| w.substitute(index, replacement))
                    .collect(),
            ),
            Word::Inverse(w) => Word::Inverse(Box::new(w.substitute(index, replacement))),
            Word::Power(w, n) => Word::Power(Box::new(w.substitute(index, replacement)), *n),
            Word::Commutator(a, b) => Word::Commutator(
                Box::new(a.substitute(index, replacement)),
                Box::new(b.substitute(index, replacement)),
            ),
            Word::Conjugate(a, b) => Word::Conjugate(
                Box::new(a.substitute(index, replacement)),
                Box::new(b.substitute(index, replacement)),
            ),
        }
    }

    /// The j-th iterate: substitute the previous iterate for the first
    /// variable, j times. `iterate(0)` is the word itself.
    pub fn iterate(&self, j: u32) -> Word {
        let mut out = self.clone();
        for _ in 0..j {
            out = self.substitute(1, &out);
        }
        out
    }

    /// Structural evaluation. The assignment length must equal the arity.
    pub fn evaluate<G: GroupElement>(&self, assignment: &[G]) -> Result<G> {
        let arity = self.arity() as usize;
        if assignment.len() != arity {
            return Err(Error::Arity {
                arity,
                got: assignment.len(),
            });
        }
        Ok(self.eval_unchecked(assignment))
    }

    fn eval_unchecked<G: GroupElement>(&self, assignment: &[G]) -> G {
        match self {
            Word::Variable(i) => assignment[*i as usize - 1].clone(),
            Word::Product(ws) => {
                let mut iter = ws.iter();
                let first = iter.next().expect("products are nonempty");
                let mut acc = first.eval_unchecked(assignment);
                for w in iter {
                    acc = acc.mul(&w.eval_unchecked(assignment));
                }
                acc
            }
            Word::Inverse(w) => w.eval_unchecked(assignment).inv(),
            Word::Power(w, n) => w.eval_unchecked(assignment).pow(*n),
            Word::Commutator(a, b) => a
                .eval_unchecked(assignment)
                .commutator(&b.eval_unchecked(assignment)),
            Word::Conjugate(a, b) => a
                .eval_unchecked(assignment)
                .conjugate(&b.eval_unchecked(assignment)),
        }
    }

    /// A random tree for round-trip testing. Power exponents avoid -1,
    /// which prints as the inverse suffix and would reparse as `Inverse`.
    pub fn random(rng: &mut SplitMix64, arity: u32, depth: u32) -> Word {
        assert!(arity >= 1);
        if depth == 0 {
            return Word::Variable(1 + rng.below(arity as u64) as u32);
        }
        let child = |rng: &mut SplitMix64| Box::new(Word::random(rng, arity, depth - 1));
        match rng.below(6) {
            0 => Word::Variable(1 + rng.below(arity as u64) as u32),
            1 => {
                let len = 2 + rng.below(2) as usize;
                Word::Product(
                    (0..len)
                        .map(|_| Word::random(rng, arity, depth - 1))
                        .collect(),
                )
            }
            2 => Word::Inverse(child(rng)),
            3 => {
                let exp = loop {
                    let e = rng.range_i64(-6, 6);
                    if e != -1 {
                        break e;
                    }
                };
                Word::Power(child(rng), exp)
            }
            4 => Word::Commutator(child(rng), child(rng)),
            _ => Word::Conjugate(child(rng), child(rng)),
        }
    }

    fn write_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(self, Word::Product(_)) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    fn write_conjugator(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(self, Word::Variable(_) | Word::Commutator(..)) {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Variable(i) => write!(f, "x{i}"),
            Word::Product(ws) => {
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    w.write_factor(f)?;
                }
                Ok(())
            }
            Word::Inverse(w) => {
                w.write_factor(f)?;
                write!(f, "^-1")
            }
            Word::Power(w, n) => {
                w.write_factor(f)?;
                write!(f, "^{n}")
            }
            Word::Commutator(a, b) => write!(f, "[{a},{b}]"),
            Word::Conjugate(a, b) => {
                a.write_factor(f)?;
                write!(f, "^")?;
                b.write_conjugator(f)
            }
        }
    }
}

/// Default cap for the vanishing-index search.
pub const DEFAULT_SEARCH_BOUND: u32 = 64;

/// Outcome of the vanishing-index search. Exhaustion is a value, not an
/// error: failing to find a vanishing iterate within the bound certifies
/// nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingSearch {
    Found { index: u32 },
    Exhausted { bound: u32 },
}

impl VanishingSearch {
    pub fn found(&self) -> Option<u32> {
        match self {
            VanishingSearch::Found { index } => Some(*index),
            VanishingSearch::Exhausted { .. } => None,
        }
    }
}

/// The memoized scan behind [`min_vanishing_index`]: `values[j]` is the
/// value of the j-th iterate, computed by feeding the previous value back
/// into the first slot, so the cost is linear in the number of iterates.
#[derive(Debug, Clone)]
pub struct VanishingScan<G> {
    pub values: Vec<G>,
    pub outcome: VanishingSearch,
}

pub fn scan_vanishing<G: GroupElement>(
    word: &Word,
    assignment: &[G],
    bound: u32,
) -> Result<VanishingScan<G>> {
    let mut values = Vec::new();
    let mut scratch = assignment.to_vec();
    let mut current = word.evaluate(assignment)?;
    for index in 0..=bound {
        values.push(current.clone());
        if current.is_identity() {
            return Ok(VanishingScan {
                values,
                outcome: VanishingSearch::Found { index },
            });
        }
        if index == bound {
            break;
        }
        scratch[0] = current;
        current = word.evaluate(&scratch)?;
    }
    Ok(VanishingScan {
        values,
        outcome: VanishingSearch::Exhausted { bound },
    })
}

/// The least j <= bound with `w^(j)(assignment) = 1`, or exhaustion.
pub fn min_vanishing_index<G: GroupElement>(
    word: &Word,
    assignment: &[G],
    bound: u32,
) -> Result<VanishingSearch> {
    Ok(scan_vanishing(word, assignment, bound)?.outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Prime;
    use crate::finite_oracle::OracleParams;
    use crate::groupring::BaseFunction;
    use proptest::prelude::*;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    fn var(i: u32) -> Word {
        Word::Variable(i)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            Word::parse("[x1,[x2,x3]]^2").unwrap(),
            Word::Power(
                Box::new(Word::Commutator(
                    Box::new(var(1)),
                    Box::new(Word::Commutator(Box::new(var(2)), Box::new(var(3)))),
                )),
                2,
            )
        );
        assert_eq!(Word::parse("x1").unwrap(), var(1));
        assert_eq!(
            Word::parse("[x1,_3 x2]").unwrap(),
            Word::Commutator(
                Box::new(Word::Commutator(
                    Box::new(Word::Commutator(Box::new(var(1)), Box::new(var(2)))),
                    Box::new(var(2)),
                )),
                Box::new(var(2)),
            )
        );
    }

    #[test]
    fn parse_products_powers_conjugates() {
        assert_eq!(
            Word::parse("x1 x2 * x3").unwrap(),
            Word::Product(vec![var(1), var(2), var(3)])
        );
        assert_eq!(
            Word::parse("x1^-1").unwrap(),
            Word::Inverse(Box::new(var(1)))
        );
        assert_eq!(
            Word::parse("x1^-3").unwrap(),
            Word::Power(Box::new(var(1)), -3)
        );
        assert_eq!(
            Word::parse("x1^x2").unwrap(),
            Word::Conjugate(Box::new(var(1)), Box::new(var(2)))
        );
        // suffixes chain left-associatively
        assert_eq!(
            Word::parse("x1^2^x2").unwrap(),
            Word::Conjugate(Box::new(Word::Power(Box::new(var(1)), 2)), Box::new(var(2)))
        );
        // parenthesized products stay nested
        assert_eq!(
            Word::parse("x1 (x2 x3)").unwrap(),
            Word::Product(vec![var(1), Word::Product(vec![var(2), var(3)])])
        );
        assert_eq!(
            Word::parse("(x1 x2)^2").unwrap(),
            Word::Power(Box::new(Word::Product(vec![var(1), var(2)])), 2)
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        match Word::parse("x0") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(Word::parse("").is_err());
        assert!(Word::parse("[x1,x2").is_err());
        assert!(Word::parse("x1^").is_err());
        assert!(Word::parse("x1)").is_err());
        assert!(Word::parse("y1").is_err());
        match Word::parse("[x1,)x2]") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn display_matches_grammar() {
        let w = Word::parse("[x1,[x2,x3]]^2").unwrap();
        assert_eq!(w.to_string(), "[x1,[x2,x3]]^2");
        let w = Word::parse("x1 (x2 x3)^-1").unwrap();
        assert_eq!(w.to_string(), "x1 (x2 x3)^-1");
        let w = Word::Conjugate(Box::new(var(1)), Box::new(Word::Power(Box::new(var(2)), 2)));
        assert_eq!(w.to_string(), "x1^(x2^2)");
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn iterate_reproduces_the_displayed_chain() {
        let w = Word::parse("[x1,[x2,x3]]^2").unwrap();
        assert_eq!(w.iterate(0), w);
        assert_eq!(w.iterate(0).to_string(), "[x1,[x2,x3]]^2");
        assert_eq!(w.iterate(1).to_string(), "[[x1,[x2,x3]]^2,[x2,x3]]^2");
        assert_eq!(
            w.iterate(2).to_string(),
            "[[[x1,[x2,x3]]^2,[x2,x3]]^2,[x2,x3]]^2"
        );
    }

    #[test]
    fn iterate_recursion_is_definitional() {
        let w = Word::parse("[x1,x2]^3").unwrap();
        for j in 0..6 {
            assert_eq!(w.iterate(j + 1), w.substitute(1, &w.iterate(j)));
        }
    }

    #[test]
    fn evaluate_basics() {
        let g = WreathElement::random(&mut SplitMix64::new(1), p2(), 3, 3);
        assert_eq!(var(1).evaluate(std::slice::from_ref(&g)).unwrap(), g);

        let w = Word::parse("[x1,x2]").unwrap();
        assert!(w.evaluate(&[g.clone(), g.clone()]).unwrap().is_identity());

        let w = Word::parse("[x1,[x2,x3]]^2").unwrap();
        let id = WreathElement::identity(p2());
        assert!(w
            .evaluate(&[id.clone(), id.clone(), id.clone()])
            .unwrap()
            .is_identity());

        assert_eq!(
            w.evaluate(std::slice::from_ref(&id)),
            Err(Error::Arity { arity: 3, got: 1 })
        );
    }

    #[test]
    fn evaluate_respects_carrier_composition() {
        let mut rng = SplitMix64::new(2);
        let a = WreathElement::random(&mut rng, p2(), 3, 3);
        let b = WreathElement::random(&mut rng, p2(), 3, 3);
        let assignment = [a.clone(), b.clone()];

        let product = Word::parse("x1 x2 x1").unwrap();
        assert_eq!(product.evaluate(&assignment).unwrap(), a.mul(&b).mul(&a));

        let power = Word::parse("x1^5").unwrap();
        assert_eq!(
            power.evaluate(std::slice::from_ref(&a)).unwrap(),
            a.pow_i64(5)
        );

        let inverse = Word::parse("x1^-1").unwrap();
        assert_eq!(inverse.evaluate(std::slice::from_ref(&a)).unwrap(), a.inv());

        let conj = Word::parse("x1^x2").unwrap();
        assert_eq!(conj.evaluate(&assignment).unwrap(), a.conjugate(&b));

        let engel3 = Word::parse("[x1,_3 x2]").unwrap();
        assert_eq!(engel3.evaluate(&assignment).unwrap(), engel(&a, &b, 3));
    }

    #[test]
    fn engel_examples() {
        let mut rng = SplitMix64::new(3);
        let a = WreathElement::random(&mut rng, p2(), 3, 3);
        let b = WreathElement::random(&mut rng, p2(), 3, 3);
        let id = WreathElement::identity(p2());
        assert_eq!(engel(&a, &b, 0), a);
        assert_eq!(engel(&a, &b, 1), a.commutator(&b));
        for n in 1..4 {
            assert!(engel(&a, &id, n).is_identity());
        }
    }

    #[test]
    fn power_word_exponent_bookkeeping() {
        // iterate("x1^p", j) evaluated at x equals x^(p^(j+1))
        let w = Word::parse("x1^2").unwrap();
        let x = PruferElement::new(p2(), 3, 5);
        for j in 0..5u32 {
            let via_word = w.iterate(j).evaluate(std::slice::from_ref(&x)).unwrap();
            assert_eq!(via_word, x.scale_i64(1 << (j + 1)));
        }
    }

    #[test]
    fn min_vanishing_examples() {
        let w = Word::parse("x1^2").unwrap();
        let x = PruferElement::new(p2(), 1, 3);
        assert_eq!(
            min_vanishing_index(&w, &[x], 10).unwrap(),
            VanishingSearch::Found { index: 2 }
        );

        let any = Word::parse("[x1,[x2,x3]]^2").unwrap();
        let id = WreathElement::identity(p2());
        assert_eq!(
            min_vanishing_index(&any, &[id.clone(), id.clone(), id], 10).unwrap(),
            VanishingSearch::Found { index: 0 }
        );

        // quasi-cyclic: index is the exponent minus one
        for e in 1..8u32 {
            let x = PruferElement::unit(p2(), e);
            assert_eq!(
                min_vanishing_index(&w, &[x], 32).unwrap(),
                VanishingSearch::Found { index: e - 1 }
            );
        }

        // exhaustion is a value
        let stuck = Word::parse("x1").unwrap();
        let x = PruferElement::unit(p2(), 1);
        assert_eq!(
            min_vanishing_index(&stuck, &[x], 5).unwrap(),
            VanishingSearch::Exhausted { bound: 5 }
        );
    }

    #[test]
    fn memoized_scan_matches_expanded_iterates() {
        let params = OracleParams::new(p2(), 2, 1);
        let mut rng = SplitMix64::new(4);
        let w = Word::parse("[x1,x2]^2 x1").unwrap();
        for _ in 0..10 {
            let a = FiniteWreathElement::random(&mut rng, params);
            let b = FiniteWreathElement::random(&mut rng, params);
            let assignment = [a, b];
            let scan = scan_vanishing(&w, &assignment, 5).unwrap();
            for (j, value) in scan.values.iter().enumerate() {
                let direct = w.iterate(j as u32).evaluate(&assignment).unwrap();
                assert_eq!(*value, direct);
            }
        }
    }

    #[test]
    fn wreath_carrier_smoke() {
        // a pure-top torsion assignment vanishes under x1^p
        let w = Word::parse("x1^2").unwrap();
        let g = WreathElement::from_top(PruferElement::unit(p2(), 4));
        assert_eq!(
            min_vanishing_index(&w, &[g], 10).unwrap(),
            VanishingSearch::Found { index: 3 }
        );
        // and a base-only element of full support order p^i
        let f = WreathElement::from_base(BaseFunction::delta(
            PruferElement::zero(p2()),
            PruferElement::unit(p2(), 4),
        ));
        assert_eq!(
            min_vanishing_index(&w, &[f], 10).unwrap(),
            VanishingSearch::Found { index: 3 }
        );
    }

    #[test]
    fn random_words_round_trip() {
        let mut rng = SplitMix64::new(20240811);
        for _ in 0..500 {
            let w = Word::random(&mut rng, 4, 4);
            let printed = w.to_string();
            let reparsed = Word::parse(&printed)
                .unwrap_or_else(|e| panic!("failed to reparse {printed:?}: {e}"));
            assert_eq!(reparsed, w, "print/parse mismatch for {printed:?}");
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(seed in any::<u64>(), depth in 0u32..5) {
            let w = Word::random(&mut SplitMix64::new(seed), 3, depth);
            prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
        }
    }
}
