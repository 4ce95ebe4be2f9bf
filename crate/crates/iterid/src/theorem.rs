//! The unbounded-iterated-identity scenario: images of the generators
//! z_i, y_i inside the wreath product, the Engel bracket elements built
//! from them, their exact orders, the iterate values along the word
//! `[x1,x2]^p`, and the relation checks.
//!
//! Indexing note. The word engine counts iterates from zero (`iterate(0)`
//! is the word itself), while [`GammaGenerators::minimal_index`] reports
//! how many applications of the word are needed, i.e. the zero-based index
//! of the first trivial iterate plus one. The two line up through
//! [`GammaGenerators::iterate_value`]: the value after j applications is
//! `bracket_element(j)^(p^j)`.

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::exactnum::{Prime, PruferElement};
use crate::groupring::BaseFunction;
use crate::words::{engel, min_vanishing_index, VanishingSearch, Word};
use crate::wreath::WreathElement;

/// Image of z_i: the base delta with coefficient 1/p^i at exponent 0.
/// z_0 maps to the identity (it is killed in the quotient).
pub fn z_image(prime: Prime, i: u32) -> WreathElement {
    WreathElement::from_base(BaseFunction::delta(
        PruferElement::zero(prime),
        PruferElement::unit(prime, i),
    ))
}

/// Image of y_i: the pure top element u^{1/p^i}; y_0 maps to the identity.
pub fn y_image(prime: Prime, i: u32) -> WreathElement {
    WreathElement::from_top(PruferElement::unit(prime, i))
}

/// The theorem word `[x1,[x2,x3]]^p`.
pub fn theorem_word(prime: Prime) -> Word {
    Word::Power(
        Box::new(Word::Commutator(
            Box::new(Word::Variable(1)),
            Box::new(Word::Commutator(
                Box::new(Word::Variable(2)),
                Box::new(Word::Variable(3)),
            )),
        )),
        prime.get() as i64,
    )
}

/// The curried form `[x1,x2]^p` with the inner commutator pre-evaluated.
/// The scenario assigns x2 and x3 to elements whose commutator is
/// `y_i^(p-1)`; neither has an image of its own here, so the word is
/// curried to two slots and x2 carries that commutator value. Iteration
/// only ever substitutes into the first slot, so the iterate chain is
/// unchanged.
pub fn curried_word(prime: Prime) -> Word {
    Word::Power(
        Box::new(Word::Commutator(
            Box::new(Word::Variable(1)),
            Box::new(Word::Variable(2)),
        )),
        prime.get() as i64,
    )
}

/// The images of the generators at parameter i >= 1, and everything the
/// scenario computes from them.
#[derive(Debug, Clone)]
pub struct GammaGenerators {
    prime: Prime,
    i: u32,
    z: WreathElement,
    y: WreathElement,
}

impl GammaGenerators {
    pub fn new(prime: Prime, i: u32) -> Self {
        assert!(i >= 1, "the scenario parameter starts at 1");
        GammaGenerators {
            prime,
            i,
            z: z_image(prime, i),
            y: y_image(prime, i),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn z(&self) -> &WreathElement {
        &self.z
    }

    pub fn y(&self) -> &WreathElement {
        &self.y
    }

    /// `y_i^(p-1)`, the element the curried word's second slot receives.
    pub fn y_power(&self) -> WreathElement {
        self.y.pow_i64(self.prime.get() as i64 - 1)
    }

    /// The Engel bracket `[z_i,_j y_i^(p-1)]`, computed purely by group
    /// operations; j = 0 is the bare z_i image.
    pub fn bracket_element(&self, j: u32) -> WreathElement {
        engel(&self.z, &self.y_power(), j)
    }

    /// Exact order of the bracket element. For j < i this is p^i; for
    /// every j it divides p^i.
    pub fn engel_order(&self, j: u32) -> BigUint {
        self.bracket_element(j).order()
    }

    /// The value after j >= 1 applications of the word:
    /// `bracket_element(j)^(p^j)`. Nontrivial exactly when j < i.
    pub fn iterate_value(&self, j: u32) -> WreathElement {
        let power = BigInt::from(self.prime.get()).pow(j);
        self.bracket_element(j).pow(&power)
    }

    /// The same value computed the literal way: iterate the curried word
    /// j - 1 times (the first application is the word itself) and evaluate
    /// at `(z_i, y_i^(p-1))`. Must agree with [`Self::iterate_value`] for
    /// every j >= 1; j = 0 denotes the bare first application.
    pub fn literal_iterate_value(&self, j: u32) -> WreathElement {
        let word = curried_word(self.prime);
        let assignment = [self.z.clone(), self.y_power()];
        let iterations = j.saturating_sub(1);
        word.iterate(iterations)
            .evaluate(&assignment)
            .expect("curried word has arity 2")
    }

    /// How many applications of the word reach the identity: the zero-based
    /// vanishing index of the curried word at the scenario assignment, plus
    /// one. Errors if the search bound is below the true index.
    pub fn minimal_index(&self, bound: u32) -> Result<u32> {
        let word = curried_word(self.prime);
        let assignment = [self.z.clone(), self.y_power()];
        match min_vanishing_index(&word, &assignment, bound)? {
            VanishingSearch::Found { index } => Ok(index + 1),
            VanishingSearch::Exhausted { bound } => Err(Error::Exhausted { bound }),
        }
    }
}

/// Applies the unit relating the printed form of the bracket to this
/// crate's commutator convention. The bracket base is
/// `coeff * (u^{-b} - 1)^j`, which differs from the expansion of
/// `coeff * (u^b - 1)^j` by `(-1)^j u^{-jb}`: negate for odd j and
/// translate by -j*b.
pub fn convention_adjust(expansion: BaseFunction, b: &PruferElement, j: u32) -> BaseFunction {
    let signed = if j % 2 == 1 {
        expansion.neg()
    } else {
        expansion
    };
    signed.translate(&b.scale(&BigInt::from(-(i64::from(j)))))
}

/// The bracket element's base, predicted from the binomial expansion
/// instead of group operations.
pub fn convention_adjusted_expansion(
    coeff: &PruferElement,
    b: &PruferElement,
    j: u32,
) -> BaseFunction {
    convention_adjust(BaseFunction::engel_expand(coeff, b, j), b, j)
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Checks every defining relation of the generating set on its images:
/// `[z_i, y_j^s, z_k] = 1`, `z_i = z_{i+1}^p`, `y_i = y_{i+1}^p`, and
/// `[z_0, y_0] = 1`, over the given index ranges. Failures are reported,
/// not thrown.
pub fn check_h_relations(
    prime: Prime,
    i_max: u32,
    j_max: u32,
    k_max: u32,
    s_range: RangeInclusive<i64>,
) -> RelationReport {
    let p = prime.get() as i64;
    let mut checks = Vec::new();

    for i in 0..=i_max {
        checks.push(RelationCheck {
            relation: format!("z{i} = z{}^{p}", i + 1),
            holds: z_image(prime, i + 1).pow_i64(p) == z_image(prime, i),
        });
        checks.push(RelationCheck {
            relation: format!("y{i} = y{}^{p}", i + 1),
            holds: y_image(prime, i + 1).pow_i64(p) == y_image(prime, i),
        });
    }

    checks.push(RelationCheck {
        relation: "[z0,y0] = 1".into(),
        holds: z_image(prime, 0)
            .commutator(&y_image(prime, 0))
            .is_identity(),
    });

    for i in 0..=i_max {
        for j in 0..=j_max {
            for s in s_range.clone() {
                for k in 0..=k_max {
                    let inner = z_image(prime, i).commutator(&y_image(prime, j).pow_i64(s));
                    let holds = inner.commutator(&z_image(prime, k)).is_identity();
                    checks.push(RelationCheck {
                        relation: format!("[z{i},y{j}^{s},z{k}] = 1"),
                        holds,
                    });
                }
            }
        }
    }

    RelationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn generator_images() {
        assert!(z_image(p(2), 0).is_identity());
        assert!(y_image(p(2), 0).is_identity());
        let g = GammaGenerators::new(p(2), 3);
        assert_eq!(
            g.z()
                .base()
                .coefficient(&PruferElement::zero(p(2)))
                .to_string(),
            "1/8"
        );
        assert!(g.z().top().is_zero());
        assert!(g.y().base().is_zero());
        assert_eq!(g.y().top().to_string(), "1/8");
    }

    #[test]
    fn bracket_element_examples() {
        let g = GammaGenerators::new(p(2), 1);
        assert_eq!(g.bracket_element(0), g.z().clone());

        let b1 = g.bracket_element(1);
        assert!(b1.top().is_zero());
        let half = PruferElement::new(p(2), 1, 1);
        assert_eq!(b1.base().coefficient(&PruferElement::zero(p(2))), half);
        assert_eq!(b1.base().coefficient(&half), half);
        assert_eq!(b1.base().support_len(), 2);

        assert!(g.bracket_element(2).is_identity());
    }

    #[test]
    fn bracket_base_matches_adjusted_expansion() {
        for prime in [2u64, 3, 5] {
            let prime = p(prime);
            for i in 1..=4u32 {
                let g = GammaGenerators::new(prime, i);
                let coeff = PruferElement::unit(prime, i);
                let b = PruferElement::unit(prime, i).scale_i64(prime.get() as i64 - 1);
                for j in 0..=(i + 2) {
                    let bracket = g.bracket_element(j);
                    if j >= 1 {
                        assert!(bracket.top().is_zero());
                    }
                    assert_eq!(
                        bracket.base(),
                        &convention_adjusted_expansion(&coeff, &b, j),
                        "p={prime} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn engel_order_examples() {
        assert_eq!(
            GammaGenerators::new(p(2), 3).engel_order(2),
            BigUint::from(8u32)
        );
        assert_eq!(
            GammaGenerators::new(p(3), 1).engel_order(0),
            BigUint::from(3u32)
        );
        assert!(GammaGenerators::new(p(2), 1).engel_order(2).is_one());
    }

    #[test]
    fn order_law_holds_below_i() {
        for prime in [2u64, 3, 5] {
            for i in 1..=5u32 {
                let g = GammaGenerators::new(p(prime), i);
                let expected = p(prime).pow(i);
                for j in 0..i {
                    assert_eq!(g.engel_order(j), expected, "p={prime} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn engel_order_always_divides_p_to_i() {
        // for j >= i nothing is asserted beyond divisibility; the values
        // are computed and reported by the verify suite
        for prime in [2u64, 3] {
            for i in 1..=4u32 {
                let g = GammaGenerators::new(p(prime), i);
                let cap = p(prime).pow(i);
                for j in i..i + 4 {
                    let ord = g.engel_order(j);
                    assert!((&cap % &ord).is_zero(), "p={prime} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn surviving_constant_coefficient() {
        // the coefficient at exponent 0 keeps order exactly p^i while j < i
        for prime in [2u64, 3, 5] {
            for i in 1..=5u32 {
                let g = GammaGenerators::new(p(prime), i);
                for j in 0..i {
                    let bracket = g.bracket_element(j);
                    let at_zero = bracket.base().coefficient(&PruferElement::zero(p(prime)));
                    assert_eq!(at_zero.order(), p(prime).pow(i), "p={prime} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn iterate_value_examples() {
        assert!(!GammaGenerators::new(p(2), 4).iterate_value(2).is_identity());
        assert!(GammaGenerators::new(p(2), 2).iterate_value(2).is_identity());
        assert!(GammaGenerators::new(p(3), 1).iterate_value(5).is_identity());
    }

    #[test]
    fn iterate_value_triviality_boundary() {
        for prime in [2u64, 3, 5] {
            for i in 1..=5u32 {
                let g = GammaGenerators::new(p(prime), i);
                for j in 1..=(i + 3) {
                    assert_eq!(
                        g.iterate_value(j).is_identity(),
                        j >= i,
                        "p={prime} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn literal_matches_closed_form() {
        let g = GammaGenerators::new(p(2), 3);
        let expected = g.z().commutator(&g.y_power()).pow_i64(2);
        assert_eq!(g.literal_iterate_value(0), expected);

        assert_eq!(g.literal_iterate_value(1), g.iterate_value(1));
        assert!(GammaGenerators::new(p(2), 2)
            .literal_iterate_value(4)
            .is_identity());

        for prime in [2u64, 3] {
            for i in 1..=4u32 {
                let g = GammaGenerators::new(p(prime), i);
                for j in 1..=(i + 3) {
                    assert_eq!(
                        g.literal_iterate_value(j),
                        g.iterate_value(j),
                        "p={prime} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn minimal_index_examples() {
        assert_eq!(GammaGenerators::new(p(2), 1).minimal_index(12).unwrap(), 1);
        assert_eq!(GammaGenerators::new(p(3), 4).minimal_index(12).unwrap(), 4);
        assert_eq!(GammaGenerators::new(p(5), 2).minimal_index(12).unwrap(), 2);
        assert_eq!(
            GammaGenerators::new(p(2), 5).minimal_index(2),
            Err(Error::Exhausted { bound: 2 })
        );
    }

    #[test]
    fn relations_hold_on_images() {
        for prime in [2u64, 3] {
            let report = check_h_relations(p(prime), 3, 3, 3, -4..=4);
            assert!(
                report.all_hold(),
                "failures: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn relation_instances_from_the_presentation() {
        // z_{i+1}^p = z_i as elements, not only in the report
        for i in 0..4u32 {
            assert_eq!(z_image(p(2), i + 1).pow_i64(2), z_image(p(2), i));
        }
        assert!(z_image(p(2), 0).commutator(&y_image(p(2), 0)).is_identity());
        let inner = z_image(p(2), 2).commutator(&y_image(p(2), 1).pow_i64(-3));
        assert!(inner.commutator(&z_image(p(2), 1)).is_identity());
    }
}
