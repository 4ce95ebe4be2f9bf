//! The full check suite: theorem sweeps, relation transport, oracle
//! cross-validation, randomized property suites, and the word-DSL
//! round-trip, each producing flat records that render as text or as a
//! line-delimited JSON stream.
//!
//! Records are deterministic in (config, seed): sampling derives one
//! generator stream per grid index, so parallel execution cannot reorder
//! or reseed anything. Timings are reported in the text rendering only,
//! keeping the structured stream byte-identical across runs.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactnum::{Prime, PruferElement};
use crate::finite_oracle::{FiniteWreathElement, OracleParams};
use crate::groupring::BaseFunction;
use crate::rng::SplitMix64;
use crate::sweep::map_ordered;
use crate::theorem::{check_h_relations, convention_adjust, GammaGenerators};
use crate::words::Word;
use crate::wreath::WreathElement;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub primes: Vec<Prime>,
    pub i_max: u32,
    pub seed: u64,
    /// Sample count for each randomized property suite.
    pub property_samples: usize,
    /// Pair count for each randomized oracle transport run.
    pub oracle_pairs: usize,
    /// Search bound for the minimal-index sweep.
    pub bound: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            primes: [2u64, 3, 5]
                .iter()
                .map(|&p| Prime::new(p).expect("literal prime"))
                .collect(),
            i_max: 6,
            seed: 1,
            property_samples: 1000,
            oracle_pairs: 500,
            bound: 12,
        }
    }
}

/// One check outcome. `result` is `pass`, `fail`, or `info` for values
/// that are reported without an expected answer.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: String,
    pub result: String,
    pub value: String,
}

impl CheckRecord {
    pub fn pass(check: &str, params: String, value: String) -> Self {
        CheckRecord {
            check: check.into(),
            params,
            result: "pass".into(),
            value,
        }
    }

    pub fn of(check: &str, params: String, ok: bool, value: String) -> Self {
        CheckRecord {
            check: check.into(),
            params,
            result: if ok { "pass" } else { "fail" }.into(),
            value,
        }
    }

    pub fn info(check: &str, params: String, value: String) -> Self {
        CheckRecord {
            check: check.into(),
            params,
            result: "info".into(),
            value,
        }
    }

    pub fn failed(&self) -> bool {
        self.result == "fail"
    }
}

#[derive(Debug, Clone)]
pub struct CheckGroup {
    pub name: String,
    pub records: Vec<CheckRecord>,
    pub elapsed: Duration,
}

impl CheckGroup {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.failed()).count()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub groups: Vec<CheckGroup>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.groups.iter().all(|g| g.failures() == 0)
    }

    pub fn total_checks(&self) -> usize {
        self.groups.iter().map(|g| g.records.len()).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.groups.iter().map(|g| g.failures()).sum()
    }

    pub fn render_text(&self, out: &mut impl Write) -> io::Result<()> {
        for group in &self.groups {
            let failures = group.failures();
            let status = if failures == 0 { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "[{status}] {:<20} {:>5} checks  {:>3} failed  {:>9.3?}",
                group.name,
                group.records.len(),
                failures,
                group.elapsed
            )?;
            for record in group.records.iter().filter(|r| r.failed()) {
                writeln!(
                    out,
                    "       fail {} {}  value={}",
                    record.check, record.params, record.value
                )?;
            }
        }
        writeln!(
            out,
            "{} checks, {} failed",
            self.total_checks(),
            self.total_failures()
        )
    }

    pub fn render_json_lines(&self, out: &mut impl Write) -> io::Result<()> {
        for group in &self.groups {
            for record in &group.records {
                serde_json::to_writer(&mut *out, record)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn timed<F: FnOnce() -> Vec<CheckRecord>>(name: &str, f: F) -> CheckGroup {
    let start = Instant::now();
    let records = f();
    CheckGroup {
        name: name.into(),
        records,
        elapsed: start.elapsed(),
    }
}

/// Runs every group of the suite.
pub fn run_all(config: &VerifyConfig) -> VerifyReport {
    VerifyReport {
        groups: vec![
            check_order_law(config),
            check_minimal_index(config),
            check_rewriting(config),
            check_engel_expression(config),
            check_oracle(config),
            check_group_axioms(config),
            check_metabelian(config),
            check_commutator_torsion(config),
            check_relations(config),
            check_dsl(config),
        ],
    }
}

/// Order law: `order([z_i,_j y_i^(p-1)]) = p^i` for j < i. Orders at
/// j >= i are computed and reported without an asserted value.
pub fn check_order_law(config: &VerifyConfig) -> CheckGroup {
    let mut cells = Vec::new();
    for &p in &config.primes {
        for i in 1..=config.i_max {
            for j in 0..i + 4 {
                cells.push((p, i, j));
            }
        }
    }
    timed("order_law", || {
        map_ordered(cells, |(p, i, j)| {
            let generators = GammaGenerators::new(p, i);
            let order = generators.engel_order(j);
            let params = format!("p={p} i={i} j={j}");
            if j < i {
                CheckRecord::of("order_law", params, order == p.pow(i), order.to_string())
            } else {
                CheckRecord::info("engel_order_reported", params, order.to_string())
            }
        })
    })
}

/// Unboundedness witness: the scenario at parameter i needs exactly i
/// applications of the word.
pub fn check_minimal_index(config: &VerifyConfig) -> CheckGroup {
    let mut cells = Vec::new();
    for &p in &config.primes {
        for i in 1..=config.i_max {
            cells.push((p, i));
        }
    }
    let bound = config.bound;
    timed("minimal_index", || {
        map_ordered(cells, move |(p, i)| {
            let params = format!("p={p} i={i}");
            match GammaGenerators::new(p, i).minimal_index(bound) {
                Ok(found) => {
                    CheckRecord::of("minimal_index", params, found == i, found.to_string())
                }
                Err(e) => CheckRecord::of("minimal_index", params, false, e.to_string()),
            }
        })
    })
}

/// Literal word evaluation against the closed form `bracket^(p^j)`, plus
/// the triviality boundary: the value is the identity exactly when j >= i.
pub fn check_rewriting(config: &VerifyConfig) -> CheckGroup {
    let mut cells = Vec::new();
    for &p in &config.primes {
        for i in 1..=config.i_max {
            for j in 1..=i + 3 {
                cells.push((p, i, j));
            }
        }
    }
    timed("rewriting", || {
        map_ordered(cells, |(p, i, j)| {
            let generators = GammaGenerators::new(p, i);
            let closed = generators.iterate_value(j);
            let literal = generators.literal_iterate_value(j);
            let ok = literal == closed && closed.is_identity() == (j >= i);
            let value = if ok {
                closed.to_string()
            } else {
                format!("literal={literal} closed={closed}")
            };
            CheckRecord::of("rewriting", format!("p={p} i={i} j={j}"), ok, value)
        })
    })
}

/// Engel expression: the bracket base against the convention-adjusted
/// binomial expansion, and survival of the constant coefficient at full
/// order p^i.
pub fn check_engel_expression(config: &VerifyConfig) -> CheckGroup {
    check_engel_expression_with(config, BaseFunction::engel_expand)
}

/// Same check with the expansion route injectable, so a corrupted
/// expansion is demonstrably detected. Production callers use
/// [`check_engel_expression`].
pub fn check_engel_expression_with<F>(config: &VerifyConfig, expand: F) -> CheckGroup
where
    F: Fn(&PruferElement, &PruferElement, u32) -> BaseFunction + Send + Sync,
{
    let mut cells = Vec::new();
    for &p in &config.primes {
        for i in 1..=config.i_max {
            for j in 0..i {
                cells.push((p, i, j));
            }
        }
    }
    timed("engel_expression", || {
        map_ordered(cells, |(p, i, j)| {
            let generators = GammaGenerators::new(p, i);
            let bracket = generators.bracket_element(j);
            let coeff = PruferElement::unit(p, i);
            let b = coeff.scale_i64(p.get() as i64 - 1);
            let expected = convention_adjust(expand(&coeff, &b, j), &b, j);
            let base_matches = bracket.base() == &expected;
            let constant = bracket.base().coefficient(&PruferElement::zero(p));
            let constant_order_ok = constant.order() == p.pow(i);
            let ok = base_matches && constant_order_ok;
            let value = if ok {
                bracket.base().to_string()
            } else {
                format!("bracket={} expected={expected}", bracket.base())
            };
            CheckRecord::of("engel_expression", format!("p={p} i={i} j={j}"), ok, value)
        })
    })
}

fn transport_agrees(a: &FiniteWreathElement, b: &FiniteWreathElement) -> bool {
    let ea = a.embed();
    let eb = b.embed();
    a.mul(b).embed() == ea.mul(&eb)
        && a.inv().embed() == ea.inv()
        && a.commutator(b).embed() == ea.commutator(&eb)
        && BigUint::from(a.order_bruteforce()) == ea.order()
        && BigUint::from(b.order_bruteforce()) == eb.order()
}

/// Oracle transport: exhaustive agreement on the two smallest groups,
/// randomized agreement on the larger parameter sets.
pub fn check_oracle(config: &VerifyConfig) -> CheckGroup {
    let two = Prime::new(2).expect("literal prime");
    let three = Prime::new(3).expect("literal prime");
    let exhaustive = vec![OracleParams::new(two, 1, 1), OracleParams::new(two, 2, 1)];
    let randomized = vec![OracleParams::new(two, 2, 2), OracleParams::new(three, 1, 1)];
    let pairs = config.oracle_pairs;
    let seed = config.seed;

    timed("oracle", || {
        let mut records = map_ordered(exhaustive, |params| {
            let all = FiniteWreathElement::enumerate(params);
            let mut ok = true;
            for a in &all {
                for b in &all {
                    ok &= transport_agrees(a, b);
                }
            }
            CheckRecord::of(
                "oracle_exhaustive",
                format!("p={} k={} m={}", params.prime(), params.k, params.m),
                ok,
                format!("elements={} pairs={}", all.len(), all.len() * all.len()),
            )
        });
        records.extend(map_ordered(randomized, |params| {
            let mut ok = true;
            for index in 0..pairs {
                let mut rng = SplitMix64::for_index(seed, index as u64);
                let a = FiniteWreathElement::random(&mut rng, params);
                let b = FiniteWreathElement::random(&mut rng, params);
                ok &= transport_agrees(&a, &b);
            }
            CheckRecord::of(
                "oracle_random",
                format!("p={} k={} m={}", params.prime(), params.k, params.m),
                ok,
                format!("pairs={pairs}"),
            )
        }));
        records
    })
}

/// Oracle transport for a single prime, used by the CLI `oracle`
/// subcommand: exhaustive wherever the whole group is small enough to
/// enumerate, seeded random pairs everywhere else.
pub fn check_oracle_for_prime(prime: Prime, seed: u64, pairs: usize) -> CheckGroup {
    const EXHAUSTIVE_LIMIT: u32 = 128;
    let param_sets = vec![
        OracleParams::new(prime, 1, 1),
        OracleParams::new(prime, 2, 1),
        OracleParams::new(prime, 2, 2),
    ];
    timed("oracle", || {
        map_ordered(param_sets, |params| {
            let label = format!("p={} k={} m={}", params.prime(), params.k, params.m);
            if params.group_order() <= BigUint::from(EXHAUSTIVE_LIMIT) {
                let all = FiniteWreathElement::enumerate(params);
                let mut ok = true;
                for a in &all {
                    for b in &all {
                        ok &= transport_agrees(a, b);
                    }
                }
                let count = all.len();
                CheckRecord::of(
                    "oracle_exhaustive",
                    label,
                    ok,
                    format!("elements={count} pairs={}", count * count),
                )
            } else {
                let mut ok = true;
                for index in 0..pairs {
                    let mut rng = SplitMix64::for_index(seed, index as u64);
                    let a = FiniteWreathElement::random(&mut rng, params);
                    let b = FiniteWreathElement::random(&mut rng, params);
                    ok &= transport_agrees(&a, &b);
                }
                CheckRecord::of("oracle_random", label, ok, format!("pairs={pairs}"))
            }
        })
    })
}

fn random_gamma(rng: &mut SplitMix64, prime: Prime) -> WreathElement {
    WreathElement::random(rng, prime, 3, 3)
}

/// Group axioms on random triples: associativity, identity, inverses.
pub fn check_group_axioms(config: &VerifyConfig) -> CheckGroup {
    let samples = config.property_samples;
    let seed = config.seed;
    let primes = config.primes.clone();
    timed("group_axioms", || {
        map_ordered(primes, |p| {
            let mut ok = true;
            for index in 0..samples {
                let mut rng = SplitMix64::for_index(seed, index as u64);
                let a = random_gamma(&mut rng, p);
                let b = random_gamma(&mut rng, p);
                let c = random_gamma(&mut rng, p);
                ok &= a.mul(&b).mul(&c) == a.mul(&b.mul(&c));
                ok &= a.mul(&WreathElement::identity(p)) == a
                    && WreathElement::identity(p).mul(&a) == a;
                ok &= a.mul(&a.inv()).is_identity() && a.inv().mul(&a).is_identity();
            }
            CheckRecord::of(
                "group_axioms",
                format!("p={p}"),
                ok,
                format!("samples={samples}"),
            )
        })
    })
}

/// Metabelian law: `[[a,b],[c,d]] = 1` on random quadruples, and every
/// commutator has trivial top component.
pub fn check_metabelian(config: &VerifyConfig) -> CheckGroup {
    let samples = config.property_samples;
    let seed = config.seed;
    let primes = config.primes.clone();
    timed("metabelian", || {
        map_ordered(primes, |p| {
            let mut ok = true;
            for index in 0..samples {
                let mut rng = SplitMix64::for_index(seed, index as u64);
                let left = random_gamma(&mut rng, p).commutator(&random_gamma(&mut rng, p));
                let right = random_gamma(&mut rng, p).commutator(&random_gamma(&mut rng, p));
                ok &= left.top().is_zero() && right.top().is_zero();
                ok &= left.commutator(&right).is_identity();
            }
            CheckRecord::of(
                "metabelian",
                format!("p={p}"),
                ok,
                format!("samples={samples}"),
            )
        })
    })
}

fn p_power_exponent(mut n: BigUint, p: u64) -> Option<u32> {
    let p = BigUint::from(p);
    let mut exponent = 0;
    while n > BigUint::one() {
        if (&n % &p).is_zero() {
            n /= &p;
            exponent += 1;
        } else {
            return None;
        }
    }
    Some(exponent)
}

/// Torsion of commutators: the order of `[a,b]` is a power of p that kills
/// the element and is minimal.
pub fn check_commutator_torsion(config: &VerifyConfig) -> CheckGroup {
    let samples = config.property_samples;
    let seed = config.seed;
    let primes = config.primes.clone();
    timed("commutator_torsion", || {
        map_ordered(primes, |p| {
            let mut ok = true;
            let mut max_exponent = 0;
            for index in 0..samples {
                let mut rng = SplitMix64::for_index(seed, index as u64);
                let u = random_gamma(&mut rng, p).commutator(&random_gamma(&mut rng, p));
                let order = u.order();
                match p_power_exponent(order.clone(), p.get()) {
                    None => ok = false,
                    Some(e) => max_exponent = max_exponent.max(e),
                }
                ok &= u.pow(&BigInt::from(order.clone())).is_identity();
                if order > BigUint::one() {
                    let shy = BigInt::from(order / p.get());
                    ok &= !u.pow(&shy).is_identity();
                }
            }
            CheckRecord::of(
                "commutator_torsion",
                format!("p={p}"),
                ok,
                format!("samples={samples} max_order={p}^{max_exponent}"),
            )
        })
    })
}

/// Relation transport over the requested index ranges.
pub fn check_relations(config: &VerifyConfig) -> CheckGroup {
    let primes = config.primes.clone();
    timed("relations", || {
        map_ordered(primes, |p| {
            let report = check_h_relations(p, 5, 5, 5, -6..=6);
            let failures: Vec<_> = report.failures().map(|c| c.relation.clone()).collect();
            let value = if failures.is_empty() {
                format!("relations={}", report.checks.len())
            } else {
                format!("failed: {}", failures.join(", "))
            };
            CheckRecord::of("relations", format!("p={p}"), failures.is_empty(), value)
        })
    })
}

/// DSL round-trip on random trees plus the three displayed iterates of the
/// theorem word at p = 2.
pub fn check_dsl(config: &VerifyConfig) -> CheckGroup {
    let samples = config.property_samples;
    let seed = config.seed;
    timed("dsl", || {
        let mut ok = true;
        let mut first_failure = String::new();
        for index in 0..samples {
            let mut rng = SplitMix64::for_index(seed, index as u64);
            let word = Word::random(&mut rng, 4, 4);
            let printed = word.to_string();
            if Word::parse(&printed).ok() != Some(word) {
                ok = false;
                if first_failure.is_empty() {
                    first_failure = printed.clone();
                }
            }
        }
        let mut records = vec![CheckRecord::of(
            "dsl_roundtrip",
            String::new(),
            ok,
            if ok {
                format!("samples={samples}")
            } else {
                format!("failed on {first_failure:?}")
            },
        )];

        let expected = [
            "[x1,[x2,x3]]^2",
            "[[x1,[x2,x3]]^2,[x2,x3]]^2",
            "[[[x1,[x2,x3]]^2,[x2,x3]]^2,[x2,x3]]^2",
        ];
        let word = crate::theorem::theorem_word(Prime::new(2).expect("literal prime"));
        for (j, want) in expected.iter().enumerate() {
            let got = word.iterate(j as u32).to_string();
            records.push(CheckRecord::of(
                "dsl_iterates",
                format!("p=2 j={j}"),
                got == *want,
                got,
            ));
        }
        records
    })
}
