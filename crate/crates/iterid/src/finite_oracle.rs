//! Explicit finite wreath products C_{p^k} wr C_{p^m}, used as an
//! independent oracle: every operation here is brute force on small vectors
//! of residues, with no shared code path into the exact implementation. The
//! embedding into the infinite group transports results for cross-checking.

use std::fmt;

use num_bigint::BigUint;

use crate::exactnum::{Prime, PruferElement};
use crate::groupring::BaseFunction;
use crate::rng::SplitMix64;
use crate::wreath::WreathElement;

/// Parameters (p, k, m) of the finite group C_{p^k} wr C_{p^m}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleParams {
    prime: Prime,
    pub k: u32,
    pub m: u32,
}

impl OracleParams {
    pub fn new(prime: Prime, k: u32, m: u32) -> Self {
        let params = OracleParams { prime, k, m };
        params.base_modulus();
        params.top_modulus();
        params
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// p^k, the coefficient modulus.
    pub fn base_modulus(&self) -> u64 {
        self.prime
            .get()
            .checked_pow(self.k)
            .expect("p^k fits in u64")
    }

    /// p^m, the number of lamp positions and the shift modulus.
    pub fn top_modulus(&self) -> u64 {
        self.prime
            .get()
            .checked_pow(self.m)
            .expect("p^m fits in u64")
    }

    /// |C_{p^k} wr C_{p^m}| = p^{k p^m + m}.
    pub fn group_order(&self) -> BigUint {
        let positions = u32::try_from(self.top_modulus()).expect("p^m fits in u32");
        self.prime.pow(self.k * positions + self.m)
    }
}

/// An element: one residue mod p^k per position of C_{p^m}, plus a shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteWreathElement {
    params: OracleParams,
    base: Vec<u64>,
    shift: u64,
}

#[track_caller]
fn assert_same_params(a: &OracleParams, b: &OracleParams) {
    assert_eq!(a, b, "mixed oracle parameters: {a:?} vs {b:?}");
}

impl FiniteWreathElement {
    pub fn new(params: OracleParams, base: Vec<u64>, shift: u64) -> Self {
        assert_eq!(
            base.len() as u64,
            params.top_modulus(),
            "base must have one entry per position of C_{{p^m}}"
        );
        assert!(base.iter().all(|&c| c < params.base_modulus()));
        assert!(shift < params.top_modulus());
        FiniteWreathElement {
            params,
            base,
            shift,
        }
    }

    pub fn identity(params: OracleParams) -> Self {
        let n = params.top_modulus() as usize;
        FiniteWreathElement {
            params,
            base: vec![0; n],
            shift: 0,
        }
    }

    pub fn params(&self) -> OracleParams {
        self.params
    }

    pub fn base(&self) -> &[u64] {
        &self.base
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.base.iter().all(|&c| c == 0)
    }

    /// Product: entry r of the result is `a[r] + b[(r - shift_a) mod p^m]`,
    /// shifts add. The shift direction is the one that makes the embedding
    /// a homomorphism, which the tests validate rather than assume.
    pub fn mul(&self, other: &FiniteWreathElement) -> FiniteWreathElement {
        assert_same_params(&self.params, &other.params);
        let n = self.params.top_modulus();
        let pk = self.params.base_modulus();
        let base = (0..n)
            .map(|r| {
                let other_idx = (r + n - self.shift) % n;
                (self.base[r as usize] + other.base[other_idx as usize]) % pk
            })
            .collect();
        FiniteWreathElement {
            params: self.params,
            base,
            shift: (self.shift + other.shift) % n,
        }
    }

    pub fn inv(&self) -> FiniteWreathElement {
        let n = self.params.top_modulus();
        let pk = self.params.base_modulus();
        let base = (0..n)
            .map(|r| {
                let src = (r + self.shift) % n;
                (pk - self.base[src as usize]) % pk
            })
            .collect();
        FiniteWreathElement {
            params: self.params,
            base,
            shift: (n - self.shift) % n,
        }
    }

    pub fn commutator(&self, other: &FiniteWreathElement) -> FiniteWreathElement {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    /// Least n >= 1 with a^n = 1, by repeated multiplication. Bounded by
    /// the group order, so this terminates unconditionally.
    pub fn order_bruteforce(&self) -> u64 {
        let mut acc = self.clone();
        let mut n = 1u64;
        while !acc.is_identity() {
            acc = acc.mul(self);
            n += 1;
        }
        n
    }

    /// The injective homomorphism into the infinite group: residue c at
    /// position r maps to coefficient c/p^k at exponent r/p^m, shift s to
    /// top s/p^m.
    pub fn embed(&self) -> WreathElement {
        let p = self.params.prime;
        let mut base = BaseFunction::zero(p);
        for (r, &c) in self.base.iter().enumerate() {
            let exponent = PruferElement::new(p, r as i64, self.params.m);
            let coeff = PruferElement::new(p, c as i64, self.params.k);
            base = base.add(&BaseFunction::delta(exponent, coeff));
        }
        let top = PruferElement::new(p, self.shift as i64, self.params.m);
        WreathElement::new(base, top)
    }

    /// Uniform random element, deterministic in the generator state.
    pub fn random(rng: &mut SplitMix64, params: OracleParams) -> Self {
        let n = params.top_modulus();
        let pk = params.base_modulus();
        let base = (0..n).map(|_| rng.below(pk)).collect();
        let shift = rng.below(n);
        FiniteWreathElement {
            params,
            base,
            shift,
        }
    }

    /// All p^{k p^m + m} elements, for exhaustive runs on tiny parameters.
    pub fn enumerate(params: OracleParams) -> Vec<FiniteWreathElement> {
        let n = params.top_modulus() as usize;
        let pk = params.base_modulus();
        let mut out = Vec::new();
        let mut base = vec![0u64; n];
        loop {
            for shift in 0..params.top_modulus() {
                out.push(FiniteWreathElement {
                    params,
                    base: base.clone(),
                    shift,
                });
            }
            // odometer increment over the base entries
            let mut pos = 0;
            loop {
                if pos == n {
                    return out;
                }
                base[pos] += 1;
                if base[pos] < pk {
                    break;
                }
                base[pos] = 0;
                pos += 1;
            }
        }
    }
}

impl fmt::Display for FiniteWreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "([")?;
        for (i, c) in self.base.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "], {})", self.shift)
    }
}

impl serde::Serialize for FiniteWreathElement {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = serializer.serialize_struct("FiniteWreathElement", 2)?;
        state.serialize_field("base", &self.base)?;
        state.serialize_field("shift", &self.shift)?;
        state.end()
    }
}
