//! Seedable pseudorandom generator used by the finite oracle and the
//! randomized check suites.
//!
//! SplitMix64 with the usual constants. The point of pinning the generator
//! (rather than pulling in a general-purpose RNG crate) is that every test
//! case is reproducible from its seed alone, in any language: the update is
//! three xor-shift-multiply steps on a 64-bit counter.

/// SplitMix64 stream. `new(seed)` always yields the same sequence.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derives an independent stream for grid cell `index`, so parallel
    /// sweeps sample identically regardless of scheduling.
    pub fn for_index(seed: u64, index: u64) -> Self {
        SplitMix64::new(seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, n)` by rejection, exact and deterministic.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) is empty");
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform signed value in `[lo, hi]`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }
}
