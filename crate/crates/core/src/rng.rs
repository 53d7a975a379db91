//! Seedable SplitMix64 generator.
//!
//! Every training run owns one [`RandomSource`]; the output stream is a pure
//! function of the seed and of the sequence of calls, identical on every
//! platform.

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 (Steele, Lea & Flood), implemented from its recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSource {
    state: u64,
    seed: u64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` built from the top 53 bits.
    #[inline]
    pub fn unit_float(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`. Fails when `n == 0`.
    pub fn int_below(&mut self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::invalid("int_below requires n >= 1"));
        }
        Ok(self.int_below_unchecked(n))
    }

    /// Lemire's multiply-shift with rejection; unbiased for every `n >= 1`.
    #[inline]
    pub(crate) fn int_below_unchecked(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }
}
