//! Seeded 64-bit linear congruential generator (Knuth's MMIX constants).
//!
//! `state <- 6364136223846793005 * state + 1442695040888963407 (mod 2^64)`,
//! starting from `state = seed`; each draw advances once and uses the high
//! 32 bits. Small enough to reproduce by hand in any language.

use crate::rational::{rat, Rational};

pub const MULTIPLIER: u64 = 6364136223846793005;
pub const INCREMENT: u64 = 1442695040888963407;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform in `lo..=hi` (modulo bias is irrelevant at these widths).
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u32() as u64 % span) as i64
    }

    /// `p/q` with `p` in `-9..=9` and `q` in `1..=6`.
    pub fn rational(&mut self) -> Rational {
        let p = self.range(-9, 9);
        let q = self.range(1, 6);
        rat(p, q)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != Rational::from_integer(0.into()) {
                return r;
            }
        }
    }
}
