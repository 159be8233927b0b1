//! The single source of randomness: a seeded ChaCha20 bit stream.

use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Deterministic random bits. Every draw consumes whole 64-bit words, so a
/// seed fixes the entire transcript.
#[derive(Clone, Debug)]
pub struct BitStream {
    rng: ChaCha20Rng,
}

impl BitStream {
    pub fn new(seed: u64) -> Self {
        BitStream {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Stream for parallel worker `worker`: seeded with `seed ^ worker`.
    pub fn for_worker(seed: u64, worker: u64) -> Self {
        Self::new(seed ^ worker)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// `n <= 64` uniform bits.
    pub fn bits(&mut self, n: u32) -> u64 {
        debug_assert!(n <= 64);
        let w = self.next_u64();
        if n == 64 {
            w
        } else {
            w & ((1u64 << n) - 1)
        }
    }

    /// `n` uniform bits as a big integer.
    pub fn big_bits(&mut self, n: u64) -> BigUint {
        let words = n.div_ceil(64) as usize;
        let mut digits = Vec::with_capacity(2 * words);
        for idx in 0..words {
            let take = if idx + 1 == words && n % 64 != 0 {
                (n % 64) as u32
            } else {
                64
            };
            let w = self.bits(take);
            digits.push(w as u32);
            digits.push((w >> 32) as u32);
        }
        BigUint::new(digits)
    }

    /// Uniform in `[0, bound)` by rejection on `⌈log2 bound⌉`-bit blocks.
    pub fn below_u64(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        if bound == 1 {
            return 0;
        }
        let width = 64 - (bound - 1).leading_zeros();
        loop {
            let x = self.bits(width);
            if x < bound {
                return x;
            }
        }
    }
}

/// Uniform integer in `[0, total)`, by rejection on blocks of
/// `⌈log2 total⌉` random bits.
pub fn uniform_below(total: &BigUint, rng: &mut BitStream) -> BigUint {
    assert!(total.bits() > 0, "empty range");
    let width = (total - 1u32).bits();
    if width == 0 {
        return BigUint::default();
    }
    loop {
        let x = rng.big_bits(width);
        if &x < total {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = BitStream::new(11);
        let mut b = BitStream::new(11);
        let two = BigUint::from(2u8);
        let xs: Vec<_> = (0..64).map(|_| uniform_below(&two, &mut a)).collect();
        let ys: Vec<_> = (0..64).map(|_| uniform_below(&two, &mut b)).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().any(|x| x.bits() == 1));
        assert_ne!(BitStream::for_worker(11, 1).next_u64(), BitStream::new(11).next_u64());
        assert_eq!(BitStream::for_worker(11, 0).next_u64(), BitStream::new(11).next_u64());
    }

    #[test]
    fn trivial_range() {
        let mut r = BitStream::new(0);
        for _ in 0..10 {
            assert_eq!(uniform_below(&BigUint::from(1u8), &mut r), BigUint::default());
            assert_eq!(r.below_u64(1), 0);
        }
    }

    #[test]
    fn big_bits_width() {
        let mut r = BitStream::new(3);
        for n in [1u64, 31, 32, 63, 64, 65, 200] {
            for _ in 0..20 {
                assert!(r.big_bits(n).bits() <= n);
            }
        }
    }

    #[test]
    fn stays_in_range() {
        let mut r = BitStream::new(5);
        let total = BigUint::from(202u32);
        let mut seen = vec![false; 202];
        for _ in 0..20_000 {
            let x = uniform_below(&total, &mut r);
            assert!(x < total);
            seen[x.to_u64_digits().first().copied().unwrap_or(0) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
