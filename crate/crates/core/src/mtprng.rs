//! MT19937, bit-exact with the Matsumoto–Nishimura reference (`mt19937ar.c`).

use crate::bitseq::{BitSequence, BitSource};

const N: usize = 624;
const M: usize = 397;
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;

/// Generator state. `index == 624` means the next draw regenerates the block.
#[derive(Clone)]
pub struct MtState {
    state: [u32; N],
    index: usize,
    seed: u32,
}

impl std::fmt::Debug for MtState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MtState")
            .field("seed", &self.seed)
            .field("index", &self.index)
            .finish_non_exhaustive()
    }
}

impl MtState {
    /// `init_genrand`: the 2002 initialization with multiplier 1812433253.
    pub fn new(seed: u32) -> Self {
        let mut state = [0u32; N];
        state[0] = seed;
        for i in 1..N {
            let prev = state[i - 1];
            state[i] = 1_812_433_253u32
                .wrapping_mul(prev ^ (prev >> 30))
                .wrapping_add(i as u32);
        }
        MtState {
            state,
            index: N,
            seed,
        }
    }

    /// `init_by_array`. Only needed to reproduce the canonical test vectors.
    pub fn from_key(key: &[u32]) -> Self {
        let mut mt = MtState::new(19_650_218);
        let s = &mut mt.state;
        let (mut i, mut j) = (1usize, 0usize);
        for _ in 0..N.max(key.len()) {
            let prev = s[i - 1];
            s[i] = (s[i] ^ (prev ^ (prev >> 30)).wrapping_mul(1_664_525))
                .wrapping_add(key[j])
                .wrapping_add(j as u32);
            i += 1;
            j += 1;
            if i >= N {
                s[0] = s[N - 1];
                i = 1;
            }
            if j >= key.len() {
                j = 0;
            }
        }
        for _ in 0..N - 1 {
            let prev = s[i - 1];
            s[i] = (s[i] ^ (prev ^ (prev >> 30)).wrapping_mul(1_566_083_941))
                .wrapping_sub(i as u32);
            i += 1;
            if i >= N {
                s[0] = s[N - 1];
                i = 1;
            }
        }
        s[0] = 0x8000_0000;
        mt.seed = key.first().copied().unwrap_or(0);
        mt
    }

    /// Seed supplied to [`MtState::new`] (first key word for [`MtState::from_key`]).
    pub fn seed(&self) -> u32 {
        self.seed
    }

    pub fn index(&self) -> usize {
        self.index
    }

    fn twist(&mut self) {
        let s = &mut self.state;
        for k in 0..N {
            let y = (s[k] & UPPER_MASK) | (s[(k + 1) % N] & LOWER_MASK);
            let mag = if y & 1 == 1 { MATRIX_A } else { 0 };
            s[k] = s[(k + M) % N] ^ (y >> 1) ^ mag;
        }
        self.index = 0;
    }

    /// `genrand_int32`.
    pub fn next_u32(&mut self) -> u32 {
        if self.index >= N {
            self.twist();
        }
        let mut y = self.state[self.index];
        self.index += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c_5680;
        y ^= (y << 15) & 0xefc6_0000;
        y ^= y >> 18;
        y
    }

    /// `genrand_res53`: a real in [0, 1) with 53-bit resolution, from two draws.
    pub fn next_real53(&mut self) -> f64 {
        let a = (self.next_u32() >> 5) as f64;
        let b = (self.next_u32() >> 6) as f64;
        (a * 67_108_864.0 + b) * (1.0 / 9_007_199_254_740_992.0)
    }
}

/// `count` bits from a fresh generator: bit = 1 when the 53-bit real is
/// `>= threshold`.
pub fn mt_binary_sequence(seed: u32, count: usize, threshold: f64) -> BitSequence {
    let mut mt = MtState::new(seed);
    let bits = (0..count)
        .map(|_| u8::from(mt.next_real53() >= threshold))
        .collect();
    BitSequence::from_bits_unchecked(bits, BitSource::Mt { seed, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_seed_vectors() {
        let mut mt = MtState::new(5489);
        assert_eq!(mt.next_u32(), 3_499_211_612);
        for _ in 1..9_999 {
            mt.next_u32();
        }
        assert_eq!(mt.next_u32(), 4_123_659_995);
    }

    #[test]
    fn distinct_seeds_diverge() {
        assert_ne!(MtState::new(0).next_u32(), MtState::new(1).next_u32());
    }

    #[test]
    fn first_real_from_oracle_words() {
        // The second word for seed 5489 is 581869302.
        let expected = ((3_499_211_612u32 >> 5) as f64 * 2f64.powi(26) + (581_869_302u32 >> 6) as f64)
            / 2f64.powi(53);
        let mut mt = MtState::new(5489);
        let real = mt.next_real53();
        assert_eq!(real, expected);
        assert_eq!(real, 0.814_723_686_393_178_9);
    }

    #[test]
    fn real_consumes_two_words() {
        let mut a = MtState::new(7);
        let mut b = MtState::new(7);
        for _ in 0..5 {
            a.next_real53();
        }
        for _ in 0..10 {
            b.next_u32();
        }
        assert_eq!(a.next_u32(), b.next_u32());
    }

    #[test]
    fn index_stays_in_range() {
        let mut mt = MtState::new(3);
        assert_eq!(mt.index(), 624);
        for _ in 0..2_000 {
            mt.next_u32();
            assert!(mt.index() <= 624);
        }
    }

    #[test]
    fn binary_sequence_edges() {
        assert!(mt_binary_sequence(11, 0, 0.5).is_empty());
        let ones = mt_binary_sequence(11, 500, 0.0);
        assert!(ones.bits().iter().all(|&b| b == 1));
        let seq = mt_binary_sequence(5489, 10_000, 0.5);
        let freq = seq.ones_frequency(10_000).unwrap();
        assert!((freq - 0.5).abs() <= 0.025, "{freq}");
        assert_eq!(seq.source(), &BitSource::Mt { seed: 5489, threshold: 0.5 });
    }
}
