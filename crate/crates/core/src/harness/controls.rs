//! Synthetic sequences with known structure, for checking that the
//! experiments detect what they should.

use crate::bitseq::{BitSequence, BitSource};
use crate::error::{Error, Result};
use crate::mtprng::MtState;

/// `0101…` of length `len`.
pub fn alternating_sequence(len: usize) -> BitSequence {
    let bits = (0..len).map(|i| (i % 2) as u8).collect();
    BitSequence::new(bits, BitSource::Other { label: "alternating".into() }).expect("bits are 0/1")
}

/// Fair MT19937 bits, except that a bit following `prefix` (a
/// `prefix_len`-bit value) is 1 with probability `p_one`. Bits are generated
/// left to right, so the biased bits also feed later prefixes. `forced` pins
/// `(1-indexed position, bit)` pairs before they are read as context.
pub fn conditional_bias_sequence(
    seed: u32,
    len: usize,
    prefix: u32,
    prefix_len: usize,
    p_one: f64,
    forced: &[(usize, u8)],
) -> Result<BitSequence> {
    if prefix_len == 0 || prefix_len > 24 || prefix >> prefix_len != 0 {
        return Err(Error::Domain(format!("prefix {prefix} does not fit in {prefix_len} bits")));
    }
    if !(0.0..=1.0).contains(&p_one) || forced.iter().any(|&(p, b)| p == 0 || p > len || b > 1) {
        return Err(Error::Domain("bad probability or forced position".into()));
    }
    let mut rng = MtState::new(seed);
    let mask = (1u32 << prefix_len) - 1;
    let mut context = 0u32;
    let mut bits = Vec::with_capacity(len);
    for i in 0..len {
        let u = rng.next_real53();
        let p = if i >= prefix_len && context == prefix { p_one } else { 0.5 };
        let mut bit = u8::from(u < p);
        if let Some(&(_, b)) = forced.iter().find(|&&(pos, _)| pos == i + 1) {
            bit = b;
        }
        bits.push(bit);
        context = ((context << 1) | bit as u32) & mask;
    }
    BitSequence::new(
        bits,
        BitSource::Other {
            label: format!("biased:{seed}:{prefix:0prefix_len$b}:{p_one}"),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitseq::pattern_census;

    #[test]
    fn injected_bias_shows_in_the_census() {
        let prefix = 0b011000;
        let s = conditional_bias_sequence(3, 200_000, prefix, 6, 0.7, &[(5, 1)]).unwrap();
        assert_eq!(s.bits()[4], 1);
        let c = pattern_census(&s, s.len(), 7).unwrap();
        let (c0, c1) = c.successor_counts(prefix as usize);
        let p = c1 as f64 / (c0 + c1) as f64;
        assert!((p - 0.7).abs() < 0.03, "{p}");
        let (d0, d1) = c.successor_counts(0b111111);
        let q = d1 as f64 / (d0 + d1) as f64;
        assert!((q - 0.5).abs() < 0.05, "{q}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(conditional_bias_sequence(1, 10, 64, 6, 0.7, &[]).is_err());
        assert!(conditional_bias_sequence(1, 10, 1, 6, 1.5, &[]).is_err());
        assert!(conditional_bias_sequence(1, 10, 1, 6, 0.5, &[(11, 1)]).is_err());
    }

    #[test]
    fn alternating() {
        assert_eq!(alternating_sequence(5).bits(), &[0, 1, 0, 1, 0]);
    }
}
