//! MT19937 words, 53-bit reals, and a thresholded bit stream.
//!
//! ```text
//! cargo run --release --example mt_stream -- 5489 20
//! ```

use pseudodice::mtprng::{mt_binary_sequence, MtState};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5489);
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);

    let mut mt = MtState::new(seed);
    println!("seed {seed}");
    for i in 1..=count.min(5) {
        println!("  u32 #{i}: {}", mt.next_u32());
    }
    let mut mt = MtState::new(seed);
    for i in 1..=count.min(5) {
        println!("  real #{i}: {:.16}", mt.next_real53());
    }

    let bits = mt_binary_sequence(seed, count.max(1_000_000), 0.5);
    let head: String = bits.bits().iter().take(count).map(|b| (b'0' + b) as char).collect();
    println!("  bits: {head}");
    println!("  ones frequency over {}: {:.6}", bits.len(), bits.ones_frequency(bits.len()).unwrap());
}
