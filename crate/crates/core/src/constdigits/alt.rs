//! Verification algorithms. Slow, fixed-point, and deliberately unrelated to
//! the series in `series.rs`.

use rug::{Assign, Integer};

use super::series::pow10;

/// `arctan(1/x) · scale` by the alternating Taylor series, truncating each term.
fn arctan_inverse(x: u32, scale: &Integer) -> Integer {
    let x2 = x * x;
    let mut power = Integer::from(scale / x); // scale / x^(2k+1)
    let mut sum = power.clone();
    let mut k = 1u32;
    loop {
        power /= x2;
        if power == 0 {
            break;
        }
        let term = Integer::from(&power / (2 * k + 1));
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// π = 16·arctan(1/5) − 4·arctan(1/239), scaled by 10^d.
pub(super) fn pi_machin(d: usize) -> Integer {
    let scale = pow10(d);
    arctan_inverse(5, &scale) * 16u32 - arctan_inverse(239, &scale) * 4u32
}

/// e = Σ 1/k!, summing fixed-point terms until they vanish at scale 10^d.
pub(super) fn e_direct_sum(d: usize) -> Integer {
    let mut term = pow10(d);
    let mut sum = Integer::new();
    let mut k = 0u32;
    while term != 0 {
        sum += &term;
        k += 1;
        term /= k;
    }
    sum
}

/// Fractional digits of √2 by the schoolbook pair-at-a-time method.
pub(super) fn sqrt2_long_hand(n: usize) -> Vec<u8> {
    // Integer part: the pair "02" gives root 1, remainder 1.
    let mut root = Integer::from(1);
    let mut remainder = Integer::from(1);
    let mut digits = Vec::with_capacity(n);
    let mut trial = Integer::new();
    for _ in 0..n {
        // Bring down the next pair, "00".
        remainder *= 100u32;
        let base = Integer::from(&root * 20u32);
        // Upper estimate of the next digit, then step down until it fits.
        let estimate = Integer::from(&remainder / &base);
        let mut digit = estimate.to_u32().map_or(9, |e| e.min(9));
        loop {
            trial.assign(&base + digit);
            trial *= digit;
            if trial <= remainder {
                break;
            }
            digit -= 1;
        }
        remainder -= &trial;
        root *= 10u32;
        root += digit;
        digits.push(digit as u8);
    }
    digits
}
