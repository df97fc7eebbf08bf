//! Primary digit algorithms. Each returns `floor(x · 10^d)` up to a few units
//! in the last place; callers supply guard digits.

use rug::ops::Pow;
use rug::Integer;

use super::Constant;

pub(super) fn scaled(constant: Constant, d: usize) -> Integer {
    match constant {
        Constant::Pi => pi_chudnovsky(d),
        Constant::E => e_binary_split(d),
        Constant::Sqrt2 => isqrt(&(pow10(2 * d) * 2u32)),
    }
}

pub(super) fn pow10(d: usize) -> Integer {
    Integer::from(10u32).pow(u32::try_from(d).expect("digit count fits in u32"))
}

// Chudnovsky: 1/π = 12 Σ (−1)^k (6k)! (A + Bk) / ((3k)! (k!)^3 C^(3k + 3/2)).
const CH_A: u64 = 13_591_409;
const CH_B: u64 = 545_140_134;
const CH_C3_OVER_24: u64 = 10_939_058_860_032_000; // 640320^3 / 24
const CH_DIGITS_PER_TERM: f64 = 14.181_647_462_725_477;

struct Pqt {
    p: Integer,
    q: Integer,
    t: Integer,
}

fn chudnovsky_split(a: u64, b: u64) -> Pqt {
    if b - a == 1 {
        let (p, q) = if a == 0 {
            (Integer::from(1), Integer::from(1))
        } else {
            let p = Integer::from(6 * a - 5) * (2 * a - 1) * (6 * a - 1);
            let q = Integer::from(a).pow(3) * CH_C3_OVER_24;
            (p, q)
        };
        let mut t = Integer::from(&p * (CH_A + CH_B * a));
        if a % 2 == 1 {
            t = -t;
        }
        return Pqt { p, q, t };
    }
    let m = (a + b) / 2;
    let left = chudnovsky_split(a, m);
    let right = chudnovsky_split(m, b);
    let t = Integer::from(&left.t * &right.q) + Integer::from(&left.p * &right.t);
    Pqt {
        p: left.p * right.p,
        q: left.q * right.q,
        t,
    }
}

fn pi_chudnovsky(d: usize) -> Integer {
    let terms = (d as f64 / CH_DIGITS_PER_TERM) as u64 + 2;
    let Pqt { q, t, .. } = chudnovsky_split(0, terms);
    let sqrt_10005 = isqrt(&(pow10(2 * d) * 10_005u32));
    // π = 426880·√10005·Q / T; T already carries the k = 0 term A.
    (sqrt_10005 * q * 426_880u32) / t
}

/// p/q = Σ_{k=a+1}^{b} 1 / ((a+1)(a+2)···k), q = (a+1)···b.
fn e_split(a: u64, b: u64) -> (Integer, Integer) {
    if b - a == 1 {
        return (Integer::from(1), Integer::from(b));
    }
    let m = (a + b) / 2;
    let (p1, q1) = e_split(a, m);
    let (p2, q2) = e_split(m, b);
    (p1 * &q2 + p2, q1 * q2)
}

/// Smallest N with log10(N!) > d + 2; the tail beyond N is below 10^-(d+2).
fn e_terms(d: usize) -> u64 {
    let target = d as f64 + 2.0;
    let mut log_fact = 0.0f64;
    let mut k = 1u64;
    while log_fact <= target {
        k += 1;
        log_fact += (k as f64).log10();
    }
    k
}

fn e_binary_split(d: usize) -> Integer {
    let (p, q) = e_split(0, e_terms(d));
    // e = 1 + p/q
    (Integer::from(&q + &p) * pow10(d)) / q
}

/// `⌊√n⌋` by Newton iteration with recursive precision doubling.
pub(super) fn isqrt(n: &Integer) -> Integer {
    assert!(*n >= 0, "isqrt of a negative number");
    let bits = n.significant_bits();
    if bits <= 100 {
        return correct_root(Integer::from(n.to_f64().sqrt() as u64), n);
    }
    // Root of the top half of the bits, then one Newton step. The starting
    // point is within 2^(h+1) of √n, so the step lands within a few units.
    let h = bits / 4;
    let approx = isqrt(&Integer::from(n >> (2 * h))) << h;
    let step = (Integer::from(n / &approx) + approx) >> 1;
    correct_root(step, n)
}

fn correct_root(mut r: Integer, n: &Integer) -> Integer {
    while Integer::from(r.square_ref()) > *n {
        r -= 1;
    }
    loop {
        let next = Integer::from(&r + 1);
        if Integer::from(next.square_ref()) > *n {
            break;
        }
        r = next;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_matches_exact_roots_and_neighbours() {
        for k in [0u64, 1, 2, 3, 17, 1 << 20, 123_456_789] {
            let sq = Integer::from(k) * k;
            assert_eq!(isqrt(&sq), k);
            if k > 0 {
                assert_eq!(isqrt(&Integer::from(&sq - 1)), k - 1);
            }
            if k > 0 {
                assert_eq!(isqrt(&Integer::from(&sq + 1)), k);
            }
        }
        let big = pow10(4001) * 7u32;
        assert_eq!(isqrt(&big), big.clone().sqrt());
    }

    #[test]
    fn e_term_bound() {
        // 13! ≈ 6.2e9 > 10^(7+2)
        assert_eq!(e_terms(7), 13);
    }
}
