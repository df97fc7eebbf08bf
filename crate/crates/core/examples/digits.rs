//! Generate digits of a constant, cross-check a prefix against the slow
//! oracle, and write a digit cache.
//!
//! ```text
//! cargo run --release --example digits -- pi 1000000 /tmp/pi.digits
//! ```

use std::time::Instant;

use pseudodice::constdigits::{gen_digits, gen_digits_alt, save_digit_file, Constant};

fn main() -> pseudodice::Result<()> {
    let mut args = std::env::args().skip(1);
    let constant: Constant = args.next().as_deref().unwrap_or("pi").parse()?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let out = args.next();

    let t = Instant::now();
    let stream = gen_digits(constant, n)?;
    println!("{constant}: {n} digits in {:.2?}", t.elapsed());
    let head: String = stream.digits().iter().take(50).map(|d| (b'0' + d) as char).collect();
    println!("  {constant} = {}.{head}…", match constant {
        Constant::Pi => 3,
        Constant::E => 2,
        Constant::Sqrt2 => 1,
    });

    let check = n.min(10_000);
    let t = Instant::now();
    let oracle = gen_digits_alt(constant, check)?;
    let agree = oracle.digits() == &stream.digits()[..check];
    println!("  oracle agreement on first {check}: {agree} ({:.2?})", t.elapsed());

    if let Some(path) = out {
        save_digit_file(&stream, &path)?;
        println!("  wrote {path}");
    }
    Ok(())
}
