//! The counterexample W[T]/(T^p) for the first few primes.

use pdlift::lifting::deligne_example;

fn main() -> pdlift::Result<()> {
    let primes: Vec<u64> = match std::env::args().nth(1) {
        Some(p) => vec![p.parse().expect("usage: deligne [p]")],
        None => vec![2, 3, 5, 7],
    };
    for p in primes {
        println!("{}\n", deligne_example(p)?);
    }
    Ok(())
}
