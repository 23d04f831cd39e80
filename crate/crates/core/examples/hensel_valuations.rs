//! Primes above a split q: Hensel-lifted roots of Φ_p and the ideal
//! valuations they induce.
//!
//!     cargo run --example hensel_valuations -- 5 11

use stickel::arith::pow_mod;
use stickel::cyclotomic::{hensel_roots, ideal_valuation, rational_valuation, CycInt};

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer"));
    let (p, q) = (args.next().unwrap_or(5), args.next().unwrap_or(11));
    let roots = match hensel_roots(p, q, 8) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    // ζ - r for a root r of Φ_p mod q lies in exactly one prime above q
    // (to first order); its norm is Φ_p(r).
    let r = (2..q).find(|&r| pow_mod(r, p, q) == 1).expect("q splits");
    let a = &CycInt::zeta_pow(p, 1) - &CycInt::from_int(p, r);
    println!("a = {a}, N(a) = {}", a.norm());
    let mut total = 0;
    for h in &roots {
        let v = ideal_valuation(&a, h, 40).unwrap();
        total += v;
        println!("root {} mod {}^8: v = {v}", h.root(), q);
    }
    println!("sum = {total}, v_{q}(N(a)) = {}", rational_valuation(&a.norm(), q));
}
