//! Congruence certificates for p-principality of primes with f > 1, and the
//! half-degree case p ≡ 3 mod 4.
//!
//!     cargo run --example principality -- 7

use stickel::arith::{odd_primes_in, order_mod_prime, primitive_root};
use stickel::principality::{half_degree_corollary, principality_test};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let v = primitive_root(p).expect("odd prime");
    let qs = std::iter::once(2).chain(odd_primes_in(3, 60)).filter(|&q| q != p && order_mod_prime(q % p, p) > 1);
    for q in qs {
        let r = principality_test(p, q, v).unwrap();
        let values: Vec<u64> = r.sigma_values.iter().map(|s| s.value).collect();
        println!("q = {q:>2}  f = {}  S₂ = {:?}  values {values:?}  {:?}", r.f, r.s2, r.certificate);
    }
    if p % 4 == 3 && p > 3 {
        let c = half_degree_corollary(p).unwrap();
        println!("σ = {} ≢ 0 mod {p}: {}", c.sigma, c.conclusion);
    }
}
