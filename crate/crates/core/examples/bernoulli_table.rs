//! Exact Bernoulli numbers and their residues mod p.
//!
//!     cargo run --example bernoulli_table -- 37

use stickel::regularity::{bernoulli, bernoulli_mod_p, irregular_indices};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(37);
    for n in [0, 1, 2, 4, 12] {
        println!("B_{n} = {}", bernoulli(n));
    }
    for (k, r) in bernoulli_mod_p(p).expect("odd prime") {
        println!("B_{k} ≡ {r} mod {p}");
    }
    println!("irregular indices: {:?}", irregular_indices(p).unwrap());
}
