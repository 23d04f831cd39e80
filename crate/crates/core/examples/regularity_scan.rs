//! Q-root scan for irregular primes, compared with the Bernoulli oracle.
//!
//!     cargo run --release --example regularity_scan -- 300

use stickel::regularity::{b_half_check, scan_range, Verdict};

fn main() {
    let hi: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let verdicts = scan_range(3, hi).unwrap();
    for r in verdicts.iter().filter(|r| r.verdict == Verdict::Irregular || r.scanner != r.verdict) {
        println!("{:>5}  odd roots {:?}  indices {:?}  scanner {}", r.p, r.odd_roots, r.irregular_indices, r.scanner);
    }
    let bad = verdicts.iter().filter(|r| r.scanner != r.verdict).count();
    println!("{} primes, {} disagreements", verdicts.len(), bad);

    // For p ≡ 3 mod 4, Q(-1) ties B_((p+1)/2) to the class number of Q(√-p).
    for p in [7, 11, 19, 23, 31, 43] {
        let r = b_half_check(p).unwrap();
        println!("p = {p}: Q(-1) = {}, B_(p+1)/2 mod p = {:?}", r.q_at_minus_one, r.bernoulli_residue);
    }
}
