//! Searches elements a + λ^(p+1) x with prime norm q and checks that p is a
//! p-th power residue mod q.
//!
//!     cargo run --release --example norm_probe -- 5 10000 3

use stickel::principality::{principal_norm_probe, ProbeConfig};

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer"));
    let p = args.next().unwrap_or(5);
    let bound = args.next().unwrap_or(10_000);
    let radius = args.next().unwrap_or(3) as i64;
    let r = principal_norm_probe(p, ProbeConfig { bound, radius }).unwrap();
    for w in r.witnesses.iter().take(10) {
        println!("#{:<6} a = {}  x = {:?}  q = {}  p^((q-1)/p) = {}", w.index, w.a, w.x, w.q, w.residue.as_deref().unwrap_or("-"));
    }
    println!(
        "{} candidates{}, {} prime norms, {} counterexamples",
        r.candidates_examined,
        if r.exhausted { " (exhausted)" } else { "" },
        r.witnesses.len(),
        r.counterexamples
    );
}
