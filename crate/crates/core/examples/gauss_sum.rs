//! Gauss sum of order p over F_q: g, G = g^p, the Stickelberger profile of G
//! and the π-adic valuations.
//!
//!     cargo run --example gauss_sum -- 5 11

use stickel::gauss::{verify_pair, StickelbergerProfile};

fn main() {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>().expect("integer"));
    let (p, q) = (args.next().unwrap_or(5), args.next().unwrap_or(11));
    let rec = match verify_pair(p, q) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("p = {p}, q = {q}, f = {}, u = {}", rec.f, rec.u);
    println!("G = {}", rec.big_g);
    if let Some(rho) = rec.rho {
        println!("ρ = {rho}");
    }
    match &rec.stickelberger {
        Some(StickelbergerProfile::Split { valuations, embedding_label, .. }) => {
            println!("valuations of G at the primes above q: {valuations:?} (relabel {embedding_label})")
        }
        Some(StickelbergerProfile::Inert { s2, norm_exponent, .. }) => {
            println!("S₂ = {s2:?}, v_q(N G) = {norm_exponent}")
        }
        None => {}
    }
    if let Some(pi) = &rec.pi_adic {
        println!("v_π(g+1) = {}, v_π(G+1) = {}, v_π(G^p+1) = {}", pi.g_plus_one, pi.big_g_plus_one, pi.big_g_pow_p_plus_one);
    }
    for c in &rec.checks {
        let mark = match (c.passed, c.required) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        println!("{mark:<6} {:<44} {}", c.name, c.detail);
    }
    std::process::exit(if rec.failures().is_empty() { 0 } else { 1 });
}
