//! The Stickelberger element S and the polynomials derived from it.
//!
//!     cargo run --example stickelberger_polys -- 11

use stickel::arith::primitive_root;
use stickel::group_ring::{
    check_p_times_sigma_minus_v, delta_coeffs, polynomial_p, polynomial_q, polynomial_q1_factorization, stickelberger_s,
};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    let v = primitive_root(p).expect("odd prime");
    let s = stickelberger_s(p, v).unwrap();
    println!("p = {p}, v = {v}");
    println!("S  = {:?}", s.coeffs());
    println!("P  = {:?}", polynomial_p(p, v).unwrap().coeffs());
    println!("δ  = {:?}", delta_coeffs(p, v).unwrap());
    println!("Q  = {:?}", polynomial_q(p, v).unwrap().coeffs());
    let (q1, ok) = polynomial_q1_factorization(p, v).unwrap();
    println!("Q1 = {:?} (factorization {})", q1.coeffs(), if ok { "holds" } else { "fails" });
    println!("P(σ)(σ - v) = p Q(σ): {}", check_p_times_sigma_minus_v(p, v).unwrap());
}
