//! Arithmetic in Z[ζ_p]: products, norms, Galois action and λ-adic valuations.
//!
//!     cargo run --example cyclotomic_arith -- 7

use stickel::cyclotomic::{default_lambda_cap, CycInt};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let lambda = CycInt::lambda(p);
    let coeffs: Vec<i64> = (0..p as i64 - 1).map(|i| [2, -1, 0, 3][i as usize % 4]).collect();
    let a = &CycInt::from_i64s(p, &coeffs).unwrap() + &CycInt::zeta_pow(p, 3);
    println!("λ        = {lambda}");
    println!("N(λ)     = {}", lambda.norm());
    println!("a        = {a}");
    println!("a·conj a = {}", &a * &a.conj());
    println!("N(a)     = {}", a.norm());
    println!("σ_2(a)   = {}", a.galois_apply(2).unwrap());

    let cap = default_lambda_cap(p);
    for k in [1, 3, p - 1, p + 2] {
        println!("v_λ(λ^{k}) = {}", lambda.pow(k).lambda_valuation(cap));
    }
    // p and λ^(p-1) differ by a unit.
    println!("v_λ({p}) = {}", CycInt::from_int(p, p).lambda_valuation(cap));
}
