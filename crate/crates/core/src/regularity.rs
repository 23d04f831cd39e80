//! Irregularity detection through the polynomial Q(σ), cross-checked
//! against exact Bernoulli numbers.
//!
//! For n in [2, p-2] the scanner evaluates Q at X = v^n modulo p. An odd
//! exponent n = 2m + 1 with Q(v^n) ≡ 0 signals irregularity; the oracle
//! independently lists the even k in [2, p-3] with p | B_k.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, canon_power, inv_mod, odd_primes_in, pow_mod, primitive_root};
use crate::error::{Error, Result};
use crate::group_ring::{delta_coeffs, fp_gr_eval, polynomial_q};

// ---------------------------------------------------------------------------
// Bernoulli oracle

/// B_0, B_1, ..., computed once and extended on demand.
static BERNOULLI: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

fn extend_bernoulli(table: &mut Vec<BigRational>, upto: usize) {
    if table.is_empty() {
        table.push(BigRational::one());
        table.push(BigRational::new((-1).into(), 2.into()));
    }
    while table.len() <= upto {
        let m = table.len();
        if m % 2 == 1 {
            table.push(BigRational::zero());
            continue;
        }
        // (m+1) B_m = -Σ_{j<m} C(m+1, j) B_j, summed over a common denominator.
        let terms: Vec<(BigInt, &BigRational)> = {
            let mut binom = BigInt::one();
            let mut out = Vec::new();
            for (j, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    out.push((binom.clone(), b));
                }
                binom = binom * (m + 1 - j) / (j + 1);
            }
            out
        };
        let lcm = terms.iter().fold(BigInt::one(), |acc, (_, b)| acc.lcm(b.denom()));
        let num: BigInt = terms.iter().map(|(c, b)| c * b.numer() * (&lcm / b.denom())).sum();
        table.push(BigRational::new(-num, lcm * (m + 1)));
    }
}

/// Exact B_n (B_1 = -1/2).
pub fn bernoulli(n: usize) -> BigRational {
    let mut table = BERNOULLI.get_or_init(|| Mutex::new(Vec::new())).lock().expect("bernoulli cache poisoned");
    extend_bernoulli(&mut table, n);
    table[n].clone()
}

/// Makes sure B_0 .. B_n are cached (useful before a parallel scan).
pub fn warm_bernoulli(n: usize) {
    bernoulli(n);
}

/// B_k mod p for even k with k ≢ 0 mod p-1.
pub fn bernoulli_residue(p: u64, k: u64) -> Result<u64> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if k == 0 || k.is_multiple_of(p - 1) {
        return Err(Error::InvalidInput(format!("B_{k} has p = {p} in its denominator")));
    }
    let b = bernoulli(k as usize);
    let pb = BigInt::from(p);
    let num = b.numer().mod_floor(&pb).to_u64().expect("residue fits");
    let den = b.denom().mod_floor(&pb).to_u64().expect("residue fits");
    let den_inv = inv_mod(den, p).ok_or_else(|| Error::Internal(format!("denominator of B_{k} divisible by {p}")))?;
    Ok(arith::mul_mod(num, den_inv, p))
}

/// k ↦ B_k mod p for even k in [2, p-3].
pub fn bernoulli_mod_p(p: u64) -> Result<BTreeMap<u64, u64>> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    (2..p.saturating_sub(2)).step_by(2).map(|k| Ok((k, bernoulli_residue(p, k)?))).collect()
}

/// Even k in [2, p-3] with p | B_k.
pub fn irregular_indices(p: u64) -> Result<Vec<u64>> {
    Ok(bernoulli_mod_p(p)?.into_iter().filter(|&(_, r)| r == 0).map(|(k, _)| k).collect())
}

// ---------------------------------------------------------------------------
// Scanner

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Regular,
    Irregular,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Regular => "regular",
            Verdict::Irregular => "irregular",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub p: u64,
    pub v: u64,
    /// m in [1, (p-3)/2] with Q(v^(2m+1)) ≡ 0 mod p.
    pub odd_roots: Vec<u64>,
    /// n in [2, p-2] with Q(v^n) ≡ 0 mod p.
    pub all_roots: Vec<u64>,
    /// Even k in [2, p-3] with p | B_k, from the exact oracle.
    pub irregular_indices: Vec<u64>,
    /// Verdict of the scanner alone: irregular iff an odd root exists.
    pub scanner: Verdict,
    /// Verdict of the oracle.
    pub verdict: Verdict,
    /// |odd_roots| = |irregular_indices| (an empirical observation, not a
    /// theorem).
    pub agreement: bool,
}

/// n in [2, p-2] with Q(v^n) ≡ 0 mod p.
pub fn q_roots(p: u64, v: u64) -> Result<Vec<u64>> {
    let q = polynomial_q(p, v)?;
    Ok((2..p.saturating_sub(1)).filter(|&n| fp_gr_eval(&q, pow_mod(v, n, p)) == 0).collect())
}

pub fn q_root_scan(p: u64, v: u64) -> Result<RegularityVerdict> {
    let all_roots = q_roots(p, v)?;
    let odd_roots: Vec<u64> = all_roots.iter().filter(|&&n| n % 2 == 1).map(|n| (n - 1) / 2).collect();
    let irregular_indices = irregular_indices(p)?;
    let verdict_of = |empty: bool| if empty { Verdict::Regular } else { Verdict::Irregular };
    Ok(RegularityVerdict {
        p,
        v,
        scanner: verdict_of(odd_roots.is_empty()),
        verdict: verdict_of(irregular_indices.is_empty()),
        agreement: odd_roots.len() == irregular_indices.len(),
        odd_roots,
        all_roots,
        irregular_indices,
    })
}

/// Scans every odd prime in [lo, hi] with its smallest primitive root, in
/// parallel on the current rayon pool; results are ordered by p.
pub fn scan_range(lo: u64, hi: u64) -> Result<Vec<RegularityVerdict>> {
    warm_bernoulli(hi.saturating_sub(3) as usize);
    odd_primes_in(lo, hi).into_par_iter().map(|p| q_root_scan(p, primitive_root(p)?)).collect()
}

// ---------------------------------------------------------------------------
// B_{(p+1)/2}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BHalfReport {
    pub p: u64,
    pub v: u64,
    /// Q(-1) = Σ (-1)^i δ_i as an integer.
    pub q_at_minus_one: i64,
    pub q_at_minus_one_mod_p: u64,
    /// Σ v^(-i) over even i.
    pub s1: u64,
    /// Σ v^(-i) over odd i.
    pub s2: u64,
    /// V = -(S₁ - S₂).
    pub alternating: i64,
    /// S₁ + S₂ = p(p-1)/2, V ≠ 0, |V| < p(p-1)/2 and p·Q(-1) = (1+v)·V.
    pub identities_hold: bool,
    /// B_((p+1)/2) mod p from the oracle (absent when (p+1)/2 > p-3).
    pub bernoulli_residue: Option<u64>,
    pub nonzero: bool,
}

/// Evaluates Q at v^((p-1)/2) = -1 for p ≡ 3 mod 4.
pub fn b_half_check(p: u64) -> Result<BHalfReport> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p % 4 != 3 {
        return Err(Error::InvalidInput(format!("p = {p} is not 3 mod 4")));
    }
    let v = primitive_root(p)?;
    let delta = delta_coeffs(p, v)?;
    let q_at_minus_one: i64 = delta.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d } else { -d }).sum();
    let q_mod = q_at_minus_one.rem_euclid(p as i64) as u64;
    debug_assert_eq!(q_mod, fp_gr_eval(&polynomial_q(p, v)?, p - 1));

    let (mut s1, mut s2) = (0u64, 0u64);
    for i in 0..p - 1 {
        let c = canon_power(v, -(i as i64), p)?;
        if i % 2 == 0 {
            s1 += c;
        } else {
            s2 += c;
        }
    }
    let alternating = s2 as i64 - s1 as i64;
    let half = (p * (p - 1) / 2) as i64;
    let identities_hold = (s1 + s2) as i64 == half
        && alternating != 0
        && alternating.abs() < half
        && p as i64 * q_at_minus_one == (1 + v as i64) * alternating;
    let k = p.div_ceil(2);
    let bernoulli_residue = if k + 3 <= p { Some(bernoulli_residue(p, k)?) } else { None };
    Ok(BHalfReport {
        p,
        v,
        q_at_minus_one,
        q_at_minus_one_mod_p: q_mod,
        s1,
        s2,
        alternating,
        identities_hold,
        bernoulli_residue,
        nonzero: q_mod != 0,
    })
}
