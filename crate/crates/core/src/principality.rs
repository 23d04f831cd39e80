//! Sufficient conditions for a prime ideal over q to be p-principal, and a
//! search for principal primes with prime norm.
//!
//! For q of inertial degree f > 1 and m = (p-1)/f, the prime q is p-principal
//! whenever none of the values
//!
//! ```text
//! Σ_{i<m} c_i v^(l f i) mod p,   l = 1 .. m-1,
//! ```
//!
//! vanishes, where c_i are the coefficients of S₂. The test is one-directional:
//! a vanishing value never certifies anything.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, canon_power, is_prime_big, mul_mod, pow_mod, primitive_root, BIG_PRIMALITY_WITNESSES};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::group_ring::{inertial_degree, polynomial_s2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    PPrincipal,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaValue {
    pub l: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalityReport {
    pub p: u64,
    pub q: u64,
    pub v: u64,
    pub f: u64,
    pub m: u64,
    pub s2: Vec<i64>,
    pub sigma_values: Vec<SigmaValue>,
    /// Σ_i Σ_j v^(-(i+jm)), which must equal p(p-1)/2: the l = m value never
    /// vanishes.
    pub full_orbit_sum: u64,
    pub full_orbit_identity: bool,
    pub certificate: Certificate,
    /// The certificate is a sufficient condition only.
    pub note: &'static str,
}

const ONE_WAY: &str = "sufficient condition only; a vanishing value does not show non-principality";

pub fn principality_test(p: u64, q: u64, v: u64) -> Result<PrincipalityReport> {
    let f = inertial_degree(p, q)?;
    if f == 1 {
        return Err(Error::InvalidInput(format!(
            "q = {q} splits completely in Q(zeta_{p}); the congruence test needs f > 1"
        )));
    }
    let s2 = polynomial_s2(p, q, v)?;
    let m = (p - 1) / f;
    let c: Vec<i64> = s2.coeffs()[..m as usize].to_vec();
    let sigma_values: Vec<SigmaValue> = (1..m)
        .map(|l| {
            let x = pow_mod(v, l * f, p);
            let value = c.iter().rev().fold(0u64, |acc, &ci| (mul_mod(acc, x, p) + ci.rem_euclid(p as i64) as u64) % p);
            SigmaValue { l, value }
        })
        .collect();
    let mut full_orbit_sum = 0u64;
    for i in 0..m {
        for j in 0..f {
            full_orbit_sum += canon_power(v, -((i + j * m) as i64), p)?;
        }
    }
    let full_orbit_identity = full_orbit_sum == p * (p - 1) / 2
        && c.iter().sum::<i64>() as u64 * p == full_orbit_sum;
    let certificate = if sigma_values.iter().all(|s| s.value != 0) {
        Certificate::PPrincipal
    } else {
        Certificate::Inconclusive
    };
    Ok(PrincipalityReport {
        p,
        q,
        v,
        f,
        m,
        s2: c,
        sigma_values,
        full_orbit_sum,
        full_orbit_identity,
        certificate,
        note: ONE_WAY,
    })
}

// ---------------------------------------------------------------------------
// f = (p-1)/2

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub p: u64,
    pub v: u64,
    pub f: u64,
    /// Σ_j v^(-2j) and Σ_j v^(-(1+2j)), j < f.
    pub orbit_sums: [u64; 2],
    /// orbit_sums[0]/p - orbit_sums[1]/p.
    pub sigma: i64,
    pub sigma_mod_p: u64,
    /// p(p-1)/2 is odd, so the two orbit quotients differ in parity.
    pub parity_argument: bool,
    pub holds: bool,
    /// Smallest prime q with inertial degree (p-1)/2, if one lies below the
    /// search limit, and its certificate from [`principality_test`].
    pub witness: Option<(u64, Certificate)>,
    pub conclusion: &'static str,
}

const WITNESS_SEARCH_LIMIT: u64 = 100_000;

/// Every prime of inertial degree (p-1)/2 is p-principal when p ≡ 3 mod 4.
pub fn half_degree_corollary(p: u64) -> Result<CorollaryReport> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p % 4 != 3 {
        return Err(Error::InvalidInput(format!("p = {p} is not 3 mod 4")));
    }
    if p == 3 {
        return Err(Error::InvalidInput("p = 3 gives f = 1; the corollary needs f > 1".into()));
    }
    let v = primitive_root(p)?;
    let f = (p - 1) / 2;
    let mut orbit_sums = [0u64; 2];
    for (i, sum) in orbit_sums.iter_mut().enumerate() {
        for j in 0..f {
            *sum += canon_power(v, -((i as u64 + 2 * j) as i64), p)?;
        }
    }
    if orbit_sums.iter().any(|s| s % p != 0) {
        return Err(Error::Internal(format!("orbit sums {orbit_sums:?} not divisible by {p}")));
    }
    let sigma = (orbit_sums[0] / p) as i64 - (orbit_sums[1] / p) as i64;
    let total = p * (p - 1) / 2;
    let parity_argument = total % 2 == 1 && orbit_sums[0] + orbit_sums[1] == total;
    let sigma_mod_p = sigma.rem_euclid(p as i64) as u64;
    let witness = arith::primes_from(2)
        .take_while(|&q| q < WITNESS_SEARCH_LIMIT)
        .find(|&q| q != p && arith::order_mod_prime(q % p, p) == f)
        .map(|q| principality_test(p, q, v).map(|r| (q, r.certificate)))
        .transpose()?;
    Ok(CorollaryReport {
        p,
        v,
        f,
        orbit_sums,
        sigma,
        sigma_mod_p,
        parity_argument,
        holds: sigma_mod_p != 0,
        witness,
        conclusion: "every prime ideal of inertial degree (p-1)/2 is p-principal",
    })
}

// ---------------------------------------------------------------------------
// Norm probe

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeConfig {
    /// Maximum number of (a, x) candidates examined.
    pub bound: u64,
    /// Coefficients of x range over [-radius, radius].
    pub radius: i64,
}

impl ProbeConfig {
    pub fn new(bound: u64) -> Self {
        Self { bound, radius: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Position in the enumeration, starting at 0.
    pub index: u64,
    pub a: u64,
    pub x: Vec<i64>,
    pub q: String,
    /// p^((q-1)/p) mod q; absent when q ≢ 1 mod p.
    pub residue: Option<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub p: u64,
    pub config: ProbeConfig,
    pub candidates_examined: u64,
    /// The enumeration ran out before reaching the bound.
    pub exhausted: bool,
    pub primality: String,
    pub witnesses: Vec<Witness>,
    pub counterexamples: usize,
    pub status: &'static str,
}

/// Vectors of length `len` with entries in [-r, r], by increasing Σ|c_i| and
/// lexicographically within each weight.
fn graded_vectors(len: usize, r: i64, limit: usize) -> Vec<Vec<i64>> {
    fn fill(prefix: &mut Vec<i64>, len: usize, r: i64, weight: i64, out: &mut Vec<Vec<i64>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let left = (len - prefix.len()) as i64;
        if left == 0 {
            if weight == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for c in -r..=r {
            let rest = weight - c.abs();
            if rest < 0 || rest > (left - 1) * r {
                continue;
            }
            prefix.push(c);
            fill(prefix, len, r, rest, out, limit);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for w in 0..=(len as i64 * r) {
        fill(&mut Vec::with_capacity(len), len, r, w, &mut out, limit);
        if out.len() >= limit {
            break;
        }
    }
    out
}

/// Enumerates q₁ = a + λ^(p+1) x and checks p^((q-1)/p) ≡ 1 mod q whenever
/// |N(q₁)| is a prime q.
pub fn principal_norm_probe(p: u64, config: ProbeConfig) -> Result<ProbeReport> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if config.radius < 0 {
        return Err(Error::InvalidInput("radius must be nonnegative".into()));
    }
    let per_x = p - 1;
    let xs = graded_vectors((p - 1) as usize, config.radius, config.bound.div_ceil(per_x) as usize);
    let total = (xs.len() as u64 * per_x).min(config.bound);
    let exhausted = total < config.bound;
    let lambda_pow = CycInt::lambda(p).pow(p + 1);
    let pb = BigUint::from(p);

    let found: Vec<Option<Witness>> = (0..total)
        .into_par_iter()
        .map(|index| {
            let x = &xs[(index / per_x) as usize];
            let a = index % per_x + 1;
            let xc = CycInt::from_i64s(p, x).expect("length p-1");
            let cand = &CycInt::from_int(p, a) + &(&lambda_pow * &xc);
            let n = cand.norm().abs().to_biguint().expect("absolute value");
            if n <= BigUint::one() || !is_prime_big(&n) {
                return None;
            }
            let q_minus_one = &n - 1u32;
            let (residue, holds) = if (&q_minus_one % &pb).is_zero() {
                let r = pb.modpow(&(&q_minus_one / &pb), &n);
                let ok = r.is_one();
                (Some(r.to_string()), ok)
            } else {
                (None, false)
            };
            Some(Witness { index, a, x: x.clone(), q: n.to_string(), residue, holds })
        })
        .collect();
    let witnesses: Vec<Witness> = found.into_iter().flatten().collect();
    let counterexamples = witnesses.iter().filter(|w| !w.holds).count();
    Ok(ProbeReport {
        p,
        config,
        candidates_examined: total,
        exhausted,
        primality: format!("deterministic below 2^64, {BIG_PRIMALITY_WITNESSES} Miller-Rabin witnesses above"),
        status: if witnesses.is_empty() { "no candidates" } else { "witnesses found" },
        witnesses,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p7_q2_certificate() {
        let r = principality_test(7, 2, 3).unwrap();
        assert_eq!((r.f, r.m), (3, 2));
        assert_eq!(r.s2, vec![1, 2]);
        assert_eq!(r.sigma_values, vec![SigmaValue { l: 1, value: 6 }]);
        assert_eq!(r.certificate, Certificate::PPrincipal);
        assert!(r.full_orbit_identity);
    }

    #[test]
    fn rejections() {
        assert!(principality_test(7, 4, 3).is_err());
        assert!(principality_test(7, 29, 3).is_err());
        assert!(half_degree_corollary(13).is_err());
        assert!(half_degree_corollary(3).is_err());
    }

    #[test]
    fn p11_q3_single_congruence() {
        let r = principality_test(11, 3, 2).unwrap();
        assert_eq!((r.f, r.m), (5, 2));
        assert_eq!(r.sigma_values.len(), 1);
    }

    #[test]
    fn corollary_examples() {
        let r = half_degree_corollary(7).unwrap();
        assert_eq!(r.orbit_sums, [7, 14]);
        assert_eq!(r.sigma, -1);
        assert!(r.holds && r.parity_argument);
        assert_eq!(r.witness, Some((2, Certificate::PPrincipal)));
        assert!(half_degree_corollary(11).unwrap().holds);
    }

    #[test]
    fn graded_order() {
        let xs = graded_vectors(2, 2, 100);
        assert_eq!(xs.len(), 25);
        assert_eq!(xs[0], vec![0, 0]);
        assert_eq!(&xs[1..5], &[vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(graded_vectors(3, 2, 7).len(), 7);
    }

    #[test]
    fn probe_small() {
        let r = principal_norm_probe(3, ProbeConfig::new(10_000)).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.candidates_examined, 50);
        assert_eq!(r.counterexamples, 0);
        assert!(!r.witnesses.is_empty());
        // a + 0·x: norm a^2, never prime
        assert!(r.witnesses.iter().all(|w| w.x.iter().any(|&c| c != 0)));
    }
}
