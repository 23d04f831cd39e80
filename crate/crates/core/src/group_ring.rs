//! The group ring Z[G_p] with G_p = Gal(Q(ζ_p)/Q) cyclic of order p-1,
//! generated by σ : ζ ↦ ζ^v. An element is a coefficient vector on
//! σ^0 .. σ^(p-2).
//!
//! This module builds the Stickelberger element and the polynomials derived
//! from it, and checks the identities that relate them:
//!
//! * `S = P(σ)` where `P(σ) = Σ v^(-i) σ^i`,
//! * `P(σ)(σ - v) = p Q(σ)` with `Q = Σ δ_i σ^i`,
//! * `Q = Q₁ · (1 + σ + ... + σ^((p-3)/2))`,
//! * `P ≡ T (mod p)` for `T = v^(-(p-2)) Π_{k≠1} (σ - v^k)`,
//! * `p S₂ = S` folded modulo σ^m when q has inertial degree f = (p-1)/m.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{self, canon_power, discrete_log_table, is_primitive_root, mul_mod, order_mod_prime, pow_mod};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};

/// Element of Z[G_p] relative to the generator σ : ζ ↦ ζ^v.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupRingElt {
    p: u64,
    v: u64,
    coeffs: Vec<i64>,
}

fn validate(p: u64, v: u64) -> Result<()> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if !is_primitive_root(v, p) {
        return Err(Error::InvalidInput(format!("{v} is not a primitive root mod {p}")));
    }
    Ok(())
}

impl GroupRingElt {
    pub fn new(p: u64, v: u64, coeffs: Vec<i64>) -> Result<Self> {
        validate(p, v)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::InvalidInput(format!("Z[G_{p}] elements need {} coefficients", p - 1)));
        }
        Ok(Self { p, v, coeffs })
    }

    pub fn zero(p: u64, v: u64) -> Self {
        Self { p, v, coeffs: vec![0; (p - 1) as usize] }
    }

    /// c · σ^k (k reduced mod p-1).
    pub fn monomial(p: u64, v: u64, k: i64, c: i64) -> Self {
        let mut out = Self::zero(p, v);
        out.coeffs[k.rem_euclid((p - 1) as i64) as usize] = c;
        out
    }

    /// σ - c.
    pub fn sigma_minus(p: u64, v: u64, c: i64) -> Self {
        let mut out = Self::monomial(p, v, 1, 1);
        out.coeffs[0] -= c;
        out
    }

    /// 1 + σ + ... + σ^(len-1).
    pub fn geometric(p: u64, v: u64, len: usize) -> Self {
        let mut out = Self::zero(p, v);
        for k in 0..len {
            out.coeffs[k % (p - 1) as usize] += 1;
        }
        out
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn order(&self) -> usize {
        (self.p - 1) as usize
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!((self.p, self.v), (other.p, other.v), "mismatched group rings");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Self { coeffs, ..*self }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&a| a * c).collect(), ..*self }
    }

    /// Product in Z[G_p] (cyclic convolution of length p-1).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.p, self.v), (other.p, other.v), "mismatched group rings");
        let n = self.order();
        let mut acc = vec![0i128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[(i + j) % n] += a as i128 * b as i128;
            }
        }
        let coeffs = acc
            .into_iter()
            .map(|c| i64::try_from(c).expect("group ring coefficient overflow"))
            .collect();
        Self { coeffs, ..*self }
    }

    /// Sum of the coefficients (the image under σ ↦ 1).
    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Whether every coefficient is divisible by `d`.
    pub fn divisible_by(&self, d: i64) -> bool {
        self.coeffs.iter().all(|c| c % d == 0)
    }

    /// Splits into nonnegative parts `(pos, neg)` with `self = pos - neg`.
    pub fn split_signs(&self) -> (Self, Self) {
        let pos = self.coeffs.iter().map(|&c| c.max(0)).collect();
        let neg = self.coeffs.iter().map(|&c| (-c).max(0)).collect();
        (Self { coeffs: pos, ..*self }, Self { coeffs: neg, ..*self })
    }

    /// Σ c_i x^i mod p.
    pub fn eval_mod_p(&self, x: u64) -> u64 {
        fp_gr_eval(self, x)
    }

    /// a^(Σ c_i σ^i) = Π σ^i(a)^(c_i). Requires nonnegative coefficients;
    /// use [`apply_exponent_split`] otherwise.
    pub fn apply_exponent(&self, a: &CycInt) -> Result<CycInt> {
        if a.p() != self.p {
            return Err(Error::ModulusMismatch(a.p(), self.p));
        }
        if self.coeffs.iter().any(|&c| c < 0) {
            return Err(Error::InvalidInput(
                "negative exponent coefficients: use apply_exponent_split for a numerator/denominator pair"
                    .into(),
            ));
        }
        let mut acc = CycInt::one(self.p);
        let mut t = 1u64;
        for &c in &self.coeffs {
            if c > 0 {
                acc = &acc * &a.galois_apply(t)?.pow(c as u64);
            }
            t = mul_mod(t, self.v, self.p);
        }
        Ok(acc)
    }
}

/// Applies a group-ring exponent with signed coefficients as a fraction:
/// returns `(num, den)` with `a^g = num / den`.
pub fn apply_exponent_split(g: &GroupRingElt, a: &CycInt) -> Result<(CycInt, CycInt)> {
    let (pos, neg) = g.split_signs();
    Ok((pos.apply_exponent(a)?, neg.apply_exponent(a)?))
}

/// Σ c_i x^i mod p.
pub fn fp_gr_eval(g: &GroupRingElt, x: u64) -> u64 {
    let p = g.p as i128;
    let mut acc: i128 = 0;
    for &c in g.coeffs.iter().rev() {
        acc = (acc * (x as i128 % p) + c as i128).rem_euclid(p);
    }
    acc as u64
}

/// The Stickelberger element Σ_{t=1}^{p-1} t ϖ_t^(-1), rewritten on powers
/// of σ through ϖ_t^(-1) = σ^(ind_v(t^(-1))).
pub fn stickelberger_s(p: u64, v: u64) -> Result<GroupRingElt> {
    validate(p, v)?;
    let ind = discrete_log_table(v, p);
    let mut out = GroupRingElt::zero(p, v);
    for t in 1..p {
        let t_inv = arith::inv_mod(t, p).expect("t is a unit");
        out.coeffs[ind[t_inv as usize] as usize] += t as i64;
    }
    Ok(out)
}

/// P(σ) = Σ_{i=0}^{p-2} v^(-i) σ^i.
pub fn polynomial_p(p: u64, v: u64) -> Result<GroupRingElt> {
    validate(p, v)?;
    let coeffs = (0..p - 1)
        .map(|i| canon_power(v, -(i as i64), p).map(|c| c as i64))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupRingElt { p, v, coeffs })
}

/// δ_i = (v^(-(i-1)) - v^(-i) v) / p, i = 0 .. p-2.
pub fn delta_coeffs(p: u64, v: u64) -> Result<Vec<i64>> {
    validate(p, v)?;
    let pi = p as i64;
    (0..p - 1)
        .map(|i| {
            let prev = canon_power(v, 1 - i as i64, p)? as i64;
            let cur = canon_power(v, -(i as i64), p)? as i64;
            let num = prev - cur * v as i64;
            if num % pi != 0 {
                return Err(Error::Internal(format!("δ_{i} numerator {num} not divisible by {p}")));
            }
            Ok(num / pi)
        })
        .collect()
}

/// Q(σ) = Σ δ_i σ^i, the exact quotient P(σ)(σ - v) / p.
pub fn polynomial_q(p: u64, v: u64) -> Result<GroupRingElt> {
    Ok(GroupRingElt { p, v, coeffs: delta_coeffs(p, v)? })
}

/// Q₁ = (1 - σ) Σ_{i ≤ (p-3)/2} δ_i σ^i + (1 - v) σ^((p-1)/2), together with
/// whether Q = Q₁ (1 + σ + ... + σ^((p-3)/2)) holds exactly.
pub fn polynomial_q1_factorization(p: u64, v: u64) -> Result<(GroupRingElt, bool)> {
    let delta = delta_coeffs(p, v)?;
    let half = ((p - 1) / 2) as usize;
    let mut low = GroupRingElt::zero(p, v);
    low.coeffs[..half].copy_from_slice(&delta[..half]);
    let one_minus_sigma = GroupRingElt::sigma_minus(p, v, 1).scale(-1);
    let q1 = one_minus_sigma
        .mul(&low)
        .add(&GroupRingElt::monomial(p, v, half as i64, 1 - v as i64));
    let q = GroupRingElt { p, v, coeffs: delta };
    let holds = q1.mul(&GroupRingElt::geometric(p, v, half)) == q;
    Ok((q1, holds))
}

/// Inertial degree f of q in Q(ζ_p), i.e. the order of q mod p.
pub fn inertial_degree(p: u64, q: u64) -> Result<u64> {
    if !arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == p {
        return Err(Error::InvalidInput(format!("q must differ from p (both {p})")));
    }
    Ok(order_mod_prime(q % p, p))
}

/// S₂ = Σ_{i<m} (Σ_{j<f} v^(-(i+jm)) / p) σ^i for a prime q of inertial
/// degree f > 1, m = (p-1)/f. Coefficients beyond σ^(m-1) are zero.
pub fn polynomial_s2(p: u64, q: u64, v: u64) -> Result<GroupRingElt> {
    validate(p, v)?;
    let f = inertial_degree(p, q)?;
    if f == 1 {
        return Err(Error::InvalidInput(format!(
            "q = {q} splits completely in Q(zeta_{p}); S2 is only defined for f > 1"
        )));
    }
    let m = (p - 1) / f;
    let mut out = GroupRingElt::zero(p, v);
    for i in 0..m {
        let orbit: u64 = (0..f).map(|j| canon_power(v, -((i + j * m) as i64), p)).sum::<Result<u64>>()?;
        if !orbit.is_multiple_of(p) {
            return Err(Error::Internal(format!("orbit sum {orbit} not divisible by {p}")));
        }
        out.coeffs[i as usize] = (orbit / p) as i64;
    }
    Ok(out)
}

/// T(σ) = v^(-(p-2)) Π_{k=0, k≠1}^{p-2} (σ - v^k), expanded in Z[x] with
/// exact big-integer coefficients (degree p-2, no reduction needed).
pub fn polynomial_t(p: u64, v: u64) -> Result<Vec<BigInt>> {
    validate(p, v)?;
    let mut poly = vec![BigInt::from(1)];
    for k in (0..p - 1).filter(|&k| k != 1) {
        let root = BigInt::from(pow_mod(v, k, p));
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &root;
        }
        poly = next;
    }
    let lead = BigInt::from(canon_power(v, -((p - 2) as i64), p)?);
    Ok(poly.into_iter().map(|c| c * &lead).collect())
}

/// R(σ) with P = T + p R, or `None` if P - T is not divisible by p.
pub fn lemma_remainder(p: u64, v: u64) -> Result<Option<Vec<BigInt>>> {
    let pp = polynomial_p(p, v)?;
    let t = polynomial_t(p, v)?;
    let pb = BigInt::from(p);
    let mut r = Vec::with_capacity(t.len());
    for (i, tc) in t.iter().enumerate() {
        let diff = BigInt::from(pp.coeffs[i]) - tc;
        let (quo, rem) = diff.div_rem(&pb);
        if !rem.is_zero() {
            return Ok(None);
        }
        r.push(quo);
    }
    Ok(Some(r))
}

/// Q_d(σ) = Σ_{i ∈ I_d} σ^i with
/// I_d = { i : v^((p-1)/2 - i) + v^((p-1)/2 - i + ind_v(d)) > p }.
pub fn polynomial_qd(p: u64, v: u64, d: u64) -> Result<GroupRingElt> {
    validate(p, v)?;
    if d == 0 || d > p - 2 {
        return Err(Error::InvalidInput(format!("d must lie in [1, {}]", p - 2)));
    }
    let ind_d = discrete_log_table(v, p)[d as usize] as i64;
    let half = ((p - 1) / 2) as i64;
    let mut out = GroupRingElt::zero(p, v);
    for i in 0..(p - 1) as i64 {
        let a = canon_power(v, half - i, p)?;
        let b = canon_power(v, half - i + ind_d, p)?;
        if a + b > p {
            out.coeffs[i as usize] = 1;
        }
    }
    Ok(out)
}

/// S with exponents of σ folded modulo m (σ^m identified with 1).
pub fn fold_exponents(g: &GroupRingElt, m: u64) -> Vec<i64> {
    let mut out = vec![0; m as usize];
    for (i, &c) in g.coeffs.iter().enumerate() {
        out[i % m as usize] += c;
    }
    out
}

/// Whether P(σ)(σ - v) equals p Q(σ) exactly.
pub fn check_p_times_sigma_minus_v(p: u64, v: u64) -> Result<bool> {
    let lhs = polynomial_p(p, v)?.mul(&GroupRingElt::sigma_minus(p, v, v as i64));
    Ok(lhs == polynomial_q(p, v)?.scale(p as i64))
}

/// Floor form of δ: δ_i = -floor(v^(-i) v / p).
pub fn delta_floor_form(p: u64, v: u64) -> Result<Vec<i64>> {
    validate(p, v)?;
    (0..p - 1)
        .map(|i| Ok(-((canon_power(v, -(i as i64), p)? * v / p) as i64)))
        .collect()
}
