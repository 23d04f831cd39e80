//! Modular arithmetic on machine words, primitive roots, finite fields
//! F_{q^f} in a polynomial basis, and the p-th power residue character.
//!
//! All moduli fit in a `u64`; products go through `u128`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &s in &SMALL {
        if n.is_multiple_of(s) {
            return n == s;
        }
    }
    let (d, r) = split_odd(n - 1);
    SMALL.iter().all(|&a| mr_round(n, a, d, r))
}

fn split_odd(mut d: u64) -> (u64, u32) {
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    (d, r)
}

fn mr_round(n: u64, a: u64, d: u64, r: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Number of Miller-Rabin witnesses used for integers beyond 64 bits.
pub const BIG_PRIMALITY_WITNESSES: usize = 40;

/// Primality of an arbitrary-size integer: exact below 2^64, otherwise
/// Miller-Rabin with the first [`BIG_PRIMALITY_WITNESSES`] primes as bases.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if !n.bit(0) {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let r = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> r;
    primes_from(2)
        .take(BIG_PRIMALITY_WITNESSES)
        .all(|a| {
            let mut x = BigUint::from(a).modpow(&d, n);
            if x == one || x == n_minus_1 {
                return true;
            }
            for _ in 1..r {
                x = (&x * &x) % n;
                if x == n_minus_1 {
                    return true;
                }
            }
            false
        })
}

/// Primes `>= start` in increasing order.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| is_prime(n))
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Prime factorisation by trial division, stopping early once the
/// cofactor is prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while n > 1 {
        if is_prime(n) {
            push_factor(&mut out, n);
            break;
        }
        if d.saturating_mul(d) > n {
            push_factor(&mut out, n);
            break;
        }
        while n.is_multiple_of(d) {
            push_factor(&mut out, d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

fn push_factor(out: &mut Vec<(u64, u32)>, d: u64) {
    match out.last_mut() {
        Some((last, e)) if *last == d => *e += 1,
        _ => out.push((d, 1)),
    }
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn order_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    let mut ord = p - 1;
    for (r, _) in factorize(p - 1) {
        while ord.is_multiple_of(r) && pow_mod(a, ord / r, p) == 1 {
            ord /= r;
        }
    }
    ord
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Smallest generator of (Z/pZ)^* for an odd prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    smallest_generator(p)
}

/// Smallest generator of (Z/qZ)^* for any prime `q` (including 2).
pub(crate) fn smallest_generator(q: u64) -> Result<u64> {
    if q == 2 {
        return Ok(1);
    }
    let factors = factorize(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&(r, _)| pow_mod(g, (q - 1) / r, q) != 1))
        .ok_or_else(|| Error::Internal(format!("no primitive root found mod {q}")))
}

pub fn is_primitive_root(v: u64, p: u64) -> bool {
    !v.is_multiple_of(p) && order_mod_prime(v % p, p) == p - 1
}

/// All primitive roots mod `p` in increasing order.
pub fn primitive_roots(p: u64) -> Result<Vec<u64>> {
    require_odd_prime(p)?;
    Ok((2..p).filter(|&v| is_primitive_root(v, p)).collect())
}

/// The representative of `v^k mod p` in `[1, p-1]`; negative `k` means the
/// inverse power.
pub fn canon_power(v: u64, k: i64, p: u64) -> Result<u64> {
    if p < 2 || v.is_multiple_of(p) {
        return Err(Error::InvalidInput(format!("{v} is not invertible mod {p}")));
    }
    let base = if k < 0 {
        inv_mod(v, p).ok_or_else(|| Error::InvalidInput(format!("{v} is not invertible mod {p}")))?
    } else {
        v % p
    };
    Ok(pow_mod(base, k.unsigned_abs(), p))
}

/// Table `t -> ind_v(t)` for t in `[1, p-1]` (index 0 unused).
pub fn discrete_log_table(v: u64, p: u64) -> Vec<u64> {
    let mut table = vec![0; p as usize];
    let mut x = 1u64;
    for i in 0..p - 1 {
        table[x as usize] = i;
        x = mul_mod(x, v, p);
    }
    table
}

// ---------------------------------------------------------------------------
// Polynomials over F_q (little-endian coefficient vectors)

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, q)) % q;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let deg = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - deg;
            for (k, &mk) in m[..deg].iter().enumerate() {
                r[shift + k] = (r[shift + k] + q - mul_mod(lead, mk, q)) % q;
            }
        }
    }
    r.resize(deg.max(1), 0);
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    poly_rem_monic(&poly_mul(a, b, q), m, q)
}

fn poly_powmod(a: &[u64], mut e: u64, m: &[u64], q: u64) -> Vec<u64> {
    let mut base = poly_rem_monic(a, m, q);
    let mut acc = poly_rem_monic(&[1], m, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, q);
        }
        base = poly_mulmod(&base, &base, m, q);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let inv = inv_mod(*b.last().unwrap(), q).expect("nonzero leading coefficient");
        let monic: Vec<u64> = b.iter().map(|&c| mul_mod(c, inv, q)).collect();
        let mut r = if a.len() >= monic.len() { poly_rem_monic(&a, &monic, q) } else { a.clone() };
        poly_trim(&mut r);
        a = monic;
        b = r;
    }
    a
}

/// Rabin's irreducibility test for a monic polynomial of degree `f` over F_q.
fn is_irreducible(m: &[u64], q: u64) -> bool {
    let f = (m.len() - 1) as u64;
    let x = [0u64, 1];
    let frob = |k: u64| {
        let mut y = poly_rem_monic(&x, m, q);
        for _ in 0..k {
            y = poly_powmod(&y, q, m, q);
        }
        y
    };
    let mut full = frob(f);
    poly_trim(&mut full);
    let mut xr = poly_rem_monic(&x, m, q);
    poly_trim(&mut xr);
    if full != xr {
        return false;
    }
    factorize(f).iter().all(|&(r, _)| {
        let mut y = frob(f / r);
        y.resize(y.len().max(2), 0);
        y[1] = (y[1] + q - 1) % q;
        let g = poly_gcd(m, &y, q);
        g.len() == 1
    })
}

// ---------------------------------------------------------------------------
// Finite fields

/// Element of F_{q^f} in the polynomial basis of [`FieldDesc::modulus`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FFElem {
    coeffs: Vec<u64>,
}

impl FFElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The residue field F_{q^f} of a prime of Z[ζ_p] over q, together with the
/// image of ζ_p that pins down which prime ideal it is.
#[derive(Clone, Debug, Serialize)]
pub struct FieldDesc {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    /// Monic modulus, little-endian, degree `f`. For `f = 1` this is `x`.
    pub modulus: Vec<u64>,
    /// Generator of the multiplicative group, smallest in lexicographic order.
    pub generator: FFElem,
    /// `generator^((q^f - 1)/p)`, of exact order `p`.
    pub zeta_image: FFElem,
    /// `q^f`.
    pub size: u64,
}

/// Builds the residue field for the pair `(p, q)`.
///
/// `p` must be an odd prime and `q` a prime different from `p`. The modulus
/// is the lexicographically smallest monic irreducible polynomial of degree
/// `f = ord_p(q)`.
pub fn field_make(p: u64, q: u64) -> Result<FieldDesc> {
    require_odd_prime(p)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == p {
        return Err(Error::InvalidInput(format!("q must differ from p (both {p})")));
    }
    let f = order_mod_prime(q % p, p);
    let size = (0..f)
        .try_fold(1u64, |acc, _| acc.checked_mul(q))
        .ok_or(Error::FieldTooLarge { q, f })?;

    let modulus = if f == 1 {
        vec![0, 1]
    } else {
        find_irreducible(q, f as usize)
    };
    let mut fd = FieldDesc {
        p,
        q,
        f,
        modulus,
        generator: FFElem { coeffs: vec![0; f as usize] },
        zeta_image: FFElem { coeffs: vec![0; f as usize] },
        size,
    };
    let factors = factorize(size - 1);
    let generator = (1..size)
        .map(|n| fd.from_index(n))
        .find(|g| factors.iter().all(|&(r, _)| !fd.is_one(&fd.pow(g, (size - 1) / r))))
        .ok_or_else(|| Error::Internal("no generator for the residue field".into()))?;
    let zeta_image = fd.pow(&generator, (size - 1) / p);
    if fd.is_one(&zeta_image) {
        return Err(Error::Internal("image of zeta_p has order < p".into()));
    }
    fd.generator = generator;
    fd.zeta_image = zeta_image;
    Ok(fd)
}

fn find_irreducible(q: u64, f: usize) -> Vec<u64> {
    let count = q.pow(f as u32);
    (0..count)
        .map(|n| {
            let mut m = digits(n, q, f);
            m.push(1);
            m
        })
        .find(|m| m[0] != 0 && is_irreducible(m, q))
        .expect("irreducible polynomials exist in every degree")
}

fn digits(mut n: u64, q: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = n % q;
        n /= q;
    }
    out
}

impl FieldDesc {
    fn deg(&self) -> usize {
        self.f as usize
    }

    /// The element whose coefficient vector is the base-q expansion of `n`
    /// (most significant digit = highest-degree coefficient).
    pub fn from_index(&self, n: u64) -> FFElem {
        FFElem { coeffs: digits(n, self.q, self.deg()) }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FFElem> {
        if coeffs.len() != self.deg() || coeffs.iter().any(|&c| c >= self.q) {
            return Err(Error::InvalidInput(format!(
                "element needs {} residues in [0, {}]",
                self.f,
                self.q - 1
            )));
        }
        Ok(FFElem { coeffs: coeffs.to_vec() })
    }

    pub fn constant(&self, c: u64) -> FFElem {
        let mut coeffs = vec![0; self.deg()];
        coeffs[0] = c % self.q;
        FFElem { coeffs }
    }

    pub fn one(&self) -> FFElem {
        self.constant(1)
    }

    pub fn is_one(&self, x: &FFElem) -> bool {
        x.coeffs[0] == 1 && x.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % self.q).collect();
        FFElem { coeffs }
    }

    pub fn scale(&self, a: &FFElem, c: u64) -> FFElem {
        let coeffs = a.coeffs.iter().map(|&x| mul_mod(x, c, self.q)).collect();
        FFElem { coeffs }
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let mut coeffs = poly_mulmod(&a.coeffs, &b.coeffs, &self.modulus, self.q);
        coeffs.resize(self.deg(), 0);
        FFElem { coeffs }
    }

    pub fn pow(&self, a: &FFElem, mut e: u64) -> FFElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, a: &FFElem) -> FFElem {
        self.pow(a, self.q)
    }

    /// All nonzero elements as `generator^k`, `k = 0 .. q^f - 2`.
    pub fn powers_of_generator(&self) -> impl Iterator<Item = FFElem> + '_ {
        let mut x = self.one();
        (0..self.size - 1).map(move |_| {
            let out = x.clone();
            x = self.mul(&x, &self.generator);
            out
        })
    }
}

/// The exponent `c` with `x^((q^f-1)/p) = zeta_image^c`. The multiplicative
/// character attached to the prime is `x -> ζ_p^(-c)`.
pub fn residue_char_exponent(x: &FFElem, fd: &FieldDesc) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::InvalidInput("the residue character is undefined at 0".into()));
    }
    let y = fd.pow(x, (fd.size - 1) / fd.p);
    let mut z = fd.one();
    for c in 0..fd.p {
        if z == y {
            return Ok(c);
        }
        z = fd.mul(&z, &fd.zeta_image);
    }
    Err(Error::Internal("power of x is not a p-th root of unity".into()))
}

/// Absolute trace F_{q^f} -> F_q.
pub fn ff_trace(x: &FFElem, fd: &FieldDesc) -> u64 {
    let mut acc = x.clone();
    let mut conj = x.clone();
    for _ in 1..fd.f {
        conj = fd.frobenius(&conj);
        acc = fd.add(&acc, &conj);
    }
    debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
    acc.coeffs[0]
}

/// `q^e` as a big integer.
pub fn big_pow(q: u64, e: u64) -> BigUint {
    let mut acc = BigUint::one();
    let b = BigUint::from(q);
    for _ in 0..e {
        acc *= &b;
    }
    acc
}

/// q-adic valuation of a nonzero big integer.
pub fn big_valuation(n: &BigUint, q: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let qb = BigUint::from(q);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &qb).is_zero() {
        n /= &qb;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(a: u64, p: u64) -> u64 {
        let mut x = a % p;
        let mut k = 1;
        while x != 1 {
            x = x * a % p;
            k += 1;
        }
        k
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert!(primitive_root(9).is_err());
        assert!(primitive_root(2).is_err());
    }

    #[test]
    fn primitive_root_has_full_order_up_to_500() {
        for p in odd_primes_in(3, 500) {
            let v = primitive_root(p).unwrap();
            assert_eq!(brute_order(v, p), p - 1, "p = {p}");
            assert!((2..v).all(|w| brute_order(w, p) < p - 1), "not smallest for p = {p}");
        }
    }

    #[test]
    fn canon_power_examples() {
        assert_eq!(canon_power(2, -1, 5).unwrap(), 3);
        assert_eq!(canon_power(2, 0, 5).unwrap(), 1);
        assert_eq!(canon_power(3, -3, 7).unwrap(), 6);
        assert!(canon_power(10, 1, 5).is_err());
    }

    #[test]
    fn field_make_degrees() {
        assert_eq!(field_make(5, 11).unwrap().f, 1);
        assert_eq!(field_make(5, 3).unwrap().f, 4);
        assert_eq!(field_make(7, 29).unwrap().f, 1);
        assert_eq!(field_make(7, 2).unwrap().f, 3);
        assert!(field_make(5, 5).is_err());
        assert!(field_make(7, 4).is_err());
    }

    #[test]
    fn zeta_image_has_order_p() {
        for &(p, q) in &[(5, 11), (5, 3), (7, 2), (11, 3), (5, 7), (3, 7)] {
            let fd = field_make(p, q).unwrap();
            let z = &fd.zeta_image;
            assert!(!fd.is_one(z));
            assert!(fd.is_one(&fd.pow(z, p)));
            // modulus irreducible: the field has no zero divisors among generator powers
            let count = fd.powers_of_generator().collect::<std::collections::HashSet<_>>().len();
            assert_eq!(count as u64, fd.size - 1);
        }
    }

    #[test]
    fn residue_char_examples() {
        let fd = field_make(5, 11).unwrap();
        assert_eq!(residue_char_exponent(&fd.one(), &fd).unwrap(), 0);
        let three = fd.constant(3);
        let c = residue_char_exponent(&three, &fd).unwrap();
        // 3^2 = 9 in F_11; compare against enumerated powers of the zeta image
        let z = fd.zeta_image.coeffs()[0];
        let expect = (0..5).find(|&k| pow_mod(z, k, 11) == 9).unwrap();
        assert_eq!(c, expect);
        assert!(residue_char_exponent(&fd.constant(0), &fd).is_err());
        for y in 1..11 {
            let yp = fd.pow(&fd.constant(y), 5);
            assert_eq!(residue_char_exponent(&yp, &fd).unwrap(), 0);
        }
    }

    #[test]
    fn trace_prime_field_is_identity() {
        let fd = field_make(5, 11).unwrap();
        for a in 0..11 {
            assert_eq!(ff_trace(&fd.constant(a), &fd), a);
        }
    }

    #[test]
    fn trace_matches_conjugate_sum_in_degree_two() {
        // p = 3, q = 5: 5 = 2 mod 3 so f = 2
        let fd = field_make(3, 5).unwrap();
        assert_eq!(fd.f, 2);
        assert_eq!(ff_trace(&fd.constant(0), &fd), 0);
        for x in fd.powers_of_generator() {
            let mut conj = x.clone();
            for _ in 0..5 - 1 {
                conj = fd.mul(&conj, &x);
            }
            let sum = fd.add(&x, &conj);
            assert_eq!(sum.coeffs()[1], 0);
            assert_eq!(ff_trace(&x, &fd), sum.coeffs()[0]);
        }
    }

    #[test]
    fn factorize_and_primality() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(2400), vec![(2, 5), (3, 1), (5, 2)]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
        let big = BigUint::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        assert!(is_prime_big(&big));
        assert!(!is_prime_big(&(&big * BigUint::from(3u32))));
    }
}
