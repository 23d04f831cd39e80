//! Exact arithmetic in Z[ζ_p] and Z[ζ_p, ζ_q] = Z[ζ_pq].
//!
//! Elements are stored in the power basis reduced modulo the cyclotomic
//! polynomial: `CycInt` holds the coefficients of ζ_p^0 .. ζ_p^(p-2), and
//! `BiCycInt` holds a (p-1) x (q-1) matrix whose (i, j) entry multiplies
//! ζ_p^i ζ_q^j. Since {ζ_q^j} is a Z[ζ_p]-basis of Z[ζ_pq], the columns of a
//! `BiCycInt` are themselves elements of Z[ζ_p].
//!
//! Valuations come in two flavours: the λ-adic valuation at the unique prime
//! over p (λ = ζ_p - 1), computed by repeated exact division, and valuations
//! at the degree-one primes over a split prime q, computed by evaluating at a
//! Hensel-lifted root of Φ_p in Z/q^N.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime, pow_mod, smallest_generator};
use crate::error::{Error, Result};

/// A λ-adic (or other) valuation that may be infinite or only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    /// The configured cap was reached; the true value is at least this.
    AtLeast(u32),
    /// Valuation of zero.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Whether the valuation is known to be `>= k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Default valuation cap for λ-adic valuations: `4p`.
pub fn default_lambda_cap(p: u64) -> u32 {
    (4 * p) as u32
}

fn check_p(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Folds a coefficient vector indexed by exponents mod `p` (length `p`)
/// into the reduced basis using ζ^(p-1) = -(1 + ζ + ... + ζ^(p-2)).
fn fold_full(mut full: Vec<BigInt>) -> Vec<BigInt> {
    let top = full.pop().expect("nonempty");
    if !top.is_zero() {
        for c in full.iter_mut() {
            *c -= &top;
        }
    }
    full
}

// ---------------------------------------------------------------------------
// CycInt

/// Exact element of Z[ζ_p].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        check_p(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::InvalidInput(format!(
                "an element of Z[zeta_{p}] needs {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(Self { p, coeffs })
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(p, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds an element from coefficients of arbitrary exponents
    /// (`raw[k]` multiplies ζ^k), reducing exponents mod p.
    pub fn from_exponents(p: u64, raw: &[BigInt]) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        for (k, c) in raw.iter().enumerate() {
            full[k % p as usize] += c;
        }
        Self { p, coeffs: fold_full(full) }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = n.into();
        out
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// ζ^k for any integer k.
    pub fn zeta_pow(p: u64, k: i64) -> Self {
        let e = k.rem_euclid(p as i64) as usize;
        let mut full = vec![BigInt::zero(); p as usize];
        full[e] = BigInt::one();
        Self { p, coeffs: fold_full(full) }
    }

    /// λ = ζ - 1.
    pub fn lambda(p: u64) -> Self {
        &Self::zeta_pow(p, 1) - &Self::one(p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it lies in Z.
    pub fn as_rational(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Exact product; fails when the two elements live in different rings.
    pub fn cyc_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self * other)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self + other)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Exact division of every coefficient by `d`, or `None` if some
    /// coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (quo, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            coeffs.push(quo);
        }
        Some(Self { p: self.p, coeffs })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies ϖ_t : ζ ↦ ζ^t.
    pub fn galois_apply(&self, t: u64) -> Result<Self> {
        if t.is_multiple_of(self.p) {
            return Err(Error::InvalidInput(format!("{t} is not a unit mod {}", self.p)));
        }
        Ok(self.galois_unchecked(t % self.p))
    }

    fn galois_unchecked(&self, t: u64) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i * t as usize) % p] += c;
        }
        Self { p: self.p, coeffs: fold_full(full) }
    }

    /// Complex conjugation ζ ↦ ζ^(-1).
    pub fn conj(&self) -> Self {
        self.galois_unchecked(self.p - 1)
    }

    /// Absolute norm: the product of all p-1 conjugates.
    pub fn norm(&self) -> BigInt {
        let mut acc = self.clone();
        for t in 2..self.p {
            acc = &acc * &self.galois_unchecked(t);
        }
        acc.as_rational().cloned().expect("norm of an algebraic integer is rational")
    }

    /// Value of the polynomial Σ c_i x^i at `x`, reduced mod `modulus`.
    pub fn eval_mod(&self, x: &BigInt, modulus: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(modulus);
        }
        acc
    }

    /// Greatest common divisor of the coefficients (0 for the zero element).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// p / λ = Π_{k=2}^{p-1} (ζ^k - 1).
    pub fn lambda_cofactor(p: u64) -> Self {
        let one = Self::one(p);
        (2..p).fold(one.clone(), |acc, k| &acc * &(&Self::zeta_pow(p, k as i64) - &one))
    }

    /// Whether λ divides this element: the image under ζ ↦ 1 is 0 mod p.
    pub fn divisible_by_lambda(&self) -> bool {
        let s: BigInt = self.coeffs.iter().sum();
        (s % BigInt::from(self.p)).is_zero()
    }

    /// Largest k with the element in π^k, capped at `cap`.
    pub fn lambda_valuation(&self, cap: u32) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let cof = Self::lambda_cofactor(self.p);
        let pb = BigInt::from(self.p);
        let mut a = self.clone();
        let mut k = 0;
        loop {
            if !a.divisible_by_lambda() {
                return Valuation::Finite(k);
            }
            if k == cap {
                return Valuation::AtLeast(cap);
            }
            a = (&a * &cof).div_exact(&pb).expect("a * (p/λ) is divisible by p when λ | a");
            k += 1;
        }
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mismatched cyclotomic rings");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycInt { p: self.p, coeffs }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mismatched cyclotomic rings");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CycInt { p: self.p, coeffs }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        assert_eq!(self.p, rhs.p, "mismatched cyclotomic rings");
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        CycInt { p: self.p, coeffs: fold_full(full) }
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{a}*z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_strings<E: de::Error>(v: &[String]) -> std::result::Result<Vec<BigInt>, E> {
    v.iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| E::custom(format!("not a decimal integer: {s:?}"))))
        .collect()
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_strings(&self.coeffs).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = parse_strings(&raw)?;
        CycInt::new(coeffs.len() as u64 + 1, coeffs).map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// BiCycInt

/// Exact element of Z[ζ_p, ζ_q]; entry (i, j) multiplies ζ_p^i ζ_q^j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiCycInt {
    p: u64,
    q: u64,
    coeffs: Vec<BigInt>,
}

/// Accumulator indexed by (i mod p, j mod q) before reduction.
#[derive(Clone, Debug)]
pub struct BiGrid {
    p: usize,
    q: usize,
    cells: Vec<BigInt>,
}

impl BiGrid {
    pub fn new(p: u64, q: u64) -> Self {
        Self { p: p as usize, q: q as usize, cells: vec![BigInt::zero(); (p * q) as usize] }
    }

    pub fn add_term(&mut self, i: u64, j: u64, c: &BigInt) {
        let (i, j) = ((i as usize) % self.p, (j as usize) % self.q);
        self.cells[i * self.q + j] += c;
    }

    /// Reduces modulo Φ_p in the first variable and Φ_q in the second.
    pub fn reduce(mut self) -> BiCycInt {
        let (p, q) = (self.p, self.q);
        for j in 0..q {
            let top = std::mem::take(&mut self.cells[(p - 1) * q + j]);
            if !top.is_zero() {
                for i in 0..p - 1 {
                    self.cells[i * q + j] -= &top;
                }
            }
        }
        let mut coeffs = Vec::with_capacity((p - 1) * (q - 1));
        for i in 0..p - 1 {
            let top = self.cells[i * q + q - 1].clone();
            for j in 0..q - 1 {
                coeffs.push(&self.cells[i * q + j] - &top);
            }
        }
        BiCycInt { p: p as u64, q: q as u64, coeffs }
    }
}

impl BiCycInt {
    /// `coeffs` is row-major with (p-1) rows and (q-1) columns. `q` may be 2,
    /// in which case ζ_2 = -1 and the matrix has a single column.
    pub fn new(p: u64, q: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        check_p(p)?;
        if !is_prime(q) || q == p {
            return Err(Error::InvalidInput(format!("q = {q} must be a prime different from p = {p}")));
        }
        if coeffs.len() != ((p - 1) * (q - 1)) as usize {
            return Err(Error::InvalidInput(format!(
                "an element of Z[zeta_{p}, zeta_{q}] needs {} coefficients",
                (p - 1) * (q - 1)
            )));
        }
        Ok(Self { p, q, coeffs })
    }

    pub fn zero(p: u64, q: u64) -> Self {
        Self { p, q, coeffs: vec![BigInt::zero(); ((p - 1) * (q - 1)) as usize] }
    }

    pub fn one(p: u64, q: u64) -> Self {
        Self::from_cyc(&CycInt::one(p), q)
    }

    /// Embeds an element of Z[ζ_p] as the ζ_q^0 column.
    pub fn from_cyc(a: &CycInt, q: u64) -> Self {
        let mut out = Self::zero(a.p, q);
        for (i, c) in a.coeffs.iter().enumerate() {
            out.coeffs[i * (q - 1) as usize] = c.clone();
        }
        out
    }

    /// ζ_p^a ζ_q^b.
    pub fn monomial(p: u64, q: u64, a: i64, b: i64) -> Self {
        let mut g = BiGrid::new(p, q);
        g.add_term(a.rem_euclid(p as i64) as u64, b.rem_euclid(q as i64) as u64, &BigInt::one());
        g.reduce()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn cols(&self) -> usize {
        (self.q - 1) as usize
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[i * self.cols() + j]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The Z[ζ_p]-coefficient of ζ_q^j.
    pub fn column(&self, j: usize) -> CycInt {
        let coeffs = (0..(self.p - 1) as usize).map(|i| self.coeff(i, j).clone()).collect();
        CycInt { p: self.p, coeffs }
    }

    /// Returns the element as a `CycInt` when it has no ζ_q-dependence.
    pub fn collapse(&self) -> Option<CycInt> {
        (1..self.cols())
            .all(|j| (0..(self.p - 1) as usize).all(|i| self.coeff(i, j).is_zero()))
            .then(|| self.column(0))
    }

    fn remap(&self, map: impl Fn(u64, u64) -> (u64, u64)) -> Self {
        let mut g = BiGrid::new(self.p, self.q);
        for i in 0..self.p - 1 {
            for j in 0..self.q - 1 {
                let c = self.coeff(i as usize, j as usize);
                if !c.is_zero() {
                    let (a, b) = map(i, j);
                    g.add_term(a, b, c);
                }
            }
        }
        g.reduce()
    }

    /// ζ_p ↦ ζ_p^t, ζ_q fixed.
    pub fn apply_p(&self, t: u64) -> Self {
        let (p, _) = (self.p, self.q);
        self.remap(|i, j| ((i * t) % p, j))
    }

    /// τ_s: ζ_q ↦ ζ_q^s, ζ_p fixed.
    pub fn apply_q(&self, s: u64) -> Self {
        let q = self.q;
        self.remap(|i, j| (i, (j * s) % q))
    }

    /// Multiplication by ζ_p^k.
    pub fn mul_zeta_p(&self, k: u64) -> Self {
        let p = self.p;
        self.remap(|i, j| ((i + k) % p, j))
    }

    /// Complex conjugation (both roots of unity inverted).
    pub fn conj(&self) -> Self {
        let (p, q) = (self.p, self.q);
        self.remap(|i, j| ((p - i) % p, (q - j) % q))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p, self.q);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// min over columns of the λ-adic valuation; λ is unramified in
    /// Z[ζ_pq]/Z[ζ_p], so this is the π-adic valuation of the element.
    pub fn lambda_valuation(&self, cap: u32) -> Valuation {
        (0..self.cols())
            .map(|j| self.column(j).lambda_valuation(cap))
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

impl Add for &BiCycInt {
    type Output = BiCycInt;
    fn add(self, rhs: &BiCycInt) -> BiCycInt {
        assert_eq!((self.p, self.q), (rhs.p, rhs.q), "mismatched rings");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        BiCycInt { p: self.p, q: self.q, coeffs }
    }
}

impl Sub for &BiCycInt {
    type Output = BiCycInt;
    fn sub(self, rhs: &BiCycInt) -> BiCycInt {
        assert_eq!((self.p, self.q), (rhs.p, rhs.q), "mismatched rings");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        BiCycInt { p: self.p, q: self.q, coeffs }
    }
}

impl Mul for &BiCycInt {
    type Output = BiCycInt;
    fn mul(self, rhs: &BiCycInt) -> BiCycInt {
        assert_eq!((self.p, self.q), (rhs.p, rhs.q), "mismatched rings");
        let (p, q) = (self.p as usize, self.q as usize);
        let cols = q - 1;
        let lhs_terms: Vec<(usize, usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / cols, k % cols, c))
            .collect();
        let rhs_terms: Vec<(usize, usize, &BigInt)> = rhs
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / cols, k % cols, c))
            .collect();
        let mut cells = vec![BigInt::zero(); p * q];
        for &(i, j, a) in &lhs_terms {
            for &(k, l, b) in &rhs_terms {
                cells[((i + k) % p) * q + (j + l) % q] += a * b;
            }
        }
        BiGrid { p, q, cells }.reduce()
    }
}

impl Serialize for BiCycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.coeffs.chunks(self.cols()).map(to_strings).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiCycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(de::Error::custom("ragged coefficient matrix"));
        }
        let mut coeffs = Vec::with_capacity(rows.len() * width);
        for r in &rows {
            coeffs.extend(parse_strings::<D::Error>(r)?);
        }
        BiCycInt::new(rows.len() as u64 + 1, width as u64 + 1, coeffs).map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Split primes

/// A root of Φ_p modulo q^N. Evaluation ζ ↦ root is a ring map
/// Z[ζ_p] → Z/q^N whose kernel mod q is one of the p-1 degree-one primes
/// over q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HenselRoot {
    pub p: u64,
    pub q: u64,
    pub precision: u32,
    /// `root ≡ r1^label (mod q)` for the reference root r1.
    pub label: u64,
    #[serde(serialize_with = "ser_big")]
    root: BigInt,
}

fn ser_big<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn cyclotomic_value_and_derivative(p: u64, x: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    // Φ_p(x) = Σ_{k<p} x^k, Φ_p'(x) = Σ_{k<p} k x^(k-1), both via Horner.
    let mut f = BigInt::zero();
    let mut df = BigInt::zero();
    for _ in 0..p {
        df = (&df * x + &f).mod_floor(m);
        f = (&f * x + 1u32).mod_floor(m);
    }
    (f, df)
}

fn newton_lift(p: u64, start: &BigInt, q: u64, n: u32) -> BigInt {
    let m = BigInt::from(q).pow(n);
    let mut x = start.mod_floor(&m);
    for _ in 0..64 {
        let (f, df) = cyclotomic_value_and_derivative(p, &x, &m);
        if f.is_zero() {
            return x;
        }
        let ext = df.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one(), "root mod q must be simple");
        x = (&x - f * ext.x).mod_floor(&m);
    }
    unreachable!("Newton iteration converges quadratically")
}

impl HenselRoot {
    pub fn root(&self) -> &BigInt {
        &self.root
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.q).pow(self.precision)
    }

    /// The same root lifted to precision `n` (n may be smaller or larger).
    pub fn at_precision(&self, n: u32) -> HenselRoot {
        let root = if n <= self.precision {
            self.root.mod_floor(&BigInt::from(self.q).pow(n))
        } else {
            newton_lift(self.p, &self.root, self.q, n)
        };
        HenselRoot { precision: n, root, ..self.clone() }
    }
}

/// All p-1 roots of Φ_p lifted to Z/q^N, sorted by label `t`; the root
/// labelled `t` is congruent to r1^t where r1 is the smallest root mod q.
pub fn hensel_roots(p: u64, q: u64, precision: u32) -> Result<Vec<HenselRoot>> {
    check_p(p)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % p != 1 {
        return Err(Error::InvalidInput(format!(
            "q = {q} is not 1 mod p = {p}; primes over q do not have degree one"
        )));
    }
    if precision == 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let u = smallest_generator(q)?;
    let z = pow_mod(u, (q - 1) / p, q);
    let r1 = (1..p).map(|k| pow_mod(z, k, q)).min().expect("p > 1");
    Ok((1..p)
        .map(|t| {
            let r = pow_mod(r1, t, q);
            HenselRoot {
                p,
                q,
                precision,
                label: t,
                root: newton_lift(p, &BigInt::from(r), q, precision),
            }
        })
        .collect())
}

/// Default starting precision for split-prime valuations: `2p + 4`.
pub fn default_precision(p: u64) -> u32 {
    (2 * p + 4) as u32
}

/// Default precision cap for split-prime valuations: `16p`.
pub fn default_precision_cap(p: u64) -> u32 {
    (16 * p) as u32
}

fn int_valuation(n: &BigInt, q: u64) -> u32 {
    arith::big_valuation(n.magnitude(), q)
}

/// Valuation of `a` at the degree-one prime attached to `h`, including the
/// rational content q^e of `a` (each prime over q contains q exactly once).
pub fn ideal_valuation(a: &CycInt, h: &HenselRoot, cap: u32) -> Result<u32> {
    if a.p != h.p {
        return Err(Error::ModulusMismatch(a.p, h.p));
    }
    if a.is_zero() {
        return Err(Error::InvalidInput("valuation of zero".into()));
    }
    let content = a.content();
    let e = int_valuation(&content, h.q);
    let reduced = a.div_exact(&BigInt::from(h.q).pow(e)).expect("q^e divides the content");
    let mut n = h.precision.min(cap).max(1);
    loop {
        let lifted = h.at_precision(n);
        let value = reduced.eval_mod(lifted.root(), &lifted.modulus());
        let w = if value.is_zero() { n } else { int_valuation(&value, h.q) };
        if w + 1 < n {
            return Ok(e + w);
        }
        if n >= cap {
            return Err(Error::PrecisionExhausted { precision: n, cap });
        }
        n = (2 * n).min(cap);
    }
}

/// v_q of a nonzero big integer.
pub fn rational_valuation(n: &BigInt, q: u64) -> u32 {
    int_valuation(n, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, v: &[i64]) -> CycInt {
        CycInt::from_i64s(p, v).unwrap()
    }

    #[test]
    fn zeta_times_inverse_is_one() {
        for p in [3, 5, 7, 11] {
            let z = CycInt::zeta_pow(p, 1);
            let zi = CycInt::zeta_pow(p, (p - 1) as i64);
            assert_eq!(&z * &zi, CycInt::one(p));
        }
    }

    #[test]
    fn lambda_times_cofactor_is_p() {
        for p in [3, 5, 7, 13] {
            let prod = &CycInt::lambda(p) * &CycInt::lambda_cofactor(p);
            assert_eq!(prod, CycInt::from_int(p, p as i64));
        }
    }

    #[test]
    fn mismatched_rings_rejected() {
        assert!(CycInt::one(5).cyc_mul(&CycInt::one(7)).is_err());
        assert!(CycInt::new(5, vec![BigInt::one(); 3]).is_err());
    }

    #[test]
    fn galois_examples() {
        let a = c(7, &[3, -1, 4, 1, -5, 9]);
        assert_eq!(a.galois_apply(1).unwrap(), a);
        assert_eq!(a.galois_apply(6).unwrap(), a.conj());
        assert_eq!(a.conj().conj(), a);
        assert!(a.galois_apply(14).is_err());
        for t in 1..7 {
            for s in 1..7 {
                let lhs = a.galois_apply(s).unwrap().galois_apply(t).unwrap();
                assert_eq!(lhs, a.galois_apply(s * t % 7).unwrap());
            }
        }
    }

    #[test]
    fn norm_examples() {
        for p in [3, 5, 7, 11] {
            assert_eq!(CycInt::lambda(p).norm().abs(), BigInt::from(p));
            assert_eq!(CycInt::from_int(p, 3).norm(), BigInt::from(3).pow((p - 1) as u32));
            assert_eq!(CycInt::zeta_pow(p, 1).norm(), BigInt::one());
        }
    }

    #[test]
    fn lambda_valuation_examples() {
        for p in [3u64, 5, 7] {
            let cap = default_lambda_cap(p);
            let l2p = CycInt::lambda(p).pow(2 * p);
            assert_eq!(l2p.lambda_valuation(cap), Valuation::Finite(2 * p as u32));
            assert_eq!(CycInt::from_int(p, p as i64).lambda_valuation(cap), Valuation::Finite(p as u32 - 1));
            let one_plus_z = &CycInt::one(p) + &CycInt::zeta_pow(p, 1);
            assert_eq!(one_plus_z.lambda_valuation(cap), Valuation::Finite(0));
            assert_eq!(CycInt::zero(p).lambda_valuation(cap), Valuation::Infinite);
        }
        let l = CycInt::lambda(5).pow(30);
        assert_eq!(l.lambda_valuation(20), Valuation::AtLeast(20));
    }

    #[test]
    fn hensel_roots_small_case() {
        let roots = hensel_roots(3, 7, 2).unwrap();
        let mut values: Vec<_> = roots.iter().map(|h| h.root().clone()).collect();
        values.sort();
        assert_eq!(values, vec![BigInt::from(18), BigInt::from(30)]);
        assert!(hensel_roots(3, 5, 2).is_err());
    }

    #[test]
    fn hensel_roots_are_roots_and_labelled() {
        for &(p, q) in &[(5u64, 11u64), (7, 29), (11, 23), (3, 13)] {
            let roots = hensel_roots(p, q, 9).unwrap();
            assert_eq!(roots.len() as u64, p - 1);
            let m = roots[0].modulus();
            let r1 = roots[0].root().clone();
            for h in &roots {
                let (f, _) = cyclotomic_value_and_derivative(p, h.root(), &m);
                assert!(f.is_zero());
                let expect = r1.modpow(&BigInt::from(h.label), &BigInt::from(q));
                assert_eq!(h.root().mod_floor(&BigInt::from(q)), expect);
            }
        }
    }

    #[test]
    fn ideal_valuation_examples() {
        let roots = hensel_roots(5, 11, default_precision(5)).unwrap();
        let cap = default_precision_cap(5);
        for h in &roots {
            assert_eq!(ideal_valuation(&CycInt::from_int(5, 11), h, cap).unwrap(), 1);
            assert_eq!(ideal_valuation(&CycInt::from_int(5, 121), h, cap).unwrap(), 2);
            assert_eq!(ideal_valuation(&CycInt::one(5), h, cap).unwrap(), 0);
        }
        // ζ - r for a root r mod 11 lies in exactly one of the primes over 11
        let r = roots[0].root().mod_floor(&BigInt::from(11));
        let a = &CycInt::zeta_pow(5, 1) - &CycInt::from_int(5, r);
        let vals: Vec<u32> = roots.iter().map(|h| ideal_valuation(&a, h, cap).unwrap()).collect();
        assert!(vals[0] >= 1);
        assert!(vals[1..].iter().all(|&v| v == 0));
        assert_eq!(vals.iter().sum::<u32>(), rational_valuation(&a.norm(), 11));
    }

    #[test]
    fn bicyc_reduction_and_conj() {
        let p = 3;
        let q = 7;
        let z = BiCycInt::monomial(p, q, 1, 1);
        let zi = BiCycInt::monomial(p, q, -1, -1);
        assert_eq!(&z * &zi, BiCycInt::one(p, q));
        assert_eq!(z.conj(), zi);
        // 1 + ζ_q + ... + ζ_q^(q-1) = 0
        let mut g = BiGrid::new(p, q);
        for j in 0..q {
            g.add_term(0, j, &BigInt::one());
        }
        assert!(g.reduce().is_zero());
    }

    #[test]
    fn bicyc_with_q_two() {
        let m = BiCycInt::monomial(5, 2, 2, 1);
        assert_eq!(m.collapse().unwrap(), -&CycInt::zeta_pow(5, 2));
    }

    #[test]
    fn serde_round_trip() {
        let a = c(5, &[1, -2, 3, 40]);
        let big = a.pow(40);
        let s = serde_json::to_string(&big).unwrap();
        let back: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, big);
        let b = &BiCycInt::monomial(3, 5, 1, 2) + &BiCycInt::from_cyc(&CycInt::from_int(3, -7), 5);
        let b = b.pow(9);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<BiCycInt>(&s).unwrap(), b);
        assert!(serde_json::from_str::<CycInt>("[\"1\",\"x\"]").is_err());
    }
}
