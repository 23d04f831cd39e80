//! Gauss sums attached to the primes of Z[ζ_p] above q.
//!
//! For the residue field F_{q^f} described by a [`FieldDesc`],
//!
//! ```text
//! g = Σ_{x ≠ 0} ζ_p^(-c(x)) ζ_q^(Tr x),     G = g^p,
//! ```
//!
//! where `c(x)` is the residue-character exponent. `g` lives in Z[ζ_pq]
//! (and in Z[ζ_p] when f > 1); `G` always lies in Z[ζ_p]. The record built
//! here carries every structural fact that can be checked exactly: the
//! absolute value identity g·ḡ = q^f, the shape of g, the twist exponent ρ,
//! the factorisation of G at the primes over q, and the π-adic behaviour of
//! g^p + 1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, ff_trace, residue_char_exponent, field_make, inv_mod, mul_mod, pow_mod, primitive_root, smallest_generator, FieldDesc};
use crate::cyclotomic::{
    default_lambda_cap, default_precision, default_precision_cap, hensel_roots, ideal_valuation,
    rational_valuation, BiCycInt, BiGrid, CycInt, Valuation,
};
use crate::error::{Error, Result};
use crate::group_ring::polynomial_s2;

/// The Gauss sum itself: a genuine element of Z[ζ_pq] when f = 1, an
/// element of Z[ζ_p] otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", content = "coeffs")]
pub enum GaussValue {
    #[serde(rename = "Z[zeta_pq]")]
    Bi(BiCycInt),
    #[serde(rename = "Z[zeta_p]")]
    Cyc(CycInt),
}

/// Overrides for the q-adic precision cap (ideal valuations) and the
/// λ-adic valuation cap; `None` selects the defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GaussOptions {
    pub precision_cap: Option<u32>,
    pub lambda_cap: Option<u32>,
}

/// One named verification outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational checks are reported but never cause a failure.
    pub required: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, required: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, required, detail: detail.into() }
    }

    fn required(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, required: true, detail: detail.into() }
    }

    fn flag(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, required: false, detail: detail.into() }
    }

    pub fn failed(&self) -> bool {
        self.required && !self.passed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussSumRecord {
    pub p: u64,
    pub q: u64,
    pub f: u64,
    /// Smallest primitive root mod p (defines σ).
    pub v: u64,
    /// Smallest primitive root mod q (defines τ : ζ_q ↦ ζ_q^u).
    pub u: u64,
    /// Image of ζ_p in the residue field, i.e. the chosen prime over q.
    pub zeta_image: Vec<u64>,
    pub g: GaussValue,
    #[serde(rename = "G")]
    pub big_g: CycInt,
    /// τ(g) = ζ_p^ρ g; present when q ≡ 1 mod p.
    pub rho: Option<u64>,
    pub checks: Vec<Check>,
    pub stickelberger: Option<StickelbergerProfile>,
    pub pi_adic: Option<PiAdicProfile>,
}

impl GaussSumRecord {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.failed()).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.failed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn g_bi(&self) -> BiCycInt {
        match &self.g {
            GaussValue::Bi(b) => b.clone(),
            GaussValue::Cyc(c) => BiCycInt::from_cyc(c, self.q),
        }
    }
}

/// Computes g for the given residue field together with its structural
/// checks. Fails hard when g^p does not fall into Z[ζ_p].
pub fn gauss_sum(fd: &FieldDesc) -> Result<GaussSumRecord> {
    let (p, q, f) = (fd.p, fd.q, fd.f);
    let v = primitive_root(p)?;
    let u = smallest_generator(q)?;

    // Walking generator^k gives every nonzero x with residue exponent k mod p.
    let mut grid = BiGrid::new(p, q);
    let one = BigInt::one();
    // ζ_q^0 coefficient of the unreduced trace expansion, by ζ_p exponent.
    let mut trace_zero = vec![BigInt::zero(); p as usize];
    for (k, x) in fd.powers_of_generator().enumerate() {
        let c = k as u64 % p;
        let tr = ff_trace(&x, fd);
        grid.add_term((p - c) % p, tr, &one);
        if tr == 0 {
            trace_zero[((p - c) % p) as usize] += 1;
        }
    }
    let trace_zero = CycInt::from_exponents(p, &trace_zero);
    let g = grid.reduce();

    let mut checks = Vec::new();
    let q_pow_f = BigInt::from(q).pow(f as u32);
    let norm_ok = (&g * &g.conj()).collapse().and_then(|c| c.as_rational().cloned()) == Some(q_pow_f.clone());
    checks.push(Check::required("g_times_conj_g_is_q_pow_f", norm_ok, format!("q^f = {q_pow_f}")));

    let big_g_bi = g.pow(p);
    let big_g = big_g_bi
        .collapse()
        .ok_or_else(|| Error::Internal(format!("g^p does not lie in Z[zeta_{p}] for q = {q}")))?;
    checks.push(Check::required("G_in_z_zeta_p", true, "g^p has no zeta_q dependence"));

    let mut rho = None;
    let value = if f > 1 {
        let collapsed = g.collapse();
        checks.push(Check::required(
            "g_in_z_zeta_p",
            collapsed.is_some(),
            "f > 1 forces g to be fixed by tau",
        ));
        match collapsed {
            Some(c) => {
                if f % 2 == 0 {
                    let w = unit_times_power_of_q(&c, q, f / 2);
                    checks.push(Check::required(
                        "f_even_g_is_root_of_unity_times_q_half_f",
                        w.is_some(),
                        match w {
                            Some((sign, w)) => format!("g = {}zeta^{w} * {q}^{}", if sign < 0 { "-" } else { "" }, f / 2),
                            None => "no representation ±zeta^w q^(f/2)".into(),
                        },
                    ));
                }
                GaussValue::Cyc(c)
            }
            None => GaussValue::Bi(g.clone()),
        }
    } else {
        checks.push(Check::required(
            "zeta_q_zero_slice",
            trace_zero.is_zero(),
            "zeta_q^0 coefficient of sum_x chi(x) zeta_q^Tr(x) vanishes",
        ));
        // In the power basis zeta_q^0 .. zeta_q^(q-2) this slice is -chi(-1),
        // never zero; reported for comparison only.
        let power_slice = g.column(0);
        checks.push(Check::flag(
            "zeta_q_zero_slice_power_basis",
            power_slice.is_zero(),
            format!("power-basis zeta_q^0 column = {power_slice}"),
        ));
        let g_plus_one = &g + &BiCycInt::one(p, q);
        let val = g_plus_one.lambda_valuation(1);
        checks.push(Check::required(
            "g_congruent_minus_one_mod_pi",
            val.at_least(1),
            format!("v_pi(g + 1) >= {val}"),
        ));
        let r = extract_rho(&g)?;
        rho = Some(r);
        let c_u = residue_char_exponent(&fd.constant(u), fd)?;
        checks.push(Check::required(
            "rho_is_character_exponent_of_u",
            r == c_u,
            format!("rho = {r}, c(u) = {c_u}"),
        ));
        let res = resolvent_form(p, q, r)?;
        checks.push(Check::required(
            "resolvent_form_matches",
            res == g,
            format!("g = sum_i zeta_p^(i*{r}) zeta_q^(u^-i), u = {u}"),
        ));
        GaussValue::Bi(g.clone())
    };

    Ok(GaussSumRecord {
        p,
        q,
        f,
        v,
        u,
        zeta_image: fd.zeta_image.coeffs().to_vec(),
        g: value,
        big_g,
        rho,
        checks,
        stickelberger: None,
        pi_adic: None,
    })
}

/// Finds `(sign, w)` with `a = sign · ζ^w · q^e`.
fn unit_times_power_of_q(a: &CycInt, q: u64, e: u64) -> Option<(i8, u64)> {
    let p = a.p();
    let qe = BigInt::from(q).pow(e as u32);
    (0..p).find_map(|w| {
        let rotated = &(a * &CycInt::zeta_pow(p, -(w as i64)));
        match rotated.as_rational() {
            Some(r) if *r == qe => Some((1, w)),
            Some(r) if *r == -qe.clone() => Some((-1, w)),
            _ => None,
        }
    })
}

/// Σ_{i=0}^{q-2} ζ_p^(iρ) ζ_q^(u^(-i)) with u the smallest primitive root
/// mod q.
pub fn resolvent_form(p: u64, q: u64, rho: u64) -> Result<BiCycInt> {
    if !arith::is_prime(q) || q % p != 1 {
        return Err(Error::InvalidInput(format!("resolvent form needs a prime q = 1 mod {p}, got {q}")));
    }
    let u = smallest_generator(q)?;
    let u_inv = inv_mod(u, q).expect("u is a unit");
    let mut grid = BiGrid::new(p, q);
    let one = BigInt::one();
    let mut h = 1u64;
    for i in 0..q - 1 {
        grid.add_term(mul_mod(i, rho, p), h, &one);
        h = mul_mod(h, u_inv, q);
    }
    Ok(grid.reduce())
}

/// The unique ρ in [0, p-1] with τ(g) = ζ_p^ρ g for τ : ζ_q ↦ ζ_q^u.
pub fn extract_rho(g: &BiCycInt) -> Result<u64> {
    if g.is_zero() {
        return Err(Error::InvalidInput("rho is undefined for g = 0".into()));
    }
    let u = smallest_generator(g.q())?;
    let twisted = g.apply_q(u);
    (0..g.p())
        .find(|&r| g.mul_zeta_p(r) == twisted)
        .ok_or_else(|| Error::Internal("tau(g) is not a root-of-unity multiple of g".into()))
}

// ---------------------------------------------------------------------------
// Factorisation of G

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum StickelbergerProfile {
    /// q ≡ 1 mod p: valuations of G at the p-1 primes over q.
    Split {
        /// `valuations[k]` is the valuation at the prime whose Hensel label
        /// is `k + 1`.
        valuations: Vec<u32>,
        /// Every j with valuation(label j·t) = t for all t.
        matching_relabels: Vec<u64>,
        /// Label of the prime selected by the residue field's image of ζ_p.
        embedding_label: u64,
        norm_exponent: u32,
        expected_norm_exponent: u64,
    },
    /// f > 1: G is certified through S₂ and the norm of g.
    Inert {
        s2: Vec<i64>,
        norm_exponent: u32,
        expected_norm_exponent: u64,
    },
}

/// Checks G·Z[ζ_p] = q^S (f = 1) or g·Z[ζ_p] = q^(S₂) via the norm (f > 1),
/// appending named checks to the record.
pub fn verify_stickelberger(record: &mut GaussSumRecord, opts: &GaussOptions) -> Result<StickelbergerProfile> {
    let (p, q, f) = (record.p, record.q, record.f);
    let profile = if f == 1 {
        let cap = opts.precision_cap.unwrap_or_else(|| default_precision_cap(p));
        let roots = hensel_roots(p, q, default_precision(p).min(cap))?;
        let valuations = roots
            .iter()
            .map(|h| ideal_valuation(&record.big_g, h, cap))
            .collect::<Result<Vec<_>>>()?;
        let matching: Vec<u64> = (1..p)
            .filter(|&j| (1..p).all(|t| valuations[(mul_mod(j, t, p) - 1) as usize] as u64 == t))
            .collect();
        let z = record.zeta_image[0];
        let r1 = roots[0].root().clone() % BigInt::from(q);
        let r1 = u64::try_from(r1).expect("residue fits");
        let embedding_label = (1..p).find(|&t| pow_mod(r1, t, q) == z).expect("zeta image is a root of Phi_p");
        let norm_exponent = rational_valuation(&record.big_g.norm(), q);
        let expected = p * (p - 1) / 2;
        record.checks.push(Check::required(
            "stickelberger_profile_unique_relabel",
            matching.len() == 1,
            format!("valuations by label {valuations:?}; relabels {matching:?}"),
        ));
        record.checks.push(Check::required(
            "stickelberger_relabel_is_embedding",
            matching == [embedding_label],
            format!("embedding selects label {embedding_label}"),
        ));
        if let (Some(r), [j]) = (record.rho, matching.as_slice()) {
            // ρ of the conjugate of g whose G factors as (label-1 prime)^S.
            let normalized = mul_mod(r, *j, p);
            record.checks.push(Check::flag(
                "rho_is_minus_v_after_relabel",
                normalized == p - record.v,
                format!("rho * j = {normalized}, -v = {}", p - record.v),
            ));
        }
        let norm_ok = norm_exponent as u64 == expected
            && record.big_g.norm().abs() == BigInt::from(q).pow(expected as u32);
        record.checks.push(Check::required(
            "norm_G_is_q_pow_half_p_p_minus_1",
            norm_ok,
            format!("|N(G)| = {q}^{norm_exponent}"),
        ));
        let sum: u32 = valuations.iter().sum();
        record.checks.push(Check::required(
            "valuations_sum_to_norm_valuation",
            sum == norm_exponent,
            format!("sum {sum}"),
        ));
        StickelbergerProfile::Split {
            valuations,
            matching_relabels: matching,
            embedding_label,
            norm_exponent,
            expected_norm_exponent: expected,
        }
    } else {
        let s2 = polynomial_s2(p, q, record.v)?;
        let g = match &record.g {
            GaussValue::Cyc(c) => c.clone(),
            GaussValue::Bi(_) => {
                return Err(Error::Internal("f > 1 but g has zeta_q dependence".into()));
            }
        };
        let n = g.norm();
        let norm_exponent = rational_valuation(&n, q);
        let expected = f * s2.augmentation() as u64;
        let exact = n.abs() == BigInt::from(q).pow(expected as u32);
        record.checks.push(Check::required(
            "norm_g_is_q_pow_f_times_s2_weight",
            exact,
            format!("|N(g)| = {q}^{norm_exponent}, f * sum(S2) = {expected}"),
        ));
        StickelbergerProfile::Inert { s2: s2.coeffs()[..((p - 1) / f) as usize].to_vec(), norm_exponent, expected_norm_exponent: expected }
    };
    record.stickelberger = Some(profile.clone());
    Ok(profile)
}

// ---------------------------------------------------------------------------
// π-adic behaviour

#[derive(Clone, Debug, Serialize)]
pub struct PiAdicProfile {
    /// v_π(g + 1).
    pub g_plus_one: Valuation,
    /// v_π(g^p + 1).
    pub big_g_plus_one: Valuation,
    /// v_π(g^(p²) + 1).
    pub big_g_pow_p_plus_one: Valuation,
    /// p^((q-1)/p) mod q, when q ≡ 1 mod p.
    pub power_residue: Option<u64>,
    /// Whether the observed valuations follow the predicted branch.
    pub branch_ok: bool,
}

/// π-adic valuations of g + 1, g^p + 1 and g^(p²) + 1.
///
/// For q ≡ 1 mod p: v_π(g^p + 1) = p exactly when p^((q-1)/p) ≢ 1 mod q, and
/// at least p + 1 otherwise; correspondingly v_π(g^(p²) + 1) is 2p - 1 or at
/// least 2p. For f > 1 both are at least p + 1 and 2p.
pub fn pi_adic_profile(record: &mut GaussSumRecord, opts: &GaussOptions) -> Result<PiAdicProfile> {
    let (p, q) = (record.p, record.q);
    let cap = opts.lambda_cap.unwrap_or_else(|| default_lambda_cap(p));
    let pu = p as u32;
    let g_plus_one = (&record.g_bi() + &BiCycInt::one(p, q)).lambda_valuation(cap);
    let big_g_plus_one = (&record.big_g + &CycInt::one(p)).lambda_valuation(cap);
    let big_g_pow_p_plus_one = (&record.big_g.pow(p) + &CycInt::one(p)).lambda_valuation(cap);

    let (power_residue, branch_ok) = if q % p == 1 {
        let r = pow_mod(p, (q - 1) / p, q);
        let ok = if r != 1 {
            big_g_plus_one == Valuation::Finite(pu) && big_g_pow_p_plus_one == Valuation::Finite(2 * pu - 1)
        } else {
            big_g_plus_one.at_least(pu + 1) && big_g_pow_p_plus_one.at_least(2 * pu)
        };
        (Some(r), ok)
    } else {
        (None, big_g_plus_one.at_least(pu + 1) && big_g_pow_p_plus_one.at_least(2 * pu))
    };
    record.checks.push(Check::required(
        "pi_adic_g_plus_one",
        g_plus_one.at_least(1),
        format!("v_pi(g + 1) = {g_plus_one}"),
    ));
    record.checks.push(Check::required(
        "pi_adic_sharpness",
        branch_ok,
        format!(
            "p^((q-1)/p) mod q = {}; v_pi(G + 1) = {big_g_plus_one}; v_pi(G^p + 1) = {big_g_pow_p_plus_one}",
            power_residue.map_or_else(|| "n/a".into(), |r| r.to_string())
        ),
    ));
    let profile = PiAdicProfile { g_plus_one, big_g_plus_one, big_g_pow_p_plus_one, power_residue, branch_ok };
    record.pi_adic = Some(profile.clone());
    Ok(profile)
}

/// Full verification for one pair: construction, factorisation and π-adic
/// profile.
pub fn verify_pair(p: u64, q: u64) -> Result<GaussSumRecord> {
    verify_pair_with(p, q, &GaussOptions::default())
}

pub fn verify_pair_with(p: u64, q: u64, opts: &GaussOptions) -> Result<GaussSumRecord> {
    let fd = field_make(p, q)?;
    let mut record = gauss_sum(&fd)?;
    verify_stickelberger(&mut record, opts)?;
    pi_adic_profile(&mut record, opts)?;
    Ok(record)
}
