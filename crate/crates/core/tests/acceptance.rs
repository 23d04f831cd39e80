//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every comparison is exact.

use std::process::{Command, ExitCode};
use std::time::Instant;

use stickel::arith::{is_prime, odd_primes_in, order_mod_prime, pow_mod, primes_from, primitive_root};
use stickel::gauss::{verify_pair, StickelbergerProfile};
use stickel::group_ring::{
    check_p_times_sigma_minus_v, delta_coeffs, fold_exponents, polynomial_p, polynomial_q1_factorization,
    polynomial_s2, stickelberger_s,
};
use stickel::principality::{half_degree_corollary, principal_norm_probe, principality_test, Certificate, ProbeConfig};
use stickel::regularity::{b_half_check, q_root_scan, scan_range, Verdict};

type Outcome = Result<String, String>;

const SPLIT_PAIRS: [(u64, u64); 6] = [(3, 7), (3, 13), (5, 11), (5, 31), (7, 29), (11, 23)];
const INERT_PAIRS: [(u64, u64); 4] = [(5, 3), (7, 2), (11, 3), (5, 7)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn identity_suite() -> Outcome {
    let primes = odd_primes_in(3, 500);
    for &p in &primes {
        let v = primitive_root(p).map_err(|e| e.to_string())?;
        let s = stickelberger_s(p, v).map_err(|e| e.to_string())?;
        ensure(s == polynomial_p(p, v).unwrap(), || format!("p={p}: S != P"))?;
        ensure(check_p_times_sigma_minus_v(p, v).unwrap(), || format!("p={p}: P(sigma-v) != pQ"))?;
        let delta = delta_coeffs(p, v).unwrap();
        ensure(delta[0] == 0 && delta.iter().all(|&d| -(p as i64) < d && d <= 0), || format!("p={p}: delta bounds"))?;
        ensure(polynomial_q1_factorization(p, v).unwrap().1, || format!("p={p}: Q != Q1 * geometric"))?;
    }
    Ok(format!("{} primes p <= 500", primes.len()))
}

fn gauss_suite() -> Outcome {
    let mut checks = 0;
    for &(p, q) in SPLIT_PAIRS.iter().chain(&INERT_PAIRS) {
        let rec = verify_pair(p, q).map_err(|e| format!("({p},{q}): {e}"))?;
        let failed: Vec<_> = rec.failures().iter().map(|c| c.name.clone()).collect();
        ensure(failed.is_empty(), || format!("({p},{q}) failed {failed:?}"))?;
        let mut required = vec!["g_times_conj_g_is_q_pow_f", "G_in_z_zeta_p"];
        if rec.f > 1 {
            required.push("g_in_z_zeta_p");
        } else {
            required.extend(["zeta_q_zero_slice", "g_congruent_minus_one_mod_pi", "stickelberger_profile_unique_relabel"]);
            match &rec.stickelberger {
                Some(StickelbergerProfile::Split { matching_relabels, .. }) if matching_relabels.len() == 1 => {}
                other => return Err(format!("({p},{q}): profile {other:?}")),
            }
        }
        for name in required {
            let c = rec.check(name).ok_or_else(|| format!("({p},{q}): missing check {name}"))?;
            ensure(c.passed, || format!("({p},{q}): {name} failed: {}", c.detail))?;
            checks += 1;
        }
    }
    Ok(format!("{} pairs, {checks} named checks", SPLIT_PAIRS.len() + INERT_PAIRS.len()))
}

fn pi_adic_suite() -> Outcome {
    let mut exact = 0;
    for &(p, q) in &SPLIT_PAIRS {
        if pow_mod(p, (q - 1) / p, q) == 1 {
            continue;
        }
        let rec = verify_pair(p, q).map_err(|e| e.to_string())?;
        let pi = rec.pi_adic.as_ref().unwrap();
        ensure(pi.big_g_plus_one.finite() == Some(p as u32), || {
            format!("({p},{q}): v(g^p + 1) = {} instead of {p}", pi.big_g_plus_one)
        })?;
        exact += 1;
    }
    // Search q = 1 mod p upwards until p^((q-1)/p) = 1 mod q.
    let mut searched = Vec::new();
    for p in [3u64, 5, 7] {
        let q = primes_from(p + 1)
            .find(|&q| q % p == 1 && pow_mod(p, (q - 1) / p, q) == 1)
            .expect("such primes exist");
        let rec = verify_pair(p, q).map_err(|e| e.to_string())?;
        let pi = rec.pi_adic.as_ref().unwrap();
        ensure(pi.big_g_plus_one.at_least(p as u32 + 1), || {
            format!("({p},{q}): v(g^p + 1) = {} < p + 1", pi.big_g_plus_one)
        })?;
        searched.push(format!("({p},{q}) v={}", pi.big_g_plus_one));
    }
    Ok(format!("{exact} exact pairs; searched {}", searched.join(", ")))
}

fn regularity_suite() -> Outcome {
    let scans = scan_range(3, 160).map_err(|e| e.to_string())?;
    for r in &scans {
        ensure(r.scanner == r.verdict, || format!("p={}: scanner {} vs oracle {}", r.p, r.scanner, r.verdict))?;
        if r.p < 100 && r.verdict == Verdict::Regular {
            ensure(r.odd_roots.is_empty() && r.irregular_indices.is_empty(), || format!("p={}", r.p))?;
        }
    }
    let irregular_below_100: Vec<u64> =
        scans.iter().filter(|r| r.p < 100 && r.verdict == Verdict::Irregular).map(|r| r.p).collect();
    ensure(irregular_below_100 == [37, 59, 67], || format!("irregular below 100: {irregular_below_100:?}"))?;
    for p in [37, 59, 67] {
        let r = scans.iter().find(|r| r.p == p).unwrap();
        ensure(r.odd_roots.len() == 1 && r.irregular_indices.len() == 1, || {
            format!("p={p}: {:?} vs {:?}", r.odd_roots, r.irregular_indices)
        })?;
    }
    let r157 = q_root_scan(157, primitive_root(157).unwrap()).map_err(|e| e.to_string())?;
    ensure(r157.odd_roots.len() == 2 && r157.irregular_indices.len() == 2, || {
        format!("p=157: {:?} vs {:?}", r157.odd_roots, r157.irregular_indices)
    })?;
    let mismatches: Vec<u64> = scans.iter().filter(|r| !r.agreement).map(|r| r.p).collect();
    ensure(mismatches.is_empty(), || format!("count mismatches at {mismatches:?}"))?;
    Ok(format!("{} primes <= 160; p=157 has indices {:?}", scans.len(), r157.irregular_indices))
}

fn b_half_suite() -> Outcome {
    let primes: Vec<u64> = odd_primes_in(3, 500).into_iter().filter(|p| p % 4 == 3).collect();
    for &p in &primes {
        let r = b_half_check(p).map_err(|e| e.to_string())?;
        ensure(r.nonzero && r.identities_hold, || format!("p={p}: {r:?}"))?;
        ensure(r.s1 + r.s2 == p * (p - 1) / 2 && r.alternating != 0, || format!("p={p}: S1+S2"))?;
        if let Some(b) = r.bernoulli_residue {
            ensure(b != 0, || format!("p={p}: B_(p+1)/2 = 0 mod p"))?;
        }
    }
    Ok(format!("{} primes p = 3 mod 4, p <= 500", primes.len()))
}

fn principality_suite() -> Outcome {
    let mut pairs = 0;
    let mut missing = Vec::new();
    for p in odd_primes_in(3, 200) {
        let v = primitive_root(p).unwrap();
        let s = stickelberger_s(p, v).unwrap();
        for f in (2..p).filter(|f| (p - 1) % f == 0) {
            let Some(q) = primes_from(2).take_while(|&q| q < 1_000_000).find(|&q| q != p && order_mod_prime(q % p, p) == f)
            else {
                missing.push((p, f));
                continue;
            };
            let m = (p - 1) / f;
            let s2 = polynomial_s2(p, q, v).map_err(|e| format!("p={p} q={q}: {e}"))?;
            let folded = fold_exponents(&s, m);
            let refold: Vec<i64> = s2.coeffs()[..m as usize].iter().map(|c| c * p as i64).collect();
            ensure(folded == refold, || format!("p={p} q={q}: p S2 != folded S"))?;
            ensure(s2.coeffs()[m as usize..].iter().all(|&c| c == 0), || format!("p={p} q={q}: S2 tail"))?;
            pairs += 1;
        }
    }
    ensure(missing.is_empty(), || format!("no prime q found for (p, f) in {missing:?}"))?;
    let corollary: Vec<u64> = odd_primes_in(7, 500).into_iter().filter(|p| p % 4 == 3).collect();
    for &p in &corollary {
        let r = half_degree_corollary(p).map_err(|e| e.to_string())?;
        ensure(r.holds && r.parity_argument, || format!("p={p}: sigma = {}", r.sigma))?;
    }
    let cert = principality_test(7, 2, 3).map_err(|e| e.to_string())?;
    ensure(cert.certificate == Certificate::PPrincipal && cert.sigma_values[0].value == 6, || format!("{cert:?}"))?;
    Ok(format!("{pairs} (p, q) pairs; corollary for {} primes; (7,2) certified", corollary.len()))
}

fn probe_suite() -> Outcome {
    let mut summary = Vec::new();
    for p in [3u64, 5] {
        // The default radius-2 sweep, then a radius wide enough to fill the bound.
        for radius in [2, 50] {
            let r = principal_norm_probe(p, ProbeConfig { bound: 10_000, radius }).map_err(|e| e.to_string())?;
            ensure(r.counterexamples == 0, || format!("p={p}: {} counterexamples", r.counterexamples))?;
            ensure(r.witnesses.iter().all(|w| w.residue.as_deref() == Some("1")), || format!("p={p}: residue"))?;
            summary.push(format!("p={p} r={radius}: {}/{} witnesses", r.witnesses.len(), r.candidates_examined));
        }
    }
    Ok(summary.join("; "))
}

const CLI_SUITE: &[&[&str]] = &[
    &["scan-irregular", "--pmax", "200"],
    &["bernoulli", "--p", "157"],
    &["stickelberger", "show", "-p", "29"],
    &["gauss", "verify", "-p", "7", "-q", "29"],
    &["gauss", "verify", "-p", "11", "-q", "3"],
    &["principality", "test", "-p", "31", "-q", "5"],
    &["principality", "corollary", "-p", "23"],
    &["principality", "probe", "-p", "5", "--bound", "2500"],
];

fn cli_suite(jobs: &str) -> Result<Vec<u8>, String> {
    let mut all = Vec::new();
    for args in CLI_SUITE {
        let out = Command::new(env!("CARGO_BIN_EXE_stickel"))
            .args(*args)
            .args(["--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("{args:?} exited with {:?}", out.status.code()))?;
        all.extend(out.stdout);
    }
    Ok(all)
}

fn determinism_suite() -> Outcome {
    let first = cli_suite("1")?;
    let second = cli_suite("4")?;
    ensure(first == second, || "reports differ between --jobs 1 and --jobs 4".into())?;
    Ok(format!("{} commands, {} bytes identical across runs", CLI_SUITE.len(), first.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    assert!(is_prime(157));
    let criteria: [Criterion; 8] = [
        ("stickelberger identities", identity_suite),
        ("gauss-sum suite", gauss_suite),
        ("pi-adic sharpness", pi_adic_suite),
        ("regularity vs bernoulli oracle", regularity_suite),
        ("B_(p+1)/2 lemma", b_half_suite),
        ("S2 / principality suite", principality_suite),
        ("principal norm probe", probe_suite),
        ("determinism", determinism_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
