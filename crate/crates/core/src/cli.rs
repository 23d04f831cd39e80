//! Batch front end. [`run`] parses an argument list, executes one command and
//! hands back the rendered report with its exit code; the binary only prints.
//!
//! Exit codes: 0 when every check passes, 1 on any check failure, 2 on input
//! or configuration errors. Reports never depend on `--jobs`.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{self, primitive_root};
use crate::error::Error;
use crate::gauss::{verify_pair_with, Check, GaussOptions};
use crate::group_ring::{
    check_p_times_sigma_minus_v, delta_coeffs, lemma_remainder, polynomial_p, polynomial_q,
    polynomial_q1_factorization, polynomial_t, stickelberger_s,
};
use crate::principality::{half_degree_corollary, principal_norm_probe, principality_test, Certificate, ProbeConfig};
use crate::regularity::{bernoulli, bernoulli_mod_p, scan_range, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const TOOL: &str = "stickel";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// Size limits past which a command is refused as an input error.
const MAX_SCAN_P: u64 = 2000;
const MAX_SHOW_P: u64 = 5000;
const MAX_FIELD_SIZE: u64 = 1 << 20;
const MAX_GRID: u64 = 4096;
const MAX_PROBE_P: u64 = 50;
const MAX_PROBE_BOUND: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "stickel", version, about = "Exact checks for Gauss sums, Stickelberger elements and irregular primes")]
pub struct Cli {
    /// Worker threads for parallel work; output is identical for every value.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub jobs: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Q-root scan against the Bernoulli oracle, as TSV.
    ScanIrregular {
        #[arg(long, default_value_t = 3)]
        pmin: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        pmax: u64,
    },
    /// B_k mod p for even k in [2, p-3], as TSV.
    Bernoulli {
        #[arg(short, long)]
        p: u64,
    },
    /// The Stickelberger element and its polynomials.
    Stickelberger {
        #[command(subcommand)]
        action: StickelbergerCmd,
    },
    /// Gauss sums at the primes above q.
    Gauss {
        #[command(subcommand)]
        action: GaussCmd,
    },
    /// p-principality certificates and the prime-norm probe.
    Principality {
        #[command(subcommand)]
        action: PrincipalityCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum StickelbergerCmd {
    Show {
        #[arg(short, long)]
        p: u64,
        /// Primitive root defining σ (default: the smallest).
        #[arg(short, long)]
        v: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GaussCmd {
    Verify {
        #[arg(short, long)]
        p: u64,
        #[arg(short, long)]
        q: u64,
        /// Cap on q-adic digits used for ideal valuations.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        precision_cap: Option<u32>,
        /// Cap on λ-adic valuations.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        lambda_cap: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PrincipalityCmd {
    Test {
        #[arg(short, long)]
        p: u64,
        #[arg(short, long)]
        q: u64,
        #[arg(short, long)]
        v: Option<u64>,
    },
    Corollary {
        #[arg(short, long)]
        p: u64,
    },
    Probe {
        #[arg(short, long)]
        p: u64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(i64).range(0..=1000))]
        radius: i64,
    },
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {msg}\n"), code: EXIT_INPUT }
    }
}

/// Wraps the per-command records of a JSON report.
#[derive(Debug, Serialize)]
pub struct ScanReport<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub records: Vec<T>,
    pub summary: Summary,
    pub failures: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub records: usize,
    pub checks: usize,
    pub failed: usize,
}

impl<T: Serialize> ScanReport<T> {
    fn render(&self) -> Outcome {
        let mut stdout = serde_json::to_string_pretty(self).expect("reports serialize");
        stdout.push('\n');
        let code = if self.failures.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED };
        let stderr = self.failures.iter().map(|f| format!("check failed: {f}\n")).collect();
        Outcome { stdout, stderr, code }
    }
}

fn report<T: Serialize>(command: &str, config: Value, records: Vec<T>, checks: &[Check], extra: Vec<String>) -> Outcome {
    let mut failures: Vec<String> = checks.iter().filter(|c| c.failed()).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    failures.extend(extra);
    ScanReport {
        tool: TOOL,
        version: VERSION,
        command: command.into(),
        config,
        summary: Summary { records: records.len(), checks: checks.len(), failed: failures.len() },
        records,
        failures,
    }
    .render()
}

/// Input errors exit with 2; anything else is a failed check.
fn from_error(e: Error) -> Outcome {
    match e {
        Error::NotOddPrime(_)
        | Error::NotPrime(_)
        | Error::InvalidInput(_)
        | Error::ModulusMismatch(..)
        | Error::FieldTooLarge { .. } => Outcome::input_error(e),
        Error::PrecisionExhausted { .. } | Error::Internal(_) => {
            Outcome { stdout: String::new(), stderr: format!("check failed: {e}\n"), code: EXIT_CHECK_FAILED }
        }
    }
}

fn require_odd_prime(p: u64) -> Result<(), Error> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn limit(name: &str, value: u64, max: u64) -> Result<(), Error> {
    if value > max {
        return Err(Error::InvalidInput(format!("{name} = {value} exceeds the supported maximum {max}")));
    }
    Ok(())
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
                }
                _ => Outcome { stdout: String::new(), stderr: text, code: EXIT_INPUT },
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs as usize).build() {
        Ok(pool) => pool,
        Err(e) => return Outcome::input_error(format!("cannot start {} workers: {e}", cli.jobs)),
    };
    pool.install(|| dispatch(&cli.command)).unwrap_or_else(from_error)
}

pub fn dispatch(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::ScanIrregular { pmin, pmax } => scan_irregular(*pmin, *pmax),
        Command::Bernoulli { p } => bernoulli_table(*p),
        Command::Stickelberger { action: StickelbergerCmd::Show { p, v } } => stickelberger_show(*p, *v),
        Command::Gauss { action: GaussCmd::Verify { p, q, precision_cap, lambda_cap } } => {
            gauss_verify(*p, *q, GaussOptions { precision_cap: *precision_cap, lambda_cap: *lambda_cap })
        }
        Command::Principality { action } => match action {
            PrincipalityCmd::Test { p, q, v } => principality(*p, *q, *v),
            PrincipalityCmd::Corollary { p } => corollary(*p),
            PrincipalityCmd::Probe { p, bound, radius } => probe(*p, *bound, *radius),
        },
    }
}

fn list(xs: &[u64]) -> String {
    if xs.is_empty() {
        "-".into()
    } else {
        xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

fn scan_irregular(pmin: u64, pmax: u64) -> Result<Outcome, Error> {
    limit("pmax", pmax, MAX_SCAN_P)?;
    if pmin > pmax {
        return Err(Error::InvalidInput(format!("pmin = {pmin} exceeds pmax = {pmax}")));
    }
    let verdicts = scan_range(pmin.max(3), pmax)?;
    let mut out = String::new();
    let _ = writeln!(out, "# {TOOL} {VERSION} scan-irregular");
    let _ = writeln!(out, "# pmin={pmin} pmax={pmax}");
    out.push_str("p\tv\tverdict\tscanner\todd_roots\tirregular_indices\tagreement\n");
    let mut failures = Vec::new();
    for r in &verdicts {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.p,
            r.v,
            r.verdict,
            r.scanner,
            list(&r.odd_roots),
            list(&r.irregular_indices),
            if r.agreement { "yes" } else { "no" }
        );
        if r.scanner != r.verdict {
            failures.push(format!("p={}: scanner says {} but the Bernoulli oracle says {}", r.p, r.scanner, r.verdict));
        }
    }
    let irregular = verdicts.iter().filter(|r| r.verdict == Verdict::Irregular).count();
    let disagreements = verdicts.iter().filter(|r| !r.agreement).count();
    let _ = writeln!(
        out,
        "# summary: primes={} irregular={irregular} count_mismatches={disagreements} failures={}",
        verdicts.len(),
        failures.len()
    );
    Ok(tsv(out, failures))
}

fn tsv(stdout: String, failures: Vec<String>) -> Outcome {
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED };
    let stderr = failures.iter().map(|f| format!("check failed: {f}\n")).collect();
    Outcome { stdout, stderr, code }
}

fn bernoulli_table(p: u64) -> Result<Outcome, Error> {
    require_odd_prime(p)?;
    limit("p", p, MAX_SCAN_P)?;
    let residues = bernoulli_mod_p(p)?;
    let mut out = String::new();
    let _ = writeln!(out, "# {TOOL} {VERSION} bernoulli");
    let _ = writeln!(out, "# p={p}");
    out.push_str("k\tnumerator\tdenominator\tresidue\n");
    for (k, r) in &residues {
        let b = bernoulli(*k as usize);
        let _ = writeln!(out, "{k}\t{}\t{}\t{r}", b.numer(), b.denom());
    }
    let zeros = residues.values().filter(|&&r| r == 0).count();
    let _ = writeln!(out, "# summary: indices={} divisible={zeros}", residues.len());
    Ok(tsv(out, Vec::new()))
}

#[derive(Serialize)]
struct StickelbergerRecord {
    p: u64,
    v: u64,
    #[serde(rename = "S")]
    s: Vec<i64>,
    #[serde(rename = "P")]
    p_poly: Vec<i64>,
    delta: Vec<i64>,
    #[serde(rename = "Q")]
    q_poly: Vec<i64>,
    #[serde(rename = "Q1")]
    q1: Vec<i64>,
    #[serde(rename = "T")]
    t: Vec<String>,
    #[serde(rename = "R")]
    r: Option<Vec<String>>,
    checks: Vec<Check>,
}

fn stickelberger_show(p: u64, v: Option<u64>) -> Result<Outcome, Error> {
    require_odd_prime(p)?;
    limit("p", p, MAX_SHOW_P)?;
    let v = match v {
        Some(v) => v,
        None => primitive_root(p)?,
    };
    let s = stickelberger_s(p, v)?;
    let pp = polynomial_p(p, v)?;
    let delta = delta_coeffs(p, v)?;
    let qq = polynomial_q(p, v)?;
    let (q1, factor_ok) = polynomial_q1_factorization(p, v)?;
    let t = polynomial_t(p, v)?;
    let r = lemma_remainder(p, v)?;
    let pi = p as i64;
    let checks = vec![
        Check::new("S_equals_P", s == pp, true, "S = sum_i v^(-i) sigma^i"),
        Check::new("P_times_sigma_minus_v_is_pQ", check_p_times_sigma_minus_v(p, v)?, true, "P(sigma)(sigma - v) = p Q(sigma)"),
        Check::new(
            "delta_bounds",
            delta[0] == 0 && delta.iter().all(|&d| -pi < d && d <= 0),
            true,
            "delta_0 = 0 and -p < delta_i <= 0",
        ),
        Check::new("Q_factors_through_Q1", factor_ok, true, "Q = Q1 (1 + sigma + ... + sigma^((p-3)/2))"),
        Check::new("P_congruent_T_mod_p", r.is_some(), true, "P - T = p R"),
    ];
    let record = StickelbergerRecord {
        p,
        v,
        s: s.coeffs().to_vec(),
        p_poly: pp.coeffs().to_vec(),
        delta,
        q_poly: qq.coeffs().to_vec(),
        q1: q1.coeffs().to_vec(),
        t: t.iter().map(ToString::to_string).collect(),
        r: r.map(|r| r.iter().map(ToString::to_string).collect()),
        checks: checks.clone(),
    };
    Ok(report("stickelberger show", json!({ "p": p, "v": v }), vec![record], &checks, Vec::new()))
}

fn gauss_verify(p: u64, q: u64, opts: GaussOptions) -> Result<Outcome, Error> {
    require_odd_prime(p)?;
    if !arith::is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == p {
        return Err(Error::InvalidInput(format!("q must differ from p (both {p})")));
    }
    let f = arith::order_mod_prime(q % p, p);
    let size = (q as u128).checked_pow(f as u32).filter(|&s| s <= MAX_FIELD_SIZE as u128);
    if size.is_none() {
        return Err(Error::InvalidInput(format!("residue field F_{q}^{f} exceeds {MAX_FIELD_SIZE} elements")));
    }
    limit("(p-1)(q-1)", (p - 1) * (q - 1), MAX_GRID)?;
    let record = verify_pair_with(p, q, &opts)?;
    let config = json!({
        "p": p,
        "q": q,
        "precision_cap": opts.precision_cap,
        "lambda_cap": opts.lambda_cap,
    });
    let checks = record.checks.clone();
    Ok(report("gauss verify", config, vec![record], &checks, Vec::new()))
}

fn principality(p: u64, q: u64, v: Option<u64>) -> Result<Outcome, Error> {
    require_odd_prime(p)?;
    limit("p", p, MAX_SHOW_P)?;
    let v = match v {
        Some(v) => v,
        None => primitive_root(p)?,
    };
    let r = principality_test(p, q, v)?;
    let checks = vec![Check::new(
        "full_orbit_sum_is_half_p_p_minus_1",
        r.full_orbit_identity,
        true,
        format!("sum = {}", r.full_orbit_sum),
    )];
    let config = json!({ "p": p, "q": q, "v": v });
    Ok(report("principality test", config, vec![r], &checks, Vec::new()))
}

fn corollary(p: u64) -> Result<Outcome, Error> {
    limit("p", p, MAX_SHOW_P)?;
    let r = half_degree_corollary(p)?;
    let mut checks = vec![
        Check::new("sigma_nonzero_mod_p", r.holds, true, format!("sigma = {}", r.sigma)),
        Check::new("parity_argument", r.parity_argument, true, "p(p-1)/2 is odd"),
    ];
    if let Some((q, cert)) = r.witness {
        checks.push(Check::new(
            "witness_certified",
            cert == Certificate::PPrincipal,
            true,
            format!("q = {q} has inertial degree (p-1)/2"),
        ));
    }
    Ok(report("principality corollary", json!({ "p": p }), vec![r], &checks, Vec::new()))
}

fn probe(p: u64, bound: u64, radius: i64) -> Result<Outcome, Error> {
    require_odd_prime(p)?;
    limit("p", p, MAX_PROBE_P)?;
    limit("bound", bound, MAX_PROBE_BOUND)?;
    let r = principal_norm_probe(p, ProbeConfig { bound, radius })?;
    let extra = r
        .witnesses
        .iter()
        .filter(|w| !w.holds)
        .map(|w| format!("candidate {} (a = {}, x = {:?}) has prime norm {} failing the power test", w.index, w.a, w.x, w.q))
        .collect();
    let config = json!({ "p": p, "bound": bound, "radius": radius });
    Ok(report("principality probe", config, vec![r], &[], extra))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(run(["stickel", "gauss", "verify", "-p", "5", "-q", "11"]).code, EXIT_OK);
        assert_eq!(run(["stickel", "gauss", "verify", "-p", "5", "-q", "5"]).code, EXIT_INPUT);
        assert_eq!(run(["stickel", "gauss", "verify", "-p", "4", "-q", "5"]).code, EXIT_INPUT);
        assert_eq!(run(["stickel", "frobnicate"]).code, EXIT_INPUT);
        assert_eq!(run(["stickel", "scan-irregular", "--pmax", "40", "--jobs", "0"]).code, EXIT_INPUT);
        assert_eq!(run(["stickel", "principality", "corollary", "-p", "13"]).code, EXIT_INPUT);
        assert_eq!(run(["stickel", "--help"]).code, EXIT_OK);
    }

    #[test]
    fn scan_flags_37() {
        let out = run(["stickel", "scan-irregular", "--pmax", "40"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.lines().any(|l| l.starts_with("37\t2\tirregular\tirregular\t")));
    }
}
