//! The acceptance suite: fifteen numbered checks with pinned seeds and
//! fixed tolerances, shared by the `verify` subcommand and the test suite.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::montecarlo::{run_approx, run_gibbs, run_haar, ExperimentConfig, Mode};
use crate::oracle;
use crate::padic::{rational_valuation, ExactRational, Prime};
use crate::schneider::{
    convergents, expand_rational, fixed_point, phi, rational_tail_check, step_padic, step_rational, DigitPair,
    ExpansionStatus, TailStatus,
};
use crate::thermo::{
    bowen_dimension, dimension_from_measure, gibbs_weights, legendre_numeric, periodic_pressure, pressure_full,
    pressure_truncated, spectrum_argmax, spectrum_digit_mean, spectrum_full, spectrum_truncated, DigitSet,
};

/// Seed shared by every randomized criterion.
pub const SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Thermo,
    Schneider,
    Padic,
    MonteCarlo,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Thermo, Group::Schneider, Group::Padic, Group::MonteCarlo];

    pub fn name(self) -> &'static str {
        match self {
            Group::Thermo => "thermo",
            Group::Schneider => "schneider",
            Group::Padic => "padic",
            Group::MonteCarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown group '{s}' (expected thermo, schneider, padic or montecarlo)"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub only: Option<Group>,
    /// Shifts every closed-form spectrum value used by the suite, so that
    /// the checks relying on it must fail.
    pub tamper_spectrum: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub group: Group,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<10} {:<34} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.group,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, Group, &str); 15] = [
    (1, Group::Thermo, "spectrum identity grid"),
    (2, Group::Thermo, "spectrum maximum"),
    (3, Group::Thermo, "Legendre duality"),
    (4, Group::Thermo, "truncated n=2 spectrum"),
    (5, Group::Thermo, "midpoint law"),
    (6, Group::Thermo, "Bowen roots"),
    (7, Group::Thermo, "periodic-point pressure"),
    (8, Group::Thermo, "pressure convergence"),
    (9, Group::Schneider, "expansion exactness"),
    (10, Group::Schneider, "approximation identity"),
    (11, Group::Schneider, "phi equals p^a3"),
    (12, Group::Schneider, "rational tail"),
    (13, Group::Padic, "Hensel fixed points"),
    (14, Group::MonteCarlo, "Monte Carlo Haar"),
    (15, Group::MonteCarlo, "Monte Carlo Gibbs"),
];

type Check = Result<String, String>;

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("prime")
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

/// Tracks the worst deviation seen against a tolerance.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, at: String::new() }
    }

    fn see(&mut self, err: f64, at: impl FnOnce() -> String) {
        if err.is_nan() || err > self.value {
            self.value = if err.is_nan() { f64::INFINITY } else { err };
            self.at = at();
        }
    }

    fn check(&self, tol: f64, what: &str) -> Check {
        if self.value < tol {
            Ok(format!("max {what} error {:.2e} < {tol:.0e}", self.value))
        } else {
            Err(format!("{what} error {:.3e} >= {tol:.0e} at {}", self.value, self.at))
        }
    }
}

fn spectrum_dimension(p: Prime, alpha: f64, opts: &VerifyOptions) -> Result<f64, String> {
    let d = spectrum_full(p, alpha).map_err(|e| e.to_string())?.dimension;
    Ok(if opts.tamper_spectrum { d + 1e-6 } else { d })
}

fn c1(opts: &VerifyOptions) -> Check {
    let start = Instant::now();
    let mut worst = Worst::new();
    for q in [2, 3, 5, 7] {
        let p = prime(q);
        for ah in linspace(1.001, 12.0, 200) {
            let full = spectrum_dimension(p, ah * p.ln(), opts)?;
            let mean = spectrum_digit_mean(p, ah).map_err(|e| e.to_string())?;
            worst.see((full - mean).abs(), || format!("p={q} alpha_hat={ah}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let msg = worst.check(1e-12, "identity")?;
    if elapsed >= 1.0 {
        return Err(format!("took {elapsed:.2}s, limit 1s"));
    }
    Ok(msg)
}

fn c2(opts: &VerifyOptions) -> Check {
    let mut value = Worst::new();
    let mut location = Worst::new();
    for q in [2, 3, 5, 7, 11] {
        let p = prime(q);
        let qf = q as f64;
        let star = qf * p.ln() / (qf - 1.0);
        value.see((spectrum_dimension(p, star, opts)? - 1.0).abs(), || format!("p={q}"));
        location.see((spectrum_argmax(p) - star).abs(), || format!("p={q}"));
    }
    Ok(format!("{}; {}", value.check(1e-12, "value")?, location.check(1e-6, "argmax")?))
}

fn c3(opts: &VerifyOptions) -> Check {
    let mut worst = Worst::new();
    for q in [2, 3, 5] {
        let p = prime(q);
        let lp = p.ln();
        for ah in linspace(1.01, 12.0, 100) {
            let alpha = ah * lp;
            let num = legendre_numeric(|t| pressure_full(p, t), alpha, 0.0).map_err(|e| e.to_string())?;
            worst.see((num - spectrum_dimension(p, alpha, opts)?).abs(), || format!("p={q} full alpha_hat={ah}"));
        }
        for n in [2u32, 3, 5, 10] {
            let span = f64::from(n - 1);
            for i in 0..100 {
                let alpha = lp * (1.0 + span * (f64::from(i) + 0.5) / 100.0);
                let num = legendre_numeric(|t| pressure_truncated(p, n, t), alpha, f64::NEG_INFINITY)
                    .map_err(|e| e.to_string())?;
                let closed = spectrum_truncated(p, n, alpha).map_err(|e| e.to_string())?.dimension;
                worst.see((num - closed).abs(), || format!("p={q} n={n} alpha={alpha}"));
            }
        }
    }
    worst.check(1e-9, "duality")
}

fn c4(_: &VerifyOptions) -> Check {
    let mut curve = Worst::new();
    let mut mid = Worst::new();
    for q in [2u32, 3, 5, 7] {
        let p = prime(q.into());
        let lp = p.ln();
        let lp1 = f64::from(q - 1).ln();
        for i in 1..200 {
            let alpha = lp * (1.0 + f64::from(i) / 200.0);
            let got = spectrum_truncated(p, 2, alpha).map_err(|e| e.to_string())?.dimension;
            curve.see((got - oracle::truncated_two_spectrum(q, alpha)).abs(), || format!("p={q} alpha={alpha}"));
        }
        let low = spectrum_truncated(p, 2, lp).map_err(|e| e.to_string())?.dimension;
        let high = spectrum_truncated(p, 2, 2.0 * lp).map_err(|e| e.to_string())?.dimension;
        if low != lp1 / lp || high != lp1 / (2.0 * lp) {
            return Err(format!("endpoint values differ from limits at p={q}: {low}, {high}"));
        }
        let m = spectrum_truncated(p, 2, 1.5 * lp).map_err(|e| e.to_string())?.dimension;
        mid.see((m - 2.0 / 3.0 * (lp1 + 2f64.ln()) / lp).abs(), || format!("p={q}"));
    }
    Ok(format!("{}; endpoints exact; {}", curve.check(1e-9, "curve")?, mid.check(1e-12, "midpoint")?))
}

fn c5(_: &VerifyOptions) -> Check {
    let mut worst = Worst::new();
    for q in [2u32, 3, 5] {
        let p = prime(q.into());
        for n in 1..=10u32 {
            let nf = f64::from(n);
            let alpha = (nf + 1.0) / 2.0 * p.ln();
            let got = spectrum_truncated(p, n, alpha).map_err(|e| e.to_string())?.dimension;
            let expected = 2.0 / (nf + 1.0) * (f64::from(q - 1).ln() + nf.ln()) / p.ln();
            worst.see((got - expected).abs(), || format!("p={q} n={n}"));
        }
    }
    worst.check(1e-12, "midpoint")
}

fn c6(_: &VerifyOptions) -> Check {
    let mut pair = Worst::new();
    let mut single = Worst::new();
    for q in [2u64, 3, 5, 7] {
        let p = prime(q);
        let qf = q as f64;
        let expected = ((qf - 1.0 + (qf * qf + 2.0 * qf - 3.0).sqrt()) / 2.0).ln() / qf.ln();
        let digits = DigitSet::new([1, 2]).map_err(|e| e.to_string())?;
        pair.see((bowen_dimension(p, &digits) - expected).abs(), || format!("p={q}"));
        let one = DigitSet::new([1]).map_err(|e| e.to_string())?;
        single.see((bowen_dimension(p, &one) - (qf - 1.0).ln() / qf.ln()).abs(), || format!("p={q}"));
    }
    let mut last = f64::NEG_INFINITY;
    for n in 1..=30 {
        let d = bowen_dimension(prime(2), &DigitSet::range(n).map_err(|e| e.to_string())?);
        if d <= last {
            return Err(format!("root not increasing at n={n}"));
        }
        last = d;
    }
    let deficit = 1.0 - last;
    if deficit >= 1e-8 {
        return Err(format!("1 - root(p=2, n=30) = {deficit:.3e} >= 1e-8"));
    }
    Ok(format!(
        "{}; {}; increasing, 1 - root(30) = {deficit:.2e}",
        pair.check(1e-10, "{1,2}")?,
        single.check(1e-10, "{1}")?
    ))
}

fn c7(_: &VerifyOptions) -> Check {
    let mut worst = Worst::new();
    for q in [2u64, 3] {
        let p = prime(q);
        for n in 1..=3u32 {
            let digits = DigitSet::range(n).map_err(|e| e.to_string())?;
            for m in 1..=4u32 {
                for t in [-1.0, 0.5, 1.0, 2.0] {
                    let pp = periodic_pressure(p, &digits, t, m).map_err(|e| e.to_string())?;
                    let closed = pressure_truncated(p, n, t);
                    let err = (pp.enumerated - pp.product).abs().max((pp.product - closed).abs());
                    worst.see(err, || format!("p={q} n={n} m={m} t={t}"));
                }
            }
        }
    }
    worst.check(1e-12, "periodic pressure")
}

fn c8(_: &VerifyOptions) -> Check {
    let mut worst = Worst::new();
    for q in [2u64, 3, 5] {
        let p = prime(q);
        for t in [0.5, 1.0, 2.0] {
            let err = (pressure_truncated(p, 40, t) - pressure_full(p, t)).abs();
            worst.see(err, || format!("p={q} t={t}"));
        }
    }
    worst.check(1e-6, "n=40 truncation")
}

fn rat(s: &str) -> ExactRational {
    s.parse().expect("literal rational")
}

fn pairs(v: &[(u32, u32)]) -> Vec<DigitPair> {
    v.iter().map(|&(a, b)| DigitPair { a, b }).collect()
}

fn c9(_: &VerifyOptions) -> Check {
    let p2 = prime(2);
    let e = expand_rational(&rat("2/3"), p2, 100).map_err(|e| e.to_string())?;
    if e.pairs != pairs(&[(1, 1), (1, 1)]) || e.status != ExpansionStatus::HitZero {
        return Err(format!("2/3 expands to {:?} {:?}", e.pairs, e.status));
    }
    let e = expand_rational(&rat("2/5"), p2, 100).map_err(|e| e.to_string())?;
    if e.pairs != pairs(&[(1, 1), (2, 1)]) || e.status != ExpansionStatus::HitZero {
        return Err(format!("2/5 expands to {:?} {:?}", e.pairs, e.status));
    }
    let (pair, image) = step_rational(&rat("-2"), p2).map_err(|e| e.to_string())?;
    let e = expand_rational(&rat("-2"), p2, 200).map_err(|e| e.to_string())?;
    if image != rat("-2") || pair != (DigitPair { a: 1, b: 1 }) || e.pairs.iter().any(|d| *d != pair) {
        return Err("-2 is not a fixed point with digits (1,1)".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0usize;
    for _ in 0..1000 {
        let p = prime([2u64, 3, 5, 7][rng.random_range(0..4)]);
        let len = rng.random_range(1..=50);
        let word: Vec<DigitPair> =
            (0..len).map(|_| DigitPair { a: rng.random_range(1..=6), b: rng.random_range(1..p.get()) }).collect();
        let cs = convergents(p, &word);
        for (n, c) in cs.iter().enumerate() {
            if c.value().into_ratio() != oracle::bottom_up_value(p, &word[..=n]) {
                return Err(format!("convergent {} differs from bottom-up value for word {word:?}", n + 1));
            }
            checked += 1;
        }
    }
    Ok(format!("examples exact; {checked} convergents of 1000 words equal bottom-up values"))
}

/// A random nonzero rational m·p^k/n with v_p ≥ 1.
fn random_rational(rng: &mut ChaCha8Rng, p: Prime, bound: i64) -> ExactRational {
    loop {
        let m = rng.random_range(-bound..=bound);
        let n = rng.random_range(1..=bound);
        let k = rng.random_range(1..=3u32);
        let scaled = BigInt::from(m) * BigInt::from(p.pow_big(k));
        if let Some(x) = ExactRational::new(scaled, BigInt::from(n)) {
            if !x.is_zero() && rational_valuation(&x, p).map(|v| v >= 1).unwrap_or(false) {
                return x;
            }
        }
    }
}

fn identity_violations(x: &ExactRational, p: Prime, depth: usize) -> Result<(usize, usize), String> {
    let e = expand_rational(x, p, depth + 1).map_err(|e| e.to_string())?;
    let cs = convergents(p, &e.pairs);
    let (mut violations, mut checks) = (0, 0);
    let mut partial = 0i64;
    for n in 0..depth.min(e.len()) {
        partial += i64::from(e.pairs[n].a);
        let approx = if n == 0 { ExactRational::zero() } else { cs[n - 1].value() };
        let diff: ExactRational = (x.as_ratio() - approx.as_ratio()).into();
        if rational_valuation(&diff, p).ok() != Some(partial) {
            violations += 1;
        }
        checks += 1;
    }
    Ok((violations, checks))
}

fn c10(_: &VerifyOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut violations, mut checks) = (0usize, 0usize);
    for i in 0..200 {
        let p = prime([2u64, 3, 5, 7][i % 4]);
        let x = random_rational(&mut rng, p, 1_000_000_000_000);
        let (v, c) = identity_violations(&x, p, 50)?;
        violations += v;
        checks += c;
    }
    let mut haar_violations = 0;
    for (q, samples) in [(2u64, 100), (3, 100)] {
        let config = ExperimentConfig::new(prime(q), Mode::Approx, samples, 50, SEED);
        let r = run_approx(&config).map_err(|e| e.to_string())?;
        if r.exhausted > 0 {
            return Err(format!("{} Haar samples ran out of precision", r.exhausted));
        }
        haar_violations += r.violations.unwrap_or(u64::MAX);
    }
    if violations > 0 || haar_violations > 0 {
        return Err(format!("{violations} violations on rationals, {haar_violations} on Haar samples"));
    }
    Ok(format!("0 violations in {checks} rational checks and 200 Haar samples x 50 levels"))
}

fn c11(_: &VerifyOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < 100 {
        let p = prime([2u64, 3, 5][done % 3]);
        let x = random_rational(&mut rng, p, 1_000_000);
        let e = expand_rational(&x, p, 3).map_err(|e| e.to_string())?;
        if e.status != ExpansionStatus::Complete {
            continue;
        }
        let expected = ExactRational::from_integer(BigInt::from(p.pow_big(e.pairs[2].a)));
        let got = phi(&x, p).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("phi({x}) = {got}, expected {expected} for p={p}"));
        }
        done += 1;
    }
    Ok("phi = p^a3 exactly for 100 rationals".into())
}

fn c12(_: &VerifyOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut finite, mut tails, mut max_start) = (0, 0, 0);
    let mut done = 0;
    while done < 100 {
        let p = prime([2u64, 3][done % 2]);
        let m = rng.random_range(-50i64..=50);
        let n = rng.random_range(1i64..=50);
        let Some(x) = ExactRational::new(m, n) else { continue };
        if x.is_zero() || rational_valuation(&x, p).map(|v| v < 1).unwrap_or(true) {
            continue;
        }
        done += 1;
        match rational_tail_check(&x, p, 5000).map_err(|e| e.to_string())? {
            TailStatus::Finite => finite += 1,
            TailStatus::NotReached => return Err(format!("{x} did not reach the tail for p={p}")),
            TailStatus::TailReached(start) => {
                let e = expand_rational(&x, p, start + 100).map_err(|e| e.to_string())?;
                let tail = DigitPair { a: 1, b: p.get() - 1 };
                if e.pairs[start - 1..].iter().any(|d| *d != tail) || (start > 1 && e.pairs[start - 2] == tail) {
                    return Err(format!("tail index {start} of {x} is wrong for p={p}"));
                }
                tails += 1;
                max_start = max_start.max(start);
            }
        }
    }
    Ok(format!("{finite} finite, {tails} reach the tail (latest start {max_start}), 0 not reached"))
}

fn c13(_: &VerifyOptions) -> Check {
    let mut count = 0;
    for q in [2u64, 3, 5] {
        let p = prime(q);
        let modulus = p.pow_big(64);
        for a in 1..=4u32 {
            for b in 1..p.get() {
                let x = fixed_point(a, b, p, 64).map_err(|e| e.to_string())?;
                let xv = x.to_biguint();
                let residue = (&xv * &xv + &xv * b + &modulus - p.pow_big(a)) % &modulus;
                if !residue.is_zero() {
                    return Err(format!("x^2+bx-p^a != 0 mod p^64 for p={q} a={a} b={b}"));
                }
                if x.valuation().ok() != Some(a as usize) {
                    return Err(format!("valuation of root is not {a} for p={q} b={b}"));
                }
                let (pair, image) = step_padic(&x).map_err(|e| e.to_string())?;
                if pair != (DigitPair { a, b }) || image != x.truncate(64 - a as usize) {
                    return Err(format!("step does not fix the root for p={q} a={a} b={b}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} roots verified mod p^64"))
}

fn c14(_: &VerifyOptions) -> Check {
    let start = Instant::now();
    let mut notes = Vec::new();
    for q in [2u64, 3] {
        let p = prime(q);
        let config = ExperimentConfig::new(p, Mode::Haar, 10_000, 1000, SEED);
        let r = run_haar(&config).map_err(|e| e.to_string())?;
        let qf = q as f64;
        let mean_digit = r.lambda_mean / p.ln();
        let err = (mean_digit - qf / (qf - 1.0)).abs();
        if err >= 0.01 {
            return Err(format!("p={q}: mean digit {mean_digit:.5}, off by {err:.2e}"));
        }
        if r.exhausted > 0 {
            return Err(format!("p={q}: {} samples ran out of precision", r.exhausted));
        }
        let mut worst_z: f64 = 0.0;
        for a in 1..=6u32 {
            let row = r.frequencies.iter().find(|f| f.a == a).ok_or(format!("p={q}: digit {a} never seen"))?;
            let expected = (qf - 1.0) * qf.powi(-(a as i32));
            let z = (row.frequency - expected) / row.sigma(r.digits_total);
            worst_z = worst_z.max(z.abs());
            if z.abs() >= 3.0 {
                return Err(format!("p={q}: frequency of a={a} is {z:.2} sigma off"));
            }
        }
        notes.push(format!("p={q} mean digit {mean_digit:.5} (|z| max {worst_z:.2})"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        return Err(format!("took {elapsed:.1}s, limit 60s"));
    }
    Ok(notes.join(", "))
}

fn c15(opts: &VerifyOptions) -> Check {
    let p = prime(2);
    let mut notes = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        let config = ExperimentConfig::new(p, Mode::Gibbs { t, truncation: None }, 10_000, 1000, SEED);
        let r = run_gibbs(&config).map_err(|e| e.to_string())?;
        let alpha = -crate::thermo::dpressure_full(p, t).map_err(|e| e.to_string())?;
        let rel = (r.lambda_mean - alpha).abs() / alpha;
        let spectrum = spectrum_dimension(p, alpha, opts)?;
        let dim_err = (r.dim_empirical - spectrum).abs();
        let exact = gibbs_weights(p, t, None).map_err(|e| e.to_string())?;
        let closed_err = (dimension_from_measure(&exact) - spectrum).abs();
        if rel >= 0.01 || dim_err >= 0.01 || closed_err >= 1e-10 {
            return Err(format!(
                "t={t}: lambda rel err {rel:.2e}, dimension err {dim_err:.2e}, closed-form err {closed_err:.2e}"
            ));
        }
        notes.push(format!("t={t}: rel {rel:.1e}, dim {dim_err:.1e}"));
    }
    Ok(notes.join(", "))
}

/// Runs criterion `id` (1 to 15).
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> CriterionOutcome {
    let (_, group, title) = CRITERIA[usize::from(id) - 1];
    let start = Instant::now();
    let result = match id {
        1 => c1(opts),
        2 => c2(opts),
        3 => c3(opts),
        4 => c4(opts),
        5 => c5(opts),
        6 => c6(opts),
        7 => c7(opts),
        8 => c8(opts),
        9 => c9(opts),
        10 => c10(opts),
        11 => c11(opts),
        12 => c12(opts),
        13 => c13(opts),
        14 => c14(opts),
        15 => c15(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionOutcome { id, group, title, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Runs every criterion selected by `opts`, in order.
pub fn run(opts: &VerifyOptions) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .filter(|(_, g, _)| opts.only.is_none_or(|o| o == *g))
        .map(|&(id, _, _)| run_criterion(id, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_names_round_trip() {
        for g in Group::ALL {
            assert_eq!(g.name().parse::<Group>(), Ok(g));
        }
        assert!("spectra".parse::<Group>().is_err());
    }

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 2, 4, 5, 6, 7, 8, 13] {
            let o = run_criterion(id, &VerifyOptions::default());
            assert!(o.passed, "{o}");
        }
    }

    #[test]
    fn tampering_breaks_spectrum_checks() {
        let opts = VerifyOptions { tamper_spectrum: true, ..Default::default() };
        assert!(!run_criterion(1, &opts).passed);
        assert!(!run_criterion(2, &opts).passed);
    }

    #[test]
    fn padic_group_selects_one_criterion() {
        let outcomes = run(&VerifyOptions { only: Some(Group::Padic), ..Default::default() });
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].id, 13);
    }
}
