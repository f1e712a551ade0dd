//! Pressure, Lyapunov spectrum and equilibrium states for the potential
//! −t·log ψ, where ψ(x) = p^{a_1(x)}.
//!
//! Everything is in natural logarithms; log_p x is computed as ln x / ln p.
//! The truncated system keeps only digits a ∈ {1, …, n}.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::Prime;
use crate::schneider::DigitPair;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("alpha = {alpha} is the boundary log p, where t_alpha is infinite")]
    AtBoundary { alpha: f64 },
    #[error("{what} = {value} is outside the domain")]
    OutOfDomain { what: &'static str, value: f64 },
    #[error("no interior minimum for alpha = {alpha}")]
    NoMinimum { alpha: f64 },
    #[error("enumeration of {count} words exceeds the limit")]
    TooLarge { count: f64 },
    #[error("weights p^(-ta) are not summable for t = {t}")]
    DivergentWeights { t: f64 },
    #[error("digit set must be a nonempty set of positive integers")]
    InvalidDigitSet,
}

fn out_of_domain(what: &'static str, value: f64) -> ThermoError {
    ThermoError::OutOfDomain { what, value }
}

/// x·ln x with 0·ln 0 = 0.
fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// P(−t log ψ) = log((p−1)/(p^t−1)); +∞ for t ≤ 0.
pub fn pressure_full(p: Prime, t: f64) -> f64 {
    if t <= 0.0 {
        return f64::INFINITY;
    }
    f64::from(p.get() - 1).ln() - (t * p.ln()).exp_m1().ln()
}

/// ln Σ_{k=1}^{n} e^{−uk}.
fn log_geometric_sum(u: f64, n: u32) -> f64 {
    if u == 0.0 {
        return f64::from(n).ln();
    }
    if u < 0.0 {
        return -u * (f64::from(n) + 1.0) + log_geometric_sum(-u, n);
    }
    -u + (-(-(f64::from(n) * u)).exp_m1()).ln() - (-(-u).exp_m1()).ln()
}

/// P_n(−t log ψ) = log(p−1) + log Σ_{k=1}^{n} p^{−tk}; log((p−1)n) at t = 0.
pub fn pressure_truncated(p: Prime, n: u32, t: f64) -> f64 {
    assert!(n >= 1, "truncation must be at least 1");
    f64::from(p.get() - 1).ln() + log_geometric_sum(t * p.ln(), n)
}

/// Mean and variance of k under weights ∝ e^{−uk} on {1, …, n}, by direct summation.
fn truncated_moments(u: f64, n: u32) -> (f64, f64) {
    let shift = if u >= 0.0 { 1.0 } else { f64::from(n) };
    let (mut z, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for k in 1..=n {
        let k = f64::from(k);
        let w = (-u * (k - shift)).exp();
        z += w;
        s1 += w * k;
        s2 += w * k * k;
    }
    let mean = s1 / z;
    (mean, (s2 / z - mean * mean).max(0.0))
}

/// Mean digit E_t[a] for the truncated system.
fn truncated_mean(u: f64, n: u32) -> f64 {
    let nu = f64::from(n) * u;
    if nu.abs() < 1.0 {
        truncated_moments(u, n).0
    } else {
        1.0 / -(-u).exp_m1() - f64::from(n) / nu.exp_m1()
    }
}

/// d/dt P(−t log ψ) = −log p · p^t/(p^t − 1), for t > 0.
pub fn dpressure_full(p: Prime, t: f64) -> Result<f64, ThermoError> {
    if t <= 0.0 || t.is_nan() {
        return Err(out_of_domain("t", t));
    }
    Ok(-p.ln() / -(-t * p.ln()).exp_m1())
}

/// d/dt P_n(−t log ψ) = log p · (n/(p^{tn}−1) − p^t/(p^t−1)); −(n+1)/2 · log p at t = 0.
pub fn dpressure_truncated(p: Prime, n: u32, t: f64) -> f64 {
    assert!(n >= 1, "truncation must be at least 1");
    -p.ln() * truncated_mean(t * p.ln(), n)
}

/// Second derivative of P_n: log²p · Var_t(a).
pub fn d2pressure_truncated(p: Prime, n: u32, t: f64) -> f64 {
    p.ln() * p.ln() * truncated_moments(t * p.ln(), n).1
}

/// The t > 0 with dP/dt = −α: t_α = log_p(α/(α − log p)).
pub fn t_alpha_full(p: Prime, alpha: f64) -> Result<f64, ThermoError> {
    let lp = p.ln();
    if alpha == lp {
        return Err(ThermoError::AtBoundary { alpha });
    }
    if alpha.is_nan() || alpha <= lp {
        return Err(out_of_domain("alpha", alpha));
    }
    Ok((alpha / (alpha - lp)).ln() / lp)
}

/// The unique real t with dP_n/dt = −α, for log p < α < n log p.
pub fn t_alpha_truncated(p: Prime, n: u32, alpha: f64) -> Result<f64, ThermoError> {
    let lp = p.ln();
    if !(alpha > lp && alpha < f64::from(n) * lp) {
        return Err(out_of_domain("alpha", alpha));
    }
    let target = alpha / lp;
    let mean = |t: f64| truncated_mean(t * lp, n);
    let (mut lo, mut hi) = (-1.0, 1.0);
    while mean(lo) <= target {
        lo *= 2.0;
        if lo < -1e6 {
            return Err(out_of_domain("alpha", alpha));
        }
    }
    while mean(hi) >= target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(out_of_domain("alpha", alpha));
        }
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..5 {
        let (m, var) = truncated_moments(t * lp, n);
        let step = (m - target) / (lp * var);
        if !step.is_finite() || step == 0.0 {
            break;
        }
        let next = t + step;
        if !(lo..=hi).contains(&next) {
            break;
        }
        t = next;
    }
    Ok(t)
}

/// A point (α, L(α)) of the Lyapunov spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub alpha: f64,
    /// `None` at an endpoint of the spectrum, where t_α is infinite
    /// (+∞ at α = log p, −∞ at α = n log p for the truncated system).
    pub t_alpha: Option<f64>,
    /// P(−t_α log ψ); `None` where t_α is infinite.
    pub pressure: Option<f64>,
    pub dimension: f64,
}

/// L_p(α) = [log(p−1) + log(α − log p) − log log p]/α + log_p α − log_p(α − log p).
pub fn spectrum_full(p: Prime, alpha: f64) -> Result<SpectrumPoint, ThermoError> {
    let lp = p.ln();
    let lp1 = f64::from(p.get() - 1).ln();
    if alpha == lp {
        return Ok(SpectrumPoint { alpha, t_alpha: None, pressure: None, dimension: lp1 / lp });
    }
    let t = t_alpha_full(p, alpha)?;
    let gap = alpha - lp;
    let dimension = (lp1 + gap.ln() - lp.ln()) / alpha + (alpha.ln() - gap.ln()) / lp;
    Ok(SpectrumPoint { alpha, t_alpha: Some(t), pressure: Some(pressure_full(p, t)), dimension })
}

/// The spectrum in terms of the mean digit α̂ = α/log p:
/// (α̂ log α̂ − (α̂−1) log(α̂−1) + log(p−1))/(α̂ log p).
pub fn spectrum_digit_mean(p: Prime, alpha_hat: f64) -> Result<f64, ThermoError> {
    if alpha_hat.is_nan() || alpha_hat < 1.0 {
        return Err(out_of_domain("alpha_hat", alpha_hat));
    }
    let lp1 = f64::from(p.get() - 1).ln();
    Ok((xlogx(alpha_hat) - xlogx(alpha_hat - 1.0) + lp1) / (alpha_hat * p.ln()))
}

/// L_{p,n}(α) = P_n(−t_α log ψ)/α + t_α on [log p, n log p].
pub fn spectrum_truncated(p: Prime, n: u32, alpha: f64) -> Result<SpectrumPoint, ThermoError> {
    let lp = p.ln();
    let lp1 = f64::from(p.get() - 1).ln();
    let top = f64::from(n) * lp;
    let near = |x: f64| (alpha - x).abs() <= 1e-14 * x;
    if near(lp) {
        return Ok(SpectrumPoint { alpha, t_alpha: None, pressure: None, dimension: lp1 / lp });
    }
    if near(top) {
        // t_α → −∞; only the word of constant digit n survives
        return Ok(SpectrumPoint { alpha, t_alpha: None, pressure: None, dimension: lp1 / top });
    }
    if !(alpha > lp && alpha < top) {
        return Err(out_of_domain("alpha", alpha));
    }
    let t = t_alpha_truncated(p, n, alpha)?;
    let pressure = pressure_truncated(p, n, t);
    Ok(SpectrumPoint { alpha, t_alpha: Some(t), pressure: Some(pressure), dimension: pressure / alpha + t })
}

/// Minimizes a unimodal function on [a, b] by golden-section search.
/// Returns (argmin, min).
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if (b - a).abs() <= tol * (1.0 + c.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// (1/α) · inf_t {P(t) + tα} for a convex pressure function defined on
/// (`t_lower`, ∞); pass `f64::NEG_INFINITY` for pressures defined on all of R.
pub fn legendre_numeric(pressure: impl Fn(f64) -> f64, alpha: f64, t_lower: f64) -> Result<f64, ThermoError> {
    let f = |t: f64| pressure(t) + t * alpha;
    let no_min = || ThermoError::NoMinimum { alpha };
    let mut b = if t_lower.is_finite() { t_lower + 1.0 } else { 0.0 };
    let mut step = 1.0;
    let (mut a, mut c);
    let mut fb = f(b);
    let right = f(b + step);
    if right < fb {
        a = b;
        c = b + step;
        let mut fc = right;
        while fc < fb {
            a = b;
            b = c;
            fb = fc;
            step *= 2.0;
            c = b + step;
            if c > 1e6 {
                return Err(no_min());
            }
            fc = f(c);
        }
    } else {
        c = b + step;
        loop {
            a = if t_lower.is_finite() { (b - step).max(0.5 * (t_lower + b)) } else { b - step };
            let fa = f(a);
            if fa >= fb {
                break;
            }
            c = b;
            b = a;
            fb = fa;
            step *= 2.0;
            if a < -1e6 || (t_lower.is_finite() && b - t_lower < 1e-12) {
                return Err(no_min());
            }
        }
    }
    if !fb.is_finite() {
        return Err(no_min());
    }
    let (_, value) = golden_section_min(f, a, c, 1e-12);
    Ok(value / alpha)
}

/// α at which the spectrum attains its maximum, located numerically.
pub fn spectrum_argmax(p: Prime) -> f64 {
    let lp = p.ln();
    let neg = |alpha: f64| -spectrum_full(p, alpha).map(|s| s.dimension).unwrap_or(f64::NEG_INFINITY);
    golden_section_min(neg, lp * 1.000_001, lp * 50.0, 1e-12).0
}

/// A finite set of allowed valuation digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSet(BTreeSet<u32>);

impl DigitSet {
    pub fn new(digits: impl IntoIterator<Item = u32>) -> Result<Self, ThermoError> {
        let set: BTreeSet<u32> = digits.into_iter().collect();
        if set.is_empty() || set.contains(&0) {
            return Err(ThermoError::InvalidDigitSet);
        }
        Ok(DigitSet(set))
    }

    /// {1, …, n}.
    pub fn range(n: u32) -> Result<Self, ThermoError> {
        Self::new(1..=n)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Root s ∈ [0, 1] of (p−1) Σ_{a∈A} p^{−sa} = 1.
pub fn bowen_dimension(p: Prime, digits: &DigitSet) -> f64 {
    let lp = p.ln();
    let pm1 = f64::from(p.get() - 1);
    let f = |s: f64| pm1 * digits.iter().map(|a| (-s * lp * f64::from(a)).exp()).sum::<f64>() - 1.0;
    if f(0.0) <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(hi).abs() < f(lo).abs() {
        hi
    } else {
        lo
    }
}

/// Periodic-point pressure (1/m) log Σ_{|w| = m} Π_k p^{−t a_k}, computed by
/// enumerating all words and by the product formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPressure {
    pub enumerated: f64,
    pub product: f64,
}

pub const ENUMERATION_LIMIT: f64 = 1e7;

pub fn periodic_pressure(p: Prime, digits: &DigitSet, t: f64, m: u32) -> Result<PeriodicPressure, ThermoError> {
    if m == 0 {
        return Err(out_of_domain("m", 0.0));
    }
    let alphabet: Vec<DigitPair> =
        digits.iter().flat_map(|a| (1..p.get()).map(move |b| DigitPair { a, b })).collect();
    let count = (alphabet.len() as f64).powi(m as i32);
    if count > ENUMERATION_LIMIT {
        return Err(ThermoError::TooLarge { count });
    }
    let lp = p.ln();
    let weights: Vec<f64> = alphabet.iter().map(|d| (-t * lp * f64::from(d.a)).exp()).collect();
    let mut index = vec![0usize; m as usize];
    let mut total = 0.0;
    'words: loop {
        total += index.iter().map(|&i| weights[i]).product::<f64>();
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < alphabet.len() {
                continue 'words;
            }
            *slot = 0;
        }
        break;
    }
    let single: f64 = f64::from(p.get() - 1) * digits.iter().map(|a| (-t * lp * f64::from(a)).exp()).sum::<f64>();
    Ok(PeriodicPressure { enumerated: total.ln() / f64::from(m), product: single.ln() })
}

/// Bernoulli equilibrium state of −t log ψ: w(a, b) = p^{−ta}/Z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsSpec {
    pub prime: Prime,
    pub t: f64,
    pub truncation: Option<u32>,
    /// Law of the a-digit for the truncated system, P(a = k) at index k − 1.
    #[serde(skip)]
    digit_law: Vec<f64>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

pub fn gibbs_weights(p: Prime, t: f64, truncation: Option<u32>) -> Result<GibbsSpec, ThermoError> {
    match truncation {
        None if t.is_nan() || t <= 0.0 => Err(ThermoError::DivergentWeights { t }),
        Some(0) => Err(out_of_domain("truncation", 0.0)),
        None => Ok(GibbsSpec { prime: p, t, truncation, digit_law: Vec::new(), cumulative: Vec::new() }),
        Some(n) => {
            let u = t * p.ln();
            let shift = if u >= 0.0 { 1.0 } else { f64::from(n) };
            let raw: Vec<f64> = (1..=n).map(|k| (-u * (f64::from(k) - shift)).exp()).collect();
            let z: f64 = raw.iter().sum();
            let digit_law: Vec<f64> = raw.iter().map(|w| w / z).collect();
            let mut acc = 0.0;
            let cumulative = digit_law
                .iter()
                .map(|w| {
                    acc += w;
                    acc
                })
                .collect();
            Ok(GibbsSpec { prime: p, t, truncation, digit_law, cumulative })
        }
    }
}

impl GibbsSpec {
    /// q = p^{−t}.
    fn ratio(&self) -> f64 {
        (-self.t * self.prime.ln()).exp()
    }

    /// Probability that the a-digit equals `a`.
    pub fn digit_probability(&self, a: u32) -> f64 {
        match self.truncation {
            None if a >= 1 => {
                let q = self.ratio();
                -(-self.t * self.prime.ln()).exp_m1() * q.powf(f64::from(a) - 1.0)
            }
            Some(n) if (1..=n).contains(&a) => self.digit_law[a as usize - 1],
            _ => 0.0,
        }
    }

    /// w(a, b).
    pub fn weight(&self, pair: DigitPair) -> f64 {
        if pair.b == 0 || pair.b >= self.prime.get() {
            return 0.0;
        }
        self.digit_probability(pair.a) / f64::from(self.prime.get() - 1)
    }

    /// E[a].
    pub fn mean_digit(&self) -> f64 {
        match self.truncation {
            None => 1.0 / -(-self.t * self.prime.ln()).exp_m1(),
            Some(_) => self.digit_law.iter().enumerate().map(|(i, w)| (i + 1) as f64 * w).sum(),
        }
    }

    /// log p · E[a], the Lyapunov exponent of the measure.
    pub fn lyapunov(&self) -> f64 {
        self.prime.ln() * self.mean_digit()
    }

    /// −Σ w log w over all digit pairs.
    pub fn entropy(&self) -> f64 {
        let lp1 = f64::from(self.prime.get() - 1).ln();
        let digit_entropy = match self.truncation {
            None => {
                let log_q = -self.t * self.prime.ln();
                let one_minus_q = -log_q.exp_m1();
                let q = log_q.exp();
                -(one_minus_q.ln() + q / one_minus_q * log_q)
            }
            Some(_) => -self.digit_law.iter().map(|&w| xlogx(w)).sum::<f64>(),
        };
        digit_entropy + lp1
    }

    /// Draws one digit pair: a by inverse CDF, b uniform.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DigitPair {
        let u: f64 = rng.random();
        let a = match self.truncation {
            None => {
                let log_q = -self.t * self.prime.ln();
                let k = ((1.0 - u).ln() / log_q).floor();
                1 + k.min(f64::from(u32::MAX - 1)) as u32
            }
            Some(n) => {
                let i = self.cumulative.partition_point(|&c| c <= u);
                (i as u32 + 1).min(n)
            }
        };
        DigitPair { a, b: rng.random_range(1..self.prime.get()) }
    }
}

/// entropy/(log p · E[a]): the pointwise dimension of the equilibrium state.
pub fn dimension_from_measure(spec: &GibbsSpec) -> f64 {
    spec.entropy() / spec.lyapunov()
}
