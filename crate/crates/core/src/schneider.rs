//! The Schneider map T(x) = p^a/x − b on pZ_p.
//!
//! Every nonzero x in pZ_p has a = v_p(x) ≥ 1 and a residue digit
//! b ∈ {1, …, p−1} with b ≡ p^a/x (mod p). Iterating T produces the digit
//! pairs of the continued fraction
//!
//! ```text
//! x = p^a1 / (b1 + p^a2 / (b2 + p^a3 / (b3 + ...)))
//! ```
//!
//! Two arithmetic routes are provided: exact rationals (which detect finite
//! expansions and exact tails) and fixed-precision p-adic integers (each step
//! with valuation digit a consumes a digits of precision).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{inverse_mod_prime, rational_valuation, ExactRational, PadicError, PadicInt, Prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchneiderError {
    #[error("input is zero")]
    ZeroInput,
    #[error("input is not in pZ_p")]
    NotInMaximalIdeal,
    #[error("expansion has {available} digit pairs, {needed} required")]
    ExpansionTooShort { needed: usize, available: usize },
    #[error("invalid digit pair (a = {a}, b = {b}) for p = {p}")]
    InvalidDigit { a: u32, b: u32, p: u32 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// One symbol (a, b) of the alphabet N × {1, …, p−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct DigitPair {
    pub a: u32,
    pub b: u32,
}

impl DigitPair {
    pub fn new(a: u32, b: u32, prime: Prime) -> Result<Self, SchneiderError> {
        if a == 0 || b == 0 || b >= prime.get() {
            return Err(SchneiderError::InvalidDigit { a, b, p: prime.get() });
        }
        Ok(DigitPair { a, b })
    }
}

impl From<[u32; 2]> for DigitPair {
    fn from([a, b]: [u32; 2]) -> Self {
        DigitPair { a, b }
    }
}

impl From<DigitPair> for [u32; 2] {
    fn from(d: DigitPair) -> Self {
        [d.a, d.b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpansionStatus {
    /// The requested number of pairs was produced.
    Complete,
    /// An iterate was exactly 0: the input has a finite expansion.
    HitZero,
    /// The p-adic input ran out of certified digits.
    PrecisionExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub prime: Prime,
    pub pairs: Vec<DigitPair>,
    pub status: ExpansionStatus,
    /// Digits of precision left after the last step (p-adic route only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remaining_precision: Option<usize>,
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// a_1 + … + a_n.
    pub fn digit_sum(&self, n: usize) -> u64 {
        self.pairs[..n].iter().map(|d| u64::from(d.a)).sum()
    }
}

/// One step of T on a p-adic integer.
///
/// Returns the digit pair and T(x) at precision N − a. An element whose
/// known digits are all zero is reported as [`SchneiderError::ZeroInput`].
pub fn step_padic(x: &PadicInt) -> Result<(DigitPair, PadicInt), SchneiderError> {
    if x.digits()[0] != 0 {
        return Err(SchneiderError::NotInMaximalIdeal);
    }
    let a = x.valuation().map_err(|_| SchneiderError::ZeroInput)?;
    let unit = x.shift_right(a);
    let inverse = unit.unit_inverse()?;
    let b = inverse.digits()[0];
    let mut digits = inverse.digits().to_vec();
    digits[0] = 0;
    let next = PadicInt::from_digits(x.prime(), digits)?;
    Ok((DigitPair { a: a as u32, b }, next))
}

/// One exact step of T on a rational in pZ_p. T(x) = 0 is allowed.
pub fn step_rational(x: &ExactRational, prime: Prime) -> Result<(DigitPair, ExactRational), SchneiderError> {
    if x.is_zero() {
        return Err(SchneiderError::ZeroInput);
    }
    let a = rational_valuation(x, prime)?;
    if a < 1 {
        return Err(SchneiderError::NotInMaximalIdeal);
    }
    let p_a = BigInt::from(prime.pow_big(a as u32));
    let y = BigRational::from_integer(p_a) / x.as_ratio();
    let p = BigInt::from(prime.get());
    let num = y.numer().mod_floor(&p).to_u64().expect("small");
    let den = y.denom().mod_floor(&p).to_u64().expect("small");
    let b = (num * u64::from(inverse_mod_prime(den, prime.get()))) % u64::from(prime.get());
    let t = y - BigRational::from_integer(BigInt::from(b));
    Ok((DigitPair { a: a as u32, b: b as u32 }, t.into()))
}

/// Exact expansion of a rational in pZ_p, up to `depth` pairs.
pub fn expand_rational(x: &ExactRational, prime: Prime, depth: usize) -> Result<Expansion, SchneiderError> {
    if x.is_zero() {
        return Err(SchneiderError::ZeroInput);
    }
    let mut pairs = Vec::with_capacity(depth.min(4096));
    let mut current = x.clone();
    let mut status = ExpansionStatus::Complete;
    while pairs.len() < depth {
        let (pair, next) = step_rational(&current, prime)?;
        pairs.push(pair);
        if next.is_zero() {
            status = ExpansionStatus::HitZero;
            break;
        }
        current = next;
    }
    Ok(Expansion { prime, pairs, status, remaining_precision: None })
}

/// Expansion of a p-adic integer by iterating [`step_padic`].
pub fn expand_padic(x: &PadicInt, depth: usize) -> Result<Expansion, SchneiderError> {
    if x.valuation().is_err() {
        return Err(SchneiderError::ZeroInput);
    }
    let mut pairs = Vec::with_capacity(depth.min(4096));
    let mut current = x.clone();
    let mut status = ExpansionStatus::Complete;
    while pairs.len() < depth {
        if current.precision() < 2 {
            status = ExpansionStatus::PrecisionExhausted;
            break;
        }
        match step_padic(&current) {
            Ok((pair, next)) => {
                pairs.push(pair);
                current = next;
            }
            Err(SchneiderError::ZeroInput) => {
                status = ExpansionStatus::PrecisionExhausted;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Expansion {
        prime: x.prime(),
        pairs,
        status,
        remaining_precision: Some(current.precision()),
    })
}

/// The rational p_n/q_n obtained by cutting the fraction after n levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub numerator: BigInt,
    pub denominator: BigInt,
}

impl Convergent {
    pub fn value(&self) -> ExactRational {
        ExactRational::new(self.numerator.clone(), self.denominator.clone()).expect("B_n is a p-adic unit")
    }
}

/// Convergents A_n/B_n for n = 1..=len, from
/// A_n = b_n A_{n−1} + p^{a_n} A_{n−2}, B_n = b_n B_{n−1} + p^{a_n} B_{n−2},
/// with A_{−1} = 1, B_{−1} = 0, A_0 = 0, B_0 = 1.
pub fn convergents(prime: Prime, pairs: &[DigitPair]) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(pairs.len());
    let (mut a_prev, mut a_cur) = (BigInt::one(), BigInt::zero());
    let (mut b_prev, mut b_cur) = (BigInt::zero(), BigInt::one());
    for (i, d) in pairs.iter().enumerate() {
        let scale = BigInt::from(prime.pow_big(d.a));
        let bn = BigInt::from(d.b);
        let a_next = &bn * &a_cur + &scale * &a_prev;
        let b_next = &bn * &b_cur + &scale * &b_prev;
        a_prev = std::mem::replace(&mut a_cur, a_next);
        b_prev = std::mem::replace(&mut b_cur, b_next);
        out.push(Convergent { index: i + 1, numerator: a_cur.clone(), denominator: b_cur.clone() });
    }
    out
}

/// The point whose expansion starts with `pairs` and whose n-th iterate is
/// `tail`: x = (A_n + A_{n−1}·tail)/(B_n + B_{n−1}·tail).
///
/// `tail` must be 0 or lie in pZ_p.
pub fn point_from_word(prime: Prime, pairs: &[DigitPair], tail: &ExactRational) -> Result<ExactRational, SchneiderError> {
    if !tail.is_zero() && rational_valuation(tail, prime)? < 1 {
        return Err(SchneiderError::NotInMaximalIdeal);
    }
    for d in pairs {
        DigitPair::new(d.a, d.b, prime)?;
    }
    if pairs.is_empty() {
        return Ok(tail.clone());
    }
    let cs = convergents(prime, pairs);
    let last = &cs[cs.len() - 1];
    let (a_prev, b_prev) = match cs.len() {
        1 => (BigInt::zero(), BigInt::one()),
        n => (cs[n - 2].numerator.clone(), cs[n - 2].denominator.clone()),
    };
    let y = tail.as_ratio();
    let num = BigRational::from_integer(last.numerator.clone()) + y * BigRational::from_integer(a_prev);
    let den = BigRational::from_integer(last.denominator.clone()) + y * BigRational::from_integer(b_prev);
    Ok((num / den).into())
}

/// The rational −p, the fixed point with digits (1, p−1) forever.
pub fn tail_fixed_point(prime: Prime) -> ExactRational {
    ExactRational::from_integer(-i64::from(prime.get()))
}

/// v_p(x − A_n/B_n); equals a_1 + … + a_{n+1}.
pub fn approx_error_valuation(x: &ExactRational, prime: Prime, n: usize) -> Result<i64, SchneiderError> {
    let e = expand_rational(x, prime, n + 1)?;
    if e.len() < n + 1 {
        return Err(SchneiderError::ExpansionTooShort { needed: n + 1, available: e.len() });
    }
    let approx = match n {
        0 => ExactRational::zero(),
        _ => convergents(prime, &e.pairs[..n])[n - 1].value(),
    };
    let diff: ExactRational = (x.as_ratio() - approx.as_ratio()).into();
    Ok(rational_valuation(&diff, prime)?)
}

/// Birkhoff average log p · (a_1 + … + a_n)/n.
pub fn lyapunov_estimate(e: &Expansion, n: usize) -> Result<f64, SchneiderError> {
    if n == 0 || e.len() < n {
        return Err(SchneiderError::ExpansionTooShort { needed: n.max(1), available: e.len() });
    }
    Ok(e.prime.ln() * e.digit_sum(n) as f64 / n as f64)
}

/// −(1/n) log |x − A_n/B_n|_p.
pub fn approximation_exponent(x: &ExactRational, prime: Prime, n: usize) -> Result<f64, SchneiderError> {
    if n == 0 {
        return Err(SchneiderError::ExpansionTooShort { needed: 1, available: 0 });
    }
    let v = approx_error_valuation(x, prime, n)?;
    Ok(prime.ln() * v as f64 / n as f64)
}

/// Root of x² + bx − p^a = 0 in pZ_p, lifted to precision N by Newton's
/// method from the root x ≡ 0 (mod p).
///
/// The derivative 2x + b is a unit on pZ_p, so each iteration doubles the
/// number of correct digits. The result is a fixed point of T with digit
/// pair (a, b).
pub fn fixed_point(a: u32, b: u32, prime: Prime, precision: usize) -> Result<PadicInt, SchneiderError> {
    DigitPair::new(a, b, prime)?;
    if precision == 0 {
        return Err(PadicError::PrecisionTooSmall { min: 1, got: 0 }.into());
    }
    let p_a = PadicInt::from_integer(&BigInt::from(prime.pow_big(a)), prime, precision);
    let zero = PadicInt::zero(prime, precision);
    let mut x = zero.clone();
    // quadratic convergence: log2(N) + 1 rounds suffice
    let rounds = usize::BITS - precision.leading_zeros() + 2;
    for _ in 0..rounds {
        let fx = x.checked_mul(&x)?.checked_add(&x.scale(u64::from(b)))?.checked_sub(&p_a)?;
        if fx == zero {
            break;
        }
        let slope = x.scale(2).add_small(u64::from(b));
        let correction = fx.checked_mul(&slope.unit_inverse()?)?;
        x = x.checked_sub(&correction)?;
    }
    Ok(x)
}

/// ψ_2(y) = p^{−a_1(y)} · |y − p^{a_1(y)}/b_1(y)|_p^{−1}, evaluated exactly.
pub fn psi2(y: &ExactRational, prime: Prime) -> Result<ExactRational, SchneiderError> {
    let (pair, next) = step_rational(y, prime)?;
    if next.is_zero() {
        return Err(SchneiderError::ExpansionTooShort { needed: 2, available: 1 });
    }
    let first_level = BigRational::new(BigInt::from(prime.pow_big(pair.a)), BigInt::from(pair.b));
    let diff: ExactRational = (y.as_ratio() - first_level).into();
    let v = rational_valuation(&diff, prime)?;
    Ok(p_power(prime, v - i64::from(pair.a)))
}

/// φ(x) = p^{a_2(x)} · ψ_2(T x) / ψ_2(x), computed from the definition of ψ_2.
///
/// The result is an exact power of p; it equals p^{a_3(x)}.
pub fn phi(x: &ExactRational, prime: Prime) -> Result<ExactRational, SchneiderError> {
    let short = |available| SchneiderError::ExpansionTooShort { needed: 3, available };
    let (_, tx) = step_rational(x, prime)?;
    if tx.is_zero() {
        return Err(short(1));
    }
    let (second, t2x) = step_rational(&tx, prime)?;
    if t2x.is_zero() {
        return Err(short(2));
    }
    let ratio = psi2(&tx, prime)?.into_ratio() / psi2(x, prime)?.into_ratio();
    Ok((p_power(prime, i64::from(second.a)).into_ratio() * ratio).into())
}

fn p_power(prime: Prime, e: i64) -> ExactRational {
    let pow = BigInt::from(prime.pow_big(e.unsigned_abs() as u32));
    if e >= 0 {
        ExactRational::from_integer(pow)
    } else {
        ExactRational::new(1, pow).expect("nonzero")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailStatus {
    /// The expansion terminates.
    Finite,
    /// a_n = 1 and b_n = p − 1 for all n ≥ the stored index (1-based).
    TailReached(usize),
    NotReached,
}

/// Follows the exact orbit of a rational until it terminates or enters the
/// eventual tail (1, p−1), (1, p−1), ….
///
/// The tail is certified exactly: the only point of pZ_p whose digits are
/// all (1, p−1) is −p, so the orbit has entered the tail once an iterate
/// equals −p. The reported index is the start of the final run of (1, p−1)
/// pairs.
pub fn rational_tail_check(x: &ExactRational, prime: Prime, max_steps: usize) -> Result<TailStatus, SchneiderError> {
    if x.is_zero() {
        return Err(SchneiderError::ZeroInput);
    }
    let fixed = tail_fixed_point(prime);
    let tail_pair = DigitPair { a: 1, b: prime.get() - 1 };
    let mut run_start: Option<usize> = None;
    let mut current = x.clone();
    for step in 0..max_steps {
        if current == fixed {
            return Ok(TailStatus::TailReached(run_start.unwrap_or(step + 1)));
        }
        let (pair, next) = step_rational(&current, prime)?;
        if pair == tail_pair {
            run_start.get_or_insert(step + 1);
        } else {
            run_start = None;
        }
        if next.is_zero() {
            return Ok(TailStatus::Finite);
        }
        current = next;
    }
    Ok(TailStatus::NotReached)
}

/// Fast digit generator for a p-adic integer.
///
/// Produces the same pairs, precision accounting, and exhaustion point as
/// iterating [`step_padic`], but in O(N) work per step instead of a unit
/// inversion. It tracks the residuals r_n = A_n − B_n·x, which obey the
/// convergent recurrence r_n = b_n r_{n−1} + p^{a_n} r_{n−2}. Writing
/// r_n = p^{v_n} u_n with u_n a unit, one has v_n = a_1 + … + a_{n+1},
/// a_{n+2} = v_p(b_{n+1} u_n + u_{n−1}), and b_{n+1} ≡ −u_{n−1}/u_n (mod p).
///
/// The u_n are kept as plain integers; digits above the certified precision
/// are never read, so no reduction is needed.
#[derive(Debug, Clone)]
pub struct DigitStream {
    prime: Prime,
    older: BigUint,
    newer: BigUint,
    /// u_n mod p.
    newer_residue: u32,
    /// Largest power p^m that fits in a u32, with its exponent m.
    chunk: (u32, u32),
    /// Certified digits of `newer`; equals the precision left after the
    /// pending pair is emitted.
    known: usize,
    /// Precision of the current iterate, before the pending pair.
    remaining: usize,
    pending: Option<DigitPair>,
}

impl DigitStream {
    pub fn new(x: &PadicInt) -> Result<Self, SchneiderError> {
        if x.digits()[0] != 0 {
            return Err(SchneiderError::NotInMaximalIdeal);
        }
        let a = x.valuation().map_err(|_| SchneiderError::ZeroInput)?;
        let prime = x.prime();
        let n = x.precision();
        let neg = prime.pow_big(n as u32) - x.to_biguint();
        let newer = neg / prime.pow_big(a as u32);
        let newer_residue = residue(&newer, prime.get());
        let b = neg_ratio_mod_p(1, newer_residue, prime);
        let p = u64::from(prime.get());
        let (mut pm, mut m) = (p, 1);
        while pm * p <= u64::from(u32::MAX) {
            pm *= p;
            m += 1;
        }
        Ok(DigitStream {
            prime,
            older: BigUint::one(),
            newer,
            newer_residue,
            chunk: (pm as u32, m),
            known: n - a,
            remaining: n,
            pending: Some(DigitPair { a: a as u32, b }),
        })
    }

    /// Precision of the current iterate T^k x, where k pairs were emitted.
    pub fn remaining_precision(&self) -> usize {
        self.remaining
    }

    pub fn is_exhausted(&self) -> bool {
        self.pending.is_none()
    }

    fn advance(&mut self, emitted: DigitPair) {
        self.remaining = self.known;
        if self.known < 2 {
            return;
        }
        let mut w = std::mem::take(&mut self.older);
        if emitted.b == 1 {
            w += &self.newer;
        } else {
            w += &self.newer * emitted.b;
        }
        let Some((a, unit, unit_residue)) = self.split_valuation(w) else {
            return;
        };
        let b = neg_ratio_mod_p(self.newer_residue, unit_residue, self.prime);
        self.older = std::mem::replace(&mut self.newer, unit);
        self.newer_residue = unit_residue;
        self.known -= a;
        self.pending = Some(DigitPair { a: a as u32, b });
    }

    /// Writes w = p^a·u with u a unit; `None` when a ≥ `known`.
    fn split_valuation(&self, w: BigUint) -> Option<(usize, BigUint, u32)> {
        let p = self.prime.get();
        if p == 2 {
            let a = w.trailing_zeros().filter(|&t| (t as usize) < self.known)? as usize;
            return Some((a, w >> a, 1));
        }
        let (pm, m) = self.chunk;
        let low = residue(&w, pm);
        if low == 0 {
            return self.split_valuation_slow(w);
        }
        let (mut a, mut rest) = (0usize, low);
        while rest % p == 0 {
            rest /= p;
            a += 1;
        }
        debug_assert!((a as u32) < m);
        if a >= self.known {
            return None;
        }
        Some((a, w / p.pow(a as u32), rest % p))
    }

    fn split_valuation_slow(&self, mut w: BigUint) -> Option<(usize, BigUint, u32)> {
        let p = self.prime.get();
        for a in 0..self.known {
            let r = residue(&w, p);
            if r != 0 {
                return Some((a, w, r));
            }
            w /= p;
        }
        None
    }

    /// Collects up to `depth` pairs into an [`Expansion`].
    pub fn expand(mut self, depth: usize) -> Expansion {
        let pairs: Vec<DigitPair> = self.by_ref().take(depth).collect();
        let status = if pairs.len() == depth {
            ExpansionStatus::Complete
        } else {
            ExpansionStatus::PrecisionExhausted
        };
        Expansion { prime: self.prime, pairs, status, remaining_precision: Some(self.remaining) }
    }
}

impl Iterator for DigitStream {
    type Item = DigitPair;

    fn next(&mut self) -> Option<DigitPair> {
        let pair = self.pending.take()?;
        self.advance(pair);
        Some(pair)
    }
}

/// w mod m for a modulus below 2^32.
fn residue(w: &BigUint, m: u32) -> u32 {
    (w % m).to_u32().expect("below modulus")
}

/// −num/den mod p for residues of units.
fn neg_ratio_mod_p(num: u32, den: u32, prime: Prime) -> u32 {
    let p = u64::from(prime.get());
    let r = u64::from(num) * u64::from(inverse_mod_prime(u64::from(den), prime.get())) % p;
    ((p - r) % p) as u32
}

/// [`DigitStream`] expansion to `depth` pairs.
pub fn expand_stream(x: &PadicInt, depth: usize) -> Result<Expansion, SchneiderError> {
    Ok(DigitStream::new(x)?.expand(depth))
}

/// Same result as [`expand_padic`], computed on the shortest prefix of the
/// digits of x that suffices.
///
/// The first k pairs depend only on the lowest a_1 + … + a_k + 1 digits, so
/// the expansion runs on a truncated copy of x and retries with twice the
/// digits whenever the copy runs out before `depth` pairs.
pub fn expand_prefix(x: &PadicInt, depth: usize, initial: usize) -> Result<Expansion, SchneiderError> {
    let full = x.precision();
    let mut working = initial.clamp(2.min(full), full);
    loop {
        let e = match DigitStream::new(&x.truncate(working)) {
            Ok(stream) => stream.expand(depth),
            Err(SchneiderError::ZeroInput) if working < full => {
                working = (2 * working).min(full);
                continue;
            }
            Err(e) => return Err(e),
        };
        if e.status == ExpansionStatus::Complete {
            let used: usize = e.pairs.iter().map(|d| d.a as usize).sum();
            return Ok(Expansion { remaining_precision: Some(full - used), ..e });
        }
        if working == full {
            return Ok(e);
        }
        working = (2 * working).min(full);
    }
}
