//! Fixed-precision p-adic integers.
//!
//! A [`PadicInt`] is an element of Z_p known modulo p^N, stored as its
//! base-p digits, least significant first. Operations never invent digits:
//! the precision of a result is the smallest precision of its inputs, and
//! shifting right by k digits costs k digits of precision.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("all {precision} known digits are zero")]
    PrecisionExhausted { precision: usize },
    #[error("input is zero")]
    ZeroInput,
    #[error("element is not a unit (digit 0 is zero)")]
    NotAUnit,
    #[error("operands have different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),
    #[error("rational has negative {0}-adic valuation")]
    NegativeValuation(u32),
    #[error("digit {digit} out of range for p = {prime}")]
    DigitOutOfRange { digit: u64, prime: u32 },
    #[error("precision must be at least {min}, got {got}")]
    PrecisionTooSmall { min: usize, got: usize },
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}

/// A prime number, checked by trial division at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    /// Largest accepted prime. Digit products must fit comfortably in u64.
    pub const MAX: u64 = (1 << 31) - 1;

    pub fn new(value: u64) -> Result<Self, PadicError> {
        if !(2..=Self::MAX).contains(&value) || !is_prime(value) {
            return Err(PadicError::NotPrime(value));
        }
        Ok(Prime(value as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Natural logarithm of p.
    pub fn ln(self) -> f64 {
        f64::from(self.0).ln()
    }

    pub fn pow_big(self, exp: u32) -> BigUint {
        BigUint::from(self.0).pow(exp)
    }
}

impl TryFrom<u64> for Prime {
    type Error = PadicError;
    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Prime::new(value)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        u64::from(p.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `u` modulo the prime `p` by the extended Euclidean algorithm.
/// `u` must not be divisible by `p`.
pub(crate) fn inverse_mod_prime(u: u64, p: u32) -> u32 {
    let p = i64::from(p);
    let (mut r0, mut r1) = (p, (u % p as u64) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(p) as u32
}

/// Exact rational number with arbitrary-precision numerator and denominator.
///
/// Always stored in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Option<Self> {
        let den = denominator.into();
        if den.is_zero() {
            return None;
        }
        Some(ExactRational(BigRational::new(numerator.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    /// Exact p-adic valuation; may be negative.
    pub fn valuation(&self, p: Prime) -> Result<i64, PadicError> {
        rational_valuation(self, p)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = PadicError;

    /// Accepts `m/n` or a bare integer `m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PadicError::ParseRational(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        ExactRational::new(num, den).ok_or_else(err)
    }
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: Prime) -> u64 {
    debug_assert!(!n.is_zero());
    let p_big = BigInt::from(p.get());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p_big);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Exact valuation v_p(x) of a nonzero rational.
pub fn rational_valuation(x: &ExactRational, p: Prime) -> Result<i64, PadicError> {
    if x.is_zero() {
        return Err(PadicError::ZeroInput);
    }
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Element of Z_p known modulo p^N, with N = `digits.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    prime: Prime,
    digits: Vec<u32>,
}

impl PadicInt {
    pub fn from_digits(prime: Prime, digits: Vec<u32>) -> Result<Self, PadicError> {
        if digits.is_empty() {
            return Err(PadicError::PrecisionTooSmall { min: 1, got: 0 });
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= prime.get()) {
            return Err(PadicError::DigitOutOfRange { digit: u64::from(d), prime: prime.get() });
        }
        Ok(PadicInt { prime, digits })
    }

    pub fn zero(prime: Prime, precision: usize) -> Self {
        assert!(precision >= 1);
        PadicInt { prime, digits: vec![0; precision] }
    }

    pub fn one(prime: Prime, precision: usize) -> Self {
        let mut x = Self::zero(prime, precision);
        x.digits[0] = 1;
        x
    }

    /// Residue of an integer (any sign) modulo p^N.
    pub fn from_integer(n: &BigInt, prime: Prime, precision: usize) -> Self {
        assert!(precision >= 1);
        let modulus = BigInt::from(prime.pow_big(precision as u32));
        let r = n.mod_floor(&modulus);
        Self::from_biguint(prime, r.magnitude(), precision)
    }

    /// Embeds a rational with v_p ≥ 0 into Z_p at the given precision.
    pub fn from_rational(x: &ExactRational, prime: Prime, precision: usize) -> Result<Self, PadicError> {
        if precision == 0 {
            return Err(PadicError::PrecisionTooSmall { min: 1, got: 0 });
        }
        let p_big = BigInt::from(prime.get());
        if x.denom().is_multiple_of(&p_big) {
            return Err(PadicError::NegativeValuation(prime.get()));
        }
        let modulus = BigInt::from(prime.pow_big(precision as u32));
        let g = x.denom().extended_gcd(&modulus);
        debug_assert!(g.gcd.is_one());
        let value = (x.numer() * g.x).mod_floor(&modulus);
        Ok(Self::from_biguint(prime, value.magnitude(), precision))
    }

    /// Base-p digits of `value mod p^precision`.
    pub fn from_biguint(prime: Prime, value: &BigUint, precision: usize) -> Self {
        let p = u64::from(prime.get());
        // largest power of p that fits in a u32 chunk
        let mut chunk_len = 1usize;
        let mut chunk = p;
        while chunk * p <= u64::from(u32::MAX) {
            chunk *= p;
            chunk_len += 1;
        }
        let chunk_big = BigUint::from(chunk);
        let mut digits = Vec::with_capacity(precision);
        let mut rest = value.clone();
        while digits.len() < precision {
            let (q, r) = rest.div_rem(&chunk_big);
            let mut r = r.to_u64_digits().first().copied().unwrap_or(0);
            for _ in 0..chunk_len {
                if digits.len() == precision {
                    break;
                }
                digits.push((r % p) as u32);
                r /= p;
            }
            rest = q;
        }
        PadicInt { prime, digits }
    }

    /// Canonical representative in [0, p^N).
    pub fn to_biguint(&self) -> BigUint {
        // Horner over chunks of k digits, with p^k < 2^32
        let p = u64::from(self.prime.get());
        let mut k = 1;
        while p.pow(k + 1) <= u64::from(u32::MAX) {
            k += 1;
        }
        let mut acc = BigUint::zero();
        for chunk in self.digits.rchunks(k as usize) {
            let word = chunk.iter().rev().fold(0u64, |w, &d| w * p + u64::from(d));
            acc = acc * p.pow(chunk.len() as u32) + word;
        }
        acc
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn is_unit(&self) -> bool {
        self.digits[0] != 0
    }

    /// Index of the first nonzero digit.
    pub fn valuation(&self) -> Result<usize, PadicError> {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .ok_or(PadicError::PrecisionExhausted { precision: self.precision() })
    }

    /// Same element at a lower precision.
    pub fn truncate(&self, precision: usize) -> Self {
        assert!((1..=self.precision()).contains(&precision));
        PadicInt { prime: self.prime, digits: self.digits[..precision].to_vec() }
    }

    /// Exact division by p^k of an element with valuation ≥ k; drops k digits.
    pub fn shift_right(&self, k: usize) -> Self {
        assert!(k < self.precision(), "shift would exhaust precision");
        debug_assert!(self.digits[..k].iter().all(|&d| d == 0));
        PadicInt { prime: self.prime, digits: self.digits[k..].to_vec() }
    }

    fn check_prime(&self, other: &Self) -> Result<(), PadicError> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let n = self.precision().min(other.precision());
        let p = u64::from(self.prime.get());
        let mut carry = 0u64;
        let digits = (0..n)
            .map(|i| {
                let s = u64::from(self.digits[i]) + u64::from(other.digits[i]) + carry;
                carry = s / p;
                (s % p) as u32
            })
            .collect();
        Ok(PadicInt { prime: self.prime, digits })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let n = self.precision().min(other.precision());
        let p = i64::from(self.prime.get());
        let mut borrow = 0i64;
        let digits = (0..n)
            .map(|i| {
                let mut d = i64::from(self.digits[i]) - i64::from(other.digits[i]) - borrow;
                borrow = 0;
                if d < 0 {
                    d += p;
                    borrow = 1;
                }
                d as u32
            })
            .collect();
        Ok(PadicInt { prime: self.prime, digits })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let n = self.precision().min(other.precision());
        let p = u128::from(self.prime.get());
        let mut digits = Vec::with_capacity(n);
        let mut carry = 0u128;
        for k in 0..n {
            let mut column = carry;
            for i in 0..=k {
                column += u128::from(self.digits[i]) * u128::from(other.digits[k - i]);
            }
            digits.push((column % p) as u32);
            carry = column / p;
        }
        Ok(PadicInt { prime: self.prime, digits })
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.prime, self.precision())
            .checked_sub(self)
            .expect("same prime")
    }

    /// Multiplies by a small nonnegative integer.
    pub fn scale(&self, k: u64) -> Self {
        let p = u128::from(self.prime.get());
        let mut carry = 0u128;
        let digits = self
            .digits
            .iter()
            .map(|&d| {
                let s = u128::from(d) * u128::from(k) + carry;
                carry = s / p;
                (s % p) as u32
            })
            .collect();
        PadicInt { prime: self.prime, digits }
    }

    /// Adds a small nonnegative integer.
    pub fn add_small(&self, k: u64) -> Self {
        let p = u128::from(self.prime.get());
        let mut carry = u128::from(k);
        let digits = self
            .digits
            .iter()
            .map(|&d| {
                let s = u128::from(d) + carry;
                carry = s / p;
                (s % p) as u32
            })
            .collect();
        PadicInt { prime: self.prime, digits }
    }

    /// Inverse of a unit at the same precision.
    ///
    /// Starts from the inverse of digit 0 modulo p and runs the Newton
    /// iteration y ← y(2 − u·y), doubling the number of correct digits
    /// each round.
    pub fn unit_inverse(&self) -> Result<Self, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotAUnit);
        }
        let n = self.precision();
        let p = self.prime;
        let mut y = PadicInt::zero(p, n);
        y.digits[0] = inverse_mod_prime(u64::from(self.digits[0]), p.get());
        let mut correct = 1usize;
        while correct < n {
            correct = (2 * correct).min(n);
            let u = self.truncate(correct);
            let yk = y.truncate(correct);
            let uy = u.checked_mul(&yk)?;
            let two_minus = PadicInt::zero(p, correct).add_small(2).checked_sub(&uy)?;
            let next = yk.checked_mul(&two_minus)?;
            y.digits[..correct].copy_from_slice(&next.digits);
        }
        Ok(y)
    }
}

impl fmt::Display for PadicInt {
    /// Most significant digit first, e.g. `...1101_2` for 13 at precision 4.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.digits.iter().rev().map(|d| d.to_string()).collect();
        let sep = if self.prime.get() > 10 { "," } else { "" };
        write!(f, "...{}_{}", body.join(sep), self.prime)
    }
}

/// Haar-distributed sample of pZ_p at precision N: digit 0 is zero and the
/// remaining digits are i.i.d. uniform.
pub fn haar_sample<R: Rng + ?Sized>(prime: Prime, precision: usize, rng: &mut R) -> Result<PadicInt, PadicError> {
    if precision < 2 {
        return Err(PadicError::PrecisionTooSmall { min: 2, got: precision });
    }
    let p = prime.get();
    let digits = std::iter::once(0)
        .chain((1..precision).map(|_| rng.random_range(0..p)))
        .collect();
    Ok(PadicInt { prime, digits })
}

/// True when `x` is a nonzero rational in pZ_p.
pub fn in_maximal_ideal(x: &ExactRational, p: Prime) -> bool {
    matches!(rational_valuation(x, p), Ok(v) if v >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn rat(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn modinv_bruteforce(u: u64, m: u64) -> u64 {
        (1..m).find(|y| (u * y) % m == 1).unwrap()
    }

    #[test]
    fn primality() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(7919).is_ok());
        assert_eq!(Prime::new(1), Err(PadicError::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(PadicError::NotPrime(91)));
        assert!(Prime::new(0).is_err());
    }

    #[test]
    fn valuation_examples() {
        let twelve = PadicInt::from_digits(p(2), vec![0, 0, 1, 1]).unwrap();
        assert_eq!(twelve.valuation(), Ok(2));
        let zero = PadicInt::zero(p(2), 8);
        assert_eq!(zero.valuation(), Err(PadicError::PrecisionExhausted { precision: 8 }));
        let x = PadicInt::from_rational(&rat("2/3"), p(2), 8).unwrap();
        assert_eq!(x.valuation(), Ok(1));
    }

    #[test]
    fn rational_valuation_examples() {
        assert_eq!(rational_valuation(&rat("2/3"), p(2)), Ok(1));
        assert_eq!(rational_valuation(&rat("9/4"), p(3)), Ok(2));
        assert_eq!(rational_valuation(&rat("1/5"), p(5)), Ok(-1));
        assert_eq!(rational_valuation(&rat("0"), p(5)), Err(PadicError::ZeroInput));
    }

    #[test]
    fn unit_inverse_examples() {
        for prime in [2u64, 3, 5, 7] {
            let one = PadicInt::one(p(prime), 9);
            assert_eq!(one.unit_inverse().unwrap(), one);
        }
        let three = PadicInt::from_integer(&BigInt::from(3), p(2), 4);
        let inv = three.unit_inverse().unwrap();
        assert_eq!(inv.digits(), &[1, 1, 0, 1]);
        assert_eq!(inv.to_biguint(), BigUint::from(modinv_bruteforce(3, 16)));
        let even = PadicInt::from_digits(p(2), vec![0, 1, 1]).unwrap();
        assert_eq!(even.unit_inverse(), Err(PadicError::NotAUnit));
    }

    #[test]
    fn arithmetic_examples() {
        let x = PadicInt::from_digits(p(5), vec![3, 1, 4]).unwrap();
        let zero = PadicInt::zero(p(5), 3);
        assert_eq!(x.checked_add(&zero).unwrap(), x);

        for prime in [2u64, 3, 7] {
            let pm1 = PadicInt::from_integer(&BigInt::from(prime - 1), p(prime), 3);
            let one = PadicInt::one(p(prime), 3);
            assert_eq!(pm1.checked_add(&one).unwrap().digits(), &[0, 1, 0]);
        }

        let a = PadicInt::from_integer(&BigInt::from(3), p(2), 4);
        let b = PadicInt::from_integer(&BigInt::from(11), p(2), 4);
        assert_eq!(a.checked_mul(&b).unwrap().to_biguint(), BigUint::from(33u32 % 16));

        let other = PadicInt::one(p(3), 4);
        assert_eq!(a.checked_add(&other), Err(PadicError::PrimeMismatch(2, 3)));
        assert_eq!(a.checked_mul(&other), Err(PadicError::PrimeMismatch(2, 3)));
    }

    #[test]
    fn result_precision_is_minimum() {
        let a = PadicInt::from_integer(&BigInt::from(7), p(3), 6);
        let b = PadicInt::from_integer(&BigInt::from(5), p(3), 4);
        assert_eq!(a.checked_mul(&b).unwrap().precision(), 4);
        assert_eq!(a.checked_sub(&b).unwrap().precision(), 4);
    }

    #[test]
    fn from_rational_examples() {
        let third = PadicInt::from_rational(&rat("1/3"), p(2), 4).unwrap();
        assert_eq!(third.digits(), &[1, 1, 0, 1]);
        assert_eq!(third.to_biguint(), BigUint::from(modinv_bruteforce(3, 16)));
        let minus_two = PadicInt::from_rational(&rat("-2"), p(2), 4).unwrap();
        assert_eq!(minus_two.digits(), &[0, 1, 1, 1]);
        assert_eq!(
            PadicInt::from_rational(&rat("1/2"), p(2), 4),
            Err(PadicError::NegativeValuation(2))
        );
    }

    #[test]
    fn haar_sample_shape_and_determinism() {
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = haar_sample(p(5), 20, &mut r1).unwrap();
            let b = haar_sample(p(5), 20, &mut r2).unwrap();
            assert_eq!(a.digits()[0], 0);
            assert_eq!(a, b);
        }
        assert!(haar_sample(p(5), 1, &mut r1).is_err());
    }

    #[test]
    fn haar_valuation_frequencies() {
        // mu(v_p = a) = (p-1) p^{-a}
        let prime = p(3);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let samples = 100_000;
        let mut counts = [0usize; 6];
        for _ in 0..samples {
            let x = haar_sample(prime, 24, &mut rng).unwrap();
            let v = x.valuation().unwrap();
            if v < counts.len() {
                counts[v] += 1;
            }
        }
        for (a, &c) in counts.iter().enumerate().skip(1) {
            let expected = 2.0 * 3f64.powi(-(a as i32));
            let freq = c as f64 / samples as f64;
            let sigma = (expected * (1.0 - expected) / samples as f64).sqrt();
            assert!((freq - expected).abs() < 4.0 * sigma, "a={a}: {freq} vs {expected}");
        }
    }

    #[test]
    fn haar_digit_chi_square() {
        // 10^6 digits, df = p - 1; 0.001 critical value for df = 4 is 18.467
        let prime = p(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0u64; 5];
        let mut total = 0u64;
        while total < 1_000_000 {
            let x = haar_sample(prime, 1001, &mut rng).unwrap();
            for &d in &x.digits()[1..] {
                counts[d as usize] += 1;
            }
            total += 1000;
        }
        let expected = total as f64 / 5.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 18.467, "chi2 = {chi2}");
    }

    #[test]
    fn display_and_parse() {
        let x = PadicInt::from_integer(&BigInt::from(13), p(2), 4);
        assert_eq!(x.to_string(), "...1101_2");
        assert_eq!(rat("6/4").to_string(), "3/2");
        assert_eq!(rat(" -7 ").to_string(), "-7");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn prime_strategy() -> impl Strategy<Value = Prime> {
            prop::sample::select(vec![2u64, 3, 5, 7, 11, 101]).prop_map(|v| Prime::new(v).unwrap())
        }

        proptest! {
            #[test]
            fn unit_times_inverse_is_one(prime in prime_strategy(), raw in any::<u64>(), n in 1usize..80) {
                let x = PadicInt::from_integer(&BigInt::from(raw), prime, n);
                prop_assume!(x.is_unit());
                let y = x.unit_inverse().unwrap();
                prop_assert_eq!(x.checked_mul(&y).unwrap(), PadicInt::one(prime, n));
            }

            #[test]
            fn from_rational_is_multiplicative(
                prime in prime_strategy(),
                a in -10_000i64..10_000, b in 1i64..10_000,
                c in -10_000i64..10_000, d in 1i64..10_000,
                n in 1usize..40,
            ) {
                let x = ExactRational::new(a, b).unwrap();
                let y = ExactRational::new(c, d).unwrap();
                prop_assume!(x.denom() % prime.get() != BigInt::zero());
                prop_assume!(y.denom() % prime.get() != BigInt::zero());
                let xy = ExactRational::from(x.as_ratio() * y.as_ratio());
                let lhs = PadicInt::from_rational(&x, prime, n).unwrap()
                    .checked_mul(&PadicInt::from_rational(&y, prime, n).unwrap()).unwrap();
                let rhs = PadicInt::from_rational(&xy, prime, n).unwrap();
                prop_assert_eq!(lhs, rhs);
                // round trip: result * denominator reproduces the numerator
                let back = PadicInt::from_rational(&x, prime, n).unwrap()
                    .checked_mul(&PadicInt::from_integer(x.denom(), prime, n)).unwrap();
                prop_assert_eq!(back, PadicInt::from_integer(x.numer(), prime, n));
            }

            #[test]
            fn valuation_is_additive(prime in prime_strategy(), a in 1i64..1_000_000, b in 1i64..1_000_000) {
                let n = 48;
                let x = PadicInt::from_integer(&BigInt::from(a), prime, n);
                let y = PadicInt::from_integer(&BigInt::from(b), prime, n);
                let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
                prop_assume!(vx + vy < n);
                prop_assert_eq!(x.checked_mul(&y).unwrap().valuation().unwrap(), vx + vy);
            }

            #[test]
            fn add_sub_agree_with_integers(prime in prime_strategy(), a in any::<i64>(), b in any::<i64>(), n in 1usize..30) {
                let pa = PadicInt::from_integer(&BigInt::from(a), prime, n);
                let pb = PadicInt::from_integer(&BigInt::from(b), prime, n);
                let sum = PadicInt::from_integer(&(BigInt::from(a) + b), prime, n);
                let diff = PadicInt::from_integer(&(BigInt::from(a) - b), prime, n);
                prop_assert_eq!(pa.checked_add(&pb).unwrap(), sum);
                prop_assert_eq!(pa.checked_sub(&pb).unwrap(), diff);
                prop_assert_eq!(pb.neg().checked_add(&pb).unwrap(), PadicInt::zero(prime, n));
            }
        }
    }
}
