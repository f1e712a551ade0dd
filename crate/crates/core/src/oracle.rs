//! Slow, independent reference computations used to cross-check the fast
//! paths in tests and in `verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::padic::Prime;
use crate::schneider::DigitPair;

/// Evaluates p^a1/(b1 + p^a2/(b2 + … + p^an/bn)) from the innermost level out.
pub fn bottom_up_value(prime: Prime, pairs: &[DigitPair]) -> BigRational {
    let mut value = BigRational::zero();
    for d in pairs.iter().rev() {
        let scale = BigRational::from_integer(BigInt::from(prime.pow_big(d.a)));
        value = scale / (BigRational::from_integer(BigInt::from(d.b)) + value);
    }
    value
}

/// (p−1) Σ_{k=1}^{n} p^{−tk} by plain summation, or the full series when
/// `truncation` is `None` (summed until terms vanish).
pub fn partition_sum(p: u32, t: f64, truncation: Option<u32>) -> f64 {
    let q = f64::from(p).powf(-t);
    let mut total = 0.0;
    let mut term = q;
    let mut k = 1u32;
    loop {
        if let Some(n) = truncation {
            if k > n {
                break;
            }
        } else if term < 1e-300 || term < total * 1e-18 {
            break;
        }
        total += term;
        term *= q;
        k += 1;
    }
    f64::from(p - 1) * total
}

/// Central finite difference with step h.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Explicit formula for the n = 2 truncated spectrum on (log p, 2 log p):
///
/// L(α) = (log(p−1) + log log p)/α + log(α − log p)(1/α − 1/log p)
///        + log(2 log p − α)(1/log p − 2/α).
pub fn truncated_two_spectrum(p: u32, alpha: f64) -> f64 {
    let lp = f64::from(p).ln();
    (f64::from(p - 1).ln() + lp.ln()) / alpha
        + (alpha - lp).ln() * (1.0 / alpha - 1.0 / lp)
        + (2.0 * lp - alpha).ln() * (1.0 / lp - 2.0 / alpha)
}
