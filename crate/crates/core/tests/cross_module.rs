use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schneider_core::montecarlo::{run_haar, ExperimentConfig, Mode};
use schneider_core::padic::haar_sample;
use schneider_core::schneider::{
    convergents, expand_padic, expand_prefix, expand_rational, fixed_point, point_from_word, rational_tail_check,
    tail_fixed_point,
};
use schneider_core::thermo::{
    bowen_dimension, dimension_from_measure, gibbs_weights, pressure_truncated, spectrum_full, DigitSet,
};
use schneider_core::{DigitPair, ExactRational, ExpansionStatus, PadicInt, Prime, TailStatus};

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn prime() -> impl Strategy<Value = Prime> {
    proptest::sample::select(PRIMES.to_vec()).prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convergents_of_haar_points_approximate_to_the_next_digit(p in prime(), seed in any::<u64>()) {
        let precision = 400;
        let x = haar_sample(p, precision, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assume!(!x.is_unit());
        let e = expand_prefix(&x, 20, 64).unwrap();
        prop_assert_eq!(e.status, ExpansionStatus::Complete);
        for c in convergents(p, &e.pairs[..19]) {
            let reach = e.digit_sum(c.index + 1) as usize;
            prop_assert!(reach < precision);
            let q = PadicInt::from_rational(&c.value(), p, precision).unwrap();
            prop_assert_eq!(x.checked_sub(&q).unwrap().valuation().unwrap(), reach);
        }
    }

    #[test]
    fn gibbs_words_round_trip_through_rationals(p in prime(), seed in any::<u64>(), t in 0.5f64..3.0) {
        let spec = gibbs_weights(p, t, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word: Vec<DigitPair> = (0..12).map(|_| spec.sample(&mut rng)).collect();
        let x = point_from_word(p, &word, &tail_fixed_point(p)).unwrap();
        let e = expand_rational(&x, p, 16).unwrap();
        prop_assert_eq!(&e.pairs[..12], &word[..]);
        let tail = DigitPair::new(1, p.get() - 1, p).unwrap();
        prop_assert!(e.pairs[12..].iter().all(|d| *d == tail));
        let start = word.iter().rposition(|d| *d != tail).map_or(1, |i| i + 2);
        prop_assert_eq!(rational_tail_check(&x, p, 64).unwrap(), TailStatus::TailReached(start));
    }

    #[test]
    fn fixed_points_expand_periodically(p in prime(), a in 1u32..6, b_seed in any::<u32>()) {
        let b = 1 + b_seed % (p.get() - 1);
        let x = fixed_point(a, b, p, 240).unwrap();
        let e = expand_padic(&x, 8).unwrap();
        prop_assert_eq!(e.len(), 8);
        prop_assert!(e.pairs.iter().all(|d| d.a == a && d.b == b));
    }
}

#[test]
fn gibbs_measures_attain_the_spectrum() {
    for p in PRIMES.map(|p| Prime::new(p).unwrap()) {
        for t in [0.3, 0.7, 1.0, 2.0, 4.0] {
            let spec = gibbs_weights(p, t, None).unwrap();
            let point = spectrum_full(p, spec.lyapunov()).unwrap();
            assert!((point.t_alpha.unwrap() - t).abs() < 1e-9, "p={p} t={t}");
            assert!((point.dimension - dimension_from_measure(&spec)).abs() < 1e-10, "p={p} t={t}");
        }
    }
}

#[test]
fn bowen_dimension_is_the_pressure_root() {
    for p in PRIMES.map(|p| Prime::new(p).unwrap()) {
        for n in 1..=6 {
            let d = bowen_dimension(p, &DigitSet::range(n).unwrap());
            assert!(pressure_truncated(p, n, d).abs() < 1e-10, "p={p} n={n}");
        }
    }
}

#[test]
fn haar_frequencies_follow_the_unit_temperature_law() {
    let p = Prime::new(5).unwrap();
    let report = run_haar(&ExperimentConfig::new(p, Mode::Haar, 200, 80, 3)).unwrap();
    let law = gibbs_weights(p, 1.0, None).unwrap();
    for f in &report.frequencies {
        assert!((f.expected - law.digit_probability(f.a)).abs() < 1e-15);
        assert!((f.frequency - f.expected).abs() < 5.0 * f.sigma(report.digits_total) + 1e-12, "digit {}", f.a);
    }
    assert!((report.alpha_theory - law.lyapunov()).abs() < 1e-14);
}

#[test]
fn truncated_and_exact_expansions_agree_on_integers() {
    let p = Prime::new(3).unwrap();
    for k in 1..200i64 {
        let x = ExactRational::from_integer(BigInt::from(3 * k));
        let exact = expand_rational(&x, p, 6).unwrap();
        let padic = expand_padic(&PadicInt::from_rational(&x, p, 300).unwrap(), 6).unwrap();
        assert_eq!(exact.pairs, padic.pairs, "k={k}");
    }
}
