use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cmcheck::algebra::ZPoly;
use cmcheck::classpoly::{class_number, hilbert_class_poly_adaptive, is_fundamental};
use cmcheck::cmtest::randomized_cm_test;
use cmcheck::gl2galois::{gather_observations, nonsolvable_certificate, CertVerdict};
use cmcheck::{CurveNF, NumberField, SamplerConfig, SamplerMode};

/// j-invariants of the thirteen CM orders of class number one.
const CM_J_OVER_Q: [i64; 13] = [
    0,
    1728,
    -3375,
    8000,
    -32768,
    54000,
    287496,
    -884736,
    -12288000,
    16581375,
    -884736000,
    -147197952000,
    -262537412640768000,
];

fn cm_regression_curves() -> Vec<(i64, CurveNF)> {
    (3..=200i64)
        .map(|n| -n)
        .filter(|&d| is_fundamental(d) && class_number(d).unwrap() <= 3)
        .map(|d| {
            let f = NumberField::new(hilbert_class_poly_adaptive(d).unwrap().to_zpoly()).unwrap();
            (d, CurveNF::from_j(&f.theta()))
        })
        .collect()
}

#[test]
fn certificate_never_fires_on_cm_curves() {
    for (d, e) in cm_regression_curves() {
        for ell in [5, 7] {
            let obs = gather_observations(&e, ell, 200, 11);
            let cert = nonsolvable_certificate(&obs, ell).unwrap();
            assert_eq!(cert.verdict, CertVerdict::Insufficient, "D={d}, ℓ={ell}: {cert:?}");
        }
    }
}

#[test]
fn certificate_fires_on_random_integral_j() {
    let q = NumberField::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 20 {
        let j: i64 = rng.gen_range(-1_000_000..=1_000_000);
        if CM_J_OVER_Q.contains(&j) {
            continue;
        }
        let e = CurveNF::from_j(&q.from_int(j));
        let obs = gather_observations(&e, 7, 200, 5);
        let cert = nonsolvable_certificate(&obs, 7).unwrap();
        assert_eq!(cert.verdict, CertVerdict::Certified, "j={j}: {cert:?}");
        done += 1;
    }
}

#[test]
fn randomized_test_separates_cm_from_generic() {
    let cfg = SamplerConfig::new(10_000, SamplerMode::ExactUniform, 3);
    for (d, e) in cm_regression_curves().into_iter().step_by(3) {
        let v = randomized_cm_test(&e, 200, &cfg).unwrap();
        assert!(v.fraction > 0.4, "D={d}: {}", v.fraction);
    }
    let k = NumberField::new(ZPoly::from_i64s(&[-2, 0, 0, 1])).unwrap();
    for c in 1..=5 {
        let e = CurveNF::new(k.theta(), k.from_int(c)).unwrap();
        let v = randomized_cm_test(&e, 200, &cfg).unwrap();
        assert!(v.fraction < 0.1, "B={c}: {}", v.fraction);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every integral j over Q outside the CM list has a supersingular
    /// fraction far below one half.
    #[test]
    fn generic_rational_j_is_rarely_supersingular(j in -100_000i64..100_000, seed in any::<u64>()) {
        prop_assume!(!CM_J_OVER_Q.contains(&j));
        let q = NumberField::rationals();
        let e = CurveNF::from_j(&q.from_int(j));
        let cfg = SamplerConfig::new(20_000, SamplerMode::ExactUniform, seed);
        let v = randomized_cm_test(&e, 100, &cfg).unwrap();
        prop_assert!(v.fraction < 0.15, "j={} fraction {}", j, v.fraction);
    }
}
