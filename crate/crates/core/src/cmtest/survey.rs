//! Exhaustive supersingular-prime density over all prime ideals of bounded norm.

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::arith::primes_up_to;
use crate::ellcurve::CurveNF;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SurveyRow {
    /// Prime ideals of norm ≤ x with good, supersingular reduction.
    pub numerator: u64,
    /// Prime ideals of norm ≤ x.
    pub denominator: u64,
    pub ratio: f64,
    /// Ideals above primes dividing the index of Z[θ]; counted in the
    /// denominator only.
    pub index_ideals: u64,
    /// Ideals where the model does not reduce (bad reduction or p < 5).
    pub bad_reduction: u64,
}

#[derive(Default)]
struct Tally {
    num: u64,
    den: u64,
    index: u64,
    bad: u64,
}

fn tally_prime(curve: &CurveNF, p: u64, x: u64) -> Tally {
    let field = curve.field();
    let mut t = Tally::default();
    let index_risk = field.index_divisible_by(p);
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    for prime in field.kummer_factors(p) {
        if prime.norm.to_u64().is_none_or(|n| n > x) {
            continue;
        }
        t.den += 1;
        if index_risk {
            t.index += 1;
            continue;
        }
        match curve.reduce_at_ideal(&prime) {
            Ok(red) => {
                if red.frobenius_data(&mut rng).supersingular {
                    t.num += 1;
                }
            }
            Err(_) => t.bad += 1,
        }
    }
    t
}

/// `π_{E,0}(x) / #{P : N(P) ≤ x}`, deterministic and parallel over rational primes.
pub fn survey_ratio(curve: &CurveNF, x: u64) -> SurveyRow {
    let t = primes_up_to(x).into_par_iter().map(|p| tally_prime(curve, p, x)).reduce(Tally::default, |a, b| Tally {
        num: a.num + b.num,
        den: a.den + b.den,
        index: a.index + b.index,
        bad: a.bad + b.bad,
    });
    SurveyRow {
        numerator: t.num,
        denominator: t.den,
        ratio: if t.den == 0 { 0.0 } else { t.num as f64 / t.den as f64 },
        index_ideals: t.index,
        bad_reduction: t.bad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::NumberField;

    #[test]
    fn gaussian_curve_over_q_matches_deuring() {
        let q = NumberField::rationals();
        let e = CurveNF::new(q.from_int(1), q.from_int(0)).unwrap();
        let row = survey_ratio(&e, 10_000);
        let primes = primes_up_to(10_000);
        let expect = primes.iter().filter(|&&p| p >= 5 && p % 4 == 3).count() as u64;
        assert_eq!(row.denominator, primes.len() as u64);
        assert_eq!(row.numerator, expect);
        // 618 primes = 3 mod 4 above 3, out of 1229
        assert_eq!((row.numerator, row.denominator), (618, 1229));
        assert_eq!(row.bad_reduction, 2);
    }

    #[test]
    fn survey_is_deterministic() {
        let q = NumberField::rationals();
        let e = CurveNF::from_j(&q.from_int(1));
        assert_eq!(survey_ratio(&e, 3000), survey_ratio(&e, 3000));
    }
}
