//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line each, and exits non-zero if any failed.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use cmcheck::algebra::ZPoly;
use cmcheck::classpoly::{
    class_number, direct_cm_test, effective_h_lower_bound, hilbert_class_poly, hilbert_class_poly_adaptive,
    is_fundamental,
};
use cmcheck::cmtest::sampler::{prime_ideals_up_to, Sampler, SamplerStats};
use cmcheck::cmtest::{find_discriminant, one_sided_non_cm, randomized_cm_test, survey_ratio, OneSidedVerdict};
use cmcheck::gl2galois::certificate::witness_soundness_sweep;
use cmcheck::gl2galois::{
    generate_subgroup, is_solvable, trace_zero_count_by_classes, trace_zero_count_enumerated, trace_zero_ratio,
};
use cmcheck::{CurveNF, DirectVerdict, GL2Elem, NumberField, SamplerConfig, SamplerMode, VerdictKind};

const SEED: u64 = 20240601;

const QUINTICS: [[i64; 6]; 8] = [
    [-51, -22, -33, -65, -12, 1],
    [19, -92, 14, 28, -78, 1],
    [92, 96, 25, 7, 25, 1],
    [93, 61, 41, -71, 71, 1],
    [62, -36, -17, 84, 23, 1],
    [-10, 51, 78, -74, -94, 1],
    [-39, -78, 5, 97, 79, 1],
    [-93, -34, 99, -17, 68, 1],
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cm_curve(d: i64) -> CurveNF {
    let h = hilbert_class_poly_adaptive(d).unwrap();
    let field = NumberField::new(h.to_zpoly()).unwrap();
    CurveNF::from_j(&field.theta())
}

fn quintic_curve(cs: &[i64; 6]) -> CurveNF {
    let field = NumberField::new(ZPoly::from_i64s(cs)).unwrap();
    CurveNF::from_j(&field.theta())
}

/// Fundamental D < 0 with |D| ≤ 200 and h(D) ≤ 3.
fn regression_discs() -> Vec<i64> {
    (3..=200i64).map(|n| -n).filter(|&d| is_fundamental(d) && class_number(d).unwrap() <= 3).collect()
}

// Independent class numbers from the analytic class number formula and the
// conductor formula, with a Kronecker symbol written from scratch.

fn jacobi(mut a: i64, mut n: i64) -> i64 {
    a = a.rem_euclid(n);
    let mut s = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                s = -s;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        a %= n;
    }
    if n == 1 {
        s
    } else {
        0
    }
}

fn kron(d: i64, mut m: i64) -> i64 {
    let mut s = 1;
    while m % 2 == 0 {
        m /= 2;
        s *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    if m == 1 {
        s
    } else {
        s * jacobi(d, m)
    }
}

fn squarefree(n: i64) -> bool {
    (2..).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0)
}

fn fundamental(d: i64) -> bool {
    let n = -d;
    match n % 4 {
        3 => squarefree(n),
        0 => matches!((n / 4) % 4, 1 | 2) && squarefree(n / 4),
        _ => false,
    }
}

fn units(d: i64) -> i64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

fn h_fundamental(d: i64) -> i64 {
    let n = -d;
    let s: i64 = (1..n).map(|a| kron(d, a) * a).sum();
    -units(d) * s / (2 * n)
}

fn h_oracle(d: i64) -> i64 {
    let f = (1..).take_while(|f| f * f <= -d).filter(|f| d % (f * f) == 0 && fundamental(d / (f * f))).last().unwrap();
    let d0 = d / (f * f);
    let mut num = h_fundamental(d0) * f;
    let mut m = f;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            num = num / p * (p - kron(d0, p));
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    num * units(d) / units(d0)
}

fn c1_table1_cm_row() -> Outcome {
    let e = cm_curve(-59);
    let deg = e.field().degree();
    let small = survey_ratio(&e, 10_000);
    let full = survey_ratio(&e, 100_000);
    check(
        deg == 3 && (small.ratio - 0.50).abs() <= 0.06 && (full.ratio - 0.5073).abs() <= 0.005,
        format!(
            "D=-59 degree {deg}; 1e4: {}/{} = {:.4}; 1e5: {}/{} = {:.4} (published 0.5073)",
            small.numerator, small.denominator, small.ratio, full.numerator, full.denominator, full.ratio
        ),
    )
}

fn c2_table2_quintic_row() -> Outcome {
    let e = quintic_curve(&QUINTICS[0]);
    let small = survey_ratio(&e, 10_000);
    let full = survey_ratio(&e, 100_000);
    check(
        small.ratio <= 0.02 && (full.ratio - 0.0032).abs() <= 0.001,
        format!(
            "1e4: {}/{} = {:.4}; 1e5: {}/{} = {:.4} (published 0.0032)",
            small.numerator, small.denominator, small.ratio, full.numerator, full.denominator, full.ratio
        ),
    )
}

fn c3_gaussian_supersingular_primes() -> Outcome {
    let q = NumberField::rationals();
    let e = CurveNF::new(q.from_int(1), q.from_int(0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in cmcheck::algebra::arith::primes_up_to(2000).into_iter().filter(|&p| p >= 5) {
        let prime = &q.split_prime(p).unwrap()[0];
        let fd = e.reduce_at_prime(prime).unwrap().frobenius_data(&mut rng);
        checked += 1;
        if fd.supersingular != (p % 4 == 3) {
            bad.push(p);
        }
    }
    check(bad.is_empty(), format!("{checked} primes in [5, 2000], exceptions {bad:?}"))
}

fn c4_discriminant_recovery() -> Outcome {
    let mut used = Vec::new();
    let mut wrong = Vec::new();
    for d in regression_discs() {
        let e = cm_curve(d);
        let cfg = SamplerConfig::new(10_000, SamplerMode::ExactUniform, SEED);
        let s = find_discriminant(&e, 25, 2, &cfg).unwrap();
        if s.estimate.d_candidate != Some(BigInt::from(d)) || !s.estimate.consistent || s.ordinary_used > 25 {
            wrong.push((d, s.estimate.d_candidate.map(|x| x.to_string())));
        }
        used.push(s.ordinary_used);
    }
    let mut sorted = used.clone();
    sorted.sort();
    let median = sorted[sorted.len() / 2];
    check(
        wrong.is_empty() && median <= 5,
        format!("{} curves, ordinary primes used {used:?}, median {median}, wrong {wrong:?}", used.len()),
    )
}

fn c5_one_sided_soundness() -> Outcome {
    let cfg = SamplerConfig::new(10_000, SamplerMode::ExactUniform, SEED);
    let false_certs: Vec<i64> = regression_discs()
        .into_iter()
        .filter(|&d| one_sided_non_cm(&cm_curve(d), 25, &cfg).unwrap().verdict == OneSidedVerdict::CertifiedNotCM)
        .collect();
    let reports: Vec<_> = QUINTICS.iter().map(|cs| one_sided_non_cm(&quintic_curve(cs), 10, &cfg).unwrap()).collect();
    let certified = reports.iter().filter(|r| r.verdict == OneSidedVerdict::CertifiedNotCM).count();
    let used: Vec<usize> = reports.iter().map(|r| r.ordinary_used).collect();
    check(
        false_certs.is_empty() && certified == 8,
        format!(
            "false certifications {false_certs:?}; quintics certified {certified}/8 using {used:?} ordinary primes"
        ),
    )
}

fn c6_class_number_oracle() -> Outcome {
    let mut mismatches = Vec::new();
    let mut below = Vec::new();
    let mut count = 0;
    for n in 3..=10_000i64 {
        let d = -n;
        if !matches!(n % 4, 0 | 3) {
            continue;
        }
        count += 1;
        let h = class_number(d).unwrap() as i64;
        if h != h_oracle(d) {
            mismatches.push(d);
        }
        if is_fundamental(d) && (h as f64) < effective_h_lower_bound(d).unwrap() {
            below.push(d);
        }
    }
    check(
        mismatches.is_empty() && below.is_empty(),
        format!("{count} discriminants; mismatches {mismatches:?}; below lower bound {below:?}"),
    )
}

fn c7_hilbert_polynomials() -> Outcome {
    let coeffs = |d: i64| -> Vec<i64> {
        hilbert_class_poly(d, None).unwrap().coeffs.iter().map(|c| c.try_into().unwrap()).collect()
    };
    let exact = coeffs(-4) == [-1728, 1] && coeffs(-3) == [0, 1] && coeffs(-7) == [3375, 1];
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut count = 0;
    for d in (3..=400i64).map(|n| -n).filter(|&d| is_fundamental(d)) {
        count += 1;
        let hp = hilbert_class_poly(d, None).unwrap();
        worst = worst.max(hp.max_rounding_error);
        let field = NumberField::new(hp.to_zpoly()).unwrap();
        let v = direct_cm_test(&CurveNF::from_j(&field.theta()), 1000).unwrap();
        if hp.max_rounding_error >= 1e-3 || v != (DirectVerdict::Cm { d }) {
            failures.push(d);
        }
    }
    check(
        exact && failures.is_empty(),
        format!("small cases exact: {exact}; {count} fundamental D, worst margin {worst:.2e}, failures {failures:?}"),
    )
}

fn c8_trace_zero_ratio() -> Outcome {
    let r3 = trace_zero_ratio(3).unwrap();
    let r5 = trace_zero_ratio(5).unwrap();
    let mut disagree = Vec::new();
    let mut max_scaled: f64 = 0.0;
    for ell in cmcheck::algebra::arith::primes_up_to(31).into_iter().filter(|&l| l > 2) {
        if trace_zero_count_enumerated(ell) != trace_zero_count_by_classes(ell) {
            disagree.push(ell);
        }
        let r = trace_zero_ratio(ell).unwrap();
        max_scaled = max_scaled.max(ell as f64 * *r.numer() as f64 / *r.denom() as f64);
    }
    check(
        r3 == Ratio::new(3, 8) && r5 == Ratio::new(5, 24) && disagree.is_empty() && max_scaled <= 2.0,
        format!("r_3 = {r3}, r_5 = {r5}; methods disagree at {disagree:?}; max ℓ·r_ℓ = {max_scaled:.4}"),
    )
}

fn c9_gl2_machinery() -> Outcome {
    let mut orders = Vec::new();
    let mut ok = true;
    // SL2 generators plus diag(g, 1) for a primitive root g
    for (ell, g) in [(3u32, 2), (5, 2), (7, 3)] {
        let gens = [
            GL2Elem::new(ell, [1, 1, 0, 1]).unwrap(),
            GL2Elem::new(ell, [0, 1, -1, 0]).unwrap(),
            GL2Elem::new(ell, [g, 0, 0, 1]).unwrap(),
        ];
        let g = generate_subgroup(ell, &gens).unwrap();
        let l = ell as usize;
        ok &= g.order() == (l * l - 1) * (l * l - l);
        orders.push(g.order());
    }
    let gl2_3 = generate_subgroup(
        3,
        &[
            GL2Elem::new(3, [1, 1, 0, 1]).unwrap(),
            GL2Elem::new(3, [0, 1, -1, 0]).unwrap(),
            GL2Elem::new(3, [2, 0, 0, 1]).unwrap(),
        ],
    )
    .unwrap();
    let sl2_5 = generate_subgroup(5, &[GL2Elem::new(5, [1, 1, 0, 1]).unwrap(), GL2Elem::new(5, [1, 0, 1, 1]).unwrap()])
        .unwrap();
    let solv3 = is_solvable(&gl2_3);
    let solv5 = is_solvable(&sl2_5);
    let mut sweep = Vec::new();
    for ell in [5, 7] {
        let r = witness_soundness_sweep(ell).unwrap();
        ok &= r.counterexamples.is_empty();
        sweep.push(format!(
            "ℓ={ell}: {} pair subgroups, {} triples, {} counterexamples",
            r.pair_subgroups,
            r.triple_subgroups,
            r.counterexamples.len()
        ));
    }
    check(
        ok && solv3 && !solv5 && sl2_5.order() == 120,
        format!(
            "orders {orders:?}; GL2(F3) solvable {solv3}; SL2(F5) order {} solvable {solv5}; {}",
            sl2_5.order(),
            sweep.join("; ")
        ),
    )
}

fn c10_sampler() -> Outcome {
    let k = NumberField::new(ZPoly::from_i64s(&[1, 0, 1])).unwrap();
    let ideals = prime_ideals_up_to(&k, 200);
    let s = Sampler::new(k, SamplerConfig::new(200, SamplerMode::ExactUniform, SEED)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut stats = SamplerStats::default();
    let draws = 100_000;
    let mut counts: HashMap<(u64, Vec<u64>), u64> = HashMap::new();
    for _ in 0..draws {
        let p = s.sample(&mut rng, &mut stats).unwrap();
        *counts.entry((p.p, p.g.coeffs().to_vec())).or_default() += 1;
    }
    let expect = draws as f64 / ideals.len() as f64;
    let chi2: f64 = ideals
        .iter()
        .map(|i| (counts.get(&(i.p, i.g.coeffs().to_vec())).copied().unwrap_or(0) as f64 - expect).powi(2) / expect)
        .sum();
    let p_value = 1.0 - ChiSquared::new((ideals.len() - 1) as f64).unwrap().cdf(chi2);
    let covered = counts.len() == ideals.len();

    let mut fields: Vec<Arc<NumberField>> =
        regression_discs().into_iter().map(|d| cm_curve(d).field().clone()).collect();
    fields.extend(QUINTICS.iter().map(|cs| NumberField::new(ZPoly::from_i64s(cs)).unwrap()));
    let mut failures = 0;
    let mut restarts = 0;
    for f in &fields {
        let s = Sampler::new(f.clone(), SamplerConfig::new(10_000, SamplerMode::PaperFaithful, SEED)).unwrap();
        let mut stats = SamplerStats::default();
        for _ in 0..200 {
            failures += s.sample(&mut rng, &mut stats).is_err() as usize;
        }
        restarts += stats.restarts();
    }
    check(
        covered && p_value > 0.001 && failures == 0,
        format!(
            "{} ideals, chi2 {chi2:.1}, p = {p_value:.3}; faithful mode on {} fields: {failures} budget failures, {restarts} restarts",
            ideals.len(),
            fields.len()
        ),
    )
}

fn c11_end_to_end() -> Outcome {
    let cfg = SamplerConfig::new(10_000, SamplerMode::ExactUniform, SEED);
    let mut wrong = Vec::new();
    let mut cm_fracs = Vec::new();
    for d in regression_discs() {
        let v = randomized_cm_test(&cm_curve(d), 200, &cfg).unwrap();
        cm_fracs.push(v.fraction);
        if !matches!(v.kind, VerdictKind::ProbablyCM | VerdictKind::CertifiedCM) {
            wrong.push(format!("D={d}: {:?}", v.kind));
        }
    }
    let mut non_cm_fracs = Vec::new();
    for (i, cs) in QUINTICS.iter().enumerate() {
        let v = randomized_cm_test(&quintic_curve(cs), 200, &cfg).unwrap();
        non_cm_fracs.push(v.fraction);
        if !matches!(v.kind, VerdictKind::ProbablyNotCM | VerdictKind::CertifiedNotCM) {
            wrong.push(format!("quintic {}: {:?}", i + 1, v.kind));
        }
    }
    let min_cm = cm_fracs.iter().cloned().fold(1.0, f64::min);
    let max_non = non_cm_fracs.iter().cloned().fold(0.0, f64::max);
    check(
        wrong.is_empty(),
        format!(
            "{} CM + {} non-CM curves; CM fractions ≥ {min_cm:.3}, non-CM ≤ {max_non:.3}; misclassified {wrong:?}",
            cm_fracs.len(),
            non_cm_fracs.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("CM density row D=-59", c1_table1_cm_row),
        ("non-CM density row, first quintic", c2_table2_quintic_row),
        ("supersingular primes of y^2=x^3+x", c3_gaussian_supersingular_primes),
        ("discriminant recovery", c4_discriminant_recovery),
        ("one-sided non-CM certificate", c5_one_sided_soundness),
        ("class numbers vs analytic formula", c6_class_number_oracle),
        ("Hilbert class polynomials", c7_hilbert_polynomials),
        ("trace-zero proportion in GL2", c8_trace_zero_ratio),
        ("GL2 subgroups and witness soundness", c9_gl2_machinery),
        ("prime ideal sampler", c10_sampler),
        ("end-to-end decisions", c11_end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS  {:>2} {name} ({secs:.1}s): {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL  {:>2} {name} ({secs:.1}s): {d}", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
