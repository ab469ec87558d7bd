//! Class numbers, Hilbert class polynomials, and the exhaustive CM test.
//!
//! `j(τ)` is evaluated as `E4(q)³ / Δ(q)` with `Δ = q ∏(1 - qⁿ)^24`, the
//! product taken through Euler's pentagonal series. `H_D` is assembled from
//! the reduced forms of discriminant `D` and rounded; the rounding margin is
//! the correctness gate.

pub mod fixed;
pub mod forms;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::arith::{fundamentalize, isqrt_u64, prime_divisors, primes_up_to};
use crate::algebra::ZPoly;
use crate::ellcurve::CurveNF;
use crate::error::{Error, Result};
use fixed::Complex;
pub use forms::{check_discriminant, class_number, class_numbers_up_to, reduced_forms, QuadForm};

/// Default search cap for [`direct_cm_test`].
pub const DEFAULT_DISC_CAP: u64 = 100_000;

/// True for fundamental negative discriminants.
pub fn is_fundamental(d: i64) -> bool {
    check_discriminant(d).is_ok() && fundamentalize(&BigInt::from(d)).map(|f| f == BigInt::from(d)).unwrap_or(false)
}

/// The explicit class number lower bound for a fundamental `D < 0`.
pub fn gzgo_bound(d: i64) -> Result<f64> {
    if !is_fundamental(d) {
        return Err(Error::domain(format!("{d} is not a fundamental discriminant")));
    }
    let coeff = if d.gcd(&5077) != 1 { 1.0 / 7000.0 } else { 1.0 / 55.0 };
    let product: f64 = prime_divisors(&BigInt::from(d))
        .iter()
        .map(|p| {
            let p = p.to_u64().unwrap();
            1.0 - isqrt_u64(4 * p) as f64 / (p + 1) as f64
        })
        .product();
    Ok(coeff * (d.unsigned_abs() as f64).ln() * product)
}

/// A lower bound on `h(D)`: for fundamental `D`, the larger of the explicit
/// bound and the genus-theory divisor `2^{t-1}`; otherwise `h(D)` itself.
pub fn effective_h_lower_bound(d: i64) -> Result<f64> {
    check_discriminant(d)?;
    if is_fundamental(d) {
        let t = prime_divisors(&BigInt::from(d)).len() as i32;
        Ok(gzgo_bound(d)?.max(2f64.powi(t - 1)))
    } else {
        Ok(class_number(d)? as f64)
    }
}

/// `ln X` such that every discriminant with `|D| > X` has `h(D) > n`.
///
/// Fundamental `D` with more than `log2 n + 1` prime factors are handled by
/// genus theory, the rest by the explicit bound with its smallest possible
/// Euler factor product. Non-fundamental `D = f² D₀` have `h(D₀) | h(D)` and
/// `h(D) ≥ φ(f)/3 ≥ √(f/2)/3`, which exceeds `n` once `f > 18n²`.
pub fn no_cm_threshold_ln(n: usize) -> f64 {
    let t0 = (usize::BITS - n.leading_zeros()) as usize;
    let mut factors: Vec<f64> =
        primes_up_to(10_000).into_iter().map(|p| 1.0 - isqrt_u64(4 * p) as f64 / (p + 1) as f64).collect();
    factors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let p_min: f64 = factors.iter().take(t0).product();
    7000.0 * n as f64 / p_min + 2.0 * (18.0 * (n * n) as f64).ln()
}

/// `τ = (-b + √D) / 2a` for a form, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Tau {
    pub form: QuadForm,
}

impl Tau {
    pub fn from_form(form: QuadForm) -> Result<Self> {
        if form.a <= 0 || form.discriminant() >= 0 {
            return Err(Error::domain("τ must come from a positive definite form"));
        }
        Ok(Tau { form })
    }

    pub fn re(&self) -> f64 {
        -(self.form.b as f64) / (2.0 * self.form.a as f64)
    }

    pub fn im(&self) -> f64 {
        ((-self.form.discriminant()) as f64).sqrt() / (2.0 * self.form.a as f64)
    }

    /// `-ln|q| = 2π Im τ`.
    fn log_inv_q(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.im()
    }
}

/// `j(τ)` to `prec` bits after the binary point, with an error estimate.
#[derive(Clone, Debug)]
pub struct JValue {
    pub value: Complex,
    pub prec: u32,
    pub err: f64,
}

impl JValue {
    pub fn to_f64(&self) -> (f64, f64) {
        self.value.to_f64(self.prec)
    }
}

fn sigma3(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// `j(τ)` for `τ` from a form with `|Re τ| ≤ 1/2`, `|τ| ≥ 1` (or any τ with
/// comparable imaginary part). Absolute error is below `err`.
pub fn eval_j(tau: &Tau, prec: u32) -> Result<JValue> {
    if prec < 16 {
        return Err(Error::Precision { bits: prec, reason: "at least 16 bits required".into() });
    }
    if tau.im() < 0.8 {
        return Err(Error::Precision {
            bits: prec,
            reason: format!("Im τ = {} is too small for the q-series", tau.im()),
        });
    }
    let QuadForm { a, b, .. } = tau.form;
    let n = -tau.form.discriminant();
    let log2_inv_q = tau.log_inv_q() / std::f64::consts::LN_2;
    let w = prec + log2_inv_q.ceil() as u32 + 96;

    let pi = fixed::pi(w);
    let x = fixed::mul(&pi, &fixed::sqrt(&fixed::from_int(n, w), w), w) / a;
    let theta = &pi * b / a;
    let q = Complex::new(-&x, -&theta).exp(w);
    let inv_q = Complex::new(x, theta).exp(w);

    let tiny = |z: &Complex| z.re.bits() < 8 && z.im.bits() < 8;

    // E4 = 1 + 240 Σ σ3(m) q^m
    let mut e4 = Complex::one(w);
    let mut qm = Complex::one(w);
    let mut m = 1u64;
    loop {
        qm = qm.mul(&q, w);
        if tiny(&qm) {
            break;
        }
        e4 = &e4 + &qm.scale(&(sigma3(m) * 240));
        m += 1;
    }

    // ∏(1 - q^m) = 1 + Σ_{k≥1} (-1)^k (q^{k(3k-1)/2} + q^{k(3k+1)/2})
    let mut eta = Complex::one(w);
    let mut k = 1u64;
    loop {
        let t1 = q.pow(k * (3 * k - 1) / 2, w);
        if tiny(&t1) {
            break;
        }
        let t2 = q.pow(k * (3 * k + 1) / 2, w);
        let s = &t1 + &t2;
        eta = if k % 2 == 1 { &eta - &s } else { &eta + &s };
        k += 1;
    }

    let e4_cubed = e4.square(w).mul(&e4, w);
    let eta24 = eta.pow(24, w);
    let j = e4_cubed.mul(&inv_q, w).div(&eta24, w);
    let shift = w - prec;
    let value = Complex::new(j.re >> shift, j.im >> shift);
    Ok(JValue { value, prec, err: 2f64.powi(8 - prec as i32) })
}

/// A Hilbert class polynomial with its rounding diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertPoly {
    pub d: i64,
    /// Integer coefficients, low-to-high; monic of degree `h`.
    #[serde(serialize_with = "crate::serde_util::big_vec")]
    pub coeffs: Vec<BigInt>,
    pub h: usize,
    /// Largest distance from a computed complex coefficient to its integer.
    pub max_rounding_error: f64,
    /// Largest imaginary part of a computed coefficient.
    pub max_imag: f64,
    /// Bits used for root evaluation and the product.
    pub precision: u32,
}

impl HilbertPoly {
    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::new(self.coeffs.clone())
    }
}

/// The heuristic precision floor `π √|D| h / ln 2 + 64` bits.
pub fn precision_floor(d: i64, h: usize) -> u32 {
    let n = d.unsigned_abs() as f64;
    (std::f64::consts::PI * n.sqrt() * h as f64 / std::f64::consts::LN_2).ceil() as u32 + 64
}

/// `H_D` at `prec` bits (raised to the floor if lower). Fails with a
/// precision error when some coefficient is not within 0.5 of an integer.
pub fn hilbert_class_poly(d: i64, prec: Option<u32>) -> Result<HilbertPoly> {
    let forms = reduced_forms(d)?;
    let h = forms.len();
    let floor = precision_floor(d, h);
    let prec = prec.unwrap_or(floor).max(floor);
    // guard bits for the error growth across the product of h factors
    let w = prec + 12 * h as u32 + 32;

    let roots: Vec<Complex> =
        forms.iter().map(|f| eval_j(&Tau::from_form(*f)?, w).map(|v| v.value)).collect::<Result<_>>()?;

    let mut poly = vec![Complex::one(w)];
    for r in &roots {
        // multiply by (x - r)
        let mut next = vec![Complex::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &c.mul(r, w);
        }
        poly = next;
    }

    let half = BigInt::from(1) << (w - 1);
    let mut coeffs = Vec::with_capacity(h + 1);
    let mut max_err = 0f64;
    let mut max_imag = 0f64;
    for c in &poly {
        let rounded = (&c.re + &half) >> w;
        let diff_re = &c.re - (&rounded << w);
        let err_re = fixed::to_f64(&diff_re.abs(), w);
        let err_im = fixed::to_f64(&c.im.abs(), w);
        max_err = max_err.max(err_re.hypot(err_im));
        max_imag = max_imag.max(err_im);
        coeffs.push(rounded);
    }
    if max_err.is_nan() || max_err >= 0.5 {
        return Err(Error::Precision { bits: prec, reason: format!("H_{d} coefficient rounding error {max_err:.3e}") });
    }
    Ok(HilbertPoly { d, coeffs, h, max_rounding_error: max_err, max_imag, precision: prec })
}

/// [`hilbert_class_poly`] with precision doubling on rounding failure.
pub fn hilbert_class_poly_adaptive(d: i64) -> Result<HilbertPoly> {
    let h = class_number(d)?;
    let mut prec = precision_floor(d, h);
    let mut last = None;
    for _ in 0..5 {
        match hilbert_class_poly(d, Some(prec)) {
            Ok(hp) => return Ok(hp),
            Err(e @ Error::Precision { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
        prec *= 2;
    }
    Err(last.unwrap())
}

/// Outcome of the exhaustive discriminant scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum DirectVerdict {
    /// `minpoly(j) = H_D`.
    Cm { d: i64 },
    /// j is not an algebraic integer, or every `|D|` beyond the scan has `h(D) > n`.
    NoCm { reason: String },
    /// The scan reached the cap before the class number bound took over.
    Inconclusive { cap: u64 },
}

/// Compares `minpoly(j_E)` against `H_D` for `D = -3, -4, -7, ...` with
/// `h(D) = deg j_E`, up to `|D| ≤ cap`.
pub fn direct_cm_test(curve: &CurveNF, cap: u64) -> Result<DirectVerdict> {
    let mp = curve.j_invariant().minpoly();
    if !mp.lead().abs().is_one() {
        return Ok(DirectVerdict::NoCm { reason: "j is not an algebraic integer".into() });
    }
    let n = mp.degree().unwrap();
    let threshold_ln = no_cm_threshold_ln(n);
    let table = class_numbers_up_to(cap);
    for abs_d in 3..=cap {
        if (abs_d as f64).ln() > threshold_ln {
            return Ok(DirectVerdict::NoCm { reason: format!("h(D) > {n} for every |D| > e^{threshold_ln:.1}") });
        }
        if table[abs_d as usize] as usize != n {
            continue;
        }
        let d = -(abs_d as i64);
        let hd = hilbert_class_poly_adaptive(d)?;
        if hd.to_zpoly() == mp {
            return Ok(DirectVerdict::Cm { d });
        }
    }
    Ok(DirectVerdict::Inconclusive { cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::NumberField;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gzgo_examples() {
        // (1/55) ln 23 (1 - 9/24)
        let expect = 23f64.ln() / 55.0 * (1.0 - 9.0 / 24.0);
        assert!(approx(gzgo_bound(-23).unwrap(), expect, 1e-12));
        assert!(approx(gzgo_bound(-23).unwrap(), 0.03563, 5e-6));
        assert!(approx(gzgo_bound(-4).unwrap(), 0.008402, 5e-7));
        // -3·5077 = -15231 = 1 mod 4, square-free
        let d = -3 * 5077;
        let expect = (15231f64).ln() / 7000.0 * (1.0 - 3.0 / 4.0) * (1.0 - 142.0 / 5078.0);
        assert!(approx(gzgo_bound(d).unwrap(), expect, 1e-12));
        assert!(gzgo_bound(-12).is_err());
    }

    #[test]
    fn effective_bound_examples() {
        assert_eq!(effective_h_lower_bound(-4).unwrap(), 1.0);
        // non-fundamental: exact class number
        assert_eq!(effective_h_lower_bound(-12).unwrap(), 1.0);
        // -5460 = -4·3·5·7·13 has five prime factors, so 2^4 | h
        assert_eq!(effective_h_lower_bound(-5460).unwrap(), 16.0);
        assert!(effective_h_lower_bound(-5460).unwrap() >= 8.0);
    }

    #[test]
    fn class_number_dominates_lower_bound() {
        let table = class_numbers_up_to(10_000);
        for n in 3..=10_000i64 {
            if is_fundamental(-n) {
                assert!(table[n as usize] as f64 >= effective_h_lower_bound(-n).unwrap(), "D=-{n}");
            }
        }
    }

    #[test]
    fn threshold_for_degree_one() {
        let t = no_cm_threshold_ln(1);
        assert!(approx(t, 28000.0 + 2.0 * 18f64.ln(), 1e-6));
    }

    #[test]
    fn j_special_values() {
        let cases = [((1, 0, 1), 1728.0), ((1, -1, 1), 0.0), ((1, -1, 2), -3375.0)];
        for ((a, b, c), expect) in cases {
            let v = eval_j(&Tau::from_form(QuadForm::new(a, b, c)).unwrap(), 128).unwrap();
            let (re, im) = v.to_f64();
            assert!(approx(re, expect, 1e-20) && approx(im, 0.0, 1e-20), "{re} {im}");
        }
    }

    #[test]
    fn small_hilbert_polynomials() {
        let h = |d| hilbert_class_poly(d, None).unwrap().coeffs;
        let z = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        assert_eq!(h(-4), z(&[-1728, 1]));
        assert_eq!(h(-3), z(&[0, 1]));
        assert_eq!(h(-7), z(&[3375, 1]));
        assert_eq!(h(-8), z(&[-8000, 1]));
        // class number one, largest discriminant
        assert_eq!(h(-163), z(&[262537412640768000, 1]));
    }

    #[test]
    fn h23_roots_match_evaluations() {
        let hp = hilbert_class_poly(-23, None).unwrap();
        assert_eq!(hp.h, 3);
        let poly = hp.to_zpoly();
        assert_eq!(poly, ZPoly::from_i64s(&[12771880859375, -5151296875, 3491750, 1]));
        for f in reduced_forms(-23).unwrap() {
            let j = eval_j(&Tau::from_form(f).unwrap(), 200).unwrap();
            let (re, im) = j.to_f64();
            // evaluate H at the complex root in f64 via Horner
            let (mut pr, mut pi) = (0f64, 0f64);
            for c in poly.coeffs().iter().rev() {
                let c = c.to_f64().unwrap();
                (pr, pi) = (pr * re - pi * im + c, pr * im + pi * re);
            }
            let scale = poly.coeffs().iter().map(|c| c.abs().to_f64().unwrap()).fold(0.0, f64::max);
            assert!(pr.hypot(pi) / scale < 1e-6);
        }
    }

    #[test]
    fn rounding_margin_and_imaginary_residue() {
        for n in 3..=500i64 {
            if check_discriminant(-n).is_err() {
                continue;
            }
            let hp = hilbert_class_poly(-n, None).unwrap();
            assert!(hp.max_imag < 1e-6, "D=-{n}");
            assert!(hp.max_rounding_error < 1e-3, "D=-{n}");
        }
    }

    #[test]
    fn direct_test_examples() {
        let k = NumberField::rationals();
        let e = CurveNF::new(k.from_int(1), k.from_int(0)).unwrap();
        assert_eq!(direct_cm_test(&e, 1000).unwrap(), DirectVerdict::Cm { d: -4 });
        let e = CurveNF::new(k.from_int(0), k.from_int(1)).unwrap();
        assert_eq!(direct_cm_test(&e, 1000).unwrap(), DirectVerdict::Cm { d: -3 });
        let e = CurveNF::from_j(&k.from_int(1));
        assert_eq!(direct_cm_test(&e, 1000).unwrap(), DirectVerdict::Inconclusive { cap: 1000 });
        let half = k.from_rational(num_rational::BigRational::new(1.into(), 2.into()));
        assert!(matches!(direct_cm_test(&CurveNF::from_j(&half), 1000).unwrap(), DirectVerdict::NoCm { .. }));
    }

    #[test]
    fn round_trip_through_hilbert_roots() {
        for n in 3..=200i64 {
            if !is_fundamental(-n) || class_number(-n).unwrap() > 3 {
                continue;
            }
            let hp = hilbert_class_poly(-n, None).unwrap();
            let field = NumberField::new(hp.to_zpoly()).unwrap();
            let e = CurveNF::from_j(&field.theta());
            assert_eq!(direct_cm_test(&e, 1000).unwrap(), DirectVerdict::Cm { d: -n });
        }
    }
}
