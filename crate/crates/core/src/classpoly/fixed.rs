//! Fixed-point real and complex arithmetic on big integers.
//!
//! A value `v` at precision `p` stands for `v / 2^p`. Every routine takes the
//! precision explicitly; truncation errors are a few units in the last place
//! per operation and are absorbed by guard bits chosen by the caller.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: BigInt,
    pub im: BigInt,
}

pub fn one(prec: u32) -> BigInt {
    BigInt::one() << prec
}

pub fn mul(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a * b) >> prec
}

pub fn div(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a << prec) / b
}

pub fn sqrt(a: &BigInt, prec: u32) -> BigInt {
    (a << prec).sqrt()
}

/// `p`-bit fixed-point value of an integer.
pub fn from_int(n: i64, prec: u32) -> BigInt {
    BigInt::from(n) << prec
}

/// Approximate `f64` value.
pub fn to_f64(a: &BigInt, prec: u32) -> f64 {
    let bits = a.bits();
    if bits <= 1000 {
        return a.to_f64().unwrap() / 2f64.powi(prec as i32);
    }
    let shift = bits - 64;
    (a >> shift).to_f64().unwrap() * 2f64.powi(shift as i32 - prec as i32)
}

fn atan_inv(x: u64, prec: u32) -> BigInt {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^{2k+1})
    let x2 = BigInt::from(x * x);
    let mut term = one(prec) / x;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= &x2;
        let t = &term / (2 * k + 1);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

/// π by Machin's formula.
pub fn pi(prec: u32) -> BigInt {
    let g = prec + 16;
    let v = atan_inv(5, g) * 16 - atan_inv(239, g) * 4;
    v >> 16
}

impl Complex {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        Complex { re, im }
    }

    pub fn zero() -> Self {
        Complex { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one(prec: u32) -> Self {
        Complex { re: one(prec), im: BigInt::zero() }
    }

    pub fn real(re: BigInt) -> Self {
        Complex { re, im: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, o: &Complex, prec: u32) -> Complex {
        Complex { re: (&self.re * &o.re - &self.im * &o.im) >> prec, im: (&self.re * &o.im + &self.im * &o.re) >> prec }
    }

    pub fn square(&self, prec: u32) -> Complex {
        self.mul(self, prec)
    }

    pub fn scale(&self, k: &BigInt) -> Complex {
        Complex { re: &self.re * k, im: &self.im * k }
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: -&self.im }
    }

    pub fn div(&self, o: &Complex, prec: u32) -> Complex {
        let den = (&o.re * &o.re + &o.im * &o.im) >> prec;
        let num = self.mul(&o.conj(), prec);
        Complex { re: div(&num.re, &den, prec), im: div(&num.im, &den, prec) }
    }

    pub fn pow(&self, mut e: u64, prec: u32) -> Complex {
        let mut acc = Complex::one(prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.square(prec);
            }
        }
        acc
    }

    /// `max(|re|, |im|)` in bits above the binary point (may be negative).
    pub fn magnitude_bits(&self, prec: u32) -> i64 {
        self.re.bits().max(self.im.bits()) as i64 - prec as i64
    }

    /// `exp(z)` by argument halving and a Taylor series. Callers should
    /// carry about `log2|z| + 8` guard bits for the squarings.
    pub fn exp(&self, prec: u32) -> Complex {
        let mag = self.magnitude_bits(prec).max(0) as u32;
        let k = mag + 8;
        let w = Complex { re: &self.re >> k, im: &self.im >> k };
        let mut sum = Complex::one(prec);
        let mut term = Complex::one(prec);
        let mut n = 1i64;
        loop {
            term = term.mul(&w, prec);
            term = Complex { re: &term.re / n, im: &term.im / n };
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            n += 1;
        }
        for _ in 0..k {
            sum = sum.square(prec);
        }
        sum
    }

    pub fn to_f64(&self, prec: u32) -> (f64, f64) {
        (to_f64(&self.re, prec), to_f64(&self.im, prec))
    }

    /// Abs of the real and imaginary parts, whichever is larger, as `f64`.
    pub fn abs_max_f64(&self, prec: u32) -> f64 {
        to_f64(&self.re.abs(), prec).max(to_f64(&self.im.abs(), prec))
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert!((to_f64(&p, 200) - std::f64::consts::PI).abs() < 1e-15);
        // agreement between two precisions up to the last couple of units
        let coarse: BigInt = pi(300) >> 100u32;
        assert!((coarse - &p).abs() <= BigInt::from(2));
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let prec = 256;
        let z = Complex::new(BigInt::zero(), pi(prec));
        let e = z.exp(prec);
        let (re, im) = e.to_f64(prec);
        assert!((re + 1.0).abs() < 1e-30 && im.abs() < 1e-30, "{re} {im}");
    }

    #[test]
    fn exp_real_matches_f64() {
        let prec = 128;
        for x in [-30.0f64, -1.5, 0.25, 3.0, 40.0] {
            let v = BigInt::from((x * 1024.0) as i64) << (prec - 10);
            let e = Complex::real(v).exp(prec);
            let got = to_f64(&e.re, prec);
            assert!(((got - x.exp()) / x.exp()).abs() < 1e-12, "x={x}: {got}");
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let prec = 128;
        let a = Complex::new(from_int(3, prec), from_int(-7, prec));
        let b = Complex::new(from_int(2, prec) / 3, from_int(5, prec));
        let q = a.mul(&b, prec).div(&b, prec);
        let d = &q - &a;
        assert!(d.abs_max_f64(prec) < 1e-30);
    }

    #[test]
    fn sqrt_two() {
        let prec = 100;
        let s = sqrt(&from_int(2, prec), prec);
        assert!((to_f64(&s, prec) - 2f64.sqrt()).abs() < 1e-15);
    }
}
