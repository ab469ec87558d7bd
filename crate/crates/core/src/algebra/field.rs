//! The finite-field interface shared by prime fields and their extensions,
//! plus the prime field itself.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use super::arith::{mul_mod, pow_mod};

/// Arithmetic in a finite field of odd characteristic whose order fits in
/// a `u64`. The field object is the context; elements are plain values.
pub trait FieldOps: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, n: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Bijection between elements and `0..order`.
    fn index(&self, a: &Self::Elem) -> u64;
    fn from_index(&self, i: u64) -> Self::Elem;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.from_index(rng.gen_range(0..self.order()))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// Quadratic character: 0, 1 or -1.
    fn legendre(&self, a: &Self::Elem) -> i8 {
        if self.is_zero(a) {
            return 0;
        }
        let r = self.pow(a, (self.order() - 1) / 2);
        if r == self.one() {
            1
        } else {
            -1
        }
    }

    /// Smallest quadratic non-residue by index.
    fn nonresidue(&self) -> Self::Elem {
        (2..self.order())
            .map(|i| self.from_index(i))
            .find(|z| self.legendre(z) == -1)
            .expect("odd-order fields have non-residues")
    }

    /// A square root, if one exists (Tonelli-Shanks).
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        match self.legendre(a) {
            0 => return Some(self.zero()),
            -1 => return None,
            _ => {}
        }
        let q1 = self.order() - 1;
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        let z = self.nonresidue();
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut b2 = b.clone();
            while b2 != one {
                b2 = self.square(&b2);
                i += 1;
            }
            let mut g = c.clone();
            for _ in 0..m - i - 1 {
                g = self.square(&g);
            }
            x = self.mul(&x, &g);
            c = self.square(&g);
            b = self.mul(&b, &c);
            m = i;
        }
        Some(x)
    }
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 3 && p % 2 == 1, "odd prime expected");
        PrimeField { p }
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn index(&self, a: &u64) -> u64 {
        *a
    }
    fn from_index(&self, i: u64) -> u64 {
        i
    }
    fn pow(&self, a: &u64, e: u64) -> u64 {
        pow_mod(*a, e, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_and_inverse_exhaustive() {
        for p in [5u64, 7, 13, 17, 97, 101] {
            let f = PrimeField::new(p);
            for a in 1..p {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                match f.sqrt(&a) {
                    Some(r) => assert_eq!(f.square(&r), a),
                    None => assert!((1..p).all(|y| f.square(&y) != a)),
                }
            }
        }
    }
}
