//! Division polynomials over any commutative coefficient ring.
//!
//! With `ψ_n = f_n` for odd `n` and `ψ_n = 2y f_n` for even `n`, every
//! `f_n` is a polynomial in `x` alone; `y²` is replaced by `x³ + Ax + B`.

use std::sync::Arc;

use crate::algebra::FieldOps;
use crate::numberfield::{NfElement, NumberField};

/// Minimal ring interface for coefficient arithmetic.
pub trait CoeffRing {
    type E: Clone + PartialEq;
    fn zero_elem(&self) -> Self::E;
    fn int(&self, n: i64) -> Self::E;
    fn plus(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn minus(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn times(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

impl<F: FieldOps> CoeffRing for F {
    type E = F::Elem;
    fn zero_elem(&self) -> F::Elem {
        FieldOps::zero(self)
    }
    fn int(&self, n: i64) -> F::Elem {
        let v = self.from_u64(n.unsigned_abs());
        if n < 0 {
            self.neg(&v)
        } else {
            v
        }
    }
    fn plus(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        FieldOps::add(self, a, b)
    }
    fn minus(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        FieldOps::sub(self, a, b)
    }
    fn times(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        FieldOps::mul(self, a, b)
    }
}

/// Coefficient ring of a number field.
pub struct NfRing(pub Arc<NumberField>);

impl CoeffRing for NfRing {
    type E = NfElement;
    fn zero_elem(&self) -> NfElement {
        self.0.from_int(0)
    }
    fn int(&self, n: i64) -> NfElement {
        self.0.from_int(n)
    }
    fn plus(&self, a: &NfElement, b: &NfElement) -> NfElement {
        a + b
    }
    fn minus(&self, a: &NfElement, b: &NfElement) -> NfElement {
        a - b
    }
    fn times(&self, a: &NfElement, b: &NfElement) -> NfElement {
        a * b
    }
}

struct PolyRing<'a, R: CoeffRing>(&'a R);

impl<R: CoeffRing> PolyRing<'_, R> {
    fn trim(&self, mut v: Vec<R::E>) -> Vec<R::E> {
        let z = self.0.zero_elem();
        while v.last() == Some(&z) {
            v.pop();
        }
        v
    }

    fn sub(&self, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
        let n = a.len().max(b.len());
        let z = self.0.zero_elem();
        let v = (0..n).map(|i| self.0.minus(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.trim(v)
    }

    fn mul(&self, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.0.zero_elem(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.0.plus(&out[i + j], &self.0.times(x, y));
            }
        }
        self.trim(out)
    }

    fn cube(&self, a: &[R::E]) -> Vec<R::E> {
        self.mul(a, &self.mul(a, a))
    }

    fn from_ints(&self, cs: &[i64]) -> Vec<R::E> {
        self.trim(cs.iter().map(|&c| self.0.int(c)).collect())
    }
}

/// The reduced division polynomials `f_0, ..., f_n` of y² = x³ + ax + b,
/// coefficient lists low-to-high.
pub fn division_polynomials<R: CoeffRing>(ring: &R, a: &R::E, b: &R::E, n: usize) -> Vec<Vec<R::E>> {
    let pr = PolyRing(ring);
    let r = |c: i64| ring.int(c);
    let m = |x: &R::E, y: &R::E| ring.times(x, y);
    let a2 = m(a, a);
    let a3 = m(&a2, a);
    let b2 = m(b, b);
    let ab = m(a, b);

    let mut f: Vec<Vec<R::E>> = vec![Vec::new(), pr.from_ints(&[1]), pr.from_ints(&[1])];
    // f3 = 3x^4 + 6a x^2 + 12b x - a^2
    f.push(pr.trim(vec![ring.minus(&ring.zero_elem(), &a2), m(&r(12), b), m(&r(6), a), ring.zero_elem(), r(3)]));
    // f4 = 2(x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3)
    let c0 = ring.minus(&ring.minus(&ring.zero_elem(), &m(&r(16), &b2)), &m(&r(2), &a3));
    f.push(pr.trim(vec![c0, m(&r(-8), &ab), m(&r(-10), &a2), m(&r(40), b), m(&r(10), a), ring.zero_elem(), r(2)]));
    // Y = 4(x^3 + ax + b), Y^2 = 16 (x^3 + ax + b)^2
    let y_poly = pr.trim(vec![m(&r(4), b), m(&r(4), a), ring.zero_elem(), r(4)]);
    let y2 = pr.mul(&y_poly, &y_poly);
    for k in 5..=n {
        let mm = k / 2;
        let next = if k % 2 == 1 {
            let t1 = pr.mul(&f[mm + 2], &pr.cube(&f[mm]));
            let t2 = pr.mul(&f[mm - 1], &pr.cube(&f[mm + 1]));
            if mm % 2 == 0 {
                pr.sub(&pr.mul(&y2, &t1), &t2)
            } else {
                pr.sub(&t1, &pr.mul(&y2, &t2))
            }
        } else {
            let t1 = pr.mul(&f[mm + 2], &pr.mul(&f[mm - 1], &f[mm - 1]));
            let t2 = pr.mul(&f[mm - 2], &pr.mul(&f[mm + 1], &f[mm + 1]));
            pr.mul(&f[mm], &pr.sub(&t1, &t2))
        };
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// ψ_ℓ for odd ℓ ≥ 1: degree (ℓ² − 1)/2 when ℓ is prime to the characteristic.
pub fn division_polynomial<R: CoeffRing>(ring: &R, a: &R::E, b: &R::E, ell: usize) -> Vec<R::E> {
    assert!(ell % 2 == 1, "only odd division polynomials are exposed");
    division_polynomials(ring, a, b, ell.max(4)).swap_remove(ell)
}
