//! Finite fields F_{p^d} = F_p[x]/(g) for a monic irreducible `g`.

use rand::Rng;

use super::arith::mul_mod;
use super::field::FieldOps;
use super::fppoly::{first_irreducible, FpPoly};
use crate::error::{Error, Result};

/// Element of F_{p^d}: residue polynomial as `d` coefficients, low-to-high.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub Vec<u64>);

/// The field F_p[x]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    d: usize,
    modulus: FpPoly,
    order: u64,
}

impl Fq {
    /// F_{p^d} with the lexicographically first irreducible modulus.
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if p < 5 {
            return Err(Error::domain(format!("characteristic {p} < 5 is not supported")));
        }
        Self::with_modulus(first_irreducible(p, d))
    }

    /// The residue field defined by a monic irreducible `g`.
    pub fn with_modulus(g: FpPoly) -> Result<Self> {
        let p = g.modulus();
        let d = g.degree().filter(|&d| d >= 1).ok_or_else(|| Error::domain("modulus must have degree >= 1"))?;
        if g.lead() != 1 {
            return Err(Error::domain("modulus must be monic"));
        }
        let order = (p as u128)
            .checked_pow(d as u32)
            .filter(|&q| q < u64::MAX as u128)
            .ok_or_else(|| Error::Capability(format!("field of order {p}^{d} too large")))? as u64;
        Ok(Fq { p, d, modulus: g, order })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// Embed a polynomial over F_p (reduced modulo the field modulus).
    pub fn from_fppoly(&self, f: &FpPoly) -> FqElem {
        let r = f.rem(&self.modulus);
        let mut v = r.coeffs().to_vec();
        v.resize(self.d, 0);
        FqElem(v)
    }

    pub fn to_fppoly(&self, a: &FqElem) -> FpPoly {
        FpPoly::new(self.p, a.0.clone())
    }
}

impl FieldOps for Fq {
    type Elem = FqElem;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> u64 {
        self.order
    }
    fn zero(&self) -> FqElem {
        FqElem(vec![0; self.d])
    }
    fn one(&self) -> FqElem {
        let mut v = vec![0; self.d];
        v[0] = 1;
        FqElem(v)
    }
    fn from_u64(&self, n: u64) -> FqElem {
        let mut v = vec![0; self.d];
        v[0] = n % self.p;
        FqElem(v)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= self.p {
                        s - self.p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(a.0.iter().zip(&b.0).map(|(&x, &y)| if x >= y { x - y } else { x + self.p - y }).collect())
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.p;
        let d = self.d;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        let m = self.modulus.coeffs();
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                let t = mul_mod(c, m[i], p);
                let slot = &mut prod[k - d + i];
                *slot = if *slot >= t { *slot - t } else { *slot + p - t };
            }
        }
        prod.truncate(d);
        FqElem(prod)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect())
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }
    fn index(&self, a: &FqElem) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }
    fn from_index(&self, mut i: u64) -> FqElem {
        let mut v = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            v.push(i % self.p);
            i /= self.p;
        }
        FqElem(v)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        FqElem((0..self.d).map(|_| rng.gen_range(0..self.p)).collect())
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let (g, s, _) = self.to_fppoly(a).ext_gcd(&self.modulus);
        debug_assert!(g.is_one());
        Some(self.from_fppoly(&s))
    }
}
