//! Polynomials over a prime field F_p and their factorization.
//!
//! Factorization runs square-free decomposition, distinct-degree splitting,
//! and Cantor-Zassenhaus equal-degree splitting. The splitting randomness is
//! drawn from a generator seeded by `(p, f)` so results are reproducible.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::{mul_mod, pow_mod};
use super::poly::ZPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Reduce an arbitrary integer into `[0, p)`.
pub fn bigint_mod(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn from_zpoly(f: &ZPoly, p: u64) -> Self {
        FpPoly::new(p, f.coeffs().iter().map(|a| bigint_mod(a, p)).collect())
    }

    /// Lift to Z with coefficients in `[0, p)`.
    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::new(self.c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&v| mul_mod(v, k, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(self.p, (0..n).map(|i| add_mod(self.coeff(i), o.coeff(i), self.p)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(self.p, (0..n).map(|i| sub_mod(self.coeff(i), o.coeff(i), self.p)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u128; self.c.len() + o.c.len() - 1];
        let small = (p as u128) < (1u128 << 32);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] += a as u128 * b as u128;
                if !small {
                    out[i + j] %= p as u128;
                }
            }
        }
        FpPoly::new(p, out.into_iter().map(|v| (v % p as u128) as u64).collect())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = mul_mod(r[i], inv, p);
            if coef == 0 {
                continue;
            }
            q[i - dd] = coef;
            for (j, &dj) in d.c.iter().enumerate() {
                r[i - dd + j] = sub_mod(r[i - dd + j], mul_mod(coef, dj, p), p);
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn div(&self, d: &Self) -> Self {
        self.divrem(d).0
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        FpPoly::new(
            self.p,
            self.c.iter().enumerate().skip(1).map(|(i, &v)| mul_mod(v, i as u64 % self.p, self.p)).collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    fn pow_mod_u64(&self, e: u64, m: &Self) -> Self {
        self.pow_mod(&BigUint::from(e), m)
    }

    /// Full factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let f = self.monic();
        let seed = self.c.iter().fold(self.p.wrapping_mul(0x9E37_79B9_7F4A_7C15), |h, &v| {
            h.rotate_left(7) ^ v.wrapping_mul(0xBF58_476D_1CE4_E5B9)
        });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sf, mult) in f.squarefree_decomposition() {
            for (g, d) in sf.distinct_degree() {
                for h in g.equal_degree(d, &mut rng) {
                    out.push((h, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.c.len(), &a.0.c).cmp(&(b.0.c.len(), &b.0.c)));
        out
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g_i, i)` with
    /// `self = prod g_i^i` and each `g_i` square-free.
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, u32)> {
        let p = self.p;
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let fd = self.derivative();
        let mut c = self.gcd(&fd);
        let mut w = self.div(&c);
        let mut i = 1u32;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div(&y);
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.div(&w);
            i += 1;
        }
        if !c.is_one() {
            // c is a p-th power; take the p-th root coefficientwise.
            let root = FpPoly::new(p, c.c.iter().step_by(p as usize).copied().collect());
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p as u32));
            }
        }
        out
    }

    /// Splits a square-free monic polynomial into products of irreducibles of
    /// equal degree: pairs `(g, d)`.
    pub fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = FpPoly::x(p);
        let mut h = x.clone();
        let mut d = 1;
        while f.degree().unwrap_or(0) >= 2 * d {
            h = h.pow_mod_u64(p, &f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_one() {
                f = f.div(&g);
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            let deg = f.degree().unwrap();
            out.push((f, deg));
        }
        out
    }

    /// Splits a square-free monic product of degree-`d` irreducibles.
    pub fn equal_degree<R: Rng>(&self, d: usize, rng: &mut R) -> Vec<FpPoly> {
        let n = self.degree().unwrap();
        if n == d {
            return vec![self.clone()];
        }
        let p = self.p;
        let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // absolute trace a + a^2 + ... + a^(2^(d-1))
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                a.pow_mod(&exp, self).sub(&FpPoly::one(p))
            };
            let g = self.gcd(&b);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.div(&g).equal_degree(d, rng));
                return out;
            }
        }
    }

    pub fn is_irreducible(&self) -> bool {
        let f = self.factor();
        f.len() == 1 && f[0].1 == 1
    }

    /// Roots in F_p (distinct, sorted).
    pub fn roots(&self) -> Vec<u64> {
        let mut r: Vec<u64> = self
            .factor()
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| (self.p - g.coeff(0)) % self.p)
            .collect();
        r.sort_unstable();
        r
    }
}

/// Product of `(g, e)` factors.
pub fn expand_factors(p: u64, fs: &[(FpPoly, u32)]) -> FpPoly {
    fs.iter().fold(FpPoly::one(p), |acc, (g, e)| (0..*e).fold(acc, |a, _| a.mul(g)))
}

/// First monic irreducible polynomial of degree `d` over F_p in
/// lexicographic order of `(c_{d-1}, ..., c_0)` from the top.
pub fn first_irreducible(p: u64, d: usize) -> FpPoly {
    assert!(d >= 1);
    let total = (p as u128).pow(d as u32);
    let mut idx: u128 = 0;
    while idx < total {
        let mut c = Vec::with_capacity(d + 1);
        let mut k = idx;
        for _ in 0..d {
            c.push((k % p as u128) as u64);
            k /= p as u128;
        }
        c.push(1);
        let f = FpPoly::new(p, c);
        if d == 1 || (f.coeff(0) != 0 && f.is_irreducible()) {
            return f;
        }
        idx += 1;
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl std::fmt::Display for FpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let z = self.to_zpoly();
        write!(f, "{z} (mod {})", self.p)
    }
}

/// Reduce a nonzero rational with denominator prime to `p`.
pub fn rational_mod(n: &BigInt, d: &BigInt, p: u64) -> Option<u64> {
    let dm = bigint_mod(d, p);
    if dm == 0 {
        return None;
    }
    Some(mul_mod(bigint_mod(n, p), inv_mod(dm, p), p))
}
