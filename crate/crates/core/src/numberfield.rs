//! Number fields Q(θ) = Q[x]/(T) for a monic irreducible integer `T`.
//!
//! Elements live on the power basis of θ. Primes are split by factoring
//! `T` modulo `p` (Kummer-Dedekind), which is valid exactly when `p` does
//! not divide the index of Z[θ] in the maximal order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::fppoly::{bigint_mod, rational_mod};
use crate::algebra::linalg::charpoly;
use crate::algebra::zfactor::{check_irreducible, Irreducibility};
use crate::algebra::{FpPoly, Fq, FqElem, QPoly, ZPoly};
use crate::error::{Error, Result};

/// The field Q[x]/(T).
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    t: ZPoly,
    n: usize,
    disc: BigInt,
}

/// A prime ideal of the order Z[θ] read off from `T mod p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Monic irreducible factor of `T mod p`; the residue field is F_p[x]/(g).
    pub g: FpPoly,
    pub d: usize,
    pub e: u32,
    pub norm: BigInt,
}

impl PrimeIdeal {
    pub fn residue_field(&self) -> Result<Fq> {
        Fq::with_modulus(self.g.clone())
    }
}

impl NumberField {
    /// Validates `T` (monic, irreducible over Q) and caches its discriminant.
    pub fn new(t: ZPoly) -> Result<Arc<Self>> {
        let n = match t.degree() {
            None | Some(0) => return Err(Error::input("defining polynomial must have degree >= 1")),
            Some(n) => n,
        };
        if !t.is_monic() {
            return Err(Error::input(format!("defining polynomial {t} is not monic")));
        }
        if let Irreducibility::Reducible(f) = check_irreducible(&t)? {
            return Err(Error::input(format!("defining polynomial {t} has the factor {f}")));
        }
        let disc = t.discriminant();
        Ok(Arc::new(NumberField { t, n, disc }))
    }

    /// Q presented as Q[x]/(x).
    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberField { t: ZPoly::x(), n: 1, disc: BigInt::one() })
    }

    pub fn minpoly(&self) -> &ZPoly {
        &self.t
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// Factorization of `T mod p` as prime ideals, refusing every `p | disc(T)`.
    pub fn split_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if p < 2 {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if bigint_mod(&self.disc, p) == 0 {
            return Err(Error::IndexRisk { p });
        }
        Ok(self.kummer_factors(p))
    }

    /// Like [`split_prime`](Self::split_prime) but admits primes dividing
    /// `disc(T)` whenever Dedekind's criterion shows `p` does not divide
    /// the index, so ramified primes are included.
    pub fn split_prime_dedekind(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if bigint_mod(&self.disc, p) != 0 || !self.index_divisible_by(p) {
            Ok(self.kummer_factors(p))
        } else {
            Err(Error::IndexRisk { p })
        }
    }

    /// Factors of `T mod p` with multiplicities, without any validity check.
    pub fn kummer_factors(&self, p: u64) -> Vec<PrimeIdeal> {
        FpPoly::from_zpoly(&self.t, p)
            .factor()
            .into_iter()
            .map(|(g, e)| {
                let d = g.degree().unwrap();
                PrimeIdeal { p, g, d, e, norm: BigInt::from(p).pow(d as u32) }
            })
            .collect()
    }

    /// Dedekind's criterion: does `p` divide `[O : Z[θ]]`?
    pub fn index_divisible_by(&self, p: u64) -> bool {
        let tbar = FpPoly::from_zpoly(&self.t, p);
        let factors = tbar.factor();
        if factors.iter().all(|(_, e)| *e == 1) {
            return false;
        }
        let rad = factors.iter().fold(FpPoly::one(p), |a, (g, _)| a.mul(g));
        let cof = tbar.div(&rad);
        let (gz, hz) = (rad.to_zpoly(), cof.to_zpoly());
        let pb = BigInt::from(p);
        let f = (&(&gz * &hz) - &self.t).map(|c| c / &pb);
        let fbar = FpPoly::from_zpoly(&f, p);
        !fbar.gcd(&rad).gcd(&cof).is_one()
    }

    pub fn element(self: &Arc<Self>, rep: QPoly) -> NfElement {
        NfElement::new(self.clone(), rep)
    }

    pub fn from_int(self: &Arc<Self>, c: i64) -> NfElement {
        self.element(QPoly::from_ints(&[c]))
    }

    pub fn from_rational(self: &Arc<Self>, c: BigRational) -> NfElement {
        self.element(QPoly::constant(c))
    }

    /// The generator θ.
    pub fn theta(self: &Arc<Self>) -> NfElement {
        self.element(QPoly::x())
    }
}

/// True iff a primitive minimal polynomial is monic.
pub fn is_algebraic_integer(minpoly: &ZPoly) -> bool {
    minpoly.lead().abs().is_one()
}

/// An element of a number field as a polynomial in θ of degree < n.
#[derive(Clone, Debug)]
pub struct NfElement {
    field: Arc<NumberField>,
    rep: QPoly,
}

impl PartialEq for NfElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.rep == other.rep
    }
}

impl Eq for NfElement {}

impl NfElement {
    pub fn new(field: Arc<NumberField>, rep: QPoly) -> Self {
        let rep = if rep.degree().is_some_and(|d| d >= field.n) { rep.rem(&field.t.to_q()) } else { rep };
        NfElement { field, rep }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// The value as a rational when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.rep.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    fn same_field(&self, other: &NfElement) {
        assert!(Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field, "elements of different fields");
    }

    pub fn inv(&self) -> Result<NfElement> {
        if self.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        let (g, s, _) = self.rep.ext_gcd(&self.field.t.to_q());
        debug_assert!(g == QPoly::one());
        Ok(NfElement::new(self.field.clone(), s))
    }

    pub fn div(&self, other: &NfElement) -> Result<NfElement> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> NfElement {
        let mut acc = self.field.from_int(1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `N(α) = Res(T, a) / den^n` where `α = a(θ) / den`.
    pub fn norm(&self) -> Result<BigRational> {
        if self.is_zero() {
            return Err(Error::domain("norm of zero"));
        }
        let (num, den) = self.rep.clear_denominators();
        let res = self.field.t.resultant(&num);
        Ok(BigRational::new(res, den.pow(self.field.n as u32)))
    }

    /// Matrix of multiplication by α on the basis 1, θ, ..., θ^{n-1}.
    fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.field.n;
        let mut cols = Vec::with_capacity(n);
        let mut v = self.clone();
        let theta = self.field.theta();
        for _ in 0..n {
            cols.push((0..n).map(|i| v.rep.coeff(i)).collect::<Vec<_>>());
            v = &v * &theta;
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Characteristic polynomial of α over Q, degree n.
    pub fn charpoly(&self) -> QPoly {
        charpoly(&self.mult_matrix())
    }

    /// Primitive integer minimal polynomial of α with positive leading coefficient.
    pub fn minpoly(&self) -> ZPoly {
        let c = self.charpoly();
        let g = c.gcd(&c.derivative());
        let (rad, _) = c.divrem(&g);
        rad.to_primitive_z()
    }

    pub fn is_algebraic_integer(&self) -> bool {
        is_algebraic_integer(&self.minpoly())
    }

    /// Image in the residue field of `P`; fails when a denominator vanishes mod p.
    pub fn reduce(&self, prime: &PrimeIdeal, fq: &Fq) -> Result<FqElem> {
        let p = prime.p;
        let mut cs = Vec::with_capacity(self.rep.coeffs().len());
        for c in self.rep.coeffs() {
            cs.push(rational_mod(c.numer(), c.denom(), p).ok_or(Error::BadReduction { p })?);
        }
        Ok(fq.from_fppoly(&FpPoly::new(p, cs)))
    }
}

/// The image of α in O/P ≅ F_{p^d}.
pub fn reduce_element(alpha: &NfElement, prime: &PrimeIdeal) -> Result<FqElem> {
    alpha.reduce(prime, &prime.residue_field()?)
}

/// Convenience wrapper: `N(Δ)` for a nonzero element.
pub fn norm_of_discriminant(delta: &NfElement) -> Result<BigRational> {
    delta.norm()
}

/// True when the rational `x` has `p` dividing its numerator or denominator.
pub fn p_divides_rational(x: &BigRational, p: u64) -> bool {
    let pb = BigInt::from(p);
    x.numer().is_multiple_of(&pb) || x.denom().is_multiple_of(&pb)
}

impl<'a> Add<&'a NfElement> for &'a NfElement {
    type Output = NfElement;
    fn add(self, o: &NfElement) -> NfElement {
        self.same_field(o);
        NfElement { field: self.field.clone(), rep: &self.rep + &o.rep }
    }
}

impl<'a> Sub<&'a NfElement> for &'a NfElement {
    type Output = NfElement;
    fn sub(self, o: &NfElement) -> NfElement {
        self.same_field(o);
        NfElement { field: self.field.clone(), rep: &self.rep - &o.rep }
    }
}

impl<'a> Mul<&'a NfElement> for &'a NfElement {
    type Output = NfElement;
    fn mul(self, o: &NfElement) -> NfElement {
        self.same_field(o);
        NfElement::new(self.field.clone(), &self.rep * &o.rep)
    }
}

impl Neg for &NfElement {
    type Output = NfElement;
    fn neg(self) -> NfElement {
        NfElement { field: self.field.clone(), rep: -&self.rep }
    }
}

impl fmt::Display for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}
