//! Elliptic curves y² = x³ + Ax + B over number fields and finite fields.

pub mod divpoly;
pub mod fqcurve;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::algebra::{FieldOps, Fq, FqElem, PrimeField};
use crate::error::{Error, Result};
use crate::numberfield::{p_divides_rational, NfElement, NumberField, PrimeIdeal};

pub use divpoly::{division_polynomial, CoeffRing, NfRing};
pub use fqcurve::{CurveFq, FrobeniusData, Point};

/// A curve over a number field with its discriminant and j-invariant.
#[derive(Clone, Debug)]
pub struct CurveNF {
    a: NfElement,
    b: NfElement,
    disc: NfElement,
    j: NfElement,
    disc_norm: BigRational,
}

impl CurveNF {
    /// `Δ = -16(4A³ + 27B²)` and `j = -1728 (4A)³ / Δ`.
    pub fn new(a: NfElement, b: NfElement) -> Result<Self> {
        let k = a.field().clone();
        let a3 = &(&a * &a) * &a;
        let core = &(&k.from_int(4) * &a3) + &(&k.from_int(27) * &(&b * &b));
        if core.is_zero() {
            return Err(Error::SingularCurve);
        }
        let disc = &k.from_int(-16) * &core;
        let j = (&k.from_int(-1728 * 64) * &a3).div(&disc)?;
        let disc_norm = disc.norm()?;
        Ok(CurveNF { a, b, disc, j, disc_norm })
    }

    /// A curve with the given j-invariant.
    pub fn from_j(j: &NfElement) -> Self {
        let k = j.field().clone();
        let (a, b) = if j.is_zero() {
            (k.from_int(0), k.from_int(1))
        } else if *j == k.from_int(1728) {
            (k.from_int(1), k.from_int(0))
        } else {
            let c = j.div(&(&k.from_int(1728) - j)).expect("j != 1728");
            (&k.from_int(3) * &c, &k.from_int(2) * &c)
        };
        CurveNF::new(a, b).expect("nonsingular for j != 0, 1728")
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.a.field()
    }

    pub fn a(&self) -> &NfElement {
        &self.a
    }

    pub fn b(&self) -> &NfElement {
        &self.b
    }

    pub fn discriminant(&self) -> &NfElement {
        &self.disc
    }

    pub fn j_invariant(&self) -> &NfElement {
        &self.j
    }

    /// `N_{L/Q}(Δ)`.
    pub fn disc_norm(&self) -> &BigRational {
        &self.disc_norm
    }

    /// Reduction at `P`, refused whenever `p` divides `N(Δ)` (numerator or
    /// denominator) or `p < 5`.
    pub fn reduce_at_prime(&self, prime: &PrimeIdeal) -> Result<ReducedCurve> {
        if prime.p < 5 {
            return Err(Error::domain(format!("reduction in characteristic {} < 5", prime.p)));
        }
        if p_divides_rational(&self.disc_norm, prime.p) {
            return Err(Error::BadReduction { p: prime.p });
        }
        self.reduce_unchecked(prime)
    }

    /// Reduction at `P` accepted whenever `A`, `B` are `P`-integral and the
    /// reduced curve is nonsingular, i.e. the model has good reduction at
    /// this particular prime.
    pub fn reduce_at_ideal(&self, prime: &PrimeIdeal) -> Result<ReducedCurve> {
        if prime.p < 5 {
            return Err(Error::domain(format!("reduction in characteristic {} < 5", prime.p)));
        }
        self.reduce_unchecked(prime)
    }

    fn reduce_unchecked(&self, prime: &PrimeIdeal) -> Result<ReducedCurve> {
        let fq = prime.residue_field()?;
        let a = self.a.reduce(prime, &fq)?;
        let b = self.b.reduce(prime, &fq)?;
        ReducedCurve::new(fq, a, b).ok_or(Error::BadReduction { p: prime.p })
    }

    /// ψ_ℓ over the field of definition.
    pub fn division_polynomial(&self, ell: usize) -> Vec<NfElement> {
        division_polynomial(&NfRing(self.field().clone()), &self.a, &self.b, ell)
    }
}

/// A reduced curve, specialised to machine-word arithmetic when `d = 1`.
#[derive(Clone, Debug)]
pub enum ReducedCurve {
    Prime(CurveFq<PrimeField>),
    Extension(CurveFq<Fq>),
}

impl ReducedCurve {
    /// `None` when singular.
    pub fn new(fq: Fq, a: FqElem, b: FqElem) -> Option<Self> {
        if fq.degree() == 1 {
            let f = PrimeField::new(fq.characteristic());
            CurveFq::new(f, a.0[0], b.0[0]).map(ReducedCurve::Prime)
        } else {
            CurveFq::new(fq, a, b).map(ReducedCurve::Extension)
        }
    }

    pub fn q(&self) -> u64 {
        match self {
            ReducedCurve::Prime(c) => c.field.order(),
            ReducedCurve::Extension(c) => c.field.order(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ReducedCurve::Prime(c) => c.field.characteristic(),
            ReducedCurve::Extension(c) => c.field.characteristic(),
        }
    }

    pub fn count_points<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            ReducedCurve::Prime(c) => c.count_points(rng),
            ReducedCurve::Extension(c) => c.count_points(rng),
        }
    }

    pub fn frobenius_data<R: Rng + ?Sized>(&self, rng: &mut R) -> FrobeniusData {
        match self {
            ReducedCurve::Prime(c) => c.frobenius_data(rng),
            ReducedCurve::Extension(c) => c.frobenius_data(rng),
        }
    }
}

/// `a² - 4q` as a big integer.
pub fn frobenius_disc(data: &FrobeniusData) -> BigInt {
    let w = data.frobenius_disc();
    debug_assert!(!data.supersingular || w <= 0);
    if w.is_zero() {
        BigInt::zero()
    } else {
        BigInt::from(w)
    }
}
