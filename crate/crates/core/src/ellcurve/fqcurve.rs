//! Curves y² = x³ + ax + b over a finite field and their point counts.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::algebra::arith::{factor_u64, isqrt_u64};
use crate::algebra::FieldOps;

/// Largest field size counted by direct enumeration.
pub const NAIVE_LIMIT: u64 = 1 << 16;

/// Number of random points tried before falling back to the twist.
const MAX_POINTS: usize = 20;

#[derive(Clone, Debug)]
pub struct CurveFq<F: FieldOps> {
    pub field: F,
    pub a: F::Elem,
    pub b: F::Elem,
}

/// Trace of Frobenius for a reduced curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusData {
    pub trace: i64,
    pub q: u64,
    pub point_count: u64,
    pub supersingular: bool,
}

impl FrobeniusData {
    /// Builds the record from `#E(F_q)`; panics if the Hasse bound fails.
    pub fn from_count(q: u64, p: u64, count: u64) -> Self {
        let trace = q as i64 + 1 - count as i64;
        assert!((trace as i128).pow(2) <= 4 * q as i128, "Hasse bound violated: q={q}, #E={count}");
        FrobeniusData { trace, q, point_count: count, supersingular: trace.rem_euclid(p as i64) == 0 }
    }

    /// `a² - 4q`, negative for ordinary reductions.
    pub fn frobenius_disc(&self) -> i128 {
        (self.trace as i128).pow(2) - 4 * self.q as i128
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point<E> {
    Infinity,
    Affine(E, E),
}

impl<F: FieldOps> CurveFq<F> {
    /// `None` when the curve is singular.
    pub fn new(field: F, a: F::Elem, b: F::Elem) -> Option<Self> {
        let c = CurveFq { field, a, b };
        (!c.field.is_zero(&c.discriminant_part())).then_some(c)
    }

    /// `4a³ + 27b²`.
    pub fn discriminant_part(&self) -> F::Elem {
        let f = &self.field;
        let a3 = f.mul(&f.square(&self.a), &self.a);
        let b2 = f.square(&self.b);
        f.add(&f.mul(&f.from_u64(4), &a3), &f.mul(&f.from_u64(27), &b2))
    }

    pub fn j_invariant(&self) -> F::Elem {
        let f = &self.field;
        let a3 = f.mul(&f.square(&self.a), &self.a);
        let num = f.mul(&f.from_u64(6912), &a3);
        f.mul(&num, &f.inv(&self.discriminant_part()).unwrap())
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        f.add(&f.mul(&f.add(&f.square(x), &self.a), x), &self.b)
    }

    /// The quadratic twist by the smallest nonresidue.
    pub fn twist(&self) -> Self
    where
        F: Clone,
    {
        let f = &self.field;
        let d = f.nonresidue();
        let d2 = f.square(&d);
        CurveFq { field: self.field.clone(), a: f.mul(&self.a, &d2), b: f.mul(&self.b, &f.mul(&d2, &d)) }
    }

    pub fn is_on_curve(&self, pt: &Point<F::Elem>) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => self.field.square(y) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &Point<F::Elem>) -> Point<F::Elem> {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.field.neg(y)),
        }
    }

    pub fn add(&self, p1: &Point<F::Elem>, p2: &Point<F::Elem>) -> Point<F::Elem> {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, _) => return p2.clone(),
            (_, Point::Infinity) => return p1.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Point::Infinity;
            }
            let num = f.add(&f.mul(&f.from_u64(3), &f.square(x1)), &self.a);
            f.mul(&num, &f.inv(&f.add(y1, y1)).unwrap())
        } else {
            f.mul(&f.sub(y2, y1), &f.inv(&f.sub(x2, x1)).unwrap())
        };
        let x3 = f.sub(&f.sub(&f.square(&lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, pt: &Point<F::Elem>, mut k: u64) -> Point<F::Elem> {
        let mut acc = Point::Infinity;
        let mut base = pt.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<F::Elem> {
        loop {
            let x = self.field.random(rng);
            if let Some(y) = self.field.sqrt(&self.rhs(&x)) {
                let y = if rng.gen::<bool>() { self.field.neg(&y) } else { y };
                return Point::Affine(x, y);
            }
        }
    }

    /// `#E(F_q)` by the character sum over all x.
    pub fn count_naive(&self) -> u64 {
        let f = &self.field;
        let q = f.order();
        let mut is_sq = vec![false; q as usize];
        for i in 0..q {
            let x = f.from_index(i);
            is_sq[f.index(&f.square(&x)) as usize] = true;
        }
        let mut count = 1u64;
        for i in 0..q {
            let r = self.rhs(&f.from_index(i));
            if f.is_zero(&r) {
                count += 1;
            } else if is_sq[f.index(&r) as usize] {
                count += 2;
            }
        }
        count
    }

    /// Exact order of a point given a multiple `m` that kills it.
    fn order_from_multiple(&self, pt: &Point<F::Elem>, m: u64) -> u64 {
        let mut ord = m;
        for (r, _) in factor_u64(m) {
            while ord.is_multiple_of(r) && self.mul(pt, ord / r) == Point::Infinity {
                ord /= r;
            }
        }
        ord
    }

    /// Some `m` in the Hasse interval with `m P = O` (baby-step giant-step).
    fn hasse_multiple(&self, pt: &Point<F::Elem>) -> u64 {
        let q = self.field.order();
        let bound = 2 * isqrt_u64(q) + 2;
        let s = isqrt_u64(bound) + 1;
        let step = 2 * s + 1;
        let mut baby: HashMap<F::Elem, (u64, F::Elem)> = HashMap::with_capacity(s as usize + 1);
        let mut jp: Point<F::Elem> = Point::Infinity;
        for j in 0..=s {
            if let Point::Affine(x, y) = &jp {
                baby.entry(x.clone()).or_insert((j, y.clone()));
            }
            jp = self.add(&jp, pt);
        }
        let giant = self.mul(pt, step);
        let base = q + 1;
        let mut r = self.mul(pt, base);
        let g_max = bound / step + 1;
        // offsets i = 0, 1, -1, 2, -2, ... of the giant step
        let neg_giant = self.neg(&giant);
        let mut r_neg = r.clone();
        for i in 0..=g_max as i64 {
            for (sign, cur) in [(1i64, &r), (-1, &r_neg)] {
                if i == 0 && sign == -1 {
                    continue;
                }
                let shift = sign * i * step as i64;
                let found = match cur {
                    Point::Infinity => Some(0i64),
                    Point::Affine(x, y) => baby.get(x).map(|(j, yj)| if yj == y { -(*j as i64) } else { *j as i64 }),
                };
                if let Some(off) = found {
                    let m = base as i64 + shift + off;
                    if m > 0 {
                        return m as u64;
                    }
                }
            }
            r = self.add(&r, &giant);
            r_neg = self.add(&r_neg, &neg_giant);
        }
        unreachable!("every point order divides a value in the Hasse interval")
    }

    /// `#E(F_q)`: naive below [`NAIVE_LIMIT`], else [`count_bsgs`](Self::count_bsgs)
    /// with naive enumeration as the last resort.
    pub fn count_points<R: Rng + ?Sized>(&self, rng: &mut R) -> u64
    where
        F: Clone,
    {
        if self.field.order() <= NAIVE_LIMIT {
            return self.count_naive();
        }
        self.count_bsgs(rng).unwrap_or_else(|| self.count_naive())
    }

    /// `#E(F_q)` from the orders of random points on the curve and its twist;
    /// `None` if the Hasse interval still holds several candidates.
    pub fn count_bsgs<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<u64>
    where
        F: Clone,
    {
        let q = self.field.order();
        let r = isqrt_u64(4 * q);
        let lo = q + 1 - r;
        let hi = q + 1 + r;
        let candidates = |l: u64| -> Vec<u64> { (lo.div_ceil(l) * l..=hi).step_by(l as usize).collect() };

        let mut l = 1u64;
        for _ in 0..MAX_POINTS {
            let pt = self.random_point(rng);
            let m = self.hasse_multiple(&pt);
            l = lcm(l, self.order_from_multiple(&pt, m));
            let live = candidates(l);
            if live.len() == 1 {
                return Some(live[0]);
            }
        }
        let tw = self.twist();
        let mut lt = 1u64;
        for _ in 0..MAX_POINTS {
            let pt = tw.random_point(rng);
            let m = tw.hasse_multiple(&pt);
            lt = lcm(lt, tw.order_from_multiple(&pt, m));
            let live: Vec<u64> = candidates(l).into_iter().filter(|n| (2 * q + 2 - n).is_multiple_of(lt)).collect();
            if live.len() == 1 {
                return Some(live[0]);
            }
        }
        None
    }

    pub fn frobenius_data<R: Rng + ?Sized>(&self, rng: &mut R) -> FrobeniusData
    where
        F: Clone,
    {
        let q = self.field.order();
        FrobeniusData::from_count(q, self.field.characteristic(), self.count_points(rng))
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}
