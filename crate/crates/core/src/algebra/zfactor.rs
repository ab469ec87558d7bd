//! Irreducibility of monic integer polynomials.
//!
//! A cheap certificate comes first: the factor-degree patterns modulo
//! several primes must admit no proper subset sum. When that is
//! inconclusive, the modular factorization is Hensel-lifted past the
//! Mignotte bound and factor combinations are tried over Z (Zassenhaus).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::arith::primes_up_to;
use super::fppoly::FpPoly;
use super::poly::ZPoly;
use crate::error::{Error, Result};

/// Outcome of an irreducibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper monic factor over Z.
    Reducible(ZPoly),
}

/// Decides irreducibility over Q of a monic integer polynomial of degree >= 1.
pub fn check_irreducible(t: &ZPoly) -> Result<Irreducibility> {
    let n = match t.degree() {
        None | Some(0) => return Err(Error::domain("irreducibility of a constant")),
        Some(n) => n,
    };
    if !t.is_monic() {
        return Err(Error::input("polynomial must be monic"));
    }
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    let disc = t.discriminant();
    if disc.is_zero() {
        let g = t.to_q().gcd(&t.derivative().to_q());
        return Ok(Irreducibility::Reducible(g.to_primitive_z()));
    }
    // Rational roots divide the constant term; only a cheap case is tried.
    if t.coeff(0).is_zero() {
        return Ok(Irreducibility::Reducible(ZPoly::x()));
    }

    let mut possible = vec![true; n + 1];
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut good_primes = 0;
    for p in primes_up_to(2000) {
        if (&disc % p).is_zero() {
            continue;
        }
        let fs: Vec<FpPoly> = FpPoly::from_zpoly(t, p).factor().into_iter().map(|(g, _)| g).collect();
        if fs.len() == 1 {
            return Ok(Irreducibility::Irreducible);
        }
        let sums = subset_sums(&fs.iter().map(|g| g.degree().unwrap()).collect::<Vec<_>>(), n);
        for (k, ok) in possible.iter_mut().enumerate() {
            *ok &= sums[k];
        }
        if possible[1..n].iter().all(|ok| !ok) {
            return Ok(Irreducibility::Irreducible);
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        good_primes += 1;
        if good_primes >= 12 {
            break;
        }
    }
    let (p, factors) = best.ok_or_else(|| Error::Capability("no usable prime below 2000".into()))?;
    Ok(zassenhaus(t, p, &factors, &possible))
}

fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degs {
        for k in (d..=n).rev() {
            if reach[k - d] {
                reach[k] = true;
            }
        }
    }
    reach
}

fn zassenhaus(t: &ZPoly, p: u64, factors: &[FpPoly], possible: &[bool]) -> Irreducibility {
    let n = t.degree().unwrap();
    // Mignotte: every coefficient of a monic factor is at most 2^n * sum|a_i|.
    let weight: BigInt = t.coeffs().iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << n) * weight * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let lifted = lift_all(t, factors, p, k);
    let r = lifted.len();
    let half = &pk / 2;
    let sym = |c: &BigInt| {
        let c = c.mod_floor(&pk);
        if c > half {
            c - &pk
        } else {
            c
        }
    };
    for size in 1..=r / 2 {
        for combo in combinations(r, size) {
            let deg: usize = combo.iter().map(|&i| lifted[i].degree().unwrap()).sum();
            if deg > n / 2 || !possible[deg] {
                continue;
            }
            let prod = combo.iter().fold(ZPoly::one(), |acc, &i| (&acc * &lifted[i]).map(|c| c.mod_floor(&pk)));
            let cand = prod.map(sym);
            if t.div_exact_monic(&cand).is_some() {
                return Irreducibility::Reducible(cand);
            }
        }
    }
    Irreducibility::Irreducible
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn fp_product(p: u64, fs: &[FpPoly]) -> FpPoly {
    fs.iter().fold(FpPoly::one(p), |a, g| a.mul(g))
}

/// Lifts the monic factorization `f = prod factors (mod p)` to `mod p^k`.
fn lift_all(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        return vec![f.map(|c| c.mod_floor(&pk))];
    }
    let mid = factors.len() / 2;
    let g = fp_product(p, &factors[..mid]);
    let h = fp_product(p, &factors[mid..]);
    let (gl, hl) = hensel_pair(f, &g, &h, p, k);
    let mut out = lift_all(&gl, &factors[..mid], p, k);
    out.extend(lift_all(&hl, &factors[mid..], p, k));
    out
}

/// Linear Hensel lifting of `f = g h (mod p)` with `g, h` monic and coprime.
fn hensel_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    // s g + t h = 1; the correction (dg, dh) solves dg h + dh g = e (mod p)
    let (one, _, t) = g.ext_gcd(h);
    debug_assert!(one.is_one());
    let pb = BigInt::from(p);
    let mut gz = g.to_zpoly();
    let mut hz = h.to_zpoly();
    let mut pi = pb.clone();
    for _ in 1..k {
        let diff = f - &(&gz * &hz);
        let e = FpPoly::from_zpoly(&diff.map(|c| c / &pi), p);
        let dg = e.mul(&t).rem(g);
        let dh = e.sub(&dg.mul(h)).div(g);
        gz = &gz + &dg.to_zpoly().scale(&pi);
        hz = &hz + &dh.to_zpoly().scale(&pi);
        pi *= &pb;
        gz = gz.map(|c| c.mod_floor(&pi));
        hz = hz.map(|c| c.mod_floor(&pi));
    }
    (gz, hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(cs: &[i64]) -> ZPoly {
        ZPoly::from_i64s(cs)
    }

    #[test]
    fn irreducible_examples() {
        for t in [
            z(&[1, 0, 1]),
            z(&[-2, 0, 0, 1]),
            z(&[-1, -1, 1]),
            z(&[-51, -22, -33, -65, -12, 1]),
            // x^4 + 1: reducible mod every prime, irreducible over Q
            z(&[1, 0, 0, 0, 1]),
            // x^4 - 10x^2 + 1: minimal polynomial of sqrt2 + sqrt3
            z(&[1, 0, -10, 0, 1]),
        ] {
            assert_eq!(check_irreducible(&t).unwrap(), Irreducibility::Irreducible, "{t}");
        }
    }

    #[test]
    fn reducible_examples_produce_factor() {
        for t in [
            &z(&[1, 0, 1]) * &z(&[2, 0, 1]),
            &z(&[1, 0, 1]) * &z(&[1, 0, 1]),
            &z(&[-3, 1]) * &z(&[1, 1, 1]),
            &z(&[1, 0, -10, 0, 1]) * &z(&[5, 3, 0, 1]),
            &z(&[7, 0, 1]) * &z(&[0, 1]),
        ] {
            match check_irreducible(&t).unwrap() {
                Irreducibility::Reducible(f) => {
                    let d = f.degree().unwrap();
                    assert!(d >= 1 && d < t.degree().unwrap());
                    assert!(t.div_exact_monic(&f).is_some());
                }
                Irreducibility::Irreducible => panic!("{t} reported irreducible"),
            }
        }
    }

    #[test]
    fn non_monic_rejected() {
        assert!(check_irreducible(&z(&[-1, 2])).is_err());
    }
}
