//! Frobenius observations `(a_P mod ℓ, N(P) mod ℓ)` and the witness test
//! that rules out every solvable image in GL₂(F_ℓ).

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{all_elements, closure_mask, generate_subgroup, is_solvable, GL2Elem};
use crate::algebra::arith::{is_prime_u64, legendre_u64, next_prime};
use crate::ellcurve::CurveNF;
use crate::error::{Error, Result};
use crate::numberfield::PrimeIdeal;

/// Largest residue field order used when gathering observations.
const MAX_OBS_NORM: u64 = 1 << 31;

/// Characteristic polynomial data of `ρ_ℓ(Frob_P)`: `x² - t x + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharPolyObs {
    pub ell: u64,
    pub t: u64,
    pub n: u64,
    pub p: u64,
    pub residue_degree: usize,
}

impl CharPolyObs {
    pub fn new(ell: u64, trace: i64, norm: u64, p: u64, residue_degree: usize) -> Self {
        CharPolyObs { ell, t: trace.rem_euclid(ell as i64) as u64, n: norm % ell, p, residue_degree }
    }

    /// `t² - 4n mod ℓ`.
    pub fn delta(&self) -> u64 {
        let l = self.ell;
        (self.t * self.t % l + 4 * (l - self.n)) % l
    }

    pub fn kinds(&self) -> [bool; 3] {
        witness_kinds(self.ell, self.t, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// Nonzero trace, discriminant a nonzero square.
    SplitNonzeroTrace,
    /// Nonzero trace, discriminant a nonsquare.
    NonsplitNonzeroTrace,
    /// `u = t²/n` outside `{0, 1, 2, 4}` and not a root of `u² - 3u + 1`.
    LargeProjectiveOrder,
}

/// Which of the three witness conditions `x² - t x + n` meets.
pub fn witness_kinds(ell: u64, t: u64, n: u64) -> [bool; 3] {
    let l = ell;
    let (t, n) = (t % l, n % l);
    assert!(n != 0, "determinant must be a unit");
    let delta = (t * t % l + 4 * (l - n)) % l;
    let chi = legendre_u64(delta, l);
    let n_inv = crate::algebra::arith::pow_mod(n, l - 2, l);
    let u = t * t % l * n_inv % l;
    let golden = (u * u % l + 1 + 3 * (l - u)).is_multiple_of(l);
    [t != 0 && chi == 1, t != 0 && chi == -1, !matches!(u, 0 | 1 | 2 | 4) && !golden]
}

/// The observation at `P`, or `None` when `p = ℓ`, `p < 5`, or `E` has bad
/// reduction at `P`.
pub fn frobenius_obs(curve: &CurveNF, prime: &PrimeIdeal, ell: u64, rng: &mut ChaCha8Rng) -> Option<CharPolyObs> {
    if prime.p == ell || prime.p < 5 {
        return None;
    }
    let red = curve.reduce_at_prime(prime).ok()?;
    let f = red.frobenius_data(rng);
    Some(CharPolyObs::new(ell, f.trace, f.q, prime.p, prime.d))
}

/// Observations at the prime ideals above `p = 5, 7, 11, ...` (skipping
/// primes dividing disc(T)), until `count` are collected.
pub fn gather_observations(curve: &CurveNF, ell: u64, count: usize, seed: u64) -> Vec<CharPolyObs> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut p = 5;
    let field = curve.field();
    while out.len() < count && p < MAX_OBS_NORM {
        if let Ok(ideals) = field.split_prime(p) {
            for prime in ideals {
                if out.len() == count {
                    break;
                }
                if prime.norm.to_u64().is_none_or(|n| n > MAX_OBS_NORM) {
                    continue;
                }
                if let Some(o) = frobenius_obs(curve, &prime, ell, &mut rng) {
                    out.push(o);
                }
            }
        }
        p = next_prime(p + 1);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertVerdict {
    /// The image contains SL₂(F_ℓ); E has no CM.
    Certified,
    /// No full witness triple; consistent with CM, never a certificate of it.
    Insufficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub ell: u64,
    pub verdict: CertVerdict,
    /// Index of the first observation of each witness kind.
    pub witnesses: [Option<usize>; 3],
    pub observations: usize,
}

/// Certified once the observations contain all three witness kinds.
pub fn nonsolvable_certificate(obs: &[CharPolyObs], ell: u64) -> Result<Certificate> {
    if ell < 5 || !is_prime_u64(ell) {
        return Err(Error::domain(format!("the certificate needs a prime ℓ ≥ 5, got {ell}")));
    }
    let mut witnesses = [None; 3];
    for (i, o) in obs.iter().enumerate() {
        if o.ell != ell || o.n == 0 {
            return Err(Error::domain(format!("observation {i} is not a unit-determinant class mod {ell}")));
        }
        for (slot, hit) in witnesses.iter_mut().zip(o.kinds()) {
            if hit && slot.is_none() {
                *slot = Some(i);
            }
        }
    }
    let verdict =
        if witnesses.iter().all(Option::is_some) { CertVerdict::Certified } else { CertVerdict::Insufficient };
    Ok(Certificate { ell, verdict, witnesses, observations: obs.len() })
}

/// Smallest prime `ℓ ≥ max(c · max(d, h)^γ, 5)` not dividing `disc`.
pub fn mw_ell_floor(d: u64, h: f64, c: Option<f64>, gamma: Option<f64>, disc: &BigInt) -> Result<u64> {
    let (Some(c), Some(gamma)) = (c, gamma) else {
        return Err(Error::config("the Masser–Wüstholz constants c and γ must be supplied"));
    };
    if !(c > 0.0 && gamma > 0.0) {
        return Err(Error::config("c and γ must be positive"));
    }
    let floor = (c * (d as f64).max(h).powf(gamma)).max(5.0).ceil();
    if floor > 1e15 {
        return Err(Error::Capability(format!("ℓ floor {floor:.3e} is out of range")));
    }
    let mut ell = floor as u64;
    loop {
        if is_prime_u64(ell) && (disc % ell as i64 != BigInt::from(0) || *disc == BigInt::from(0)) {
            return Ok(ell);
        }
        ell += 1;
    }
}

/// Summary of the exhaustive soundness check of the witness criterion.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub ell: u32,
    /// Conjugacy classes of first witnesses tried.
    pub first_witness_classes: usize,
    /// Distinct subgroups `<x1, x2>` examined and how many were solvable.
    pub pair_subgroups: usize,
    pub solvable_pair_subgroups: usize,
    /// Distinct subgroups `<x1, x2, x3>` examined over solvable pairs.
    pub triple_subgroups: usize,
    /// Solvable subgroups containing all three witness kinds.
    pub counterexamples: Vec<[GL2Elem; 3]>,
}

fn kinds_of(e: &GL2Elem) -> [bool; 3] {
    witness_kinds(e.ell as u64, e.trace() as u64, e.det() as u64)
}

fn subgroup_key(mask: &[bool]) -> Vec<u16> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u16).collect()
}

fn solvable_from(ell: u32, gens: &[GL2Elem]) -> bool {
    is_solvable(&generate_subgroup(ell, gens).expect("ℓ checked by caller"))
}

/// Checks that no solvable subgroup of GL₂(F_ℓ) holds a full witness
/// triple. Any such subgroup contains `<x1, x2, x3>` for some triple, and
/// conjugation preserves both solvability and witness kinds, so `x1` runs
/// over class representatives and `x2`, `x3` over all elements.
pub fn witness_soundness_sweep(ell: u32) -> Result<SweepReport> {
    if ell < 5 {
        return Err(Error::domain("the sweep needs ℓ ≥ 5"));
    }
    generate_subgroup(ell, &[])?;
    let all = all_elements(ell);
    let kinds: Vec<[bool; 3]> = all.iter().map(kinds_of).collect();
    let of_kind =
        |k: usize| -> Vec<GL2Elem> { all.iter().zip(&kinds).filter(|(_, ks)| ks[k]).map(|(e, _)| *e).collect() };
    let (first, second, third) = (of_kind(0), of_kind(1), of_kind(2));

    let mut reps = Vec::new();
    let mut covered = HashSet::new();
    for x in &first {
        if covered.contains(x) {
            continue;
        }
        reps.push(*x);
        covered.extend(all.iter().map(|g| x.conjugate_by(g)));
    }

    let mut report = SweepReport {
        ell,
        first_witness_classes: reps.len(),
        pair_subgroups: 0,
        solvable_pair_subgroups: 0,
        triple_subgroups: 0,
        counterexamples: Vec::new(),
    };
    let mut pairs_seen = HashSet::new();
    let mut triples_seen = HashSet::new();
    for x1 in &reps {
        for x2 in &second {
            let (mask, elems) = closure_mask(ell, &[*x1, *x2]);
            if !pairs_seen.insert(subgroup_key(&mask)) {
                continue;
            }
            report.pair_subgroups += 1;
            if !solvable_from(ell, &[*x1, *x2]) {
                continue;
            }
            report.solvable_pair_subgroups += 1;
            if let Some(x3) = elems.iter().find(|e| kinds_of(e)[2]) {
                report.counterexamples.push([*x1, *x2, *x3]);
                continue;
            }
            for x3 in &third {
                let (mask3, _) = closure_mask(ell, &[*x1, *x2, *x3]);
                if !triples_seen.insert(subgroup_key(&mask3)) {
                    continue;
                }
                report.triple_subgroups += 1;
                if solvable_from(ell, &[*x1, *x2, *x3]) {
                    report.counterexamples.push([*x1, *x2, *x3]);
                }
            }
        }
    }
    Ok(report)
}
