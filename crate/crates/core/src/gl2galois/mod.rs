//! Explicit GL₂(F_ℓ) computations and a Frobenius-based certificate that the
//! mod-ℓ image of a curve is not solvable.

pub mod certificate;

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::Serialize;

use crate::algebra::arith::{is_prime_u64, legendre_u64};
use crate::error::{Error, Result};
pub use certificate::{
    frobenius_obs, gather_observations, mw_ell_floor, nonsolvable_certificate, CertVerdict, Certificate, CharPolyObs,
    WitnessKind,
};

/// Largest ℓ for which subgroups are materialized.
pub const MAX_GROUP_ELL: u32 = 13;

/// A 2×2 matrix `[[a, b], [c, d]]` over F_ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GL2Elem {
    pub ell: u32,
    pub m: [u32; 4],
}

impl GL2Elem {
    /// Reduces entries mod ℓ; `None` when singular.
    pub fn new(ell: u32, entries: [i64; 4]) -> Option<Self> {
        let l = ell as i64;
        let m = entries.map(|x| x.rem_euclid(l) as u32);
        let e = GL2Elem { ell, m };
        (e.det() != 0).then_some(e)
    }

    pub fn identity(ell: u32) -> Self {
        GL2Elem { ell, m: [1, 0, 0, 1] }
    }

    pub fn scalar(ell: u32, s: u32) -> Self {
        GL2Elem { ell, m: [s % ell, 0, 0, s % ell] }
    }

    pub fn det(&self) -> u32 {
        let l = self.ell as u64;
        let [a, b, c, d] = self.m.map(|x| x as u64);
        ((a * d % l + l * l - b * c % l) % l) as u32
    }

    pub fn trace(&self) -> u32 {
        (self.m[0] + self.m[3]) % self.ell
    }

    pub fn is_identity(&self) -> bool {
        self.m == [1, 0, 0, 1]
    }

    pub fn mul(&self, o: &GL2Elem) -> GL2Elem {
        let l = self.ell;
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        GL2Elem { ell: l, m: [(a * e + b * g) % l, (a * f + b * h) % l, (c * e + d * g) % l, (c * f + d * h) % l] }
    }

    pub fn inv(&self) -> GL2Elem {
        let l = self.ell;
        let di = crate::algebra::arith::pow_mod(self.det() as u64, l as u64 - 2, l as u64) as u32;
        let [a, b, c, d] = self.m;
        let s = |x: u32| x * di % l;
        GL2Elem { ell: l, m: [s(d), s((l - b) % l), s((l - c) % l), s(a)] }
    }

    pub fn commutator(&self, o: &GL2Elem) -> GL2Elem {
        self.mul(o).mul(&self.inv()).mul(&o.inv())
    }

    pub fn conjugate_by(&self, g: &GL2Elem) -> GL2Elem {
        g.mul(self).mul(&g.inv())
    }

    /// Dense index in `0..ℓ⁴`.
    pub fn code(&self) -> usize {
        let l = self.ell as usize;
        let [a, b, c, d] = self.m.map(|x| x as usize);
        ((a * l + b) * l + c) * l + d
    }

    pub fn from_code(ell: u32, code: usize) -> GL2Elem {
        let l = ell as usize;
        let m = [code / (l * l * l), code / (l * l) % l, code / l % l, code % l].map(|x| x as u32);
        GL2Elem { ell, m }
    }
}

/// `|GL₂(F_ℓ)| = (ℓ² - 1)(ℓ² - ℓ)`.
pub fn gl2_order(ell: u64) -> u64 {
    (ell * ell - 1) * (ell * ell - ell)
}

/// Every invertible matrix over F_ℓ.
pub fn all_elements(ell: u32) -> Vec<GL2Elem> {
    let n = (ell as usize).pow(4);
    (0..n).map(|c| GL2Elem::from_code(ell, c)).filter(|e| e.det() != 0).collect()
}

/// A materialized subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub ell: u32,
    pub generators: Vec<GL2Elem>,
    /// Sorted.
    pub elements: Vec<GL2Elem>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GL2Elem) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

fn check_ell(ell: u32) -> Result<()> {
    if ell < 3 || !is_prime_u64(ell as u64) {
        return Err(Error::domain(format!("ℓ = {ell} must be an odd prime")));
    }
    if ell > MAX_GROUP_ELL {
        return Err(Error::Capability(format!("subgroup enumeration needs ℓ ≤ {MAX_GROUP_ELL}, got {ell}")));
    }
    Ok(())
}

/// Closure of `gens` under multiplication, as a membership mask over codes.
fn closure_mask(ell: u32, gens: &[GL2Elem]) -> (Vec<bool>, Vec<GL2Elem>) {
    let mut seen = vec![false; (ell as usize).pow(4)];
    let id = GL2Elem::identity(ell);
    seen[id.code()] = true;
    let mut elems = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            let c = y.code();
            if !seen[c] {
                seen[c] = true;
                elems.push(y);
                queue.push_back(y);
            }
        }
    }
    (seen, elems)
}

/// The subgroup generated by `gens`.
pub fn generate_subgroup(ell: u32, gens: &[GL2Elem]) -> Result<Subgroup> {
    check_ell(ell)?;
    if let Some(g) = gens.iter().find(|g| g.ell != ell || g.det() == 0) {
        return Err(Error::domain(format!("{g:?} is not in GL2(F_{ell})")));
    }
    let (_, mut elements) = closure_mask(ell, gens);
    elements.sort();
    Ok(Subgroup { ell, generators: gens.to_vec(), elements })
}

/// A subset of `gens` generating the same group; each kept element is
/// outside the group generated by the earlier ones, so at most `log2 |G|`
/// survive.
fn prune_generators(ell: u32, gens: &[GL2Elem]) -> Vec<GL2Elem> {
    let mut kept = Vec::new();
    let (mut mask, _) = closure_mask(ell, &kept);
    for g in gens {
        if !mask[g.code()] {
            kept.push(*g);
            mask = closure_mask(ell, &kept).0;
        }
    }
    kept
}

/// Generators of `[G, G]` for `G = <gens>`: the normal closure of the
/// generator commutators.
fn derived_generators(ell: u32, gens: &[GL2Elem]) -> Vec<GL2Elem> {
    let gens = prune_generators(ell, gens);
    let gens = &gens[..];
    let mut dgens: Vec<GL2Elem> = Vec::new();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let c = x.commutator(y);
            if !c.is_identity() {
                dgens.push(c);
            }
        }
    }
    loop {
        let (mask, _) = closure_mask(ell, &dgens);
        let mut extra: Vec<GL2Elem> = dgens
            .iter()
            .flat_map(|n| gens.iter().map(move |g| n.conjugate_by(g)))
            .filter(|c| !mask[c.code()])
            .collect();
        if extra.is_empty() {
            return prune_generators(ell, &dgens);
        }
        extra.sort();
        extra.dedup();
        dgens.extend(extra);
        dgens = prune_generators(ell, &dgens);
    }
}

/// Orders along the derived series, starting with `|G|`.
pub fn derived_series_orders(g: &Subgroup) -> Vec<usize> {
    let mut orders = vec![g.order()];
    let mut gens = g.generators.clone();
    loop {
        let next = derived_generators(g.ell, &gens);
        let size = closure_mask(g.ell, &next).1.len();
        if size == *orders.last().unwrap() {
            return orders;
        }
        orders.push(size);
        if size == 1 {
            return orders;
        }
        gens = next;
    }
}

/// True iff the derived series reaches the trivial group.
pub fn is_solvable(g: &Subgroup) -> bool {
    *derived_series_orders(g).last().unwrap() == 1
}

/// `(#invertible trace-zero matrices, |GL₂|)` by direct enumeration.
pub fn trace_zero_count_enumerated(ell: u64) -> (u64, u64) {
    let mut count = 0;
    for a in 0..ell {
        for b in 0..ell {
            for c in 0..ell {
                // det [[a, b], [c, -a]] = -a² - bc
                if (a * a + b * c) % ell != 0 {
                    count += 1;
                }
            }
        }
    }
    (count, gl2_order(ell))
}

/// The same count from conjugacy classes: `x² + δ` is split semisimple
/// (centralizer `(ℓ-1)²`) when `-δ` is a square, else elliptic
/// (centralizer `ℓ² - 1`).
pub fn trace_zero_count_by_classes(ell: u64) -> (u64, u64) {
    let order = gl2_order(ell);
    let count = (1..ell)
        .map(|delta| {
            let centralizer = if legendre_u64(ell - delta, ell) == 1 { (ell - 1) * (ell - 1) } else { ell * ell - 1 };
            order / centralizer
        })
        .sum();
    (count, order)
}

/// `r_ℓ`, the proportion of trace-zero elements of GL₂(F_ℓ).
pub fn trace_zero_ratio(ell: u64) -> Result<Ratio<u64>> {
    if !(3..=97).contains(&ell) || !is_prime_u64(ell) {
        return Err(Error::domain(format!("ℓ = {ell} must be an odd prime ≤ 97")));
    }
    let (num, den) = trace_zero_count_enumerated(ell);
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ell: u32, e: [i64; 4]) -> GL2Elem {
        GL2Elem::new(ell, e).unwrap()
    }

    #[test]
    fn generation_examples() {
        assert_eq!(generate_subgroup(5, &[]).unwrap().order(), 1);
        assert_eq!(generate_subgroup(5, &[m(5, [0, -1, 1, 0])]).unwrap().order(), 4);
        let sl2 = generate_subgroup(5, &[m(5, [1, 1, 0, 1]), m(5, [0, -1, 1, 0])]).unwrap();
        assert_eq!(sl2.order(), 120);
        assert!(matches!(generate_subgroup(17, &[]), Err(Error::Capability(_))));
    }

    #[test]
    fn full_group_orders() {
        for ell in [3u32, 5, 7] {
            let all = all_elements(ell);
            assert_eq!(all.len() as u64, gl2_order(ell as u64));
            let g = generate_subgroup(ell, &all).unwrap();
            assert_eq!(g.order() as u64, gl2_order(ell as u64));
        }
    }

    #[test]
    fn solvability_examples() {
        let gl3 = generate_subgroup(3, &all_elements(3)).unwrap();
        assert_eq!(derived_series_orders(&gl3), vec![48, 24, 8, 2, 1]);
        assert!(is_solvable(&gl3));
        let sl2 = generate_subgroup(5, &[m(5, [1, 1, 0, 1]), m(5, [0, -1, 1, 0])]).unwrap();
        assert_eq!(derived_series_orders(&sl2), vec![120]);
        assert!(!is_solvable(&sl2));
        let b = generate_subgroup(7, &[m(7, [3, 0, 0, 1]), m(7, [1, 0, 0, 3]), m(7, [1, 1, 0, 1])]).unwrap();
        assert!(b.elements.iter().all(|e| e.m[2] == 0));
        assert_eq!(b.order(), 7 * 36);
        assert!(is_solvable(&b));
    }

    #[test]
    fn group_axioms() {
        let all = all_elements(5);
        for (i, x) in all.iter().enumerate().step_by(7) {
            assert!(x.mul(&x.inv()).is_identity());
            let y = &all[(i * 31 + 5) % all.len()];
            assert_eq!(x.mul(y).det(), x.det() * y.det() % 5);
            assert_eq!(GL2Elem::from_code(5, x.code()), *x);
        }
    }

    #[test]
    fn trace_zero_ratios() {
        assert_eq!(trace_zero_ratio(3).unwrap(), Ratio::new(3, 8));
        assert_eq!(trace_zero_ratio(5).unwrap(), Ratio::new(5, 24));
        let mut prev = Ratio::new(1, 1);
        for ell in crate::algebra::arith::primes_up_to(31).into_iter().skip(1) {
            assert_eq!(trace_zero_count_enumerated(ell), trace_zero_count_by_classes(ell));
            let r = trace_zero_ratio(ell).unwrap();
            assert!(r * ell <= Ratio::from_integer(2));
            assert!(r < prev);
            prev = r;
        }
        assert!(trace_zero_ratio(7).unwrap() < Ratio::new(1, 4));
        assert!(trace_zero_ratio(2).is_err());
    }
}
