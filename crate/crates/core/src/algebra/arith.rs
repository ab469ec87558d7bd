//! Integer number theory: Kronecker symbols, primality, factorization and
//! square-free decompositions.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Extended Kronecker symbol `(a/n)`.
///
/// For an odd prime `n` this is the Legendre symbol.
pub fn kronecker(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.is_zero() {
        return Err(Error::domain("kronecker symbol with n = 0"));
    }
    let mut result: i8 = 1;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let twos = n.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if a.is_even() {
            return Ok(0);
        }
        n >>= twos;
        let a8 = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if twos % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
    }
    // n is odd and positive: Jacobi symbol.
    let mut a = a.mod_floor(&n);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let n8 = (&n % 8u32).to_u8().unwrap();
            if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u8() == Some(3) && (&n % 4u32).to_u8() == Some(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// Kronecker symbol on machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> Result<i8> {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= limit`, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.max(2);
    while !is_prime_u64(k) {
        k += 1;
    }
    k
}

fn pollard_brent(n: u64, seed: u64) -> u64 {
    let f = |x: u64, c: u64| (mul_mod(x, x, n) + c) % n;
    let c = seed % (n - 1) + 1;
    let mut y = seed % n;
    let m = 64;
    let mut g = 1;
    let mut r = 1;
    let mut q = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y, c);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y, c);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys, c);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let mut seed = 2;
    loop {
        let d = pollard_brent(n, seed);
        if d != n && d != 1 {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
        seed += 1;
    }
}

/// Prime factorization of `n >= 1` as sorted `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_big(n: &BigUint, c: u32) -> BigUint {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    loop {
        x = f(&x);
        y = f(&f(&y));
        let diff = if x > y { &x - &y } else { &y - &x };
        let g = diff.gcd(n);
        if !g.is_one() {
            return g;
        }
    }
}

fn factor_big_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        out.extend(factor_u64(small).into_iter().flat_map(|(p, e)| std::iter::repeat_n(BigUint::from(p), e as usize)));
        return;
    }
    if is_probable_prime_big(&n) {
        out.push(n);
        return;
    }
    let mut c = 1;
    loop {
        let d = pollard_big(&n, c);
        if d != n {
            let rest = &n / &d;
            factor_big_into(d, out);
            factor_big_into(rest, out);
            return;
        }
        c += 1;
    }
}

/// Factorization of `|n|` (n nonzero) as sorted `(prime, exponent)` pairs.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigUint, u32)> {
    let mut primes = Vec::new();
    let mut m = n.magnitude().clone();
    for p in [2u32, 3, 5, 7, 11, 13] {
        let p = BigUint::from(p);
        while (&m % &p).is_zero() {
            primes.push(p.clone());
            m /= &p;
        }
    }
    factor_big_into(m, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Writes `n = f^2 * s` with `s` square-free, `sign(s) = sign(n)` and `f >= 1`.
pub fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if n.is_zero() {
        return Err(Error::domain("square-free part of 0"));
    }
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    for (p, e) in factor_bigint(n) {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            s *= &p;
        }
        f *= p.pow(e / 2);
    }
    if n.sign() == Sign::Minus {
        s = -s;
    }
    Ok((s, f))
}

/// The field discriminant attached to a negative integer `w`: with
/// `w = f^2 s`, returns `s` when `s = 1 (mod 4)` and `4s` otherwise.
///
/// When `w = 0, 1 (mod 4)` the result divides `w` with square quotient.
pub fn fundamentalize(w: &BigInt) -> Result<BigInt> {
    if !w.is_negative() {
        return Err(Error::domain("fundamentalize requires w < 0"));
    }
    let (s, _) = squarefree_part(w)?;
    if s.mod_floor(&BigInt::from(4)) == BigInt::one() {
        Ok(s)
    } else {
        Ok(s * 4)
    }
}

/// True when `n >= 0` is a perfect square.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Floor of the square root of `n`.
pub fn isqrt_u64(n: u64) -> u64 {
    n.sqrt()
}

/// Distinct prime divisors of a nonzero integer.
pub fn prime_divisors(n: &BigInt) -> Vec<BigUint> {
    factor_bigint(n).into_iter().map(|(p, _)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kr(a: i64, n: i64) -> i8 {
        kronecker_i64(a, n).unwrap()
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kr(-4, 5), 1);
        assert_eq!(kr(-4, 7), -1);
        assert_eq!(kr(9, 3), 0);
        assert!(kronecker_i64(3, 0).is_err());
        // (a/2) and negative moduli
        assert_eq!(kr(-7, 2), 1);
        assert_eq!(kr(5, 2), -1);
        assert_eq!(kr(-1, -1), -1);
        assert_eq!(kr(2, 15), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(400).into_iter().skip(1) {
            for a in -60i64..60 {
                let euler = legendre_u64(a.rem_euclid(p as i64) as u64, p);
                assert_eq!(kr(a, p as i64), euler, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        let sf = |n: i64| {
            let (s, f) = squarefree_part(&BigInt::from(n)).unwrap();
            (s.to_i64().unwrap(), f.to_i64().unwrap())
        };
        assert_eq!(sf(-16), (-1, 4));
        assert_eq!(sf(-12), (-3, 2));
        assert_eq!(sf(7), (7, 1));
        assert!(squarefree_part(&BigInt::zero()).is_err());
    }

    #[test]
    fn fundamentalize_examples() {
        let fd = |n: i64| fundamentalize(&BigInt::from(n)).unwrap().to_i64().unwrap();
        assert_eq!(fd(-16), -4);
        assert_eq!(fd(-7), -7);
        assert_eq!(fd(-64), -4);
        assert_eq!(fd(-8), -8);
        assert!(fundamentalize(&BigInt::from(3)).is_err());
        assert!(fundamentalize(&BigInt::zero()).is_err());
    }

    #[test]
    fn fundamentalize_divides_with_square_quotient() {
        // Every discriminant-shaped w (w = 0, 1 mod 4) in range.
        let mut sieve_checks = 0;
        for w in -1_000_000i64..=-1 {
            if w.rem_euclid(4) > 1 {
                continue;
            }
            let wb = BigInt::from(w);
            let d = fundamentalize(&wb).unwrap();
            let dm = d.mod_floor(&BigInt::from(4));
            assert!(dm.is_zero() || dm.is_one());
            assert!((&wb % &d).is_zero(), "w={w} d={d}");
            assert!(is_square(&(&wb / &d)), "w={w} d={d}");
            sieve_checks += 1;
        }
        assert_eq!(sieve_checks, 500_000);
    }

    #[test]
    fn factorization_round_trip() {
        for n in [1u64, 2, 97, 1 << 40, 600851475143, 999_999_999_989 * 7, u64::MAX] {
            let f = factor_u64(n);
            let back: u128 = f.iter().map(|&(p, e)| (p as u128).pow(e)).product();
            assert_eq!(back, n as u128);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
        let big = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64) * BigInt::from(-(1i64 << 35));
        let f = factor_bigint(&big);
        let back: BigUint = f.iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(&back, big.magnitude());
    }

    #[test]
    fn sieve_and_primality_agree() {
        let ps = primes_up_to(10_000);
        assert_eq!(ps.len(), 1229);
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), ps.binary_search(&n).is_ok());
        }
    }
}
