//! Rational integer helpers: primality, factorization, modular square roots.
//!
//! Everything here works on `u64` where it can and falls back to `BigUint`
//! for the cofactors that do not fit. Factorization is trial division
//! followed by Pollard-Brent, which is plenty for desk-scale discriminants.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 12;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller-Rabin for 64-bit inputs.
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

/// Miller-Rabin with the first 20 prime bases. Deterministic below 3.3e24,
/// overwhelmingly reliable above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, m) = (2u64, 128u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn pollard_brent_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let m = 64u64;
        let mut y = BigUint::from(2u32);
        let (mut g, mut r, mut q) = (BigUint::one(), 1u64, BigUint::one());
        let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = match n.to_u64() {
        Some(small) => BigUint::from(pollard_brent_u64(small)),
        None => pollard_brent_big(&n),
    };
    let rest = &n / &d;
    split_into(d, out);
    split_into(rest, out);
}

/// Prime factorization of |n| as sorted `(prime, exponent)` pairs.
/// Returns an empty list for 0 and ±1.
pub fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if (&n % &bp).is_zero() {
            let mut e = 0;
            while (&n % &bp).is_zero() {
                n /= &bp;
                e += 1;
            }
            out.push((bp, e));
        }
        if p * p > TRIAL_LIMIT && n < BigUint::from(p * p) {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut large = Vec::new();
    split_into(n, &mut large);
    large.sort();
    for q in large {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Factorization of |n| with every prime required to fit in a `u64`.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    factor_biguint(n.magnitude())
        .into_iter()
        .map(|(p, e)| {
            p.to_u64()
                .map(|p| (p, e))
                .ok_or_else(|| Error::PrimeTooLarge(p.to_string()))
        })
        .collect()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &is_p)| is_p.then_some(k as u64))
        .collect()
}

/// Legendre symbol (a | p) for an odd prime p.
pub fn legendre(a: u64, p: u64) -> i32 {
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

/// Square root of `a` modulo the prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// `n mod p` as a canonical residue in `[0, p)`.
pub fn mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = (n % BigInt::from(p)).to_i128().expect("residue fits");
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn is_squarefree_i64(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    factor_integer(&BigInt::from(d))
        .map(|f| f.iter().all(|&(_, e)| e == 1))
        .unwrap_or(false)
}

/// Exact integer square root of a non-negative integer, if it exists.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// All positive divisors from a factorization, in ascending order.
pub fn divisors(factors: &[(u64, u32)]) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for &(p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match_sieve() {
        let sieve = primes_up_to(2000);
        let mr: Vec<u64> = (0..=2000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, mr);
    }

    #[test]
    fn factorization_reconstitutes() {
        for n in [1u64, 2, 12, 97, 1001, 600851475143, 18446744073709551557] {
            let f = factor_integer(&BigInt::from(n)).unwrap();
            let back: BigInt = f.iter().map(|&(p, e)| BigInt::from(p).pow(e)).product();
            assert_eq!(back, BigInt::from(n));
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }

    #[test]
    fn factors_product_of_two_large_primes() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let r = BigUint::from(4_294_967_311u64);
        let n = &p * &q * &r;
        let f = factor_biguint(&n);
        let primes: Vec<BigUint> = f.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(primes, vec![q, p, r]);
    }

    #[test]
    fn tonelli_shanks_roots() {
        for p in primes_up_to(400).into_iter().skip(1) {
            for a in 0..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a),
                    None => assert_eq!(legendre(a, p), -1),
                }
            }
        }
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree_i64(-5));
        assert!(is_squarefree_i64(-1));
        assert!(!is_squarefree_i64(12));
        assert!(!is_squarefree_i64(0));
        assert!(!is_squarefree_i64(-4));
    }
}
