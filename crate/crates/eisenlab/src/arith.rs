//! Elementary multiplicative number theory on u64.
//!
//! Everything here is exact integer arithmetic: factorization by wheel trial
//! division (valid through 2⁶³ − 1), the standard multiplicative functions
//! μ, φ, divisor lists, and the "fullness" decomposition a = a_full · a_perp
//! splitting a into the part supported on the primes of b and the part
//! coprime to b.

use crate::error::{Error, Result};

/// Prime factorization n = ∏ pᵢ^eᵢ with the pᵢ strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

/// Wheel increments mod 30 starting from 7: 7, 11, 13, 17, 19, 23, 29, 31, ...
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Factor n ≥ 1 by trial division over the 2·3·5 wheel.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("factorize(0) is undefined".into()));
    }
    let mut m = n;
    let mut factors = Vec::new();
    for p in [2u64, 3, 5] {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    let mut p = 7u64;
    let mut wi = 0usize;
    while p <= m / p {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += WHEEL[wi];
        wi = (wi + 1) % WHEEL.len();
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { n, factors })
}

impl Factorization {
    /// μ(n): zero unless squarefree, else (−1)^{#primes}.
    pub fn mobius(&self) -> i64 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// φ(n) = n ∏_{p|n} (1 − 1/p).
    pub fn euler_phi(&self) -> u64 {
        let mut phi = self.n;
        for &(p, _) in &self.factors {
            phi = phi / p * (p - 1);
        }
        phi
    }

    /// All divisors of n in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            let mut pk = 1u64;
            for _ in 0..=e {
                next.extend(divs.iter().map(|&d| d * pk));
                pk = pk.saturating_mul(p);
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    /// ∏_{p|n} p.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

pub fn mobius(n: u64) -> Result<i64> {
    Ok(factorize(n)?.mobius())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// base^exp mod m, with u128 intermediates so any u64 modulus is safe.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = (base % m) as u128;
    let mm = m as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of a mod m when gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    // Extended Euclid on (a mod m, m) in signed arithmetic.
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// The decomposition a = a_full · a_perp with a_full supported on the primes
/// of b and gcd(a_perp, b) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullnessSplit {
    pub a: u64,
    pub b: u64,
    /// Largest divisor of a all of whose prime factors divide b.
    pub a_full: u64,
    /// a / a_full, coprime to b.
    pub a_perp: u64,
}

/// Split a against b by repeatedly stripping gcd(·, b): no factorization and
/// no overflow, since the working value only ever shrinks.
pub fn fullness(a: u64, b: u64) -> Result<FullnessSplit> {
    if a == 0 || b == 0 {
        return Err(Error::Domain(format!("fullness({a}, {b}): arguments must be positive")));
    }
    let mut m = a;
    loop {
        let g = gcd(m, b);
        if g == 1 {
            break;
        }
        m /= g;
    }
    Ok(FullnessSplit { a, b, a_full: a / m, a_perp: m })
}

/// (p^e, e) where p^e ∥ n, i.e. the exact power of p dividing n.
pub fn ppart_order(n: u64, p: u64) -> Result<(u64, u32)> {
    if n == 0 || p < 2 {
        return Err(Error::Domain(format!("ppart_order({n}, {p}) needs n ≥ 1, p ≥ 2")));
    }
    let mut m = n;
    let mut e = 0u32;
    let mut pe = 1u64;
    while m % p == 0 {
        m /= p;
        e += 1;
        pe *= p;
    }
    Ok((pe, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_round_trip() {
        for n in 1..=5000u64 {
            let f = factorize(n).unwrap();
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            for w in f.factors.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn large_inputs() {
        // 2^61 − 1 is a Mersenne prime.
        let f = factorize((1u64 << 61) - 1).unwrap();
        assert_eq!(f.factors, vec![((1u64 << 61) - 1, 1)]);
        let g = factorize(999_999_999_989).unwrap(); // prime
        assert_eq!(g.factors.len(), 1);
        let h = factorize(1_000_000_007u64 * 7).unwrap();
        assert_eq!(h.factors, vec![(7, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn mobius_sum_is_unit_indicator() {
        // Σ_{d|n} μ(d) = [n = 1]
        for n in 1..=3000u64 {
            let total: i64 = divisors(n).unwrap().iter().map(|&d| mobius(d).unwrap()).sum();
            assert_eq!(total, if n == 1 { 1 } else { 0 }, "n = {n}");
        }
    }

    #[test]
    fn phi_sum_is_identity() {
        // Σ_{d|n} φ(d) = n
        for n in 1..=3000u64 {
            let total: u64 = divisors(n).unwrap().iter().map(|&d| euler_phi(d).unwrap()).sum();
            assert_eq!(total, n, "n = {n}");
        }
    }

    #[test]
    fn divisors_sorted_and_complete() {
        let d = divisors(360).unwrap();
        assert_eq!(d.len(), 24);
        assert_eq!(d.first(), Some(&1));
        assert_eq!(d.last(), Some(&360));
        for w in d.windows(2) {
            assert!(w[0] < w[1]);
        }
        for &x in &d {
            assert_eq!(360 % x, 0);
        }
    }

    #[test]
    fn fullness_properties() {
        for a in 1..=400u64 {
            for b in 1..=60u64 {
                let s = fullness(a, b).unwrap();
                assert_eq!(s.a_full * s.a_perp, a);
                assert_eq!(gcd(s.a_perp, b), 1, "a={a} b={b}");
                // Every prime of a_full divides b.
                let fa = factorize(s.a_full).unwrap();
                for p in fa.primes() {
                    assert_eq!(b % p, 0, "a={a} b={b} p={p}");
                }
            }
        }
    }

    #[test]
    fn fullness_examples() {
        let s = fullness(720, 6).unwrap();
        // 720 = 2^4·3^2·5; primes of 6 give 2^4·3^2 = 144.
        assert_eq!((s.a_full, s.a_perp), (144, 5));
        let t = fullness(7, 1).unwrap();
        assert_eq!((t.a_full, t.a_perp), (1, 7));
    }

    #[test]
    fn ppart_examples() {
        assert_eq!(ppart_order(48, 2).unwrap(), (16, 4));
        assert_eq!(ppart_order(48, 3).unwrap(), (3, 1));
        assert_eq!(ppart_order(48, 5).unwrap(), (1, 0));
    }

    #[test]
    fn modular_inverse() {
        for m in 2..=120u64 {
            for a in 1..m {
                match mod_inverse(a, m) {
                    Some(inv) => {
                        assert_eq!(gcd(a, m), 1);
                        assert_eq!(a as u128 * inv as u128 % m as u128, 1);
                    }
                    None => assert_ne!(gcd(a, m), 1),
                }
            }
        }
    }

    #[test]
    fn mod_pow_matches_naive() {
        for &(b, e, m) in &[(3u64, 20u64, 1_000_003u64), (10, 0, 7), (2, 63, 1_000_000_007)] {
            let mut naive = 1u64;
            for _ in 0..e {
                naive = (naive as u128 * b as u128 % m as u128) as u64;
            }
            assert_eq!(mod_pow(b, e, m), naive);
        }
    }
}
