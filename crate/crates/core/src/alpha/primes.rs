//! Primality, prime powers and the von Mangoldt function.

use serde::Serialize;

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
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

/// Largest `r` with `r^k <= n`.
fn integer_root(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    let fits = |r: u64| r.checked_pow(k).is_some_and(|v| v <= n);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

/// If `n = p^k` with `p` prime and `k >= 1`, returns `p`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let max_k = 63 - n.leading_zeros();
    for k in (1..=max_k.max(1)).rev() {
        let r = integer_root(n, k);
        if r >= 2 && r.pow(k) == n && is_prime(r) {
            return Some(r);
        }
    }
    None
}

/// Primes up to `limit` by trial sieve.
pub fn primes_upto(limit: u64) -> Vec<u64> {
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

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimePowerNeighbor {
    pub x: f64,
    pub n_x: u64,
    /// Λ(n_x), the log of the prime base of `n_x`.
    pub lambda: f64,
    pub distance: f64,
    /// Λ(x): nonzero only when `x` is within the integer tolerance of a prime power.
    pub lambda_at_x: f64,
}

/// Nearest prime power to `x` (ties go to the smaller one) and Λ at `x`.
pub fn von_mangoldt(x: f64, int_tol: f64) -> Result<PrimePowerNeighbor> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("von Mangoldt needs x > 1, got {x}")));
    }
    if x >= 2f64.powi(63) {
        return Err(Error::Domain(format!("x = {x} is outside the supported integer range")));
    }
    let mut lo = x.floor() as u64;
    let mut hi = lo + 1;
    let (n_x, base) = loop {
        let take_lo = lo >= 2 && (x - lo as f64) <= (hi as f64 - x);
        let cand = if take_lo { lo } else { hi };
        if let Some(p) = prime_power_base(cand) {
            break (cand, p);
        }
        if take_lo {
            lo -= 1;
        } else {
            hi += 1;
        }
    };
    let rounded = x.round();
    let lambda_at_x = if (x - rounded).abs() <= int_tol {
        prime_power_base(rounded as u64).map_or(0.0, |p| (p as f64).ln())
    } else {
        0.0
    };
    Ok(PrimePowerNeighbor {
        x,
        n_x,
        lambda: (base as f64).ln(),
        distance: (x - n_x as f64).abs(),
        lambda_at_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve_lambda(limit: usize) -> Vec<f64> {
        // smallest prime factor sieve, independent of the Miller-Rabin path
        let mut spf = vec![0usize; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i;
                    }
                    j += i;
                }
            }
        }
        let mut lambda = vec![0.0; limit + 1];
        for n in 2..=limit {
            let p = spf[n];
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            if m == 1 {
                lambda[n] = (p as f64).ln();
            }
        }
        lambda
    }

    #[test]
    fn agrees_with_sieve_up_to_1e5() {
        let table = sieve_lambda(100_000);
        for n in 2..=100_000usize {
            let r = von_mangoldt(n as f64, 1e-9).unwrap();
            assert_eq!(r.lambda_at_x, table[n], "n = {n}");
        }
    }

    #[test]
    fn worked_examples() {
        let r = von_mangoldt(8.0, 1e-9).unwrap();
        assert_eq!((r.n_x, r.lambda_at_x), (8, 2f64.ln()));
        let r = von_mangoldt(6.0, 1e-9).unwrap();
        assert_eq!((r.n_x, r.lambda_at_x, r.distance), (5, 0.0, 1.0));
        let r = von_mangoldt(1.5, 1e-9).unwrap();
        assert_eq!((r.n_x, r.lambda_at_x, r.distance), (2, 0.0, 0.5));
        assert!(von_mangoldt(1.0, 1e-9).is_err());
    }

    #[test]
    fn nearest_is_nearest() {
        let table = sieve_lambda(2000);
        for i in 0..3000 {
            let x = 1.01 + i as f64 * 0.613;
            let r = von_mangoldt(x, 0.0).unwrap();
            let best = (2..2000usize)
                .filter(|&n| table[n] > 0.0)
                .map(|n| ((x - n as f64).abs(), n))
                .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
            assert_eq!(r.n_x as usize, best.1, "x = {x}");
        }
    }

    #[test]
    fn large_prime_powers() {
        assert_eq!(prime_power_base(1 << 62), Some(2));
        assert_eq!(prime_power_base(3u64.pow(40)), Some(3));
        assert_eq!(prime_power_base(18_446_744_073_709_551_557), Some(18_446_744_073_709_551_557));
        assert_eq!(prime_power_base(6u64.pow(20)), None);
    }
}
