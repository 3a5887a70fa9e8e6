//! Odd-only sieve of Eratosthenes for the dyadic ranges `p ∼ x`.

use crate::error::{Error, Result};

/// Default sieve cap.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Primes in `(lo, hi]`, increasing.
pub fn primes_between(lo: f64, hi: f64, cap: u64) -> Result<Vec<u64>> {
    if hi > cap as f64 {
        return Err(Error::SieveCap { hi, cap });
    }
    if !(hi >= 2.0) || hi <= lo {
        return Ok(Vec::new());
    }
    let n = hi.floor() as u64;
    let lo_int = if lo < 0.0 { 0 } else { lo.floor() as u64 };
    // bit i of `composite` stands for 2i + 1
    let half = (n as usize).div_ceil(2);
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::new();
    if lo_int < 2 && n >= 2 {
        out.push(2);
    }
    let start = (lo_int + 1) as usize / 2;
    for (k, &c) in composite.iter().enumerate().skip(start) {
        let v = (2 * k + 1) as u64;
        if !c && v > lo_int && v <= n {
            out.push(v);
        }
    }
    Ok(out)
}

/// Deterministic trial division, for validating small moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges() {
        assert_eq!(primes_between(5.0, 10.0, DEFAULT_SIEVE_CAP).unwrap(), vec![7]);
        assert_eq!(primes_between(1.0, 2.0, DEFAULT_SIEVE_CAP).unwrap(), vec![2]);
        assert_eq!(primes_between(0.0, 30.0, DEFAULT_SIEVE_CAP).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_between(6.0, 12.0, DEFAULT_SIEVE_CAP).unwrap(), vec![7, 11]);
        assert!(primes_between(1.5, 1.9, DEFAULT_SIEVE_CAP).unwrap().is_empty());
        assert!(primes_between(0.0, 1e9, DEFAULT_SIEVE_CAP).is_err());
    }

    #[test]
    fn agrees_with_trial_division() {
        let got = primes_between(100.0, 5000.0, DEFAULT_SIEVE_CAP).unwrap();
        let want: Vec<u64> = (101..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(got, want);
    }
}
