//! Kronecker symbol by the binary reciprocity algorithm (no factoring).

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// `(−1)^{(n²−1)/8}` indexed by `n mod 8`.
const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a / n)` for `n ≥ 0`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    kronecker_i128(a as i128, n as i128)
}

fn kronecker_i128(mut a: i128, mut b: i128) -> i8 {
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        // b odd and positive here
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        // reciprocity for odd a, b
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// `(a / n)` for an arbitrary-precision top argument.
///
/// For `n > 0` the symbol is periodic in `a` with period dividing `4n`, so
/// `a` is first reduced modulo `8n`.
pub fn kronecker_bigint(a: &BigInt, n: u64) -> i8 {
    if n == 0 {
        return match a.to_i64() {
            Some(x) => kronecker(x, 0),
            None => 0,
        };
    }
    let m = BigInt::from(8u128 * n as u128);
    let r = ((a % &m) + &m) % &m;
    kronecker_i128(r.to_i128().expect("reduced below 8n"), n as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_brute(d: i64, p: u64) -> i8 {
        let r = d.rem_euclid(p as i64) as u64;
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn small_oracles() {
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(1, 2), 1);
        assert_eq!(kronecker(2, 2), 0);
        assert_eq!(kronecker(60, 13), -1);
        assert_eq!(kronecker(60, 7), 1);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(3, 0), 0);
        for n in 1..=100 {
            assert_eq!(kronecker(1, n), 1);
        }
    }

    #[test]
    fn matches_residue_table() {
        let odd_primes = (3u64..200).filter(|&p| (2..p).all(|q| p % q != 0));
        for p in odd_primes {
            for d in -500i64..=500 {
                assert_eq!(kronecker(d, p), legendre_brute(d, p), "({d}/{p})");
            }
        }
    }

    #[test]
    fn multiplicative_in_n() {
        for a in -60i64..=60 {
            for m in 1u64..=60 {
                for n in 1u64..=60 {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n), "a={a} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn bigint_agrees() {
        let big = BigInt::from(10).pow(40) + 7;
        for n in [3u64, 4, 6, 10, 97, 1000] {
            let direct = {
                let r: BigInt = &big % BigInt::from(8 * n);
                let r = r.to_i64().unwrap();
                kronecker(r, n)
            };
            assert_eq!(kronecker_bigint(&big, n), direct);
            assert_eq!(kronecker_bigint(&-&big, n), kronecker_bigint(&(BigInt::from(8 * n) * 1000 - &big), n));
        }
        assert_eq!(kronecker_bigint(&BigInt::from(-3), 7), kronecker(-3, 7));
    }
}
