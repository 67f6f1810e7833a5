//! Small integer helpers: primality, prime-power factoring and the
//! supported-dimension rule.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Writes `d = r^n` with `r` prime, or returns `None`.
pub fn prime_power(d: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(d);
    if factors.len() != 1 {
        return None;
    }
    let r = factors[0];
    let mut n = 0;
    let mut rest = d;
    while rest > 1 {
        rest /= r;
        n += 1;
    }
    Some((r, n))
}

/// Checks that `d` is an odd prime power with `d ≡ 3 (mod 4)` and returns `(r, n)`.
///
/// Each failure mode has its own error so callers can explain which rule was broken.
pub fn supported_dimension(d: u64) -> Result<(u64, u32)> {
    let (r, n) = prime_power(d).ok_or(Error::NotPrimePower(d))?;
    if r == 2 {
        return Err(Error::PowerOfTwo(d));
    }
    if d % 4 != 3 {
        return Err(Error::UnsupportedResidue(d));
    }
    Ok((r, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_below_fifty() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(22307));
    }

    #[test]
    fn factoring_prime_powers() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_factors(22306), vec![2, 19, 587]);
    }

    #[test]
    fn scope_rule() {
        for d in [3, 7, 11, 19, 23, 27, 343, 22307] {
            assert!(supported_dimension(d).is_ok(), "d = {d}");
        }
        for d in [5, 9, 13, 25] {
            assert!(matches!(supported_dimension(d), Err(Error::UnsupportedResidue(x)) if x == d));
        }
        for d in [6, 10, 1, 0, 15] {
            assert!(matches!(supported_dimension(d), Err(Error::NotPrimePower(_))));
        }
        assert!(matches!(supported_dimension(8), Err(Error::PowerOfTwo(8))));
    }
}
