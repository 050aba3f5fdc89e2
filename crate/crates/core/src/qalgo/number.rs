//! Integer helpers for order finding and RSA. Everything is `u64` with
//! `u128` intermediates, enough for moduli below 2^32.

use serde::Serialize;

use crate::error::{domain, Result};

/// How many multiples of a convergent's denominator are tried when the
/// denominator alone is not the order (a shared factor between `d` and `r`
/// shrinks the convergent).
pub const SMALL_MULTIPLES: u64 = 4;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `base^exp mod m` by square-and-multiply.
pub fn modpow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Smallest `r ≥ 1` with `m^r ≡ 1 (mod n)`, by brute force.
pub fn classical_order(m: u64, n: u64) -> Option<u64> {
    if n < 2 || gcd(m, n) != 1 {
        return None;
    }
    let mut x = m % n;
    for r in 1..=n {
        if x == 1 {
            return Some(r);
        }
        x = ((x as u128 * m as u128) % n as u128) as u64;
    }
    None
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, k))` when `n = p^k` for a prime `p` and `k ≥ 2`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 4 {
        return None;
    }
    for k in (2..=63u32).rev() {
        let root = (n as f64).powf(1.0 / k as f64).round() as u64;
        for p in root.saturating_sub(1)..=root + 1 {
            if p >= 2 && p.checked_pow(k) == Some(n) && is_prime(p) {
                return Some((p, k));
            }
        }
    }
    None
}

/// Convergents `d/r` of `w/q`, in order.
pub fn continued_fraction_convergents(w: u64, q: u64) -> Vec<(u64, u64)> {
    let (mut num, mut den) = (w as u128, q as u128);
    // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
    let (mut h1, mut h2) = (1u128, 0u128);
    let (mut k1, mut k2) = (0u128, 1u128);
    let mut out = Vec::new();
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num - a * den);
        let h = a * h1 + h2;
        let k = a * k1 + k2;
        out.push((h as u64, k as u64));
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    out
}

/// The convergent of `w/q` with the largest denominator below `bound`.
pub fn continued_fraction_best(w: u64, q: u64, bound: u64) -> Result<(u64, u64)> {
    if q == 0 || w >= q {
        return domain(format!("need 0 ≤ w < Q, got w={w}, Q={q}"));
    }
    if bound < 1 {
        return domain("denominator bound must be at least 1");
    }
    Ok(continued_fraction_convergents(w, q)
        .into_iter()
        .rfind(|&(_, r)| r < bound)
        .unwrap_or((0, 1)))
}

/// Walks the convergents of `w/q` (denominators below `n`) and up to
/// [`SMALL_MULTIPLES`] multiples of each, returning the first `(d, r)`
/// with `m^r ≡ 1 (mod n)`.
pub fn verified_order_candidate(w: u64, q: u64, n: u64, m: u64) -> Option<(u64, u64)> {
    if q == 0 || w >= q || n < 2 {
        return None;
    }
    for (d, r) in continued_fraction_convergents(w, q) {
        if r >= n {
            break;
        }
        for j in 1..=SMALL_MULTIPLES {
            let rj = r * j;
            if rj >= n {
                break;
            }
            if modpow(m, rj, n) == 1 {
                return Some((d * j, rj));
            }
        }
    }
    None
}

/// Why an order did not produce factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderFailure {
    /// `m^r ≢ 1 (mod N)`
    BadOrder,
    OddOrder,
    /// Reached `m^{r/2} ≡ −1`, or an odd exponent with `m^{r/2} ≡ 1`.
    TrivialRoot,
}

impl std::fmt::Display for OrderFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrderFailure::BadOrder => "bad order",
            OrderFailure::OddOrder => "odd order",
            OrderFailure::TrivialRoot => "trivial square root",
        })
    }
}

/// Nontrivial split `p · q = N` found from an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Factors {
    pub p: u64,
    pub q: u64,
    /// Exponent `h` whose `m^h ± 1` gave the split.
    pub half_exponent: u64,
    /// `m^h mod N`
    pub root: u64,
}

/// Extracts factors from `m^r ≡ 1 (mod N)` via `gcd(N, m^{r/2} ± 1)`,
/// halving the exponent while `m^{r/2} ≡ 1` and it stays even.
pub fn factor_from_order(n: u64, m: u64, r: u64) -> std::result::Result<Factors, OrderFailure> {
    if r == 0 || n < 3 || modpow(m, r, n) != 1 {
        return Err(OrderFailure::BadOrder);
    }
    if r % 2 == 1 {
        return Err(OrderFailure::OddOrder);
    }
    let mut r = r;
    loop {
        let h = r / 2;
        let x = modpow(m, h, n);
        if x == 1 {
            if h.is_multiple_of(2) {
                r = h;
                continue;
            }
            return Err(OrderFailure::TrivialRoot);
        }
        if x == n - 1 {
            return Err(OrderFailure::TrivialRoot);
        }
        let g = gcd(n, x - 1);
        let (p, q) = (g.min(n / g), g.max(n / g));
        return Ok(Factors {
            p,
            q,
            half_exponent: h,
            root: x,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn modpow_and_inverse() {
        assert_eq!(modpow(67, 11, 77), 23);
        assert_eq!(modpow(23, 11, 77), 67);
        assert_eq!(modpow(2, 60, 77), 1);
        assert_eq!(modpow(2, 15, 77), 43);
        assert_eq!(modpow(39, 15, 77), 43);
        assert_eq!(mod_inverse(11, 60), Some(11));
        assert_eq!(mod_inverse(3, 8), Some(3));
        assert_eq!(mod_inverse(4, 8), None);
        // Fermat on the largest prime below 2^32 exercises the u128 path
        assert_eq!(modpow(3, 4_294_967_290, 4_294_967_291), 1);
    }

    #[test]
    fn convergents_of_the_rsa_sample() {
        let c = continued_fraction_convergents(14770, 16384);
        assert_eq!(&c[..5], &[(0, 1), (1, 1), (9, 10), (55, 61), (64, 71)]);
        assert_eq!(continued_fraction_best(14770, 16384, 77).unwrap(), (64, 71));
        assert_eq!(verified_order_candidate(14770, 16384, 77, 39), Some((27, 30)));
    }

    #[test]
    fn continued_fraction_edge_cases() {
        assert_eq!(continued_fraction_best(0, 16384, 77).unwrap(), (0, 1));
        assert_eq!(continued_fraction_best(8192, 16384, 77).unwrap(), (1, 2));
        assert!(continued_fraction_best(16384, 16384, 77).is_err());
    }

    #[test]
    fn factor_from_order_worked_cases() {
        let f = factor_from_order(77, 39, 30).unwrap();
        assert_eq!((f.p, f.q, f.half_exponent), (7, 11, 15));
        assert_eq!(f.root, 43);
        assert_eq!((gcd(77, 42), gcd(77, 44)), (7, 11));
        let f = factor_from_order(77, 2, 60).unwrap();
        assert_eq!((f.p, f.q, f.half_exponent, f.root), (7, 11, 15, 43));
        assert_eq!(factor_from_order(77, 2, 15), Err(OrderFailure::BadOrder));
        assert_eq!(factor_from_order(15, 2, 4).map(|f| (f.p, f.q)), Ok((3, 5)));
        assert_eq!(factor_from_order(21, 4, 3), Err(OrderFailure::OddOrder));
        // 14^{1} ≡ −1 mod 15
        assert_eq!(factor_from_order(15, 14, 2), Err(OrderFailure::TrivialRoot));
    }

    #[test]
    fn primality_helpers() {
        assert_eq!(classical_order(39, 77), Some(30));
        assert_eq!(classical_order(2, 15), Some(4));
        assert_eq!(classical_order(7, 77), None);
        assert!(is_prime(7) && !is_prime(77) && !is_prime(1));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(77), None);
        assert_eq!(prime_power(7), None);
    }

    proptest! {
        #[test]
        fn factors_multiply_back(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23]),
                                 q in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29]),
                                 m in 2u64..500) {
            let n = p * q;
            prop_assume!(gcd(m, n) == 1);
            let r = classical_order(m, n).unwrap();
            if let Ok(f) = factor_from_order(n, m, r) {
                prop_assert_eq!(f.p * f.q, n);
                prop_assert!(f.p > 1 && f.q > 1);
            }
        }

        #[test]
        fn convergents_approach_the_fraction(w in 0u64..4096, q in 4096u64..8192) {
            let c = continued_fraction_convergents(w, q);
            let (d, r) = *c.last().unwrap();
            prop_assert_eq!(d as u128 * q as u128, w as u128 * r as u128);
        }
    }
}
