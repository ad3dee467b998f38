//! Small number-theoretic helpers shared by every module.

pub use num_integer::{gcd, lcm};

/// Non-negative residue of `x` modulo `m`.
#[inline]
pub fn rem(x: i64, m: i64) -> i64 {
    debug_assert!(m > 0);
    x.rem_euclid(m)
}

/// `base^exp mod m` by square-and-multiply.
pub fn pow_mod(base: i64, mut exp: u64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as i128;
    let mut b = rem(base, m) as i128;
    let mut acc: i128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as i64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (rem(a, m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| rem(old_s, m))
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Units of `Z_n`, i.e. residues in `[0, n)` coprime to `n`.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&x| gcd(x, n) == 1).collect()
}

/// Multiplicative order of `k` modulo `n` (`k` must be a unit).
pub fn mult_order(k: i64, n: i64) -> u64 {
    if n == 1 {
        return 1;
    }
    let k = rem(k, n);
    let mut x = k;
    let mut ord = 1;
    while x != 1 {
        x = x * k % n;
        ord += 1;
        assert!(ord <= n as u64, "{k} is not a unit modulo {n}");
    }
    ord
}

/// `1 + q + q^2 + ... + q^(len-1) mod m`.
pub fn geometric_sum(q: i64, len: u64, m: i64) -> i64 {
    let q = rem(q, m);
    let mut acc = 0i64;
    let mut term = rem(1, m);
    for _ in 0..len {
        acc = (acc + term) % m;
        term = term * q % m;
    }
    acc
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_and_orders() {
        assert_eq!(inv_mod(3, 4), Some(3));
        assert_eq!(inv_mod(7, 20), Some(3));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(mult_order(2, 11), 10);
        assert_eq!(mult_order(-1, 20), 2);
        assert_eq!(pow_mod(2, 5, 11), 10);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(prime_factors(40), vec![2, 5]);
        assert_eq!(units(8), vec![1, 3, 5, 7]);
    }

    #[test]
    fn geometric() {
        // 1 + 3 + 9 + 27 = 40
        assert_eq!(geometric_sum(3, 4, 100), 40);
        assert_eq!(geometric_sum(-1, 4, 20), 0);
        assert_eq!(geometric_sum(5, 0, 7), 0);
    }
}
