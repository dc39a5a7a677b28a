//! Exact 64-bit integer arithmetic used throughout the crate.
//!
//! Moduli are bounded by 2^63; products go through `u128`.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, n);
        }
        b = mul_mod(b, b, n);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// Solves `x ≡ a (mod m)`, `x ≡ b (mod n)`; returns `x mod lcm(m, n)` when compatible.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> Option<u64> {
    let g = gcd(m, n);
    let (a, b) = (a % m, b % n);
    if a % g != b % g {
        return None;
    }
    let l = lcm(m, n);
    if l == 1 {
        return Some(0);
    }
    // x = a + m * k with m*k ≡ b - a (mod n)  =>  k ≡ ((b-a)/g) * (m/g)^{-1} (mod n/g)
    let ng = n / g;
    let diff = (b as i128 - a as i128).rem_euclid(n as i128) as u64 / g;
    let inv = inv_mod((m / g) % ng.max(1), ng).unwrap_or(0);
    let k = if ng == 1 { 0 } else { mul_mod(diff % ng, inv, ng) };
    Some(((a as u128 + m as u128 * k as u128) % l as u128) as u64)
}

/// p-adic valuation; `None` stands for +∞ (the value 0).
pub fn valuation(x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut x = x;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// `v_p(x)` for nonzero `x`.
pub fn vp(x: u64, p: u64) -> u32 {
    valuation(x, p).expect("valuation of zero")
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Carmichael function λ(n): the exponent of (Z/nZ)*.
pub fn carmichael(n: u64) -> u64 {
    factorize(n).into_iter().fold(1, |acc, (p, e)| {
        let pe = p.pow(e);
        let l = if p == 2 && e >= 3 { pe / 4 } else { pe / p * (p - 1) };
        lcm(acc, l)
    })
}

/// The `p`-part of `n`.
pub fn p_power_part(n: u64, p: u64) -> u64 {
    p.pow(vp(n, p))
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
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
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
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

/// Jacobi symbol `(a / n)` for odd positive `n`; `a` may be negative.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Normalizes `k` so that `k ≢ 2 (mod 4)`: `Q(ζ_k) = Q(ζ_{k/2})` for odd `k/2`.
pub fn normalize_cyclotomic_index(k: u64) -> u64 {
    if k % 4 == 2 {
        k / 2
    } else {
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_with_common_factor() {
        assert_eq!(crt(1, 4, 3, 6), Some(9));
        assert_eq!(crt(1, 4, 2, 6), None);
        assert_eq!(crt(5, 64, 1, 7), Some(197));
        assert_eq!(crt(0, 1, 3, 7), Some(3));
    }

    #[test]
    fn primes_and_phi() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2791));
        assert!(!is_prime(3215031751));
        assert!(is_prime(18446744073709551557));
        assert_eq!(euler_phi(171), 108);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(carmichael(64), 16);
        assert_eq!(carmichael(448), 48);
    }

    #[test]
    fn jacobi_small() {
        assert_eq!(jacobi(8, 3), -1);
        assert_eq!(jacobi(8, 7), 1);
        assert_eq!(jacobi(12, 11), 1);
        assert_eq!(jacobi(-3, 7), 1);
        assert_eq!(jacobi(-3, 5), -1);
    }

    #[test]
    fn inverse() {
        assert_eq!(inv_mod(7, 19), Some(11));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(inv_mod(0, 1), Some(0));
    }
}
