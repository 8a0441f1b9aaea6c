//! Norm equation t†t = ξ over Z[ω] for doubly positive ξ ∈ Z[√2].

use super::ring::{ZOmega, ZRoot2};

/// Candidates whose norm exceeds this are skipped rather than factored.
pub const NORM_LIMIT: u64 = 1 << 52;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pollard–Brent; `n` odd composite.
fn rho(n: u64) -> u64 {
    for c in 1..n {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let mut g = 1;
        let mut x = y;
        let mut ys = y;
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
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    n
}

/// Prime factorization as sorted (p, e) pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 1000 && p * p <= n {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = rho(m);
        stack.push(d);
        stack.push(m / d);
    }
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

/// Square root of `a` modulo an odd prime `p`, if `a` is a residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// x, y with x² + d·y² = p.
pub fn cornacchia(d: u64, p: u64) -> Option<(u64, u64)> {
    let mut r0 = sqrt_mod(p - d % p, p)?;
    if r0 <= p / 2 {
        r0 = p - r0;
    }
    let (mut a, mut b) = (p, r0);
    while (b as u128) * (b as u128) > p as u128 {
        (a, b) = (b, a % b);
    }
    let _ = a;
    let rest = p.checked_sub(b * b)?;
    if rest % d != 0 {
        return None;
    }
    let y2 = rest / d;
    let y = (y2 as f64).sqrt().round() as u64;
    for c in [y.saturating_sub(1), y, y + 1] {
        if c * c == y2 {
            return Some((b, c));
        }
    }
    None
}

fn zomega_pow_mul(acc: ZOmega, x: ZOmega, e: u32) -> ZOmega {
    acc * x.pow(e)
}

fn strip(mut xi: ZRoot2, d: ZRoot2) -> (ZRoot2, u32) {
    let mut e = 0;
    while let Some(q) = xi.div_exact(d) {
        xi = q;
        e += 1;
    }
    (xi, e)
}

/// Solve t†t = ξ. Returns None when unsolvable or outside the supported size.
pub fn solve_norm_equation(xi: ZRoot2) -> Option<ZOmega> {
    if xi.is_zero() {
        return Some(ZOmega::ZERO);
    }
    if !xi.doubly_positive() {
        return None;
    }
    let n = xi.norm();
    if n <= 0 || n as u128 >= NORM_LIMIT as u128 {
        return None;
    }
    let mut t = ZOmega::ONE;
    let mut rest = xi;
    for (p, e) in factor(n as u64) {
        let pi = p as i128;
        match p % 8 {
            2 => {
                let (r, v) = strip(rest, ZRoot2::new(0, 1));
                rest = r;
                t = zomega_pow_mul(t, ZOmega::DELTA, v);
            }
            3 | 5 => {
                if e % 2 != 0 {
                    return None;
                }
                let f = e / 2;
                let (r, v) = strip(rest, ZRoot2::from_int(pi));
                if v != f {
                    return None;
                }
                rest = r;
                let (x, y) = cornacchia(if p % 8 == 5 { 1 } else { 2 }, p)?;
                let prime = if p % 8 == 5 {
                    ZOmega::new(x as i128, 0, y as i128, 0)
                } else {
                    ZOmega::new(x as i128, y as i128, 0, y as i128)
                };
                t = zomega_pow_mul(t, prime, f);
            }
            _ => {
                let h = sqrt_mod(2, p)? as i128;
                let eta = ZRoot2::gcd(ZRoot2::from_int(pi), ZRoot2::new(h, 1));
                if eta.norm().abs() != pi {
                    return None;
                }
                let (r, e1) = strip(rest, eta);
                let (r, e2) = strip(r, eta.conj2());
                rest = r;
                if e1 + e2 != e {
                    return None;
                }
                if p % 8 == 7 {
                    if e1 % 2 != 0 || e2 % 2 != 0 {
                        return None;
                    }
                    t = zomega_pow_mul(t, ZOmega::from_root2(eta), e1 / 2);
                    t = zomega_pow_mul(t, ZOmega::from_root2(eta.conj2()), e2 / 2);
                } else {
                    if p >= 1 << 44 {
                        return None;
                    }
                    let hi = sqrt_mod(p - 1, p)? as i128;
                    let r0 = ZRoot2::from_int(hi).rem(eta);
                    let pe = ZOmega::gcd(ZOmega::from_root2(eta), ZOmega::from_root2(r0) + ZOmega::I);
                    if pe.abs_norm().abs() != pi {
                        return None;
                    }
                    t = zomega_pow_mul(t, pe, e1);
                    t = zomega_pow_mul(t, pe.sigma(), e2);
                }
            }
        }
    }
    if rest.norm().abs() != 1 {
        return None;
    }
    // t†t = ξ·u for a doubly positive unit u = λ^{2m}
    let u = t.norm_sq().div_exact(xi)?;
    if u.norm() != 1 || !u.doubly_positive() {
        return None;
    }
    let l2 = ZRoot2::LAMBDA * ZRoot2::LAMBDA;
    let l2inv = ZRoot2::LAMBDA_INV * ZRoot2::LAMBDA_INV;
    let mut w = u;
    let mut m = 0i32;
    while w != ZRoot2::ONE {
        if w.to_f64() > 1.0 {
            w = w * l2inv;
            m += 1;
        } else {
            w = w * l2;
            m -= 1;
        }
        if m.abs() > 200 {
            return None;
        }
    }
    let fix = if m >= 0 { ZRoot2::LAMBDA_INV.pow(m as u32) } else { ZRoot2::LAMBDA.pow((-m) as u32) };
    let t = t * ZOmega::from_root2(fix);
    (t.norm_sq() == xi).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        let n = 1_000_003u64 * 999_983 * 4 * 9;
        assert_eq!(factor(n), vec![(2, 2), (3, 2), (999_983, 1), (1_000_003, 1)]);
        assert_eq!(factor(1), vec![]);
    }

    #[test]
    fn modular_sqrt() {
        for p in [17u64, 41, 1_000_000_009, 97] {
            let r = sqrt_mod(p - 1, p).unwrap();
            assert_eq!(mulmod(r, r, p), p - 1);
        }
        assert!(sqrt_mod(3, 7).is_none());
    }

    #[test]
    fn two_squares() {
        let (x, y) = cornacchia(1, 1_000_000_009).unwrap();
        assert_eq!(x * x + y * y, 1_000_000_009);
        let (x, y) = cornacchia(2, 11).unwrap();
        assert_eq!(x * x + 2 * y * y, 11);
    }

    #[test]
    fn norm_equation_roundtrip() {
        // any t gives a solvable ξ = t†t
        let samples = [
            ZOmega::new(3, -1, 2, 5),
            ZOmega::new(1, 1, 0, 0),
            ZOmega::new(7, 0, 0, 0),
            ZOmega::new(12, -7, 3, 9),
            ZOmega::new(0, 0, 0, 0),
            ZOmega::new(101, 33, -57, 2),
        ];
        for s in samples {
            let xi = s.norm_sq();
            let t = solve_norm_equation(xi).unwrap();
            assert_eq!(t.norm_sq(), xi);
        }
    }

    #[test]
    fn unsolvable_detected() {
        // 7 ≡ 7 mod 8 to an odd power has no solution
        assert!(solve_norm_equation(ZRoot2::new(3, 1)).is_none());
        assert!(solve_norm_equation(ZRoot2::new(-1, 0)).is_none());
    }
}
