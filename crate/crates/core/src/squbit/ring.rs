//! Exact arithmetic in Z[√2] and Z[ω], ω = e^{iπ/4}.

use num_complex::Complex64;
use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

/// a + b√2
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZRoot2 {
    pub a: i128,
    pub b: i128,
}

impl ZRoot2 {
    pub const ZERO: ZRoot2 = ZRoot2 { a: 0, b: 0 };
    pub const ONE: ZRoot2 = ZRoot2 { a: 1, b: 0 };
    /// The fundamental unit 1 + √2.
    pub const LAMBDA: ZRoot2 = ZRoot2 { a: 1, b: 1 };
    pub const LAMBDA_INV: ZRoot2 = ZRoot2 { a: -1, b: 1 };

    pub const fn new(a: i128, b: i128) -> Self {
        ZRoot2 { a, b }
    }

    pub fn from_int(a: i128) -> Self {
        ZRoot2 { a, b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Galois conjugate √2 ↦ −√2.
    pub fn conj2(self) -> Self {
        ZRoot2 { a: self.a, b: -self.b }
    }

    /// x·x• = a² − 2b².
    pub fn norm(self) -> i128 {
        self.a * self.a - 2 * self.b * self.b
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 + self.b as f64 * SQRT_2
    }

    /// Exact sign of a + b√2.
    pub fn signum(self) -> i32 {
        let sa = self.a.signum() as i32;
        let sb = self.b.signum() as i32;
        if sa >= 0 && sb >= 0 {
            return (sa | sb).min(1);
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        // opposite signs: compare a² with 2b²
        let a2 = self.a * self.a;
        let b2 = 2 * self.b * self.b;
        match a2.cmp(&b2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// x ≥ 0 and x• ≥ 0.
    pub fn doubly_positive(self) -> bool {
        self.signum() >= 0 && self.conj2().signum() >= 0
    }

    pub fn divisible_by_sqrt2(self) -> bool {
        self.a % 2 == 0
    }

    pub fn div_sqrt2(self) -> Option<Self> {
        if self.a % 2 != 0 {
            return None;
        }
        Some(ZRoot2 { a: self.b, b: self.a / 2 })
    }

    pub fn scale(self, k: i128) -> Self {
        ZRoot2 { a: self.a * k, b: self.b * k }
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(self, d: ZRoot2) -> Option<Self> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let p = self * d.conj2();
        if p.a % n != 0 || p.b % n != 0 {
            return None;
        }
        Some(ZRoot2 { a: p.a / n, b: p.b / n })
    }

    /// Euclidean remainder with rounded quotient.
    pub fn rem(self, d: ZRoot2) -> Self {
        let n = d.norm();
        let p = self * d.conj2();
        let q = ZRoot2 { a: div_round(p.a, n), b: div_round(p.b, n) };
        self - q * d
    }

    pub fn gcd(mut x: ZRoot2, mut y: ZRoot2) -> ZRoot2 {
        while !y.is_zero() {
            let r = x.rem(y);
            x = y;
            y = r;
        }
        x
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = ZRoot2::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }
}

/// Round-to-nearest integer division, ties toward +∞.
pub(crate) fn div_round(n: i128, d: i128) -> i128 {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    (2 * n + d).div_euclid(2 * d)
}

impl Add for ZRoot2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ZRoot2 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for ZRoot2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ZRoot2 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for ZRoot2 {
    type Output = Self;
    fn neg(self) -> Self {
        ZRoot2 { a: -self.a, b: -self.b }
    }
}

impl Mul for ZRoot2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ZRoot2 { a: self.a * o.a + 2 * self.b * o.b, b: self.a * o.b + self.b * o.a }
    }
}

/// c[0] + c[1]ω + c[2]ω² + c[3]ω³
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZOmega {
    pub c: [i128; 4],
}

impl ZOmega {
    pub const ZERO: ZOmega = ZOmega { c: [0; 4] };
    pub const ONE: ZOmega = ZOmega { c: [1, 0, 0, 0] };
    pub const OMEGA: ZOmega = ZOmega { c: [0, 1, 0, 0] };
    pub const I: ZOmega = ZOmega { c: [0, 0, 1, 0] };
    /// 1 + ω, the prime above 2.
    pub const DELTA: ZOmega = ZOmega { c: [1, 1, 0, 0] };

    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        ZOmega { c: [a, b, c, d] }
    }

    pub fn from_int(a: i128) -> Self {
        ZOmega { c: [a, 0, 0, 0] }
    }

    pub fn from_root2(x: ZRoot2) -> Self {
        ZOmega { c: [x.a, x.b, 0, -x.b] }
    }

    pub fn is_zero(self) -> bool {
        self.c == [0; 4]
    }

    pub fn mul_omega(self) -> Self {
        let [a, b, c, d] = self.c;
        ZOmega { c: [-d, a, b, c] }
    }

    pub fn mul_omega_pow(self, j: u32) -> Self {
        let mut x = self;
        for _ in 0..(j % 8) {
            x = x.mul_omega();
        }
        x
    }

    /// Complex conjugate.
    pub fn conj(self) -> Self {
        let [a, b, c, d] = self.c;
        ZOmega { c: [a, -d, -c, -b] }
    }

    /// Galois automorphism ω ↦ −ω (sends √2 to −√2).
    pub fn sigma(self) -> Self {
        let [a, b, c, d] = self.c;
        ZOmega { c: [a, -b, c, -d] }
    }

    /// x†x as an element of Z[√2].
    pub fn norm_sq(self) -> ZRoot2 {
        let p = self.conj() * self;
        debug_assert!(p.c[2] == 0 && p.c[1] == -p.c[3]);
        ZRoot2 { a: p.c[0], b: p.c[1] }
    }

    /// Real if of the form a + b√2.
    pub fn to_root2(self) -> Option<ZRoot2> {
        let [a, b, c, d] = self.c;
        if c == 0 && d == -b {
            Some(ZRoot2 { a, b })
        } else {
            None
        }
    }

    /// Absolute norm in Z.
    pub fn abs_norm(self) -> i128 {
        self.norm_sq().norm()
    }

    pub fn divisible_by_sqrt2(self) -> bool {
        let [a, b, c, d] = self.c;
        (a - c) % 2 == 0 && (b - d) % 2 == 0
    }

    pub fn div_sqrt2(self) -> Option<Self> {
        if !self.divisible_by_sqrt2() {
            return None;
        }
        let [a, b, c, d] = self.c;
        Some(ZOmega { c: [(b - d) / 2, (a + c) / 2, (b + d) / 2, (c - a) / 2] })
    }

    pub fn mul_sqrt2(self) -> Self {
        self * ZOmega::new(0, 1, 0, -1)
    }

    pub fn scale(self, k: i128) -> Self {
        let [a, b, c, d] = self.c;
        ZOmega { c: [a * k, b * k, c * k, d * k] }
    }

    pub fn to_complex(self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let [a, b, c, d] = self.c.map(|x| x as f64);
        Complex64::new(a + (b - d) * s, c + (b + d) * s)
    }

    /// Entry value after dividing by √2^k.
    pub fn to_complex_scaled(self, k: u32) -> Complex64 {
        self.to_complex() * std::f64::consts::FRAC_1_SQRT_2.powi(k as i32)
    }

    /// Quotient rounded coordinate-wise, and the remainder.
    pub fn div_rem(self, d: ZOmega) -> (ZOmega, ZOmega) {
        let dd = d.norm_sq();
        let n = dd.norm();
        let num = self * d.conj() * ZOmega::from_root2(dd.conj2());
        let q = ZOmega { c: num.c.map(|x| div_round(x, n)) };
        (q, self - q * d)
    }

    pub fn gcd(mut x: ZOmega, mut y: ZOmega) -> ZOmega {
        while !y.is_zero() {
            let (_, r) = x.div_rem(y);
            x = y;
            y = r;
        }
        x
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = ZOmega::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl Add for ZOmega {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x += y;
        }
        ZOmega { c }
    }
}

impl Sub for ZOmega {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c) {
            *x -= y;
        }
        ZOmega { c }
    }
}

impl Neg for ZOmega {
    type Output = Self;
    fn neg(self) -> Self {
        ZOmega { c: self.c.map(|x| -x) }
    }
}

impl Mul for ZOmega {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let x = self.c;
        let y = o.c;
        let mut r = [0i128; 4];
        for i in 0..4 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..4 {
                let p = x[i] * y[j];
                let k = i + j;
                if k < 4 {
                    r[k] += p;
                } else {
                    r[k - 4] -= p;
                }
            }
        }
        ZOmega { c: r }
    }
}
