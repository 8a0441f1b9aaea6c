//! Lattice search for diag(e^{iθ}, e^{-iθ}) approximants with entries in Z[1/√2, ω].

use super::dioph::solve_norm_equation;
use super::exact::exact_word_from_column;
use super::ring::{ZOmega, ZRoot2};
use super::word::HTWord;
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

const LAMBDA: f64 = 1.0 + SQRT_2;

/// All α ∈ Z[√2] with α ∈ [x0, x1] and α• ∈ [y0, y1].
pub fn solve_1d(x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<ZRoot2> {
    let mut out = Vec::new();
    if !(x1 >= x0 && y1 >= y0) {
        return out;
    }
    let dx = (x1 - x0).max(1e-300);
    let dy = (y1 - y0).max(1e-300);
    // balance the two widths by a power of λ
    let m = ((dy / dx).ln() / (2.0 * LAMBDA.ln())).round().clamp(-40.0, 40.0) as i32;
    let fx = LAMBDA.powi(m);
    let fy = if m % 2 == 0 { LAMBDA.powi(-m) } else { -LAMBDA.powi(-m) };
    let (mut a0, mut a1) = (x0 * fx, x1 * fx);
    let (mut b0, mut b1) = (y0 * fy, y1 * fy);
    if a0 > a1 {
        std::mem::swap(&mut a0, &mut a1);
    }
    if b0 > b1 {
        std::mem::swap(&mut b0, &mut b1);
    }
    let tol = 1e-12 * (1.0 + a1.abs().max(a0.abs()).max(b0.abs()).max(b1.abs()));
    let (a0, a1, b0, b1) = (a0 - tol, a1 + tol, b0 - tol, b1 + tol);
    let lo = ((a0 - b1) / (2.0 * SQRT_2)).ceil() as i64;
    let hi = ((a1 - b0) / (2.0 * SQRT_2)).floor() as i64;
    let unscale = if m >= 0 { ZRoot2::LAMBDA_INV.pow(m as u32) } else { ZRoot2::LAMBDA.pow((-m) as u32) };
    for b in lo..=hi {
        let bs = b as f64 * SQRT_2;
        let lo_a = (a0 - bs).max(b0 + bs).ceil() as i64;
        let hi_a = (a1 - bs).min(b1 + bs).floor() as i64;
        for a in lo_a..=hi_a {
            out.push(ZRoot2::new(a as i128, b as i128) * unscale);
        }
    }
    out
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Extent of the circular segment {|p| ≤ 1, p·ẑ ≥ c} along the axis at angle `axis`.
fn segment_extent(theta: f64, phi: f64, axis: f64) -> (f64, f64) {
    let a = (theta - phi - axis).cos();
    let b = (theta + phi - axis).cos();
    let mut lo = a.min(b);
    let mut hi = a.max(b);
    if wrap(theta - axis).abs() <= phi {
        hi = 1.0;
    }
    if wrap(theta - axis - PI).abs() <= phi {
        lo = -1.0;
    }
    (lo, hi)
}

/// Interval of the inner coordinate v for outer coordinate w:
/// w² + v² ≤ s², w·cw + v·cv ≥ s·c.
fn slice(w: f64, cw: f64, cv: f64, s: f64, c: f64) -> Option<(f64, f64)> {
    let r2 = s * s - w * w;
    if r2 < 0.0 {
        return None;
    }
    let r = r2.sqrt();
    let (mut lo, mut hi) = (-r, r);
    let rhs = s * c - w * cw;
    if cv.abs() < 1e-300 {
        if rhs > 0.0 {
            return None;
        }
    } else if cv > 0.0 {
        lo = lo.max(rhs / cv);
    } else {
        hi = hi.min(rhs / cv);
    }
    let tol = 1e-12 * (1.0 + s);
    (lo <= hi + 2.0 * tol).then_some((lo - tol, hi + tol))
}

/// One approximant found by the search.
#[derive(Clone, Debug)]
pub struct GridHit {
    pub k: u32,
    pub u: ZOmega,
    pub t: ZOmega,
    pub word: HTWord,
    pub error: f64,
}

fn error_of(u: ZOmega, t: ZOmega, k: u32, z: Complex64) -> f64 {
    let uu = u.to_complex_scaled(k);
    let tt = t.to_complex_scaled(k);
    ((uu - z).norm_sqr() + tt.norm_sqr()).sqrt()
}

/// Candidate first-column entries u/√2^k within ε of e^{iθ}, given the conjugate-disk constraint.
fn candidates(theta: f64, eps: f64, k: u32) -> Vec<ZOmega> {
    let s = SQRT_2.powi(k as i32 + 1);
    let c = 1.0 - eps * eps / 2.0;
    let phi = c.clamp(-1.0, 1.0).acos();
    let (ct, st) = (theta.cos(), theta.sin());
    // enumerate along the axis where the segment is narrow
    let outer_x = ct.abs() >= st.abs();
    let (axis, cw, cv) = if outer_x { (0.0, ct, st) } else { (PI / 2.0, st, ct) };
    let (lo, hi) = segment_extent(theta, phi, axis);
    let mut out = Vec::new();
    for w in solve_1d(lo * s, hi * s, -s, s) {
        let wf = w.to_f64();
        let ws = w.conj2().to_f64();
        let Some((vlo, vhi)) = slice(wf, cw, cv, s, c) else { continue };
        let rc2 = s * s - ws * ws;
        if rc2 < 0.0 {
            continue;
        }
        let rc = rc2.sqrt();
        for v in solve_1d(vlo, vhi, -rc, rc) {
            let (x, y) = if outer_x { (w, v) } else { (v, w) };
            if (x.a - y.a) % 2 != 0 {
                continue;
            }
            out.push(ZOmega::new(x.b, (x.a + y.a) / 2, y.b, (y.a - x.a) / 2));
        }
    }
    out
}

/// Smallest-k approximant of diag(e^{iθ}, e^{-iθ}); among solutions at that k the one with fewest blocks.
pub fn approx_z(theta: f64, eps: f64, k_max: u32, max_blocks: usize) -> Option<GridHit> {
    let z = Complex64::from_polar(1.0, theta);
    for k in 0..=k_max {
        let mut best: Option<(usize, [i128; 8], GridHit)> = None;
        let two_k = ZRoot2::from_int(1i128 << k);
        for u in candidates(theta, eps, k) {
            if k > 0 && u.divisible_by_sqrt2() {
                continue;
            }
            let xi = two_k - u.norm_sq();
            if !xi.doubly_positive() {
                continue;
            }
            let Some(t0) = solve_norm_equation(xi) else { continue };
            let mut t = t0;
            for _ in 0..8 {
                t = t.mul_omega();
                let err = error_of(u, t, k, z);
                if err > eps {
                    continue;
                }
                let Some(letters) = exact_word_from_column(u, t, k) else { continue };
                let word = HTWord::from_letters(&letters);
                let blocks = word.len();
                if blocks > max_blocks {
                    continue;
                }
                let key = [u.c[0], u.c[1], u.c[2], u.c[3], t.c[0], t.c[1], t.c[2], t.c[3]];
                let better = match &best {
                    None => true,
                    Some((b, kk, _)) => (blocks, key) < (*b, *kk),
                };
                if better {
                    best = Some((blocks, key, GridHit { k, u, t, word, error: err }));
                }
            }
        }
        if let Some((_, _, hit)) = best {
            return Some(hit);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squbit::word::{diag, op_dist};

    #[test]
    fn one_dim_grid_is_complete() {
        // brute force over a small box
        let (x0, x1, y0, y1) = (1.3, 4.9, -2.2, 0.7);
        let mut got: Vec<(i128, i128)> = solve_1d(x0, x1, y0, y1).iter().map(|z| (z.a, z.b)).collect();
        got.sort();
        let mut want = Vec::new();
        for a in -20i128..=20 {
            for b in -20i128..=20 {
                let v = a as f64 + b as f64 * SQRT_2;
                let w = a as f64 - b as f64 * SQRT_2;
                if v >= x0 && v <= x1 && w >= y0 && w <= y1 {
                    want.push((a, b));
                }
            }
        }
        assert_eq!(got, want);
        // lopsided intervals exercise the λ rescaling
        let thin = solve_1d(10.0, 10.001, -500.0, 500.0);
        for z in &thin {
            let v = z.to_f64();
            assert!((10.0 - 1e-9..=10.001 + 1e-9).contains(&v));
            assert!(z.conj2().to_f64().abs() <= 500.0 + 1e-9);
        }
        assert!(!thin.is_empty());
    }

    #[test]
    fn exact_phase_found_at_level_zero() {
        let hit = approx_z(-PI / 4.0, 1e-12, 4, 200).unwrap();
        assert!(hit.error < 1e-12);
        assert_eq!(hit.k, 0);
    }

    #[test]
    fn rotation_words_meet_tolerance() {
        for (i, eps) in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5].into_iter().enumerate() {
            for j in 0..4 {
                let theta = 0.37 + 1.13 * (i * 4 + j) as f64;
                let hit = approx_z(theta, eps, 80, 10_000).expect("found");
                let want = diag(Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta));
                let d = op_dist(&hit.word.matrix(), &want);
                assert!(d <= eps * (1.0 + 1e-6), "eps {eps} got {d}");
                assert!((d - hit.error).abs() < 1e-8);
            }
        }
    }
}
