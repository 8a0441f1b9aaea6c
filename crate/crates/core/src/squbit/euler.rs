use super::word::{diag, mat_det, Mat2};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Angles (a, b, c) with V = D(a)·H·D(b)·H·D(c), D(x) = diag(e^{ix}, e^{-ix}), for V ∈ SU(2).
pub fn euler_su2_angles(v: &Mat2) -> (f64, f64, f64) {
    let alpha = v[0];
    let beta = v[2];
    let (ma, mb) = (alpha.norm(), beta.norm());
    let b = mb.atan2(ma);
    // a + c = arg α, a − c = π/2 − arg β; an undefined combination is set to zero
    let sum = if ma > 1e-12 { alpha.arg() } else { 0.0 };
    let diff = if mb > 1e-12 { FRAC_PI_2 - beta.arg() } else { 0.0 };
    ((sum + diff) / 2.0, b, (sum - diff) / 2.0)
}

/// Diagonal unitaries (A, B, C) with A·H·B·H·C = U.
pub fn euler_hdh(u: &Mat2) -> (Mat2, Mat2, Mat2) {
    let delta = mat_det(u).arg() / 2.0;
    let ph = Complex64::from_polar(1.0, -delta);
    let v = u.map(|x| x * ph);
    let (a, b, c) = euler_su2_angles(&v);
    let d = |x: f64| diag(Complex64::from_polar(1.0, x), Complex64::from_polar(1.0, -x));
    let g = Complex64::from_polar(1.0, delta);
    (d(a).map(|x| x * g), d(b), d(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squbit::word::{mat_h, mat_mul, mat_t, op_dist};

    fn rebuild(u: &Mat2) -> f64 {
        let (a, b, c) = euler_hdh(u);
        for m in [&a, &b, &c] {
            assert!(m[1].norm() == 0.0 && m[2].norm() == 0.0);
            assert!((m[0].norm() - 1.0).abs() < 1e-12 && (m[3].norm() - 1.0).abs() < 1e-12);
        }
        let h = mat_h();
        let r = mat_mul(&mat_mul(&mat_mul(&mat_mul(&a, &h), &b), &h), &c);
        op_dist(&r, u)
    }

    #[test]
    fn reconstructs_named_gates() {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let x = [z, o, o, z];
        for u in [mat_h(), x, mat_t(), diag(o, -o), [o, z, z, o]] {
            assert!(rebuild(&u) <= 1e-9);
        }
    }

    #[test]
    fn reconstructs_random_unitaries() {
        let mut s = 0.3f64;
        for _ in 0..200 {
            s = (s * 7.31 + 0.17).fract();
            let (t1, t2, t3, t4) = (s * 6.0, s * 11.0, s * 3.0, s * 17.0);
            let c = Complex64::from_polar(t1.cos(), t2);
            let d = Complex64::from_polar(t1.sin(), t3);
            let g = Complex64::from_polar(1.0, t4);
            let u = [c * g, -d.conj() * g, d * g, c.conj() * g];
            assert!(rebuild(&u) <= 1e-9);
        }
    }
}
