use super::db::WordTable;
use super::euler::euler_su2_angles;
use super::grid::approx_z;
use super::word::{canonicalize, diag, mat_det, mat_mul, mat_adjoint, op_dist, HTWord, Letter, Mat2, IDENTITY};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Accepted words stay this far inside the requested tolerance, absorbing float round-off.
pub const ERROR_MARGIN: f64 = 1e-12;

/// Largest internal error accepted for a requested tolerance.
pub fn accept_tol(eps: f64) -> f64 {
    eps - ERROR_MARGIN.min(eps * 1e-3)
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    /// Smallest supported tolerance.
    pub eps_min: f64,
    /// Largest word length in blocks.
    pub max_blocks: usize,
    /// Block depth of each half of the meet-in-the-middle table.
    pub table_levels: usize,
    /// Largest √2 denominator exponent tried by the lattice search.
    pub k_max: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { eps_min: 1e-5, max_blocks: 256, table_levels: 20, k_max: 64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    pub word: HTWord,
    /// Operator-norm distance of the word's matrix from the target, no phase quotient.
    pub error: f64,
}

pub struct Synthesizer {
    pub config: SynthConfig,
    table: WordTable,
}

impl Synthesizer {
    pub fn new(config: SynthConfig) -> Self {
        let table = WordTable::build(config.table_levels);
        Synthesizer { config, table }
    }

    pub fn table(&self) -> &WordTable {
        &self.table
    }

    /// Approximate diag(e^{iθ}, e^{-iθ}).
    ///
    /// The table tier is searched first and the lattice tier only when the table has
    /// no word within `eps`; each tier returns its cheapest feasible word, so a smaller
    /// `eps` can never produce a word with larger error.
    pub fn approx_diag(&self, theta: f64, eps: f64) -> Result<Approx> {
        if !(eps > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("theta {theta}, eps {eps}")));
        }
        let target = diag(Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta));
        let word = if let Some((w, _)) = self.table.query(theta, eps, self.config.max_blocks) {
            w
        } else {
            let hit = approx_z(theta, accept_tol(eps), self.config.k_max, self.config.max_blocks)
                .ok_or(Error::PrecisionUnreachable { eps, depth: self.config.max_blocks })?;
            hit.word
        };
        let error = op_dist(&word.matrix(), &target);
        Ok(Approx { word, error })
    }

    /// Approximate a determinant-1 unitary, no global-phase quotient.
    pub fn approx_su2(&self, u: &Mat2, eps: f64) -> Result<Approx> {
        check_unitary(u)?;
        if (mat_det(u) - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidInput(format!("determinant {} is not 1", mat_det(u))));
        }
        if u[1].norm() <= 1e-12 && u[2].norm() <= 1e-12 {
            return self.approx_diag(u[0].arg(), eps);
        }
        let (a, b, c) = euler_su2_angles(u);
        let third = eps / 3.0;
        let wa = self.approx_diag(a, third)?;
        let wb = self.approx_diag(b, third)?;
        let wc = self.approx_diag(c, third)?;
        let mut letters = wa.word.letters();
        letters.push(Letter::H);
        letters.extend(wb.word.letters());
        letters.push(Letter::H);
        letters.extend(wc.word.letters());
        let word = HTWord::from_letters(&canonicalize(&letters));
        if word.len() > self.config.max_blocks {
            return Err(Error::PrecisionUnreachable { eps, depth: self.config.max_blocks });
        }
        let error = op_dist(&word.matrix(), u);
        Ok(Approx { word, error })
    }
}

pub fn check_unitary(u: &Mat2) -> Result<()> {
    let g = mat_mul(&mat_adjoint(u), u);
    let d = op_dist(&g, &IDENTITY);
    if !(d <= 1e-10) {
        return Err(Error::InvalidInput(format!("matrix is not unitary (‖U†U − I‖ = {d:e})")));
    }
    Ok(())
}

/// Shared synthesizer with the default configuration, built on first use.
pub fn default_synthesizer() -> &'static Synthesizer {
    static S: OnceLock<Synthesizer> = OnceLock::new();
    S.get_or_init(|| Synthesizer::new(SynthConfig::default()))
}

/// Word within `eps` of the determinant-1 unitary `u`.
pub fn approx_su2(u: &Mat2, eps: f64) -> Result<Approx> {
    default_synthesizer().approx_su2(u, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_is_empty_word() {
        let a = approx_su2(&IDENTITY, 1e-3).unwrap();
        assert!(a.word.is_empty());
        assert_eq!(a.error, 0.0);
    }

    #[test]
    fn eighth_root_phase_is_exact() {
        let u = diag(Complex64::from_polar(1.0, -PI / 4.0), Complex64::from_polar(1.0, PI / 4.0));
        let a = approx_su2(&u, 1e-12).unwrap();
        assert!(a.error < 1e-12, "{}", a.error);
    }

    #[test]
    fn rejects_non_special() {
        let t = super::super::word::mat_t();
        assert!(approx_su2(&t, 1e-2).is_err());
    }

    #[test]
    fn general_su2_meets_tolerance() {
        let h = super::super::word::mat_h();
        // iH has determinant 1
        let u = h.map(|x| x * Complex64::new(0.0, 1.0));
        for eps in [1e-1, 1e-2, 1e-3] {
            let a = approx_su2(&u, eps).unwrap();
            assert!(a.error <= eps, "{eps}: {}", a.error);
        }
    }
}
