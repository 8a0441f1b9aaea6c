use super::coarse::{coarse_approx, CoarseApprox, CoarseConfig};
use super::norm;
use crate::error::{Error, Result};
use std::f64::consts::FRAC_1_SQRT_2;

/// Residual norm treated as an exact zero.
const ZERO_RESIDUAL: f64 = 1e-12;

/// How the level count T is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TRule {
    /// Smallest power of two with (γ/(1−β))·β^{T/2} ≤ ε_core.
    Bound,
    /// Smallest power of two whose measured reconstruction meets ε_core.
    Measured,
}

#[derive(Clone, Debug)]
pub struct RefineConfig {
    pub budget: usize,
    pub gamma_min: f64,
    /// Upper limit on γ_star.
    pub gamma_cap: f64,
    pub seed: u64,
    pub t_rule: TRule,
    /// Largest level count considered.
    pub max_levels: usize,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig { budget: 256, gamma_min: 0.63, gamma_cap: FRAC_1_SQRT_2, seed: 0, t_rule: TRule::Bound, max_levels: 1 << 12 }
    }
}

#[derive(Clone, Debug)]
pub struct RefinementPlan {
    pub n: u32,
    /// Distinct levels; level k of the sum is `levels[k % levels.len()]`.
    pub levels: Vec<CoarseApprox>,
    pub zeta: f64,
    pub beta: f64,
    pub gamma_star: f64,
    /// Level count of the sum, a power of two.
    pub t_levels: usize,
    pub j_star: Option<usize>,
    /// ‖ψ̃_j‖ for j = 0..=levels.len().
    pub residual_norms: Vec<f64>,
    /// ‖ψ − ζ Σ β^k φ_k‖.
    pub reconstruction_error: f64,
    /// The same distance after normalizing the sum.
    pub normalized_error: f64,
}

impl RefinementPlan {
    pub fn level(&self, k: usize) -> &CoarseApprox {
        &self.levels[k % self.levels.len()]
    }

    /// ζ Σ_{k<T} β^k φ_k as a dense vector.
    pub fn combination(&self) -> Vec<f64> {
        let states: Vec<Vec<f64>> = self.levels.iter().map(|l| l.state()).collect();
        combine(&states, self.zeta, self.beta, self.t_levels)
    }

    /// Flag register width: log₂ T qubits plus one.
    pub fn flag_width(&self) -> u32 {
        self.t_levels.trailing_zeros() + 1
    }
}

fn combine(states: &[Vec<f64>], zeta: f64, beta: f64, t: usize) -> Vec<f64> {
    let mut out = vec![0.0; states[0].len()];
    let mut w = zeta;
    for k in 0..t {
        for (o, a) in out.iter_mut().zip(&states[k % states.len()]) {
            *o += w * a;
        }
        w *= beta;
    }
    out
}

fn errors(psi: &[f64], r: &[f64]) -> (f64, f64) {
    let d: Vec<f64> = psi.iter().zip(r).map(|(a, b)| a - b).collect();
    let rn = norm(r);
    let dn: Vec<f64> = psi.iter().zip(r).map(|(a, b)| a - b / rn).collect();
    (norm(&d), norm(&dn))
}

/// Smallest power of two T with (γ/(1−β))·β^{T/2} ≤ ε.
pub(crate) fn bound_levels(gamma: f64, beta: f64, eps: f64) -> usize {
    let mut t = 1usize;
    while gamma / (1.0 - beta) * beta.powf(t as f64 / 2.0) > eps {
        t *= 2;
    }
    t
}

/// ζ for T levels cycling with period j*.
fn cycling_zeta(gamma: f64, beta: f64, j_star: usize, t: usize) -> f64 {
    let reps = (t / j_star) as i32;
    gamma * (1.0 - beta.powi(j_star as i32)) / (1.0 - beta.powi(reps * j_star as i32))
}

enum Attempt {
    Done(RefinementPlan),
    /// A level's overlap fell below the working γ.
    Lower(f64),
}

fn attempt(psi: &[f64], eps: f64, gamma: f64, cfg: &RefineConfig) -> Result<Attempt> {
    let n = psi.len().trailing_zeros();
    let beta = (1.0 - gamma * gamma).sqrt();
    let t_bound = bound_levels(gamma, beta, eps);
    let mut resid = psi.to_vec();
    let mut levels = Vec::new();
    let mut states: Vec<Vec<f64>> = Vec::new();
    let mut norms = vec![norm(psi)];
    let finish = |levels: Vec<CoarseApprox>, norms: Vec<f64>, zeta: f64, t: usize, j_star, errs: (f64, f64)| RefinementPlan {
        n,
        levels,
        zeta,
        beta,
        gamma_star: gamma,
        t_levels: t,
        j_star,
        residual_norms: norms,
        reconstruction_error: errs.0,
        normalized_error: errs.1,
    };
    let mut w = gamma;
    for j in 0..cfg.max_levels {
        let rn = *norms.last().expect("nonempty");
        if rn < ZERO_RESIDUAL {
            // cycle the first j levels
            let mut t = if cfg.t_rule == TRule::Bound { t_bound.max(1) } else { 1 };
            while t <= cfg.max_levels {
                let zeta = if t <= j { gamma } else { cycling_zeta(gamma, beta, j, t) };
                let e = errors(psi, &combine(&states, zeta, beta, t));
                if e.0 <= eps && e.1 <= eps {
                    return Ok(Attempt::Done(finish(levels, norms, zeta, t, Some(j), e)));
                }
                t *= 2;
            }
            break;
        }
        let chi: Vec<f64> = resid.iter().map(|a| a / rn).collect();
        let ccfg = CoarseConfig { budget: cfg.budget, gamma_min: cfg.gamma_min, seed: level_seed(cfg.seed, j) };
        let c = coarse_approx(&chi, &ccfg)?;
        if c.overlap < gamma - 1e-12 {
            return Ok(Attempt::Lower(c.overlap));
        }
        let phi = c.state();
        for (r, a) in resid.iter_mut().zip(&phi) {
            *r -= w * a;
        }
        w *= beta;
        norms.push(norm(&resid));
        levels.push(c);
        states.push(phi);
        let t = j + 1;
        if t.is_power_of_two() && (cfg.t_rule == TRule::Measured || t >= t_bound) {
            let e = errors(psi, &combine(&states, gamma, beta, t));
            if e.0 <= eps && e.1 <= eps {
                return Ok(Attempt::Done(finish(levels, norms, gamma, t, None, e)));
            }
        }
    }
    Err(Error::PrecisionUnreachable { eps, depth: cfg.max_levels })
}

/// Real states ψ = γ(φ₀ + βφ₁) built from pairs of n-qubit coarse states, kept when
/// refinement with γ_star = γ picks exactly φ₀ then φ₁, so the residual vanishes at j* = 2.
/// Returns (ψ, γ) pairs.
pub fn cycling_fixtures(n: u32, count: usize) -> Vec<(Vec<f64>, f64)> {
    use crate::boolean::PhaseTable;
    let dim = 1usize << n;
    assert!(dim <= 8, "exhaustive search needs at most three qubits");
    let table = |bits: usize| PhaseTable::new((0..dim).map(|x| bits >> x & 1 == 1).collect()).expect("power of two");
    let mut coarse: Vec<Vec<f64>> = Vec::new();
    for b1 in 0..1usize << dim {
        for b2 in 0..1usize << dim {
            let phi = CoarseApprox { b1: table(b1), b2: table(b2), overlap: 1.0 }.state();
            if !coarse.iter().any(|c| c.iter().zip(&phi).all(|(a, b)| (a - b).abs() < 1e-12)) {
                coarse.push(phi);
            }
        }
    }
    let mut out = Vec::new();
    for p0 in &coarse {
        for p1 in &coarse {
            let c: f64 = p0.iter().zip(p1).map(|(a, b)| a * b).sum();
            // γ²(2 − γ² + 2cβ) = 1 has its root in [0.6, 1/√2] for these overlaps
            if !(0.36..=0.5).contains(&c) {
                continue;
            }
            let f = |g: f64| g * g * (2.0 - g * g + 2.0 * c * (1.0 - g * g).sqrt()) - 1.0;
            let (mut lo, mut hi) = (0.6, FRAC_1_SQRT_2 + 1e-9);
            if f(lo) > 0.0 || f(hi) < 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let g = 0.5 * (lo + hi);
            let b = (1.0 - g * g).sqrt();
            let psi: Vec<f64> = p0.iter().zip(p1).map(|(x, y)| g * (x + b * y)).collect();
            let cfg = RefineConfig { gamma_cap: g, gamma_min: 0.6, ..Default::default() };
            if let Ok(p) = refine(&psi, 1e-3, &cfg) {
                if p.j_star == Some(2) {
                    out.push((psi, g));
                    if out.len() == count {
                        return out;
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn level_seed(seed: u64, j: usize) -> u64 {
    seed ^ (j as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Residual refinement of a real unit vector to reconstruction error `eps_core`.
///
/// γ_star starts at the configured cap and drops to the smallest overlap met, never below
/// the floor; every drop restarts the recursion since the residuals depend on γ.
pub fn refine(psi: &[f64], eps_core: f64, cfg: &RefineConfig) -> Result<RefinementPlan> {
    if !(eps_core > 0.0 && eps_core <= 0.5) {
        return Err(Error::InvalidInput(format!("eps_core {eps_core} outside (0, 1/2]")));
    }
    if !psi.len().is_power_of_two() || (norm(psi) - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput("target is not a normalized power-of-two vector".into()));
    }
    let mut gamma = cfg.gamma_cap;
    loop {
        match attempt(psi, eps_core, gamma, cfg)? {
            Attempt::Done(p) => return Ok(p),
            Attempt::Lower(g) => {
                let next = g.max(cfg.gamma_min);
                debug_assert!(next < gamma);
                gamma = next;
            }
        }
    }
}
