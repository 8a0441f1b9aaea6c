use super::norm;
use super::refine::RefinementPlan;
use crate::boolean::{emit_phase_oracle, emit_zero_reflection, PhaseTable};
use crate::circuit::{word_gates, Builder, Circuit, Gate, Qubit};
use crate::diagonal::synth_batched;
use crate::error::{Error, Result};
use crate::squbit::{default_synthesizer, Mat2};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct AAPlan {
    /// Flag register width, including the extra rotation qubit.
    pub t: u32,
    /// Flagged amplitude before the extra rotation.
    pub xi: f64,
    pub rounds: u32,
    /// sin(π/(4k+2)), the flagged amplitude after the extra rotation.
    pub target: f64,
}

/// Smallest k ≥ 1 with sin(π/(4k+2)) ≤ ξ; at γ_star = 1/√2 the search starts at k = 2, where
/// ξ ≥ 0.33 > sin(π/10) always holds, even if ξ happens to reach 1/2.
pub fn plan_aa(plan: &RefinementPlan, k_max: u32) -> Result<AAPlan> {
    let b = plan.beta;
    let t = plan.t_levels as i32;
    let ell = norm(&plan.combination());
    let xi = ell * (1.0 - b) / (plan.zeta * (1.0 - b.powi(t)));
    let k_min = if (plan.gamma_star - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 { 2 } else { 1 };
    for k in k_min..=k_max {
        let target = (PI / (4 * k + 2) as f64).sin();
        if target <= xi {
            return Ok(AAPlan { t: plan.flag_width(), xi, rounds: k, target });
        }
    }
    Err(Error::FlagAmplitudeTooSmall { xi })
}

/// Real rotation with first column (c, s).
fn rotation(c: f64, s: f64) -> Mat2 {
    let z = |x: f64| Complex64::new(x, 0.0);
    [z(c), z(-s), z(s), z(c)]
}

fn transpose(m: &Mat2) -> Mat2 {
    [m[0], m[2], m[1], m[3]]
}

/// Rotations R_ℓ|0⟩ ∝ |0⟩ + β^{2^ℓ/2}|1⟩ for ℓ = 0..log₂T.
fn a_layer(plan: &RefinementPlan) -> Vec<Mat2> {
    (0..plan.t_levels.trailing_zeros())
        .map(|l| {
            let a = plan.beta.powf((1u64 << l) as f64 / 2.0);
            let r = (1.0 + a * a).sqrt();
            rotation(1.0 / r, a / r)
        })
        .collect()
}

/// S·H·Rz·H·S† per real rotation, each word within ε/len, no ancillas.
fn rotation_words(units: &[Mat2], eps: f64) -> Result<Circuit> {
    let m = units.len() as u32;
    let each = eps / units.len() as f64;
    let mut c = Circuit::new(m, m);
    for (q, u) in (0..m).zip(units) {
        let alpha = u[2].re.atan2(u[0].re);
        if alpha == 0.0 {
            continue;
        }
        let w = default_synthesizer().approx_diag(-alpha, each)?;
        c.extend([Gate::Sdg(q), Gate::H(q)]);
        c.extend(word_gates(&w.word, q));
        c.extend([Gate::H(q), Gate::S(q)]);
    }
    Ok(c)
}

/// The cheaper in T gates of a batched tensor synthesis and per-qubit rotation words.
fn rotation_layer(units: &[Mat2], eps: f64) -> Result<Circuit> {
    let words = rotation_words(units, eps)?;
    let batched = synth_batched(units, eps)?;
    Ok(if words.t_count()? < batched.t_count()? { words } else { batched })
}

/// Merged table (k, x) ↦ level k's sign at x, with x on the low n bits.
fn merged_table(plan: &RefinementPlan, pick: fn(&super::CoarseApprox) -> &PhaseTable) -> PhaseTable {
    let dim = 1usize << plan.n;
    let mut minus = Vec::with_capacity(dim * plan.t_levels);
    for k in 0..plan.t_levels {
        minus.extend_from_slice(&pick(plan.level(k)).minus);
    }
    PhaseTable::new(minus).expect("power of two")
}

/// The flagged preparation V on inputs B (0..n), A (n..n+log₂T) and the extra qubit.
///
/// ⟨0_flags|V|0⟩ = sin(π/(4k+2)) · Σ β^k φ_k / ‖Σ β^k φ_k‖.
pub fn build_lcu(plan: &RefinementPlan, layer_eps: f64, k_max: u32) -> Result<(Circuit, AAPlan)> {
    if !(layer_eps > 0.0) {
        return Err(Error::InvalidInput(format!("layer tolerance {layer_eps}")));
    }
    let aa = plan_aa(plan, k_max)?;
    let n = plan.n;
    let ta = aa.t - 1;
    let bq: Vec<Qubit> = (0..n).collect();
    let aq: Vec<Qubit> = (n..n + ta).collect();
    let g = n + ta;
    let mut bld = Builder::new(n + ta + 1);
    let layer = a_layer(plan);
    if !layer.is_empty() {
        bld.append_with_ancillas(&rotation_layer(&layer, layer_eps)?, &aq);
    }
    let mut ab = bq.clone();
    ab.extend_from_slice(&aq);
    bld.extend(bq.iter().map(|&q| Gate::H(q)));
    emit_phase_oracle(&mut bld, &merged_table(plan, |c| &c.b1), &ab);
    bld.extend(bq.iter().map(|&q| Gate::H(q)));
    emit_phase_oracle(&mut bld, &merged_table(plan, |c| &c.b2), &ab);
    let cg = (aa.target / aa.xi).min(1.0);
    let mut last: Vec<Mat2> = layer.iter().map(transpose).collect();
    last.push(rotation(cg, (1.0 - cg * cg).sqrt()));
    let mut lq = aq.clone();
    lq.push(g);
    bld.append_with_ancillas(&rotation_layer(&last, layer_eps)?, &lq);
    Ok((bld.finish(format!("lcu n={n} T={}", plan.t_levels)), aa))
}

/// (R₁R₂)^k V with R₁ = V(2|0⟩⟨0| − I)V† on every input and R₂ the zero reflection on the
/// last `aa.t` inputs of V, the flags. Inputs of the result are V's leading inputs.
pub fn amplitude_amplify(v: &Circuit, aa: &AAPlan) -> Circuit {
    let nb = v.input_count - aa.t;
    let mut bld = Builder::new(nb);
    let flags = bld.pool.alloc_many(aa.t as usize);
    let mut regs: Vec<Qubit> = (0..nb).collect();
    regs.extend_from_slice(&flags);
    let vd = v.adjoint();
    bld.append_with_ancillas(v, &regs);
    for _ in 0..aa.rounds {
        emit_zero_reflection(&mut bld, &flags);
        bld.append_with_ancillas(&vd, &regs);
        emit_zero_reflection(&mut bld, &regs);
        bld.append_with_ancillas(v, &regs);
    }
    bld.pool.release_all(&flags);
    bld.finish(format!("amplified k={}", aa.rounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{run, SparseState};
    use crate::state::{refine, RefineConfig, TargetState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flagged(out: &SparseState, n: u32) -> Vec<Complex64> {
        (0..1u64 << n).map(|x| out.amplitude(x)).collect()
    }

    #[test]
    fn operating_point_gives_two_rounds() {
        // β = 1/√2 and any T: the analytic floor on ξ
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = TargetState::random_real(4, &mut rng).real_parts();
        let p = refine(&psi, 1e-2, &RefineConfig::default()).unwrap();
        if (p.gamma_star - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12 {
            let aa = plan_aa(&p, 8).unwrap();
            assert!(aa.xi >= 0.33, "{}", aa.xi);
            assert_eq!(aa.rounds, 2);
        }
    }

    #[test]
    fn flagged_amplitude_matches_xi() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = TargetState::random_real(3, &mut rng).real_parts();
        let p = refine(&psi, 1e-2, &RefineConfig { t_rule: crate::state::TRule::Measured, ..Default::default() }).unwrap();
        let layer_eps = 1e-5;
        let (v, aa) = build_lcu(&p, layer_eps, 8).unwrap();
        let out = run(&v, &SparseState::zero(v.width)).unwrap();
        let amps = flagged(&out, p.n);
        let w: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!((w - aa.target).abs() <= 4.0 * layer_eps, "{w} vs {}", aa.target);
        let r = p.combination();
        let rn = norm(&r);
        for (a, b) in amps.iter().zip(&r) {
            assert!((a / aa.target - b / rn).norm() <= 8.0 * layer_eps / aa.target);
        }
    }

    #[test]
    fn rotation_words_meet_tolerance() {
        let units: Vec<Mat2> = [0.3f64, 1.1, -0.7].iter().map(|a| rotation(a.cos(), a.sin())).collect();
        for eps in [1e-2, 1e-4] {
            let c = rotation_words(&units, eps).unwrap();
            let e = crate::diagonal::unitary_error(&c, &crate::diagonal::tensor_matrix(&units)).unwrap();
            assert!(e <= eps, "{e}");
        }
    }

    #[test]
    fn one_round_amplification_is_exact() {
        // V = H on a flag next to a fixed data qubit: flagged amplitude 1/√2 lowered to 1/2
        let g = rotation(0.5, 0.75f64.sqrt());
        let v = Circuit::with_gates(2, 2, vec![Gate::H(0), Gate::Sq1(1, Box::new(g))]).unwrap();
        let aa = AAPlan { t: 1, xi: 1.0, rounds: 1, target: 0.5 };
        let c = amplitude_amplify(&v, &aa);
        let out: SparseState = run(&c, &SparseState::zero(c.width)).unwrap();
        let want = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitude(0).norm() - want).abs() < 1e-12);
        assert!((out.amplitude(1).norm() - want).abs() < 1e-12);
        assert!(out.norm_sqr() - out.amplitude(0).norm_sqr() - out.amplitude(1).norm_sqr() < 1e-24);
    }
}
