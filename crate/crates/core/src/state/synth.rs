use super::coarse::{coarse_approx, CoarseConfig};
use super::lcu::{amplitude_amplify, build_lcu, plan_aa, AAPlan};
use super::refine::{refine, RefineConfig, RefinementPlan, TRule};
use super::{peel_phases, TargetState};
use crate::circuit::{Builder, Circuit, Gate, Qubit, SynthReport};
use crate::diagonal::build_diagonal;
use crate::error::{Error, Result};
use crate::sim::{ancilla_clean_weight, l2_phase_min_distance, restrict_to_inputs, run, DiagonalSpec, SparseState};
use crate::squbit::default_synthesizer;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct StateConfig {
    pub seed: u64,
    /// Sign tables tried per level.
    pub budget: usize,
    pub gamma_min: f64,
    pub k_max: u32,
    pub t_rule: TRule,
    /// Largest error left to any approximate component; keeps ancilla leakage below its square.
    pub component_cap: f64,
    /// Skip the closing simulation.
    pub skip_verify: bool,
}

impl Default for StateConfig {
    fn default() -> Self {
        StateConfig { seed: 0, budget: 256, gamma_min: 0.63, k_max: 8, t_rule: TRule::Measured, component_cap: 4e-4, skip_verify: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateRoute {
    Basis,
    /// Uniform moduli: Hadamard layer then the phase diagonal.
    Flat,
    /// One coarse level matches exactly.
    Coarse,
    Amplified,
}

#[derive(Clone, Debug)]
pub struct StateOutput {
    pub circuit: Circuit,
    pub route: StateRoute,
    pub plan: Option<RefinementPlan>,
    pub aa: Option<AAPlan>,
    /// Error allowed to the peel diagonal, the core reconstruction and all rotation layers.
    pub budget: [f64; 3],
    pub layer_eps: f64,
}

/// Distance and ancilla leakage of a preparation circuit, measured by simulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVerdict {
    pub error: f64,
    pub leak: f64,
}

pub const EPS_MIN: f64 = 1e-5;

/// Run from |0…0⟩ and compare the clean-ancilla component with ψ.
pub fn verify_state(c: &Circuit, psi: &TargetState) -> Result<StateVerdict> {
    if c.input_count != psi.n {
        return Err(Error::WidthMismatch { circuit: c.input_count, state: psi.n });
    }
    let out = run(c, &SparseState::<f64>::zero(c.width))?;
    let leak = ancilla_clean_weight(&out, c.input_count);
    let got = restrict_to_inputs(&out, c.input_count);
    Ok(StateVerdict { error: l2_phase_min_distance(&got, &psi.to_sparse()), leak })
}

/// Weight of basis states with any of `qubits` set.
pub fn qubit_mass(s: &SparseState, qubits: &[Qubit]) -> f64 {
    s.iter()
        .filter(|(k, _)| qubits.iter().any(|&q| k[(q / 64) as usize] >> (q % 64) & 1 == 1))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

fn append_diagonal(bld: &mut Builder, spec: &DiagonalSpec, eps: f64, qs: &[Qubit]) -> Result<()> {
    let d = build_diagonal(spec, eps, default_synthesizer())?;
    bld.append_with_ancillas(&d.circuit, qs);
    Ok(())
}

/// Circuit preparing ψ to within ε in phase-minimized ℓ2 distance.
pub fn synth_state_with(psi: &TargetState, eps: f64, cfg: &StateConfig) -> Result<(StateOutput, SynthReport)> {
    if !(EPS_MIN..=0.5).contains(&eps) {
        return Err(Error::InvalidInput(format!("eps {eps} outside [{EPS_MIN}, 1/2]")));
    }
    let start = Instant::now();
    let n = psi.n;
    let (phases, real) = peel_phases(psi);
    let r = real.real_parts();
    let xs: Vec<Qubit> = (0..n).collect();
    let mut bld = Builder::new(n);
    let eps_d = (eps / 3.0).min(cfg.component_cap);
    let eps_a = (eps / 3.0).min(cfg.component_cap);
    let eps_core = (eps - eps_d - eps_a).min(0.5);
    let mut out = StateOutput {
        circuit: Circuit::new(n, n),
        route: StateRoute::Basis,
        plan: None,
        aa: None,
        budget: [eps_d, eps_core, eps_a],
        layer_eps: 0.0,
    };
    let dim = r.len() as f64;
    let peak = r.iter().cloned().fold(0.0, f64::max);
    if peak >= 1.0 - 1e-12 {
        let x = r.iter().position(|&a| a == peak).expect("nonempty");
        bld.extend((0..n).filter(|i| x >> i & 1 == 1).map(Gate::X));
    } else if r.iter().all(|a| (a * a * dim - 1.0).abs() < 1e-12) {
        out.route = StateRoute::Flat;
        bld.extend(xs.iter().map(|&q| Gate::H(q)));
        append_diagonal(&mut bld, &phases, eps_d, &xs)?;
    } else {
        let ccfg = CoarseConfig { budget: cfg.budget, gamma_min: 0.0, seed: cfg.seed };
        let c = coarse_approx(&r, &ccfg)?;
        if c.overlap >= 1.0 - 1e-12 {
            out.route = StateRoute::Coarse;
            bld.append_with_ancillas(&c.circuit(), &xs);
        } else {
            out.route = StateRoute::Amplified;
            let rcfg = RefineConfig { budget: cfg.budget, gamma_min: cfg.gamma_min, seed: cfg.seed, t_rule: cfg.t_rule, ..Default::default() };
            let plan = refine(&r, eps_core, &rcfg)?;
            let k = plan_aa(&plan, cfg.k_max)?.rounds;
            // two layers per copy of V; V appears once plus twice per round
            let layer_eps = eps_a / (2 * (1 + 2 * k)) as f64;
            let (v, aa) = build_lcu(&plan, layer_eps, cfg.k_max)?;
            bld.append_with_ancillas(&amplitude_amplify(&v, &aa), &xs);
            out.plan = Some(plan);
            out.aa = Some(aa);
            out.layer_eps = layer_eps;
        }
        append_diagonal(&mut bld, &phases, eps_d, &xs)?;
    }
    out.circuit = bld.finish(format!("state n={n} route={:?}", out.route));
    let measured = if cfg.skip_verify { f64::NAN } else { verify_state(&out.circuit, psi)?.error };
    let mut report = SynthReport::for_circuit(&out.circuit, measured, start.elapsed())?;
    report.seed = Some(cfg.seed);
    Ok((out, report))
}

pub fn synth_state(psi: &TargetState, eps: f64) -> Result<(Circuit, SynthReport)> {
    let (o, r) = synth_state_with(psi, eps, &StateConfig::default())?;
    Ok((o.circuit, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_state_is_empty() {
        let (c, r) = synth_state(&TargetState::basis(3, 0), 1e-2).unwrap();
        assert!(c.is_empty());
        assert_eq!(r.measured_error, 0.0);
    }

    #[test]
    fn basis_state_uses_flips() {
        let (c, r) = synth_state(&TargetState::basis(3, 5), 1e-2).unwrap();
        assert_eq!(c.len(), 2);
        assert!(r.measured_error < 1e-12);
    }

    #[test]
    fn exact_coarse_state_short_circuits() {
        // H B₁ H|0⟩ for a random table, with a relative phase pattern of ±1 only
        let b1: Vec<f64> = [1., -1., -1., -1., 1., 1., -1., 1.].to_vec();
        let mut v = b1.clone();
        super::super::fwht(&mut v);
        let psi = TargetState::from_real(&v.iter().map(|a| a / 8.0).collect::<Vec<_>>()).unwrap();
        let (o, r) = synth_state_with(&psi, 1e-2, &StateConfig::default()).unwrap();
        assert!(matches!(o.route, StateRoute::Coarse | StateRoute::Flat | StateRoute::Basis), "{:?}", o.route);
        assert!(r.measured_error < 1e-10, "{}", r.measured_error);
    }

    #[test]
    fn random_states_meet_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..5 {
            let psi = TargetState::random(n, &mut rng);
            let (o, r) = synth_state_with(&psi, 1e-1, &StateConfig::default()).unwrap();
            let v = verify_state(&o.circuit, &psi).unwrap();
            assert!(r.measured_error <= 1e-1, "n={n}: {}", r.measured_error);
            assert!(v.leak <= 1e-6, "n={n}: leak {}", v.leak);
            assert_eq!(o.route, StateRoute::Amplified);
        }
    }

    #[test]
    fn flat_moduli_use_hadamards() {
        let amps: Vec<Complex64> = (0..4).map(|x| Complex64::from_polar(0.5, 0.3 * x as f64)).collect();
        let psi = TargetState::new(amps).unwrap();
        let (o, r) = synth_state_with(&psi, 1e-2, &StateConfig::default()).unwrap();
        assert_eq!(o.route, StateRoute::Flat);
        assert!(r.measured_error <= 1e-2);
    }
}
