use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::squbit::{HTWord, Letter};

/// T-count of the Toffoli expansion.
pub const C_CCX: usize = 7;
/// T-count of the controlled-Hadamard expansion.
pub const C_CH: usize = 2;
/// T-count of the controlled-T expansion: two Toffolis around one T.
pub const C_CT: usize = 2 * C_CCX + 1;

/// T-count of the relative-phase Toffoli.
pub const C_RCCX: usize = 4;

pub(crate) const CCX_CLIFFORDS: usize = 8;
pub(crate) const CH_CLIFFORDS: usize = 5;

/// V in time order, with V·X·V† = H; the controlled Hadamard is V†, CX, V.
/// Shortest such word over {H, T, T†, S, S†}, found by exhaustive search.
pub const CH_V_WORD: [&str; 3] = ["T", "H", "S"];

fn v_gates(t: u32, inverse: bool) -> Vec<Gate> {
    if inverse {
        vec![Gate::Sdg(t), Gate::H(t), Gate::Tdg(t)]
    } else {
        vec![Gate::T(t), Gate::H(t), Gate::S(t)]
    }
}

/// Gates of an H/T word on qubit `q`, in time order. A run of r T letters becomes
/// T^{r mod 8} with its Clifford part as S or Z, so only odd runs cost a T gate.
pub fn word_gates(w: &HTWord, q: u32) -> Vec<Gate> {
    let mut out = Vec::new();
    let mut run = 0u32;
    let flush = |run: &mut u32, out: &mut Vec<Gate>| {
        out.extend(match *run % 8 {
            0 => vec![],
            1 => vec![Gate::T(q)],
            2 => vec![Gate::S(q)],
            3 => vec![Gate::S(q), Gate::T(q)],
            4 => vec![Gate::Z(q)],
            5 => vec![Gate::Z(q), Gate::T(q)],
            6 => vec![Gate::Sdg(q)],
            _ => vec![Gate::Tdg(q)],
        });
        *run = 0;
    };
    for l in w.letters().into_iter().rev() {
        match l {
            Letter::T => run += 1,
            Letter::H => {
                flush(&mut run, &mut out);
                out.push(Gate::H(q));
            }
        }
    }
    flush(&mut run, &mut out);
    out
}

pub(crate) fn ccx_gates(a: u32, b: u32, c: u32) -> Vec<Gate> {
    vec![
        Gate::H(c),
        Gate::Cx(b, c),
        Gate::Tdg(c),
        Gate::Cx(a, c),
        Gate::T(c),
        Gate::Cx(b, c),
        Gate::Tdg(c),
        Gate::Cx(a, c),
        Gate::T(b),
        Gate::T(c),
        Gate::H(c),
        Gate::Cx(a, b),
        Gate::T(a),
        Gate::Tdg(b),
        Gate::Cx(a, b),
    ]
}

/// Toffoli up to a diagonal phase on the controls' basis states. Fine wherever it is undone
/// by its exact inverse with only diagonal gates in between.
pub fn rccx_gates(a: u32, b: u32, c: u32) -> Vec<Gate> {
    vec![
        Gate::H(c),
        Gate::T(c),
        Gate::Cx(b, c),
        Gate::Tdg(c),
        Gate::Cx(a, c),
        Gate::T(c),
        Gate::Cx(b, c),
        Gate::Tdg(c),
        Gate::H(c),
    ]
}

pub(crate) fn ch_gates(c: u32, t: u32) -> Vec<Gate> {
    let mut g = v_gates(t, true);
    g.push(Gate::Cx(c, t));
    g.extend(v_gates(t, false));
    g
}

/// Primitive-only circuit with the same unitary; controlled-T gates borrow one scratch qubit
/// appended at index `width`.
pub fn expand_macros(c: &Circuit) -> Result<Circuit> {
    let needs_scratch = c.gates.iter().any(|g| matches!(g, Gate::Ct(..) | Gate::Ctdg(..)));
    let s = c.width;
    let mut out = Circuit {
        width: c.width + needs_scratch as u32,
        input_count: c.input_count,
        gates: Vec::with_capacity(c.gates.len()),
        label: c.label.clone(),
    };
    for g in &c.gates {
        match *g {
            Gate::Ccx(a, b, t) => out.gates.extend(ccx_gates(a, b, t)),
            Gate::Ch(a, t) => out.gates.extend(ch_gates(a, t)),
            Gate::Ct(a, t) | Gate::Ctdg(a, t) => {
                out.gates.extend(ccx_gates(a, t, s));
                out.gates.push(if matches!(g, Gate::Ct(..)) { Gate::T(s) } else { Gate::Tdg(s) });
                out.gates.extend(ccx_gates(a, t, s));
            }
            Gate::Sq1(..) => return Err(Error::UnresolvedPlaceholder),
            _ => out.gates.push(g.clone()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_expansions() {
        let count = |gs: &[Gate]| gs.iter().filter(|g| matches!(g, Gate::T(_) | Gate::Tdg(_))).count();
        assert_eq!(count(&ccx_gates(0, 1, 2)), C_CCX);
        assert_eq!(ccx_gates(0, 1, 2).len() - C_CCX, CCX_CLIFFORDS);
        assert_eq!(count(&ch_gates(0, 1)), C_CH);
        assert_eq!(ch_gates(0, 1).len() - C_CH, CH_CLIFFORDS);
        let mut c = Circuit::new(2, 2);
        c.push(Gate::Ct(0, 1));
        let e = expand_macros(&c).unwrap();
        assert_eq!(e.width, 3);
        assert_eq!(e.t_count().unwrap(), C_CT);
        assert_eq!(c.t_count().unwrap(), C_CT);
        assert_eq!(c.clifford_count().unwrap(), e.clifford_count().unwrap());
        assert_eq!(CH_V_WORD.len(), v_gates(0, false).len());
    }

    #[test]
    fn placeholder_is_rejected() {
        let mut c = Circuit::new(1, 1);
        c.push(Gate::Sq1(0, Box::new(crate::squbit::word::IDENTITY)));
        assert_eq!(expand_macros(&c), Err(Error::UnresolvedPlaceholder));
        assert_eq!(c.t_count(), Err(Error::UnresolvedPlaceholder));
    }

    #[test]
    fn word_gates_fold_t_runs() {
        use crate::diagonal::{tensor_matrix, unitary_error};
        let mut seed = 7u64;
        for len in [0usize, 1, 5, 12, 40] {
            let letters: Vec<Letter> = (0..len)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if seed >> 62 == 0 { Letter::H } else { Letter::T }
                })
                .collect();
            let w = HTWord::from_letters(&letters);
            let c = Circuit::with_gates(1, 1, word_gates(&w, 0)).unwrap();
            assert!(unitary_error(&c, &tensor_matrix(&[w.matrix()])).unwrap() < 1e-12);
            assert_eq!(c.t_count().unwrap(), w.clifford_t_count());
        }
        let tt = HTWord::from_letters(&[Letter::T, Letter::T, Letter::H, Letter::T]);
        assert_eq!(tt.clifford_t_count(), 1);
        assert_eq!(word_gates(&tt, 0), vec![Gate::T(0), Gate::H(0), Gate::S(0)]);
    }

    #[test]
    fn rccx_permutes_like_toffoli() {
        let c = Circuit::with_gates(3, 3, rccx_gates(0, 1, 2)).unwrap();
        assert_eq!(c.t_count().unwrap(), C_RCCX);
        let cols = crate::sim::run_columns(&c, 3).unwrap();
        for (x, col) in cols.clean.iter().enumerate() {
            let want = x ^ (((x & 1) & (x >> 1 & 1)) << 2);
            let hit: Vec<_> = col.iter().filter(|e| e.1.norm() > 1e-9).collect();
            assert_eq!(hit.len(), 1, "x={x}");
            assert_eq!(hit[0].0, want as u64);
            assert!((hit[0].1.norm() - 1.0).abs() < 1e-12);
        }
    }
}
