use super::table::GateSequenceTable;
use crate::circuit::{Builder, Circuit, Gate, Qubit};

/// For every sequence bit ℓ (even: H, odd: T): CH or CT from seq[ℓ] onto the target.
pub fn controlled_ladder(k_pad: usize, seq: &[Qubit], target: Qubit) -> Circuit {
    assert_eq!(seq.len(), 2 * k_pad);
    let gates: Vec<Gate> = seq
        .iter()
        .enumerate()
        .map(|(l, &s)| if l % 2 == 0 { Gate::Ch(s, target) } else { Gate::Ct(s, target) })
        .collect();
    let width = seq.iter().copied().chain([target]).max().map_or(0, |m| m + 1);
    Circuit { width, input_count: width, gates, label: format!("ladder K={k_pad}") }
}

/// What one table column needs: nothing, an uncontrolled gate, or a register bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Zero,
    One,
    Var,
}

pub fn classify_columns(t: &GateSequenceTable) -> Vec<Column> {
    let rows = 1u64 << t.n;
    (0..2 * t.k_pad as u32)
        .map(|i| {
            let ones = (0..rows).filter(|&j| t.rows.get(j, i)).count() as u64;
            match ones {
                0 => Column::Zero,
                x if x == rows => Column::One,
                _ => Column::Var,
            }
        })
        .collect()
}

/// Ladder with constant columns folded: zero columns are dropped, all-one columns become H or T.
/// `seq` holds one qubit per `Column::Var`, in column order.
pub fn emit_ladder(bld: &mut Builder, cols: &[Column], seq: &[Qubit], target: Qubit) {
    let mut vars = seq.iter();
    for (l, c) in cols.iter().enumerate() {
        let h = l % 2 == 0;
        match c {
            Column::Zero => {}
            Column::One => bld.push(if h { Gate::H(target) } else { Gate::T(target) }),
            Column::Var => {
                let s = *vars.next().expect("register too short");
                bld.push(if h { Gate::Ch(s, target) } else { Gate::Ct(s, target) })
            }
        }
    }
    assert!(vars.next().is_none(), "register too long");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{C_CH, C_CT};
    use crate::sim::{run, SparseState};

    #[test]
    fn ladder_shapes() {
        assert!(controlled_ladder(0, &[], 0).is_empty());
        let c = controlled_ladder(1, &[0, 1], 2);
        assert_eq!(c.gates, vec![Gate::Ch(0, 2), Gate::Ct(1, 2)]);
        assert_eq!(c.t_count().unwrap(), C_CH + C_CT);
    }

    #[test]
    fn bits_one_zero_apply_hadamard() {
        let c = controlled_ladder(1, &[0, 1], 2);
        // seq bits "10": qubit 0 set, qubit 1 clear, target |0⟩
        let s: SparseState = run(&c, &SparseState::basis(3, 0b001)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0b001).re - r).abs() < 1e-12);
        assert!((s.amplitude(0b101).re - r).abs() < 1e-12);
    }
}
