use crate::squbit::word::{mat_adjoint, Mat2};

pub type Qubit = u32;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(Qubit),
    T(Qubit),
    Tdg(Qubit),
    S(Qubit),
    Sdg(Qubit),
    X(Qubit),
    Y(Qubit),
    Z(Qubit),
    Cx(Qubit, Qubit),
    Cz(Qubit, Qubit),
    Swap(Qubit, Qubit),
    /// Toffoli: two controls, one target.
    Ccx(Qubit, Qubit, Qubit),
    /// Controlled Hadamard (control, target).
    Ch(Qubit, Qubit),
    /// Controlled T, diag(1, 1, 1, e^{iπ/4}).
    Ct(Qubit, Qubit),
    Ctdg(Qubit, Qubit),
    /// Unexpanded single-qubit placeholder; row-major matrix.
    Sq1(Qubit, Box<Mat2>),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::T(_) => "T",
            Gate::Tdg(_) => "TDG",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Cx(..) => "CX",
            Gate::Cz(..) => "CZ",
            Gate::Swap(..) => "SWAP",
            Gate::Ccx(..) => "CCX",
            Gate::Ch(..) => "CH",
            Gate::Ct(..) => "CT",
            Gate::Ctdg(..) => "CTDG",
            Gate::Sq1(..) => "SQ1",
        }
    }

    pub fn qubits(&self) -> Vec<Qubit> {
        match *self {
            Gate::H(q) | Gate::T(q) | Gate::Tdg(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
                vec![q]
            }
            Gate::Sq1(q, _) => vec![q],
            Gate::Cx(a, b) | Gate::Cz(a, b) | Gate::Swap(a, b) | Gate::Ch(a, b) | Gate::Ct(a, b) | Gate::Ctdg(a, b) => {
                vec![a, b]
            }
            Gate::Ccx(a, b, c) => vec![a, b, c],
        }
    }

    pub fn is_macro(&self) -> bool {
        matches!(self, Gate::Ccx(..) | Gate::Ch(..) | Gate::Ct(..) | Gate::Ctdg(..) | Gate::Sq1(..))
    }

    /// Gates that only permute basis states.
    pub fn is_classical(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Cx(..) | Gate::Ccx(..) | Gate::Swap(..))
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::T(q) => Gate::Tdg(*q),
            Gate::Tdg(q) => Gate::T(*q),
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::Ct(a, b) => Gate::Ctdg(*a, *b),
            Gate::Ctdg(a, b) => Gate::Ct(*a, *b),
            Gate::Sq1(q, m) => Gate::Sq1(*q, Box::new(mat_adjoint(m))),
            g => g.clone(),
        }
    }

    /// Same gate on relabelled qubits.
    pub fn map_qubits(&self, f: impl Fn(Qubit) -> Qubit) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::T(q) => Gate::T(f(*q)),
            Gate::Tdg(q) => Gate::Tdg(f(*q)),
            Gate::S(q) => Gate::S(f(*q)),
            Gate::Sdg(q) => Gate::Sdg(f(*q)),
            Gate::X(q) => Gate::X(f(*q)),
            Gate::Y(q) => Gate::Y(f(*q)),
            Gate::Z(q) => Gate::Z(f(*q)),
            Gate::Cx(a, b) => Gate::Cx(f(*a), f(*b)),
            Gate::Cz(a, b) => Gate::Cz(f(*a), f(*b)),
            Gate::Swap(a, b) => Gate::Swap(f(*a), f(*b)),
            Gate::Ccx(a, b, c) => Gate::Ccx(f(*a), f(*b), f(*c)),
            Gate::Ch(a, b) => Gate::Ch(f(*a), f(*b)),
            Gate::Ct(a, b) => Gate::Ct(f(*a), f(*b)),
            Gate::Ctdg(a, b) => Gate::Ctdg(f(*a), f(*b)),
            Gate::Sq1(q, m) => Gate::Sq1(f(*q), m.clone()),
        }
    }
}
