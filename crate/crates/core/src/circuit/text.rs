use super::{Circuit, Gate, Qubit};
use crate::error::{parse_err, Result};
use num_complex::Complex64;
use std::fmt::Write;

const LABEL_PREFIX: &str = "# label ";

/// Line-oriented text: a `QUBITS w INPUTS n` header, then one gate per line.
pub fn serialize(c: &Circuit) -> String {
    let mut s = String::new();
    if !c.label.is_empty() {
        for line in c.label.lines() {
            let _ = writeln!(s, "{LABEL_PREFIX}{line}");
        }
    }
    let _ = writeln!(s, "QUBITS {} INPUTS {}", c.width, c.input_count);
    for g in &c.gates {
        s.push_str(g.name());
        for q in g.qubits() {
            let _ = write!(s, " {q}");
        }
        if let Gate::Sq1(_, m) = g {
            for z in m.iter() {
                // Display for f64 is the shortest string that round-trips
                let _ = write!(s, " {} {}", z.re, z.im);
            }
        }
        s.push('\n');
    }
    s
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut header: Option<(u32, u32)> = None;
    let mut label = Vec::new();
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix(LABEL_PREFIX) {
            label.push(rest.to_string());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "QUBITS" {
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate header"));
            }
            if toks.len() != 4 || toks[2] != "INPUTS" {
                return Err(parse_err(line_no, "expected `QUBITS <width> INPUTS <input_count>`"));
            }
            let w = num::<u32>(toks[1], line_no)?;
            let n = num::<u32>(toks[3], line_no)?;
            if n > w {
                return Err(parse_err(line_no, "input count exceeds width"));
            }
            header = Some((w, n));
            continue;
        }
        let Some((width, _)) = header else {
            return Err(parse_err(line_no, "gate before header"));
        };
        let g = parse_gate(&toks, line_no)?;
        for q in g.qubits() {
            if q >= width {
                return Err(parse_err(line_no, format!("qubit {q} outside width {width}")));
            }
        }
        gates.push(g);
    }
    let (width, input_count) = header.ok_or_else(|| parse_err(0, "missing header"))?;
    let c = Circuit { width, input_count, gates, label: label.join("\n") };
    c.validate()?;
    Ok(c)
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad number `{tok}`")))
}

fn parse_gate(toks: &[&str], line: usize) -> Result<Gate> {
    let name = toks[0];
    let arity = match name {
        "H" | "T" | "TDG" | "S" | "SDG" | "X" | "Y" | "Z" | "SQ1" => 1,
        "CX" | "CZ" | "SWAP" | "CH" | "CT" | "CTDG" => 2,
        "CCX" => 3,
        _ => return Err(parse_err(line, format!("unknown gate `{name}`"))),
    };
    let extra = if name == "SQ1" { 8 } else { 0 };
    if toks.len() != 1 + arity + extra {
        return Err(parse_err(line, format!("{name} takes {} operands, got {}", arity + extra, toks.len() - 1)));
    }
    let q: Vec<Qubit> = toks[1..=arity].iter().map(|t| num(t, line)).collect::<Result<_>>()?;
    for i in 0..q.len() {
        if q[..i].contains(&q[i]) {
            return Err(parse_err(line, format!("repeated operand {}", q[i])));
        }
    }
    Ok(match name {
        "H" => Gate::H(q[0]),
        "T" => Gate::T(q[0]),
        "TDG" => Gate::Tdg(q[0]),
        "S" => Gate::S(q[0]),
        "SDG" => Gate::Sdg(q[0]),
        "X" => Gate::X(q[0]),
        "Y" => Gate::Y(q[0]),
        "Z" => Gate::Z(q[0]),
        "CX" => Gate::Cx(q[0], q[1]),
        "CZ" => Gate::Cz(q[0], q[1]),
        "SWAP" => Gate::Swap(q[0], q[1]),
        "CH" => Gate::Ch(q[0], q[1]),
        "CT" => Gate::Ct(q[0], q[1]),
        "CTDG" => Gate::Ctdg(q[0], q[1]),
        "CCX" => Gate::Ccx(q[0], q[1], q[2]),
        _ => {
            let f: Vec<f64> = toks[2..].iter().map(|t| num(t, line)).collect::<Result<_>>()?;
            let m = [0, 1, 2, 3].map(|i| Complex64::new(f[2 * i], f[2 * i + 1]));
            Gate::Sq1(q[0], Box::new(m))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn simple_lines() {
        let c = parse("QUBITS 2 INPUTS 2\nH 0\nCX 0 1\n").unwrap();
        assert_eq!(c.gates, vec![Gate::H(0), Gate::Cx(0, 1)]);
        assert_eq!(serialize(&c), "QUBITS 2 INPUTS 2\nH 0\nCX 0 1\n");
        let c = parse("QUBITS 1 INPUTS 1\nT 0\nTDG 0").unwrap();
        assert_eq!(c.t_count().unwrap(), 2);
    }

    #[test]
    fn label_and_placeholder_round_trip() {
        let mut c = Circuit::new(3, 1);
        c.label = "two\nlines".into();
        let h = crate::squbit::word::mat_h();
        c.push(Gate::Sq1(2, Box::new(h)));
        c.push(Gate::Ccx(0, 2, 1));
        assert_eq!(parse(&serialize(&c)).unwrap(), c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse("QUBITS 2 INPUTS 1\nH 0\nFOO 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse("QUBITS 2 INPUTS 1\nCX 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse("QUBITS 2 INPUTS 1\nCX 0 5\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse("H 0\n").is_err());
        assert!(parse("").is_err());
    }
}
