use super::{Circuit, CliffordGate, Gate};
use crate::error::ParseError;
use crate::linalg::{pow_usize, CMatrix, C64};
use crate::pauli::PauliOperator;

/// Parses the line-oriented circuit format:
///
/// ```text
/// circuit <n> [dim <d>]
/// h <q> | s <q> | x <q> | z <q> | cnot <c> <t> | cz <a> <b>
/// exppauli <theta> <signed Pauli string>
/// dense <k> <q1..qk> <re im pairs, row-major>
/// ctrl <q> <gate line>
/// ---
/// ```
///
/// Qudits are 1-based; `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(c) = circuit.as_mut() else {
            circuit = Some(parse_header(&tokens, lineno)?);
            continue;
        };
        if tokens == ["---"] {
            c.push_layer_break();
            continue;
        }
        let gate = parse_gate(&tokens, c.num_qudits(), c.dim(), lineno)?;
        c.push(gate)
            .map_err(|e| ParseError::new(lineno, e.to_string()))?;
    }
    circuit.ok_or_else(|| ParseError::new(0, "missing 'circuit <n>' header"))
}

fn parse_header(tokens: &[&str], lineno: usize) -> Result<Circuit, ParseError> {
    let err = || ParseError::new(lineno, "expected header 'circuit <n> [dim <d>]'");
    if tokens.first() != Some(&"circuit") {
        return Err(err());
    }
    let n: usize = tokens.get(1).and_then(|t| t.parse().ok()).ok_or_else(err)?;
    let d = match tokens.len() {
        2 => 2,
        4 if tokens[2] == "dim" => tokens[3].parse().map_err(|_| err())?,
        _ => return Err(err()),
    };
    Circuit::new(n, d).map_err(|e| ParseError::new(lineno, e.to_string()))
}

fn qudit(tok: Option<&&str>, n: usize, lineno: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::new(lineno, "missing qudit index"))?;
    let q: usize = tok
        .parse()
        .map_err(|_| ParseError::new(lineno, format!("invalid qudit index '{tok}'")))?;
    if q == 0 || q > n {
        return Err(ParseError::new(
            lineno,
            format!("qudit index {q} out of range 1..={n}"),
        ));
    }
    Ok(q - 1)
}

fn expect_len(tokens: &[&str], len: usize, lineno: usize) -> Result<(), ParseError> {
    if tokens.len() != len {
        return Err(ParseError::new(
            lineno,
            format!("'{}' expects {} arguments, found {}", tokens[0], len - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

fn parse_gate(tokens: &[&str], n: usize, d: usize, lineno: usize) -> Result<Gate, ParseError> {
    let keyword = tokens[0];
    let qubit_only = matches!(keyword, "h" | "s" | "x" | "z" | "cnot" | "cz" | "exppauli" | "ctrl");
    if qubit_only && d != 2 {
        return Err(ParseError::new(
            lineno,
            format!("'{keyword}' is undefined for d = {d}"),
        ));
    }
    let single = |f: fn(usize) -> CliffordGate| -> Result<Gate, ParseError> {
        expect_len(tokens, 2, lineno)?;
        Ok(Gate::Clifford(f(qudit(tokens.get(1), n, lineno)?)))
    };
    match keyword {
        "h" => single(CliffordGate::H),
        "s" => single(CliffordGate::S),
        "x" => single(CliffordGate::X),
        "z" => single(CliffordGate::Z),
        "cnot" => {
            expect_len(tokens, 3, lineno)?;
            Ok(Gate::Clifford(CliffordGate::Cnot {
                control: qudit(tokens.get(1), n, lineno)?,
                target: qudit(tokens.get(2), n, lineno)?,
            }))
        }
        "cz" => {
            expect_len(tokens, 3, lineno)?;
            Ok(Gate::Clifford(CliffordGate::Cz(
                qudit(tokens.get(1), n, lineno)?,
                qudit(tokens.get(2), n, lineno)?,
            )))
        }
        "exppauli" => {
            expect_len(tokens, 3, lineno)?;
            let theta: f64 = tokens[1]
                .parse()
                .map_err(|_| ParseError::new(lineno, format!("invalid angle '{}'", tokens[1])))?;
            let pauli = PauliOperator::parse(tokens[2]).map_err(|e| ParseError::new(lineno, e.message))?;
            if pauli.num_qubits() != n {
                return Err(ParseError::new(
                    lineno,
                    format!("Pauli string has {} qubits, circuit has {n}", pauli.num_qubits()),
                ));
            }
            if !pauli.is_hermitian() {
                return Err(ParseError::new(
                    lineno,
                    format!("Pauli operator {} is not Hermitian", tokens[2]),
                ));
            }
            Ok(Gate::PauliExp { theta, pauli })
        }
        "dense" => parse_dense(tokens, n, d, lineno),
        "ctrl" => {
            if tokens.len() < 3 {
                return Err(ParseError::new(lineno, "'ctrl' expects a qubit and a gate"));
            }
            let control = qudit(tokens.get(1), n, lineno)?;
            let inner = parse_gate(&tokens[2..], n, d, lineno)?;
            Ok(Gate::controlled(control, inner))
        }
        other => Err(ParseError::new(lineno, format!("unknown gate '{other}'"))),
    }
}

fn parse_dense(tokens: &[&str], n: usize, d: usize, lineno: usize) -> Result<Gate, ParseError> {
    let k: usize = tokens
        .get(1)
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ParseError::new(lineno, "'dense' expects a qudit count"))?;
    let dim = pow_usize(d, k)
        .filter(|dim| dim.checked_mul(*dim).is_some())
        .ok_or_else(|| ParseError::new(lineno, "dense gate too large"))?;
    let expected = 2 + k + 2 * dim * dim;
    if tokens.len() != expected {
        return Err(ParseError::new(
            lineno,
            format!(
                "dense gate on {k} qudits needs {} numbers, found {}",
                2 * dim * dim,
                tokens.len().saturating_sub(2 + k)
            ),
        ));
    }
    let mut qudits = Vec::with_capacity(k);
    for j in 0..k {
        qudits.push(qudit(tokens.get(2 + j), n, lineno)?);
    }
    let mut vals = Vec::with_capacity(2 * dim * dim);
    for t in &tokens[2 + k..] {
        vals.push(
            t.parse::<f64>()
                .map_err(|_| ParseError::new(lineno, format!("invalid number '{t}'")))?,
        );
    }
    let entries: Vec<C64> = vals.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    let matrix = CMatrix::from_row_slice(dim, dim, &entries);
    Ok(Gate::Dense { qudits, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_program() {
        let c = parse_circuit("circuit 1\nh 1").unwrap();
        assert_eq!(c.num_qudits(), 1);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.gates(), &[Gate::Clifford(CliffordGate::H(0))]);
    }

    #[test]
    fn exppauli_token_mapping() {
        let c = parse_circuit("circuit 2\nexppauli 0.5 +XZ").unwrap();
        match &c.gates()[0] {
            Gate::PauliExp { theta, pauli } => {
                assert_eq!(*theta, 0.5);
                assert_eq!(pauli.format(), "+XZ");
            }
            g => panic!("unexpected gate {g:?}"),
        }
    }

    #[test]
    fn hadamard_undefined_for_qutrits() {
        let err = parse_circuit("circuit 1 dim 3\nh 1").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn error_line_numbers_point_at_offender() {
        let text = "# header comment\ncircuit 2\n\nh 1\ncz 1 3\n";
        assert_eq!(parse_circuit(text).unwrap_err().line, 5);
        assert_eq!(parse_circuit("circuit 2\nfoo 1").unwrap_err().line, 2);
        assert_eq!(parse_circuit("h 1").unwrap_err().line, 1);
        assert!(parse_circuit("").is_err());
    }

    #[test]
    fn rejects_non_unitary_dense_and_non_hermitian_pauli() {
        let bad = "circuit 1\ndense 1 1 1 0 1 0 0 0 1 0\n";
        assert_eq!(parse_circuit(bad).unwrap_err().line, 2);
        assert_eq!(parse_circuit("circuit 2\nexppauli 0.1 +iXZ").unwrap_err().line, 2);
        assert!(parse_circuit("circuit 2\nexppauli 0.1 +XZZ").is_err());
    }

    #[test]
    fn dense_and_ctrl_lines() {
        let text = "circuit 3 dim 2\ndense 1 2 0 0 1 0 1 0 0 0\nctrl 1 cz 2 3\n---\nctrl 3 exppauli 0.25 +ZII\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.layer_breaks(), &[2]);
        assert_eq!(c.gates()[1].support(), vec![0, 1, 2]);
        let again = parse_circuit(&c.to_text()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn qutrit_dense_gate() {
        let mut text = String::from("circuit 2 dim 3\ndense 1 2");
        for r in 0..3 {
            for c in 0..3 {
                text.push_str(if r == c { " 1 0" } else { " 0 0" });
            }
        }
        let c = parse_circuit(&text).unwrap();
        assert_eq!(c.gates()[0].support(), vec![1]);
    }
}
