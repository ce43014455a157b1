//! Exact expectation of a 2-local commuting circuit on a product state,
//! compared against the statevector.
use commsim::linalg::C64;
use commsim::local2::{simulate_2local, ProductState};
use commsim::oracle::{Observable, OracleConfig};
use commsim::{Circuit, Gate, PauliOperator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 12;
    let mut c = Circuit::qubits(n);
    for q in 0..n - 1 {
        let mut s = vec!['I'; n];
        s[q] = 'Z';
        s[q + 1] = 'Z';
        let p: String = s.into_iter().collect();
        c.push(Gate::pauli_exp(0.1 * (q + 1) as f64, PauliOperator::parse(&format!("+{p}"))?))?;
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = vec![C64::new(h, 0.0), C64::new(h, 0.0)];
    let input = ProductState::new(vec![plus; n], 2)?;
    let obs = Observable::from_pauli(&PauliOperator::parse(&format!("+IIIIIX{}", "I".repeat(n - 6)))?)?;

    let fast = simulate_2local(&c, &input, &obs)?;
    let mut s = input.to_state_vector(&OracleConfig::default())?;
    s.apply_circuit(&c)?;
    println!("contraction {fast:.12}, statevector {:.12}", s.expectation(&obs)?);
    Ok(())
}
