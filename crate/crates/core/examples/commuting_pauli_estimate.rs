//! Weak simulation of a commuting Pauli-exponential circuit.
use commsim::circuit::parse_circuit;
use commsim::oracle::{run_from_zero, Observable, OracleConfig};
use commsim::paulisim::{pauli_gates, simulate_commuting_pauli, EstimatorConfig};
use commsim::BitString;

const CLUSTER: &str = "circuit 6
exppauli 0.3 +XZIIII
exppauli -0.7 +ZXZIII
exppauli 1.1 +IZXZII
exppauli 0.2 +IIZXZI
exppauli -0.4 +IIIZXZ
exppauli 0.9 +IIIIZX
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = parse_circuit(CLUSTER)?;
    let gates = pauli_gates(&c)?;
    let cfg = EstimatorConfig::new(0.05, 0.01, 42);
    let x = BitString::zeros(6);
    for q in [0, 2, 5] {
        let r = simulate_commuting_pauli(6, &gates, &x, q, &cfg)?;
        let exact = run_from_zero(&c, &OracleConfig::default())?.expectation(&Observable::z(q))?;
        println!("<Z{}>: estimate {:+.4}, exact {exact:+.4}, K = {}", q + 1, r.value, r.samples);
    }
    Ok(())
}
