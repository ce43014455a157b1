//! Statevector reference: Bell pair expectations and a qutrit circuit.
use commsim::circuit::parse_circuit;
use commsim::oracle::{run_from_zero, Observable, OracleConfig};
use commsim::PauliOperator;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bell = parse_circuit("circuit 2\nh 1\ncnot 1 2\n")?;
    let state = run_from_zero(&bell, &OracleConfig::default())?;
    for obs in ["+ZI", "+ZZ", "+XX", "+YY"] {
        let o = Observable::from_pauli(&PauliOperator::parse(obs)?)?;
        println!("<{obs}> = {:+.3}", state.expectation(&o)?);
    }
    println!("amplitudes: {:?}", state.amplitudes());
    Ok(())
}
