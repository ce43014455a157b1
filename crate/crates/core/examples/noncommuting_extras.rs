//! A commuting circuit with two extra gates that break commutation.
use commsim::oracle::{Observable, OracleConfig, StateVector};
use commsim::paulisim::{simulate_noncommuting_pauli, EstimatorConfig, PauliItem};
use commsim::{BitString, Gate, PauliOperator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = |s: &str| PauliOperator::parse(s).unwrap();
    let items = vec![
        PauliItem::Member(0.4, p("+XXI")),
        PauliItem::Extra(0.3, p("+ZII")),
        PauliItem::Member(-0.8, p("+YYI")),
        PauliItem::Member(0.5, p("+ZZZ")),
        PauliItem::Extra(-0.2, p("+IXI")),
    ];
    let x = BitString::parse("010").unwrap();
    let cfg = EstimatorConfig::new(0.05, 0.01, 3);
    let r = simulate_noncommuting_pauli(3, &items, &x, 0, &cfg, 0)?;

    let mut s = StateVector::from_bits(&x, &OracleConfig::default())?;
    for it in &items {
        let (PauliItem::Member(t, q) | PauliItem::Extra(t, q)) = it;
        s.apply_gate(&Gate::pauli_exp(*t, q.clone()))?;
    }
    println!("<Z1>: estimate {:+.4} over {} terms ({} samples), exact {:+.4}", r.value, r.terms, r.samples, s.expectation(&Observable::z(0))?);
    Ok(())
}
