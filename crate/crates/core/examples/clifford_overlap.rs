//! The overlap estimator with a Clifford circuit after the shallow part.
use commsim::circuit::{parse_circuit, CliffordGate};
use commsim::oracle::{run_from_zero, OracleConfig};
use commsim::paulisim::EstimatorConfig;
use commsim::stabilizer::CliffordCircuit;
use commsim::transformers::{estimate_cd_clifford_overlap, DenseExecutor, OverlapConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = parse_circuit("circuit 4\nexppauli 0.3 +XIII\nexppauli 0.5 +IXII\nexppauli -0.4 +IIYI\n---\nexppauli 0.6 +ZZII\nexppauli 0.2 +IIXX\n")?;
    let c = CliffordCircuit::from_gates(4, [
        CliffordGate::H(0),
        CliffordGate::Cnot { control: 0, target: 2 },
        CliffordGate::S(3),
        CliffordGate::Cz(1, 3),
    ])?;
    let cfg = OverlapConfig::new(EstimatorConfig::new(0.05, 0.05, 2));
    let r = estimate_cd_clifford_overlap(&u, &c, &cfg, &DenseExecutor::default())?;

    let mut full = u.clone();
    for g in c.to_circuit().gates() {
        full.push(g.clone())?;
    }
    let exact = run_from_zero(&full, &OracleConfig::default())?.amplitudes()[0].norm_sqr();
    println!("estimate {:.4}, exact {exact:.4}", r.value);
    Ok(())
}
