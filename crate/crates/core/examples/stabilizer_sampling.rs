//! Evolve a basis state through a Clifford circuit, then read exact
//! amplitudes and draw samples.
use commsim::circuit::CliffordGate;
use commsim::stabilizer::{CliffordCircuit, StabilizerState};
use commsim::BitString;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4;
    let mut c = CliffordCircuit::new(n);
    for q in 0..n {
        c.push(CliffordGate::H(q))?;
    }
    for q in 0..n - 1 {
        c.push(CliffordGate::Cz(q, q + 1))?;
    }
    let s = StabilizerState::evolve(&BitString::zeros(n), &c);
    println!("generators:");
    for g in s.generators() {
        println!("  {g}");
    }
    let y = BitString::parse("0110").unwrap();
    println!("<{y}|psi> = {} (support dim {})", s.amplitude(&y), s.support_dim());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<String> = (0..5).map(|_| s.sample(&mut rng).to_string()).collect();
    println!("samples: {}", draws.join(" "));
    Ok(())
}
