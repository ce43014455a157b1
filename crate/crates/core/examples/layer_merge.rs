//! One commuting test circuit for the overlap of two commuting layers.
use commsim::circuit::parse_circuit;
use commsim::oracle::{run_from_zero, OracleConfig};
use commsim::transformers::{exact_p0, two_layer_merge, Part};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = OracleConfig::default();
    let c1 = parse_circuit("circuit 3\nexppauli 0.5 +XXI\nexppauli 0.2 +IXX\n")?;
    let c2 = parse_circuit("circuit 3\nexppauli 0.7 +ZZI\nexppauli -0.4 +IZZ\nexppauli 0.1 +ZIZ\n")?;
    let merged = two_layer_merge(&c1, &c2, Part::Re)?;

    let mut both = c2.clone();
    for g in c1.gates() {
        both.push(g.clone())?;
    }
    let a = run_from_zero(&both, &cfg)?.amplitudes()[0];
    println!("{} merged gates, commuting: {}", merged.len(), merged.is_commuting());
    println!("p0 = {:.6}, 0.5(1 + Re<0|C1 C2|0>) = {:.6}", exact_p0(&merged, &cfg)?, 0.5 * (1.0 + a.re));
    Ok(())
}
