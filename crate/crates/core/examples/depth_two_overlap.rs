//! `|<0|U|0>|^2` for a depth-2 circuit from commuting-circuit shots only.
use commsim::circuit::parse_circuit;
use commsim::oracle::{run_from_zero, OracleConfig};
use commsim::paulisim::EstimatorConfig;
use commsim::transformers::{estimate_cd_overlap, DenseExecutor, OverlapConfig};

const LADDER: &str = "circuit 6
exppauli 0.4 +XIIIII
exppauli 0.3 +IYIIII
exppauli 0.5 +IIXIII
exppauli 0.2 +IIIYII
exppauli 0.6 +IIIIXI
exppauli 0.1 +IIIIIY
---
exppauli 0.7 +ZXIIII
exppauli 0.3 +IIZXII
exppauli -0.5 +IIIIXZ
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let u = parse_circuit(LADDER)?;
    let cfg = OverlapConfig::new(EstimatorConfig::new(0.05, 0.05, 8));
    println!("{} subsets, {} shots each", cfg.subset_count(), cfg.shot_count());
    let r = estimate_cd_overlap(&u, &cfg, &DenseExecutor::default())?;
    let exact = run_from_zero(&u, &OracleConfig::default())?.amplitudes()[0].norm_sqr();
    println!("estimate {:.4}, exact {exact:.4}", r.value);
    Ok(())
}
