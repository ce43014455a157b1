//! Simultaneous Z-type diagonalization of the 1D cluster stabilizers.
use commsim::pauli::parse_pauli_list;
use commsim::stabilizer::{diagonalize_commuting_set, Direction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ps = parse_pauli_list("+XZIIII\n+ZXZIII\n+IZXZII\n+IIZXZI\n+IIIZXZ\n+IIIIZX\n")?;
    let (c, q) = diagonalize_commuting_set(&ps)?;
    println!("clifford ({} gates):\n{c}", c.len());
    for (p, q) in ps.iter().zip(&q) {
        assert_eq!(&c.conjugate_pauli(p, Direction::Inverse), q);
        println!("{p} -> {q}");
    }
    Ok(())
}
