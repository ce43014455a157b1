//! Products, commutation and basis action of Pauli strings.
use commsim::{BitString, PauliOperator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = PauliOperator::parse("+XZY")?;
    let b = PauliOperator::parse("-ZZI")?;
    println!("{a} * {b} = {}", a.multiply(&b)?);
    println!("commute: {}", a.commutes(&b)?);
    println!("hermitian: {} / {}", a.is_hermitian(), a.times_i_pow(1).is_hermitian());

    let y = BitString::parse("010").unwrap();
    let act = a.act_on_basis(&y);
    println!("{a}|{y}> = i^{} |{}>", act.phase, act.state);
    Ok(())
}
