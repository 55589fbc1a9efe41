//! Twisted A2 NIM-rep at an even level read through both label maps.
use lie_branching::algebra::Weight;
use lie_branching::branching::branch_rs;
use lie_branching::embedding::catalog_lookup;
use lie_branching::nimrep::{psi, psi_prime, TwistedA2};

fn main() -> lie_branching::error::Result<()> {
    let k = 8;
    let tw = TwistedA2::new(k)?;
    let i = Weight(vec![1, 1]);
    let e1 = branch_rs(&catalog_lookup("A1-in-A2-xe1")?, &i)?;
    let e4 = branch_rs(&catalog_lookup("A1-in-A2-xe4")?, &i)?;
    println!("level {k}, i = {i}");
    for a in 0..=k / 2 {
        let v = tw.entry(&i, &psi(k, a)?, &psi(k, 0)?)?;
        println!("  Psi({a}) = {}: {} (branching {})", psi(k, a)?, v.value, e1.get(&Weight(vec![a])));
    }
    for a in (0..=k).step_by(2) {
        let v = tw.entry(&i, &psi_prime(k, a)?, &psi_prime(k, 0)?)?;
        println!("  Psi'({a}) = {}: {} (branching {})", psi_prime(k, a)?, v.value, e4.get(&Weight(vec![a])));
    }
    Ok(())
}
