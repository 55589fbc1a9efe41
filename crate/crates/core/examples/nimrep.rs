//! NIM-rep matrix of an embedding on a window, and the axioms on its interior.
use lie_branching::algebra::Weight;
use lie_branching::embedding::catalog_lookup;
use lie_branching::nimrep::{level_window, nim_window, verify_nim};

fn main() -> lie_branching::error::Result<()> {
    let emb = catalog_lookup("A1-in-A2-xe1")?;
    let i = Weight(vec![1, 0]);
    let window = level_window(emb.p(), 6)?;
    let n = nim_window(&emb, &i, &window)?;
    println!("n_{i} on levels 0..6 of A1:");
    for row in &n.entries {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        println!("  {}", cells.join(" "));
    }
    let r = verify_nim(&emb, &i, &Weight(vec![0, 1]), 7, 1)?;
    println!(
        "interior {} of {}: product violation {}, transpose violation {}",
        r.interior_size, r.window_size, r.product_violation, r.transpose_violation
    );
    Ok(())
}
