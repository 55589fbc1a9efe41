//! Restrict A2 modules to the index-4 A1 with all three methods.
use lie_branching::algebra::Weight;
use lie_branching::branching::{branch_closed, branch_oracle, branch_rs};
use lie_branching::embedding::catalog_lookup;

fn main() -> lie_branching::error::Result<()> {
    let emb = catalog_lookup("A1-in-A2-xe4")?;
    for i in [Weight(vec![1, 0]), Weight(vec![1, 1]), Weight(vec![2, 1])] {
        let rs = branch_rs(&emb, &i)?;
        let closed = branch_closed(&emb, &i, None)?;
        let oracle = branch_oracle(&emb, &i)?;
        let parts: Vec<String> = rs.entries.iter().map(|(a, m)| format!("{m}x{a}")).collect();
        println!(
            "{i} -> {}  (closed at level {}, residual {:.1e}, all agree: {})",
            parts.join(" + "),
            closed.level.as_ref().expect("closed tables record a level"),
            closed.residual.unwrap_or(0.0),
            rs.same_coefficients(&closed) && rs.same_coefficients(&oracle)
        );
    }
    Ok(())
}
