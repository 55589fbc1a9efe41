//! Tensor products as branching along the diagonal embedding.
use lie_branching::algebra::{build_algebra, Weight};
use lie_branching::branching::tensor;

fn main() -> lie_branching::error::Result<()> {
    for (alg, i, j) in [("A2", vec![1, 0], vec![0, 1]), ("B2", vec![1, 0], vec![0, 1]), ("G2", vec![0, 1], vec![0, 1])] {
        let g = build_algebra(alg)?;
        let t = tensor(&g, &Weight(i.clone()), &Weight(j.clone()))?;
        let parts: Vec<String> = t.entries.iter().map(|(l, m)| format!("{m}x{l}")).collect();
        println!("{alg}: {} x {} = {}", Weight(i), Weight(j), parts.join(" + "));
    }
    Ok(())
}
