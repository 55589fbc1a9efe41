//! S-matrix at a level and the fusion rules it produces.
use lie_branching::affine::{LevelVector, SMatrix};
use lie_branching::algebra::{build_algebra, Weight};

fn main() -> lie_branching::error::Result<()> {
    let g = build_algebra("A1")?;
    let s = SMatrix::new(&g, &LevelVector(vec![3]))?;
    println!("A1 level 3, unitarity residual {:.1e}", s.unitarity_residual());
    for a in 0..s.len() {
        let row: Vec<String> = (0..s.len()).map(|b| format!("{:+.4}", s.at(a, b).re)).collect();
        println!("  {}", row.join(" "));
    }
    // Truncation: 2 x 2 = 0 + 2 at level 3, the [4] channel is gone.
    let f = s.fusion(&Weight(vec![2]), &Weight(vec![2]))?;
    println!("[2] x [2] = {}", show(&f.coefficients));

    let a2 = build_algebra("A2")?;
    let s = SMatrix::new(&a2, &LevelVector(vec![2]))?;
    let f = s.fusion(&Weight(vec![1, 0]), &Weight(vec![1, 1]))?;
    println!("A2 level 2: [1,0] x [1,1] = {}", show(&f.coefficients));
    Ok(())
}

fn show(c: &[(Weight, u64)]) -> String {
    let parts: Vec<String> = c.iter().map(|(l, n)| format!("{n}x{l}")).collect();
    parts.join(" + ")
}
