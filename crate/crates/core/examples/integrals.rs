//! Branching coefficients as integrals, and the closed sum as the level grows.
use lie_branching::affine::LevelVector;
use lie_branching::algebra::Weight;
use lie_branching::embedding::catalog_lookup;
use lie_branching::quadrature::{integral_a1_in_a2, integral_a1_tensor, riemann_trend, DEFAULT_TOLERANCE};

fn main() -> lie_branching::error::Result<()> {
    for a in 0..=4 {
        let r = integral_a1_tensor(2, 2, a, DEFAULT_TOLERANCE)?;
        println!("[2] x [2] -> [{a}]: {} ({:.3e}, {} points)", r.rounded, r.value, r.points);
    }
    for a in 0..=3 {
        let r = integral_a1_in_a2(1, 1, a, DEFAULT_TOLERANCE)?;
        println!("[1,1] -> [{a}]: {}", r.rounded);
    }
    let emb = catalog_lookup("A1-in-A2-xe1")?;
    let ks: Vec<LevelVector> = [3, 5, 9, 17].iter().map(|&k| LevelVector(vec![k])).collect();
    for p in riemann_trend(&emb, &Weight(vec![2, 1]), &Weight(vec![1]), &ks)? {
        println!("level {}: sum {:.12} -> {}", p.level, p.raw, p.value);
    }
    Ok(())
}
