//! Weight system, dimension and dominant reflection for a few modules.
use lie_branching::algebra::{build_algebra, Weight};
use lie_branching::weyl::{dimension, to_dominant, weight_system};

fn main() -> lie_branching::error::Result<()> {
    let g = build_algebra("B2")?;
    let top = Weight(vec![1, 1]);
    let ws = weight_system(&g, &top)?;
    println!("{g} module {top}: dim {} ({} distinct weights)", dimension(&g, &top)?, ws.len());
    for (mu, m) in ws.iter() {
        println!("  {mu} x{m}");
    }

    let a2 = build_algebra("A2")?;
    for w in [Weight(vec![-1, 1]), Weight(vec![-2, 3])] {
        let r = to_dominant(&a2, &w)?;
        println!("{w} -> {} sign {} boundary {}", r.weight, r.sign, r.on_boundary);
    }
    Ok(())
}
