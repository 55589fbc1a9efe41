//! The built-in catalog, embedding indices, and composing embeddings.
use lie_branching::algebra::Weight;
use lie_branching::branching::branch_rs;
use lie_branching::embedding::{catalog, catalog_lookup, compose, embedding_index};

fn main() -> lie_branching::error::Result<()> {
    for emb in catalog() {
        println!("{:<14} {} -> {}  index {}", emb.name(), emb.p(), emb.g(), embedding_index(&emb)?);
    }
    let chain = compose(&catalog_lookup("A1-in-A2-xe1")?, &catalog_lookup("diag-A2")?)?;
    println!("{}: index {}", chain.name(), embedding_index(&chain)?);
    let t = branch_rs(&chain, &Weight(vec![1, 0, 0, 1]))?;
    let parts: Vec<String> = t.entries.iter().map(|(a, m)| format!("{m}x{a}")).collect();
    println!("[1,0]+[0,1] -> {}", parts.join(" + "));
    Ok(())
}
