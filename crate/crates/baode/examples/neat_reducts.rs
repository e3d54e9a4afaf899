//! Dilations and neat reducts: embed a cylinder algebra into a higher
//! dimensional one, identify the supported elements, cut the neat reduct
//! back out, and rename dimensions.
//!
//! Run with: cargo run --example neat_reducts

use baode::bao::Transformation;
use baode::dilation::{
    cylinder_dilation, neat_reduct, rename_dilation, stabilizer_supported, supports,
};
use baode::frame::algebras_isomorphic;
use std::collections::BTreeSet;

fn main() -> baode::Result<()> {
    // Cm(^1 2) inside Cm(^2 2).
    let pair = cylinder_dilation(2, 1, 2, false)?;
    let j: BTreeSet<usize> = [0].into_iter().collect();

    // The embedded elements are exactly the {0}-supported ones.
    let supported: Vec<u32> = pair
        .big
        .elements()
        .filter(|&p| supports(&pair.big, &j, p))
        .collect();
    println!(
        "big algebra has {} elements, {} of them supported on {{0}}",
        pair.big.ba().element_count(),
        supported.len()
    );
    for &p in &supported {
        assert!(stabilizer_supported(&pair.big, &j, p));
        assert!(pair.small.elements().any(|q| pair.embed(q) == p));
    }

    // The neat reduct recovers the small algebra up to isomorphism.
    let nr = neat_reduct(&pair.big, &j)?;
    println!(
        "neat reduct on J = {{0}}: {} atoms",
        nr.algebra.atom_count()
    );
    assert!(algebras_isomorphic(&nr.algebra, &pair.small));
    println!("neat reduct is isomorphic to the small algebra");

    // Renaming swaps the roles of the dimensions.
    let swap = Transformation(vec![1, 0]);
    let renamed = rename_dilation(&pair.big, &swap)?;
    for at in pair.big.atoms() {
        assert_eq!(renamed.apply_cyl(0, at), pair.big.apply_cyl(1, at));
    }
    let j1: BTreeSet<usize> = [1].into_iter().collect();
    let nr1 = neat_reduct(&renamed, &j1)?;
    assert!(algebras_isomorphic(&nr1.algebra, &pair.small));
    println!("after renaming, the reduct on J = {{1}} is the same algebra");
    Ok(())
}
