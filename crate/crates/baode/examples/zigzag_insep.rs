//! The INSEP pullback of two surjective bounded morphisms is a zigzag
//! product: an induced substructure of the product frame whose
//! projections stay surjective. A non-surjective input degenerates.
//!
//! Run with: cargo run --example zigzag_insep

use baode::frame::{insep, is_bounded_morphism, FrameMorphism};
use baode::gen::{blowup_morphism, fold_morphism, random_frame, rng};

fn main() -> baode::Result<()> {
    let mut r = rng(5);
    let target = loop {
        let f = random_frame(&mut r, 2, 2, false)?;
        if f.universe() == 2 {
            break f;
        }
    };
    println!("target frame on {} points", target.universe());

    // Two different surjective bounded morphisms onto the same target.
    let f = fold_morphism(&target, 2)?;
    let h = blowup_morphism(&target, 2)?;
    assert!(f.is_surjective() && is_bounded_morphism(&f));
    assert!(h.is_surjective() && is_bounded_morphism(&h));
    println!(
        "f: {} -> {} (fold), h: {} -> {} (product projection)",
        f.source.universe(),
        target.universe(),
        h.source.universe(),
        target.universe()
    );

    let z = insep(&f, &h)?;
    println!(
        "INSEP has {} pairs, degenerate: {}",
        z.pairs.len(),
        z.degenerate
    );
    assert!(!z.degenerate);
    for &(x, y) in &z.pairs {
        assert_eq!(f.apply(x), h.apply(y));
    }
    println!("every pair agrees under f and h");

    // Degeneracy: a bounded but non-surjective morphism breaks the
    // zigzag postcondition.
    let sub = FrameMorphism::new(
        {
            // Single point mapping into the two-point full-relation frame
            // from the fold source.
            let mut one = f.source.clone();
            one = baode::frame::Frame::new(
                one.sig().clone(),
                1,
                (0..one.sig().dim())
                    .map(|i| {
                        one.t(i)
                            .iter()
                            .filter(|&&(a, b)| a == 0 && b == 0)
                            .copied()
                            .collect()
                    })
                    .collect(),
                (0..one.sig().transformations().len())
                    .map(|_| [(0, 0)].into_iter().collect())
                    .collect(),
                Vec::new(),
            )?;
            one
        },
        target.clone(),
        vec![0],
    )?;
    if target.universe() > 1 && sub.is_surjective() {
        println!("(degeneracy demo skipped: the sample map is surjective)");
    } else if target.universe() > 1 {
        let z2 = insep(&sub, &h)?;
        println!("non-surjective input gives degenerate: {}", z2.degenerate);
    }
    Ok(())
}
