//! Finite duality in both directions: a frame, its complex algebra, the
//! atom structure of that algebra, and back. Writes the artifacts as
//! JSON documents next to the current directory.
//!
//! Run with: cargo run --example duality_round_trip

use baode::bao::Signature;
use baode::frame::{atom_structure, complex_algebra, frame_isomorphism, Frame, Rel};
use baode::io::{save_document, BaoDoc, Document, FrameDoc};
use std::collections::BTreeSet;

fn main() -> baode::Result<()> {
    // Two points over the full monoid of dimension 2, with diagonals.
    // T_0 relates everything, T_1 is the identity relation, and the
    // substitution action is trivial.
    let sig = Signature::full(2, true)?;
    let t: Vec<Rel> = vec![
        [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect(),
        [(0, 0), (1, 1)].into_iter().collect(),
    ];
    let action: Vec<Vec<usize>> = sig
        .transformations()
        .iter()
        .map(|_| vec![0, 1])
        .collect();
    let d: Vec<BTreeSet<usize>> = vec![
        [0, 1].into_iter().collect(),
        [0].into_iter().collect(),
        [0].into_iter().collect(),
        [0, 1].into_iter().collect(),
    ];
    let frame = Frame::from_action(sig, 2, t, &action, d)?;

    let algebra = complex_algebra(&frame)?;
    println!(
        "complex algebra: {} atoms, {} elements",
        algebra.atom_count(),
        algebra.ba().element_count()
    );
    for i in 0..algebra.dim() {
        for at in algebra.atoms() {
            println!("  c_{i}({at:#04b}) = {:#04b}", algebra.apply_cyl(i, at));
        }
    }

    let dual = atom_structure(&algebra);
    let iso = frame_isomorphism(&frame, &dual).expect("duality round trip");
    println!("atom structure is isomorphic to the frame via {iso:?}");

    // And algebra-side: the complex algebra of the atom structure is the
    // algebra itself, on the nose.
    assert_eq!(complex_algebra(&dual)?, algebra);
    println!("complex algebra of the atom structure equals the algebra");

    save_document("frame.json".as_ref(), &Document::Frame(FrameDoc::of(&frame)))?;
    save_document("bao.json".as_ref(), &Document::Bao(BaoDoc::of(&algebra)))?;
    println!("wrote frame.json and bao.json");
    Ok(())
}
