//! The Henkin filter machinery: perfect ultrafilters, witness towers,
//! and the finite interpolation dichotomy. Either the trace of the two
//! towers on the common subalgebra is a proper filter (and extends to a
//! compatible pair of ultrafilters), or an interpolant already exists.
//!
//! Run with: cargo run --example witness_filters

use baode::bao::Transformation;
use baode::boolean::Filter;
use baode::dilation::{
    build_witness_system, cylinder_dilation, is_perfect_ultrafilter, witness_implication,
    WitnessEnumeration,
};

fn main() -> baode::Result<()> {
    let pair = cylinder_dilation(2, 1, 3, false)?;

    // Perfect ultrafilters: principal ultrafilters of the big algebra
    // whose witnesses can always be moved to a spare index.
    let perfect = Filter::from_generator(pair.big.ba(), 1 << 4); // atom (0,0,1)
    let imperfect = Filter::from_generator(pair.big.ba(), 1 << 0); // atom (0,0,0)
    println!(
        "atom (0,0,1) perfect: {}, atom (0,0,0) perfect: {}",
        is_perfect_ultrafilter(&pair, &perfect)?,
        is_perfect_ultrafilter(&pair, &imperfect)?
    );

    // A witness implication: the element forcing the witnessed reading of
    // an existential at the fresh index m = 2.
    let id = Transformation::identity(3);
    let z = witness_implication(&pair, &id, 0, 0b10, 2)?;
    println!("witness implication at m = 2: {z:#010b}");

    // Interpolant branch: the same generator on both sides makes the
    // common subalgebra rich enough to interpolate directly.
    let a = pair.embed(0b10);
    let en = WitnessEnumeration {
        x1: vec![a],
        x2: vec![a],
        triples1: vec![],
        triples2: vec![],
    };
    let ws = build_witness_system(&pair, &en, a, a)?;
    assert!(!ws.h_proper);
    println!(
        "same generators: interpolant {:#010b}, trace improper",
        ws.interpolant.unwrap()
    );

    // Proper branch: disjoint generators leave only {0,1} in common, no
    // interpolant exists, and the towers extend to ultrafilters F1, F2
    // containing a and -c respectively while agreeing on the common part.
    let swap01 = Transformation(vec![1, 0, 2]);
    let c = pair.big.apply_subst_map(&swap01, a)?;
    let en = WitnessEnumeration {
        x1: vec![a],
        x2: vec![c],
        triples1: vec![(id, 0, 0b10)],
        triples2: vec![],
    };
    let ws = build_witness_system(&pair, &en, a, c)?;
    assert!(ws.report.passed(), "{}", ws.report);
    assert!(ws.h_proper && ws.interpolant.is_none());
    let f1 = ws.f1.unwrap();
    let f2 = ws.f2.unwrap();
    assert!(f1.contains(ws.a));
    assert!(f2.contains(pair.big.complement(ws.c)));
    println!("disjoint generators: no interpolant, compatible ultrafilters found");
    println!("  F1 generator {:#010b}, F2 generator {:#010b}", f1.generator(), f2.generator());
    println!("\nfull report:\n{}", ws.report);
    Ok(())
}
