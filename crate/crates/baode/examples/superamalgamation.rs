//! Superamalgamation through duality: dualize the two embeddings, take
//! the INSEP zigzag product of the point maps, and lift its complex
//! algebra back. The resulting square satisfies the SUPAP order
//! condition, and interpolants have a least representative.
//!
//! Run with: cargo run --example superamalgamation

use baode::amalgam::{
    find_interpolant, superamalgamate, verify_supap, AmalgamationInstance,
};
use baode::bao::Signature;
use baode::boolean::leq;
use baode::frame::inverse_image_morphism;
use baode::gen::{blowup_morphism, enumerate_schema_frames, fold_morphism};
use baode::io::{save_document, Document, InstanceDoc};
use baode::schema::{default_schema, positive_plain_axioms};
use baode::term::Equation;

fn main() -> baode::Result<()> {
    let sig = Signature::full(2, false)?;
    let schema: Vec<Equation> = positive_plain_axioms(&default_schema(&sig))
        .into_iter()
        .map(|a| a.equation)
        .collect();

    // Base algebra from a schema-valid frame; both embeddings arise as
    // inverse images of bounded surjections onto that frame.
    let corpus = enumerate_schema_frames(2, 2, &schema)?;
    let base_frame = corpus
        .iter()
        .find(|f| f.universe() == 2)
        .unwrap_or(&corpus[0])
        .clone();
    let f = inverse_image_morphism(&fold_morphism(&base_frame, 2)?)?;
    let h = inverse_image_morphism(&blowup_morphism(&base_frame, 2)?)?;
    let inst = AmalgamationInstance::new(f, h, schema)?;
    println!(
        "base {} atoms, left {} atoms, right {} atoms",
        inst.base.atom_count(),
        inst.left.atom_count(),
        inst.right.atom_count()
    );

    let cert = superamalgamate(&inst)?;
    println!("{}", cert.report);
    assert!(cert.report.passed());
    println!(
        "amalgam has {} atoms; g and k are injective homomorphisms",
        cert.amalgam.atom_count()
    );

    let recheck = verify_supap(&inst, &cert);
    assert!(recheck.passed(), "{recheck}");
    println!("independent SUPAP verification passed");

    // The interpolant witness: whenever g(b) <= k(c), some base element
    // a has b <= f(a) and h(a) <= c, and the meet of all such witnesses
    // is itself one.
    let mut shown = 0;
    for b in inst.left.elements() {
        for c in inst.right.elements() {
            if leq(cert.g.apply(b), cert.k.apply(c)) {
                let a = find_interpolant(&inst, b, c).expect("order condition");
                if shown < 3 && b != 0 && c != inst.right.top() {
                    println!("  g({b:#x}) <= k({c:#x}): least interpolant {a:#x}");
                    shown += 1;
                }
            }
        }
    }

    save_document(
        "instance.json".as_ref(),
        &Document::Instance(InstanceDoc::of(&inst)),
    )?;
    println!("wrote instance.json (feed it to `baode amalgamate`)");
    Ok(())
}
