//! Equational schema checking: the default axiom schema, brute-force
//! validity over a cylinder set algebra, the positivity classifier, and
//! the S-expression term syntax.
//!
//! Run with: cargo run --example schema_checking

use baode::dilation::cylinder_algebra;
use baode::io::parse_equation;
use baode::schema::{check_schema, classify_against_annotations, default_schema};
use baode::term::check_equation;

fn main() -> baode::Result<()> {
    let a = cylinder_algebra(2, 2, true)?;
    let schema = default_schema(a.sig());
    println!("checking {} axioms on Cm(^2 2):", schema.len());
    for (name, result) in check_schema(&a, &schema)? {
        println!("  {name}: {}", if result.is_valid() { "valid" } else { "refuted" });
    }

    // Positivity: syntactic classification agrees with the annotations.
    println!("\npositivity classification:");
    for (name, annotated, computed) in classify_against_annotations(&schema) {
        assert_eq!(annotated, computed, "{name}");
        println!("  {name}: {}", if computed { "positive" } else { "not positive" });
    }

    // Ad hoc equations in the S-expression syntax.
    for src in [
        "(c 0 (c 1 x)) = (c 1 (c 0 x))",
        "(s (1 0) (s (1 0) x)) = x",
        "(c 0 x) = x",
    ] {
        let eq = parse_equation(src)?;
        let result = check_equation(&a, &eq)?;
        println!(
            "\n{src}\n  {}",
            match result {
                baode::term::CheckResult::Valid => "valid".to_string(),
                baode::term::CheckResult::Counterexample(env) =>
                    format!("refuted, least counterexample {env:?}"),
            }
        );
    }
    Ok(())
}
