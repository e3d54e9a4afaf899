//! Seeded verification campaigns. Each runs a family of generated or
//! enumerated instances against an independent oracle and returns a
//! report with one entry per observation; the CLI `property` command and
//! the acceptance suite both drive these.

use crate::amalgam::{superamalgamate, verify_supap, AmalgamationInstance};
use crate::bao::{Signature, Transformation};
use crate::dilation::{
    build_witness_system, cylinder_algebra, cylinder_dilation, dilated_cylindrifier,
    dilated_cylindrifier_verified, distributivity_report, rename_dilation, DilationPair,
    WitnessEnumeration,
};
use crate::error::Result;
use crate::frame::{
    atom_structure, complex_algebra, dual_of_boolean_hom, frame_isomorphism, insep,
    is_bounded_morphism,
};
use crate::gen::{
    self, enumerate_schema_frames,
    random_amalgamation_instance, random_boolean_hom, random_bounded_surjection, random_frame,
};
use crate::report::Report;
use crate::schema::{classify_against_annotations, default_schema, positive_plain_axioms};
use crate::term::Equation;
use rand::Rng;

pub struct CampaignOutcome {
    pub report: Report,
    pub cases: usize,
}

/// Names accepted by the CLI `property` command.
pub const CAMPAIGN_NAMES: [&str; 8] = [
    "duality",
    "morphisms",
    "surjections",
    "supap",
    "dilation",
    "distributivity",
    "witness",
    "positivity",
];

pub fn run_campaign(
    name: &str,
    seed: u64,
    max_atoms: Option<usize>,
    verify_all_rho: bool,
) -> Result<Option<CampaignOutcome>> {
    let out = match name {
        "duality" => Some(duality_campaign(seed, 500, max_atoms.unwrap_or(4))?),
        "morphisms" => Some(morphism_campaign(seed, 200, max_atoms.unwrap_or(3))?),
        "surjections" => Some(surjection_campaign(seed, 200)?),
        "supap" => Some(supap_campaign(seed, 100, max_atoms.unwrap_or(3))?),
        "dilation" => Some(dilation_campaign(seed, 100, verify_all_rho)?),
        "distributivity" => Some(distributivity_campaign(max_atoms.unwrap_or(4))?),
        "witness" => Some(witness_campaign()?),
        "positivity" => Some(positivity_campaign()?),
        _ => None,
    };
    Ok(out)
}

/// Criterion family: finite duality. Frames round-trip through their
/// complex algebras, and the complex algebra of the atom structure is
/// the algebra itself.
pub fn duality_campaign(seed: u64, count: usize, max_points: usize) -> Result<CampaignOutcome> {
    let mut r = gen::rng(seed);
    let mut report = Report::default();
    let mut frame_failures = Vec::new();
    let mut algebra_failures = Vec::new();
    for case in 0..count {
        let with_d = case % 3 == 0;
        let f = random_frame(&mut r, 2, max_points, with_d)?;
        let cm = complex_algebra(&f)?;
        if frame_isomorphism(&f, &atom_structure(&cm)).is_none() {
            frame_failures.push(case);
        }
        if complex_algebra(&atom_structure(&cm))? != cm {
            algebra_failures.push(case);
        }
    }
    report.push(
        "frame-round-trip",
        frame_failures.is_empty(),
        witness_list(&frame_failures),
    );
    report.push(
        "algebra-round-trip",
        algebra_failures.is_empty(),
        witness_list(&algebra_failures),
    );
    Ok(CampaignOutcome {
        report,
        cases: count,
    })
}

/// Criterion family: a Boolean homomorphism is an operator homomorphism
/// exactly when its dual point map is a bounded morphism.
pub fn morphism_campaign(seed: u64, count: usize, max_points: usize) -> Result<CampaignOutcome> {
    let mut r = gen::rng(seed);
    let mut report = Report::default();
    let mut failures = Vec::new();
    let mut homs = 0usize;
    let mut non_homs = 0usize;
    for case in 0..count {
        let f = random_frame(&mut r, 2, max_points, false)?;
        let g = random_frame(&mut r, 2, max_points, false)?;
        let a = complex_algebra(&f)?;
        let b = complex_algebra(&g)?;
        let (h, _) = random_boolean_hom(&mut r, &a, &b);
        let dual = dual_of_boolean_hom(&h)?;
        let is_hom = h.is_homomorphism();
        if is_hom {
            homs += 1;
        } else {
            non_homs += 1;
        }
        if is_hom != is_bounded_morphism(&dual) {
            failures.push(case);
        }
    }
    report.push(
        "hom-iff-bounded-dual",
        failures.is_empty(),
        witness_list(&failures),
    );
    report.push(
        "both-outcomes-observed",
        homs > 0 && non_homs > 0,
        Some(format!("{homs} homomorphisms, {non_homs} refuted")),
    );
    Ok(CampaignOutcome {
        report,
        cases: count,
    })
}

/// Criterion family: INSEP of surjective bounded morphisms is a
/// non-degenerate zigzag product, and the projections commute with the
/// given maps.
pub fn surjection_campaign(seed: u64, count: usize) -> Result<CampaignOutcome> {
    let mut r = gen::rng(seed);
    let mut report = Report::default();
    let mut degenerate = Vec::new();
    let mut square = Vec::new();
    let mut precondition = Vec::new();
    for case in 0..count {
        let target = random_frame(&mut r, 2, 2, false)?;
        let f = random_bounded_surjection(&mut r, &target)?;
        let h = random_bounded_surjection(&mut r, &target)?;
        if !(f.is_surjective()
            && h.is_surjective()
            && is_bounded_morphism(&f)
            && is_bounded_morphism(&h))
        {
            precondition.push(case);
            continue;
        }
        let z = insep(&f, &h)?;
        if z.degenerate {
            degenerate.push(case);
        }
        if z.pairs.iter().any(|&(x, y)| f.apply(x) != h.apply(y)) {
            square.push(case);
        }
    }
    report.push(
        "generated-preconditions-hold",
        precondition.is_empty(),
        witness_list(&precondition),
    );
    report.push(
        "insep-zigzag-nondegenerate",
        degenerate.is_empty(),
        witness_list(&degenerate),
    );
    report.push(
        "projections-commute",
        square.is_empty(),
        witness_list(&square),
    );
    Ok(CampaignOutcome {
        report,
        cases: count,
    })
}

/// Criterion family: superamalgamation. The exhaustive corpus over the
/// positive schema plus seeded random instances all certify SUPAP and
/// carry the schema to the amalgam.
pub fn supap_campaign(
    seed: u64,
    random_count: usize,
    max_points: usize,
) -> Result<CampaignOutcome> {
    let mut report = Report::default();
    let mut cases = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let mut run = |tag: String, inst: &AmalgamationInstance| -> Result<()> {
        cases += 1;
        let cert = superamalgamate(inst)?;
        if !cert.report.passed() {
            failures.push(format!("{tag}: {}", summarize(&cert.report)));
            return Ok(());
        }
        let check = verify_supap(inst, &cert);
        if !check.passed() {
            failures.push(format!("{tag}: {}", summarize(&check)));
        }
        Ok(())
    };
    let mut exhaustive_cases = 0usize;
    for dim in 1..=2 {
        let mut i = 0usize;
        exhaustive_cases += gen::for_each_amalgamation_instance(dim, max_points, |inst| {
            let tag = format!("exhaustive-d{dim}-{i}");
            i += 1;
            run(tag, inst)
        })?;
    }
    report.push(
        "exhaustive-corpus-nonempty",
        exhaustive_cases > 0,
        Some(format!("{exhaustive_cases} instances")),
    );
    let sig = Signature::full(2, false)?;
    let schema: Vec<Equation> = positive_plain_axioms(&default_schema(&sig))
        .into_iter()
        .map(|a| a.equation)
        .collect();
    let corpus = enumerate_schema_frames(2, 2, &schema)?;
    let mut r = gen::rng(seed);
    for i in 0..random_count {
        let inst = random_amalgamation_instance(&mut r, &corpus, &schema)?;
        run(format!("random-{i}"), &inst)?;
    }
    report.push("supap-certified", failures.is_empty(), {
        if failures.is_empty() {
            None
        } else {
            Some(failures.join("; "))
        }
    });
    Ok(CampaignOutcome { report, cases })
}

/// Criterion family: the dilated cylindrifier is well defined. Every
/// admissible permutation and every presentation of the argument agree
/// with the big algebra's own cylindrifier.
pub fn dilation_campaign(
    seed: u64,
    min_pairs: usize,
    verify_all_rho: bool,
) -> Result<CampaignOutcome> {
    let mut r = gen::rng(seed);
    let mut pairs: Vec<(String, DilationPair)> = Vec::new();
    for (w, alpha, beta) in [(2, 1, 2), (2, 1, 3), (2, 2, 3), (3, 1, 2)] {
        let base = cylinder_dilation(w, alpha, beta, false)?;
        let monoid = base.big.sig().transformations().to_vec();
        // The full monoid, the identity alone, and random admissible sets.
        let mut variants: Vec<Vec<Transformation>> =
            vec![monoid.clone(), vec![Transformation::identity(beta)]];
        for _ in 0..24 {
            let mut adm = vec![Transformation::identity(beta)];
            for tau in &monoid {
                if r.gen_bool(0.3) {
                    adm.push(tau.clone());
                }
            }
            variants.push(adm);
        }
        for (v, adm) in variants.into_iter().enumerate() {
            let mut pair = base.clone();
            pair.adm = adm;
            pairs.push((format!("w{w}a{alpha}b{beta}-adm{v}"), pair));
        }
        // Conjugate the big algebra by a permutation of the spare indices;
        // the same embedding still neatly embeds the small algebra.
        if beta - alpha >= 2 {
            let mut mu: Vec<usize> = (0..beta).collect();
            mu.swap(alpha, alpha + 1);
            let renamed = rename_dilation(&base.big, &Transformation(mu))?;
            let pair = DilationPair::new(
                base.small.clone(),
                renamed,
                base.embedding.clone(),
                base.adm.clone(),
            )?;
            pairs.push((format!("w{w}a{alpha}b{beta}-renamed"), pair));
        }
    }
    let mut report = Report::default();
    report.push(
        "pair-corpus-size",
        pairs.len() >= min_pairs,
        Some(format!("{} pairs", pairs.len())),
    );
    let mut failures: Vec<String> = Vec::new();
    let mut checks_total = 0usize;
    for (tag, pair) in &pairs {
        let monoid = pair.big.sig().transformations().to_vec();
        for _ in 0..4 {
            let k = r.gen_range(0..pair.beta());
            let sigma = &monoid[r.gen_range(0..monoid.len())];
            let p = r.gen_range(0..pair.small.ba().element_count()) as u32;
            let sigma_idx = pair.big.sig().index_of(sigma).unwrap();
            let oracle = pair
                .big
                .apply_cyl(k, pair.big.apply_subst(sigma_idx, pair.embed(p)));
            let got = if verify_all_rho {
                match dilated_cylindrifier_verified(pair, k, sigma, p) {
                    Ok((v, checks)) => {
                        checks_total += checks;
                        Ok(v)
                    }
                    Err(e) => Err(e),
                }
            } else {
                dilated_cylindrifier(pair, k, sigma, p)
            };
            match got {
                Ok(v) if v == oracle => {}
                Ok(v) => failures.push(format!("{tag}: c_{k} s_{sigma:?} {p} = {v} != {oracle}")),
                Err(crate::error::Error::DimensionBudget(_)) => {
                    // A restricted adm set may leave no admissible rho;
                    // that is a legitimate outcome, not a soundness bug.
                }
                Err(e) => failures.push(format!("{tag}: {e}")),
            }
        }
    }
    report.push("dilated-cylindrifier-sound", failures.is_empty(), {
        if failures.is_empty() {
            if verify_all_rho {
                Some(format!("{checks_total} rho/presentation checks"))
            } else {
                None
            }
        } else {
            Some(failures.join("; "))
        }
    });
    Ok(CampaignOutcome {
        report,
        cases: pairs.len(),
    })
}

/// Criterion family: the distributivity toolkit. Cylindrifiers are
/// additive, the dual law holds off the dimension set, and the
/// unconditional dual law is genuinely refutable.
pub fn distributivity_campaign(max_points: usize) -> Result<CampaignOutcome> {
    let mut report = Report::default();
    let mut cases = 0usize;
    let mut algebras = vec![
        cylinder_algebra(2, 1, false)?,
        cylinder_algebra(2, 2, false)?,
        cylinder_algebra(2, 2, true)?,
        cylinder_algebra(3, 1, false)?,
    ];
    // The toolkit leans on the whole plain schema, not just its positive
    // fragment: complement-closure comes from the non-positive axiom.
    let sig = Signature::full(2, false)?;
    let schema: Vec<Equation> = crate::schema::plain_axioms(&default_schema(&sig))
        .into_iter()
        .map(|a| a.equation.clone())
        .collect();
    for f in enumerate_schema_frames(2, max_points.min(3), &schema)? {
        algebras.push(complex_algebra(&f)?);
    }
    let mut failures: Vec<String> = Vec::new();
    for (i, a) in algebras.iter().enumerate() {
        cases += 1;
        let rep = distributivity_report(a);
        if !rep.passed() {
            failures.push(format!("algebra {i}: {}", summarize(&rep)));
        }
    }
    report.push("toolkit-laws-hold", failures.is_empty(), {
        if failures.is_empty() {
            None
        } else {
            Some(failures.join("; "))
        }
    });
    // The restriction in the dual law is necessary: the one-dimensional
    // cylinder algebra on two points refutes the unconditional version.
    let a = cylinder_algebra(2, 1, false)?;
    let refuted = a.dual_cyl(0, 0b11) != a.dual_cyl(0, 0b01) | a.dual_cyl(0, 0b10);
    report.push(
        "unconditional-dual-law-refuted",
        refuted,
        Some("c^d_0(u+v) != c^d_0 u + c^d_0 v at u=atom0, v=atom1".into()),
    );
    Ok(CampaignOutcome { report, cases })
}

/// Criterion family: witness systems. Curated interpolation instances
/// across several dilations; the filter claims must never fail and the
/// dichotomy (proper trace filter vs. interpolant) must be exact.
pub fn witness_campaign() -> Result<CampaignOutcome> {
    let mut report = Report::default();
    let mut cases = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let mut proper = 0usize;
    let mut improper = 0usize;
    let mut run = |tag: &str,
                   pair: &DilationPair,
                   en: &WitnessEnumeration,
                   a: u32,
                   c: u32|
     -> Result<()> {
        cases += 1;
        let ws = build_witness_system(pair, en, a, c)?;
        if !ws.report.passed() {
            failures.push(format!("{tag}: {}", summarize(&ws.report)));
        }
        if ws.h_proper != ws.interpolant.is_none() {
            failures.push(format!("{tag}: dichotomy violated"));
        }
        if ws.h_proper {
            proper += 1;
            let f1 = ws.f1.as_ref().expect("proper branch yields F1");
            let f2 = ws.f2.as_ref().expect("proper branch yields F2");
            if !f1.contains(ws.a) || !f2.contains(pair.big.complement(ws.c)) {
                failures.push(format!("{tag}: ultrafilters miss their endpoints"));
            }
        } else {
            improper += 1;
        }
        Ok(())
    };
    // The third combo has a single spare index, already consumed by the
    // moved generator, so only the same-generator instances run there.
    for (w, alpha, beta, disjoint) in
        [(2, 1, 3, true), (2, 2, 4, true), (3, 1, 2, false)]
    {
        let pair = cylinder_dilation(w, alpha, beta, false)?;
        let spare_swap = {
            let mut v: Vec<usize> = (0..beta).collect();
            v.swap(0, alpha);
            Transformation(v)
        };
        // A handful of small elements, embedded, and their images under a
        // substitution moving a small coordinate to a spare one.
        let small_elems: Vec<u32> = pair
            .small
            .elements()
            .filter(|&p| p != 0 && p != pair.small.top())
            .take(6)
            .collect();
        for (i, &x) in small_elems.iter().enumerate() {
            let a = pair.embed(x);
            // Same generator on both sides: the trace decides directly.
            let en = WitnessEnumeration {
                x1: vec![a],
                x2: vec![a],
                triples1: vec![],
                triples2: vec![],
            };
            run(&format!("w{w}a{alpha}b{beta}-same-{i}"), &pair, &en, a, a)?;
            if disjoint {
                // Disjoint generators: the common subalgebra is {0, 1},
                // there is no interpolant, and one witness triple is
                // accumulated on the left tower.
                let c = pair.big.apply_subst_map(&spare_swap, a)?;
                let en = WitnessEnumeration {
                    x1: vec![a],
                    x2: vec![c],
                    triples1: vec![(Transformation::identity(beta), 0, x)],
                    triples2: vec![],
                };
                run(&format!("w{w}a{alpha}b{beta}-disjoint-{i}"), &pair, &en, a, c)?;
            }
        }
    }
    report.push("claims-never-fail", failures.is_empty(), {
        if failures.is_empty() {
            None
        } else {
            Some(failures.join("; "))
        }
    });
    report.push(
        "both-branches-exercised",
        proper > 0 && improper > 0,
        Some(format!("{proper} proper, {improper} interpolant")),
    );
    Ok(CampaignOutcome { report, cases })
}

/// Criterion family: the positivity classifier agrees exactly with the
/// hand annotation of the default schema, in both signatures.
pub fn positivity_campaign() -> Result<CampaignOutcome> {
    let mut report = Report::default();
    let mut cases = 0usize;
    for with_d in [false, true] {
        let sig = Signature::full(2, with_d)?;
        let schema = default_schema(&sig);
        for (name, annotated, computed) in classify_against_annotations(&schema) {
            cases += 1;
            report.push(
                &format!("classify-{}-{name}", if with_d { "cad" } else { "pa" }),
                annotated == computed,
                Some(format!("annotated {annotated}, computed {computed}")),
            );
        }
    }
    Ok(CampaignOutcome { report, cases })
}

fn witness_list(cases: &[usize]) -> Option<String> {
    if cases.is_empty() {
        None
    } else {
        Some(format!("failing cases: {cases:?}"))
    }
}

fn summarize(report: &Report) -> String {
    report
        .failures()
        .map(|e| e.name.clone())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaigns_pass() {
        let out = duality_campaign(1, 30, 3).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        let out = morphism_campaign(1, 30, 3).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        let out = surjection_campaign(1, 30).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        let out = positivity_campaign().unwrap();
        assert!(out.report.passed(), "{}", out.report);
    }

    #[test]
    fn supap_campaign_small() {
        let out = supap_campaign(1, 5, 2).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        assert!(out.cases > 5);
    }

    #[test]
    fn dilation_campaign_small() {
        let out = dilation_campaign(1, 10, true).unwrap();
        assert!(out.report.passed(), "{}", out.report);
        let fast = dilation_campaign(1, 10, false).unwrap();
        assert!(fast.report.passed(), "{}", fast.report);
    }

    #[test]
    fn witness_and_distributivity_campaigns() {
        let out = witness_campaign().unwrap();
        assert!(out.report.passed(), "{}", out.report);
        assert!(out.cases >= 10);
        let out = distributivity_campaign(3).unwrap();
        assert!(out.report.passed(), "{}", out.report);
    }
}
