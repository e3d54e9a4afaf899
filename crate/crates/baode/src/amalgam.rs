//! Superamalgamation via the dual zigzag product: dualize the two
//! monomorphisms, form the INSEP pullback frame of the duals, and take its
//! complex algebra as the amalgam.

use crate::bao::FiniteBao;
use crate::boolean::{leq, Elem};
use crate::error::{Error, Result};
use crate::frame::{
    algebras_isomorphic, complex_algebra, dual_morphism, insep, AlgebraMorphism,
};
use crate::report::Report;
use crate::term::{check_equation_fast, CheckResult, Equation};

/// Monomorphisms `f: A -> B` and `h: A -> C` over a common signature,
/// together with the equational schema the three algebras are assumed to
/// satisfy.
#[derive(Debug, Clone)]
pub struct AmalgamationInstance {
    pub base: FiniteBao,
    pub left: FiniteBao,
    pub right: FiniteBao,
    pub f: AlgebraMorphism,
    pub h: AlgebraMorphism,
    pub schema: Vec<Equation>,
}

impl AmalgamationInstance {
    pub fn new(
        f: AlgebraMorphism,
        h: AlgebraMorphism,
        schema: Vec<Equation>,
    ) -> Result<Self> {
        if f.source != h.source {
            return Err(Error::Precondition(
                "f and h must share their source algebra".into(),
            ));
        }
        for (name, m) in [("f", &f), ("h", &h)] {
            if !m.is_homomorphism() {
                return Err(Error::Precondition(format!("{name} is not a homomorphism")));
            }
            if !m.is_injective() {
                return Err(Error::Precondition(format!("{name} is not injective")));
            }
        }
        let inst = AmalgamationInstance {
            base: f.source.clone(),
            left: f.target.clone(),
            right: h.target.clone(),
            f,
            h,
            schema,
        };
        for (name, a) in [
            ("base", &inst.base),
            ("left", &inst.left),
            ("right", &inst.right),
        ] {
            for eq in &inst.schema {
                if !check_equation_fast(a, eq)?.is_valid() {
                    return Err(Error::Precondition(format!(
                        "{name} algebra violates schema equation {eq}"
                    )));
                }
            }
        }
        Ok(inst)
    }

    /// Constructor that skips precondition checks, for enumeration
    /// loops whose inputs are homomorphic, injective, and schema-valid
    /// by construction.
    pub fn trusted(f: AlgebraMorphism, h: AlgebraMorphism, schema: Vec<Equation>) -> Self {
        AmalgamationInstance {
            base: f.source.clone(),
            left: f.target.clone(),
            right: h.target.clone(),
            f,
            h,
            schema,
        }
    }
}

/// The amalgam `D` with its two embeddings and a construction report.
#[derive(Debug, Clone)]
pub struct SupapCertificate {
    pub amalgam: FiniteBao,
    pub g: AlgebraMorphism,
    pub k: AlgebraMorphism,
    pub report: Report,
}

/// Build the superamalgam. `D` is the complex algebra of the INSEP frame
/// of the dual morphisms; `g` sends `b` to the set of pairs whose first
/// coordinate is an atom below `b`, `k` symmetrically.
pub fn superamalgamate(inst: &AmalgamationInstance) -> Result<SupapCertificate> {
    let fd = dual_morphism(&inst.f)?;
    let hd = dual_morphism(&inst.h)?;
    let z = insep(&fd, &hd)?;
    let amalgam = complex_algebra(&z.frame)?;

    let mut g_images = vec![0 as Elem; inst.left.atom_count()];
    let mut k_images = vec![0 as Elem; inst.right.atom_count()];
    for (p, &(x, y)) in z.pairs.iter().enumerate() {
        g_images[x] |= 1 << p;
        k_images[y] |= 1 << p;
    }
    let g = AlgebraMorphism::from_atom_images(inst.left.clone(), amalgam.clone(), &g_images)?;
    let k = AlgebraMorphism::from_atom_images(inst.right.clone(), amalgam.clone(), &k_images)?;

    let mut report = Report::default();
    report.push(
        "insep-zigzag",
        !z.degenerate,
        z.degenerate.then(|| "projections not surjective".into()),
    );
    report.push("g-homomorphism", g.is_homomorphism(), None);
    report.push("k-homomorphism", k.is_homomorphism(), None);
    report.push("g-injective", g.is_injective(), None);
    report.push("k-injective", k.is_injective(), None);
    let square = inst
        .base
        .elements()
        .find(|&a| g.apply(inst.f.apply(a)) != k.apply(inst.h.apply(a)));
    report.push(
        "commuting-square",
        square.is_none(),
        square.map(|a| format!("g(f({a})) != k(h({a}))")),
    );
    for eq in &inst.schema {
        match check_equation_fast(&amalgam, eq)? {
            CheckResult::Valid => report.push(&format!("schema [{eq}]"), true, None),
            CheckResult::Counterexample(env) => {
                report.push(&format!("schema [{eq}]"), false, Some(format!("{env:?}")))
            }
        }
    }
    let cert = SupapCertificate {
        amalgam,
        g,
        k,
        report,
    };
    let supap = supap_condition(inst, &cert);
    let mut cert = cert;
    cert.report.push(
        "supap-order-condition",
        supap.is_none(),
        supap.map(|(b, c)| format!("no interpolant for g({b}) <= k({c})")),
    );
    Ok(cert)
}

/// First pair `(b, c)` with `g(b) <= k(c)` but no interpolant, if any.
fn supap_condition(inst: &AmalgamationInstance, cert: &SupapCertificate) -> Option<(Elem, Elem)> {
    for b in inst.left.elements() {
        for c in inst.right.elements() {
            if leq(cert.g.apply(b), cert.k.apply(c))
                && find_interpolant(inst, b, c).is_none()
            {
                return Some((b, c));
            }
        }
    }
    None
}

/// The least `a` in the base with `b <= f(a)` and `h(a) <= c`. The meet of
/// two interpolants is again one, so the least exists whenever any does.
pub fn find_interpolant(inst: &AmalgamationInstance, b: Elem, c: Elem) -> Option<Elem> {
    let mut best: Option<Elem> = None;
    for a in inst.base.elements() {
        if leq(b, inst.f.apply(a)) && leq(inst.h.apply(a), c) {
            best = Some(match best {
                None => a,
                Some(prev) => prev & a,
            });
        }
    }
    best
}

/// Exhaustive check of a certificate against its instance: the commuting
/// square elementwise, then the order-interpolation condition over every
/// pair `(b, c)`.
pub fn verify_supap(inst: &AmalgamationInstance, cert: &SupapCertificate) -> Report {
    let mut report = Report::default();
    let square = inst
        .base
        .elements()
        .find(|&a| cert.g.apply(inst.f.apply(a)) != cert.k.apply(inst.h.apply(a)));
    report.push(
        "commuting-square",
        square.is_none(),
        square.map(|a| format!("g(f({a})) != k(h({a}))")),
    );
    report.push("g-homomorphism", cert.g.is_homomorphism(), None);
    report.push("k-homomorphism", cert.k.is_homomorphism(), None);
    report.push("g-injective", cert.g.is_injective(), None);
    report.push("k-injective", cert.k.is_injective(), None);
    let mut failures = Vec::new();
    for b in inst.left.elements() {
        for c in inst.right.elements() {
            if leq(cert.g.apply(b), cert.k.apply(c))
                && find_interpolant(inst, b, c).is_none()
            {
                failures.push((b, c));
            }
        }
    }
    if failures.is_empty() {
        report.push("supap-order-condition", true, None);
    } else {
        for (b, c) in &failures {
            report.push(
                "supap-order-condition",
                false,
                Some(format!("pair b={b}, c={c} has no interpolant")),
            );
        }
    }
    report
}

/// Strong-amalgamation observation: is `g[B] meet k[C]` inside `g[f[A]]`?
pub fn strong_amalgamation_holds(inst: &AmalgamationInstance, cert: &SupapCertificate) -> bool {
    let f_image: Vec<Elem> = inst
        .base
        .elements()
        .map(|a| cert.g.apply(inst.f.apply(a)))
        .collect();
    for b in inst.left.elements() {
        let gb = cert.g.apply(b);
        for c in inst.right.elements() {
            if gb == cert.k.apply(c) && !f_image.contains(&gb) {
                return false;
            }
        }
    }
    true
}

/// Convenience: does the amalgam land back on the base up to isomorphism?
pub fn amalgam_isomorphic_to(cert: &SupapCertificate, a: &FiniteBao) -> bool {
    algebras_isomorphic(&cert.amalgam, a)
}
