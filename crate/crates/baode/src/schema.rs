//! The configurable axiom-schema library. The default set contains exactly
//! the equations the engine's constructions rely on, each carrying a
//! hand-written positivity annotation and a scope: `Plain` axioms are
//! checkable on any single algebra, `Dilation` axioms relate the base
//! dimensions of a dilation pair to its spare dimensions and are checked by
//! the dilation machinery instead.

use crate::bao::{FiniteBao, Signature, Transformation};
use crate::term::{check_equation, is_positive_equation, CheckResult, Equation, Term};
use crate::error::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Plain,
    Dilation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaAxiom {
    pub name: String,
    pub equation: Equation,
    /// Hand classification; `is_positive_equation` must agree.
    pub positive: bool,
    pub scope: Scope,
}

fn axiom(name: String, lhs: Term, rhs: Term, positive: bool, scope: Scope) -> SchemaAxiom {
    SchemaAxiom {
        name,
        equation: Equation::new(lhs, rhs),
        positive,
        scope,
    }
}

/// The default schema, instantiated with concrete indices for `sig`.
pub fn default_schema(sig: &Signature) -> Vec<SchemaAxiom> {
    let mut out = Vec::new();
    let x = || Term::var("x");
    let y = || Term::var("y");
    let dim = sig.dim();

    for i in 0..dim {
        out.push(axiom(
            format!("normality-c{i}"),
            Term::cyl(i, Term::Zero),
            Term::Zero,
            true,
            Scope::Plain,
        ));
        out.push(axiom(
            format!("additivity-c{i}"),
            Term::cyl(i, Term::join(x(), y())),
            Term::join(Term::cyl(i, x()), Term::cyl(i, y())),
            true,
            Scope::Plain,
        ));
        out.push(axiom(
            format!("cyl-meet-c{i}"),
            Term::cyl(i, Term::meet(Term::cyl(i, x()), y())),
            Term::meet(Term::cyl(i, x()), Term::cyl(i, y())),
            true,
            Scope::Plain,
        ));
        out.push(axiom(
            format!("cyl-compl-fix-c{i}"),
            Term::cyl(i, Term::compl(Term::cyl(i, x()))),
            Term::compl(Term::cyl(i, x())),
            false,
            Scope::Plain,
        ));
    }

    out.push(axiom(
        "subst-identity".into(),
        Term::subst(Transformation::identity(dim), x()),
        x(),
        true,
        Scope::Plain,
    ));
    for (si, s) in sig.transformations().iter().enumerate() {
        out.push(axiom(
            format!("subst-join-s{si}"),
            Term::subst(s.clone(), Term::join(x(), y())),
            Term::join(
                Term::subst(s.clone(), x()),
                Term::subst(s.clone(), y()),
            ),
            true,
            Scope::Plain,
        ));
        out.push(axiom(
            format!("subst-compl-s{si}"),
            Term::subst(s.clone(), Term::compl(x())),
            Term::compl(Term::subst(s.clone(), x())),
            false,
            Scope::Plain,
        ));
        for (ti, t) in sig.transformations().iter().enumerate() {
            out.push(axiom(
                format!("subst-compose-s{si}-s{ti}"),
                Term::subst(s.clone(), Term::subst(t.clone(), x())),
                Term::subst(s.compose(t), x()),
                true,
                Scope::Plain,
            ));
        }
    }

    if sig.with_diagonals() {
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                let tau = Transformation::replace(dim, i, j);
                if sig.index_of(&tau).is_some() {
                    out.push(axiom(
                        format!("diag-subst-{i}-{j}"),
                        Term::subst(tau, x()),
                        Term::cyl(i, Term::meet(Term::Diag(i, j), x())),
                        true,
                        Scope::Plain,
                    ));
                }
            }
        }
    }

    // The two commutation instances that constrain a dilation's spare
    // dimensions. Representative indices only; the dilation checker
    // re-instantiates them with genuine spare indices.
    if dim >= 2 {
        out.push(axiom(
            "cyl-subst-fresh-intro".into(),
            Term::cyl(0, x()),
            Term::cyl(1, Term::subst(Transformation::replace(dim, 0, 1), x())),
            true,
            Scope::Dilation,
        ));
        out.push(axiom(
            "cyl-subst-fresh-commute".into(),
            Term::cyl(1, Term::subst(Transformation::identity(dim), x())),
            Term::subst(Transformation::identity(dim), Term::cyl(1, x())),
            true,
            Scope::Dilation,
        ));
    }
    out
}

pub fn plain_axioms(schema: &[SchemaAxiom]) -> Vec<&SchemaAxiom> {
    schema.iter().filter(|a| a.scope == Scope::Plain).collect()
}

pub fn positive_plain_axioms(schema: &[SchemaAxiom]) -> Vec<SchemaAxiom> {
    schema
        .iter()
        .filter(|a| a.scope == Scope::Plain && a.positive)
        .cloned()
        .collect()
}

/// Run every plain axiom against the algebra.
pub fn check_schema(a: &FiniteBao, schema: &[SchemaAxiom]) -> Result<Vec<(String, CheckResult)>> {
    let mut out = Vec::new();
    for ax in schema.iter().filter(|a| a.scope == Scope::Plain) {
        out.push((ax.name.clone(), check_equation(a, &ax.equation)?));
    }
    Ok(out)
}

pub fn schema_valid(a: &FiniteBao, schema: &[SchemaAxiom]) -> Result<bool> {
    Ok(check_schema(a, schema)?.iter().all(|(_, r)| r.is_valid()))
}

/// Compare each axiom's hand classification with the syntactic scanner.
pub fn classify_against_annotations(schema: &[SchemaAxiom]) -> Vec<(String, bool, bool)> {
    schema
        .iter()
        .map(|a| (a.name.clone(), a.positive, is_positive_equation(&a.equation)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schema_annotations_match_classifier() {
        let sig = Signature::full(2, true).unwrap();
        for (name, annotated, computed) in classify_against_annotations(&default_schema(&sig)) {
            assert_eq!(annotated, computed, "axiom {name}");
        }
    }

    #[test]
    fn default_schema_has_both_classes() {
        let sig = Signature::full(2, true).unwrap();
        let schema = default_schema(&sig);
        assert!(schema.iter().any(|a| a.positive));
        assert!(schema.iter().any(|a| !a.positive));
        assert!(schema.iter().any(|a| a.scope == Scope::Dilation));
    }
}
