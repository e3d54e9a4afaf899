//! Abstract syntax for the operator language and brute-force equation
//! checking over a finite algebra.

use crate::bao::{FiniteBao, Transformation};
use crate::boolean::Elem;
use crate::error::{Error, Result};
use crate::limits;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Compl(Box<Term>),
    Cyl(usize, Box<Term>),
    Subst(Transformation, Box<Term>),
    Diag(usize, usize),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn compl(a: Term) -> Term {
        Term::Compl(Box::new(a))
    }

    pub fn cyl(i: usize, a: Term) -> Term {
        Term::Cyl(i, Box::new(a))
    }

    pub fn subst(tau: Transformation, a: Term) -> Term {
        Term::Subst(tau, Box::new(a))
    }

    pub fn free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One | Term::Diag(_, _) => {}
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Term::Compl(a) | Term::Cyl(_, a) | Term::Subst(_, a) => a.free_vars(out),
        }
    }

    pub fn has_complement(&self) -> bool {
        match self {
            Term::Compl(_) => true,
            Term::Var(_) | Term::Zero | Term::One | Term::Diag(_, _) => false,
            Term::Join(a, b) | Term::Meet(a, b) => a.has_complement() || b.has_complement(),
            Term::Cyl(_, a) | Term::Subst(_, a) => a.has_complement(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Join(a, b) => write!(f, "(+ {a} {b})"),
            Term::Meet(a, b) => write!(f, "(* {a} {b})"),
            Term::Compl(a) => write!(f, "(- {a})"),
            Term::Cyl(i, a) => write!(f, "(c {i} {a})"),
            Term::Subst(tau, a) => {
                write!(f, "(s (")?;
                for (k, v) in tau.0.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ") {a})")
            }
            Term::Diag(i, j) => write!(f, "(d {i} {j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut vars = BTreeSet::new();
        self.lhs.free_vars(&mut vars);
        self.rhs.free_vars(&mut vars);
        vars.into_iter().collect()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

pub type Env = BTreeMap<String, Elem>;

/// Compositional evaluation against the algebra's tables.
pub fn eval_term(a: &FiniteBao, t: &Term, env: &Env) -> Result<Elem> {
    match t {
        Term::Var(v) => env
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnboundVariable(v.clone())),
        Term::Zero => Ok(0),
        Term::One => Ok(a.top()),
        Term::Join(x, y) => Ok(eval_term(a, x, env)? | eval_term(a, y, env)?),
        Term::Meet(x, y) => Ok(eval_term(a, x, env)? & eval_term(a, y, env)?),
        Term::Compl(x) => Ok(a.complement(eval_term(a, x, env)?)),
        Term::Cyl(i, x) => {
            if *i >= a.dim() {
                return Err(Error::IndexOutOfRange {
                    index: *i,
                    dim: a.dim(),
                });
            }
            Ok(a.apply_cyl(*i, eval_term(a, x, env)?))
        }
        Term::Subst(tau, x) => {
            let v = eval_term(a, x, env)?;
            a.apply_subst_map(tau, v)
        }
        Term::Diag(i, j) => a.diag(*i, *j),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Valid,
    /// The lexicographically least falsifying environment.
    Counterexample(Env),
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckResult::Valid)
    }
}

/// Check validity by brute force over every assignment of elements to
/// variables, in lexicographic element order over the sorted variable list.
pub fn check_equation(a: &FiniteBao, eq: &Equation) -> Result<CheckResult> {
    let vars = eq.variables();
    let count = a.ba().element_count();
    let needed = count
        .checked_pow(vars.len() as u32)
        .ok_or(Error::Budget {
            what: "equation check assignments",
            needed: u64::MAX,
            cap: limits::max_universe(),
        })?;
    limits::check_budget("equation check assignments", needed)?;

    let mut assignment = vec![0 as Elem; vars.len()];
    let mut env: Env = BTreeMap::new();
    loop {
        env.clear();
        for (v, &val) in vars.iter().zip(assignment.iter()) {
            env.insert(v.clone(), val);
        }
        if eval_term(a, &eq.lhs, &env)? != eval_term(a, &eq.rhs, &env)? {
            return Ok(CheckResult::Counterexample(env));
        }
        // Advance the last variable fastest: lexicographic order over the
        // tuple (vars[0], vars[1], ...).
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(CheckResult::Valid);
            }
            k -= 1;
            assignment[k] += 1;
            if u64::from(assignment[k]) < count {
                break;
            }
            assignment[k] = 0;
        }
    }
}

/// True iff neither side mentions complement (0 and 1 are permitted).
pub fn is_positive_equation(eq: &Equation) -> bool {
    !eq.lhs.has_complement() && !eq.rhs.has_complement()
}

fn var_occurrences(t: &Term, out: &mut BTreeMap<String, usize>) {
    match t {
        Term::Var(v) => *out.entry(v.clone()).or_insert(0) += 1,
        Term::Zero | Term::One | Term::Diag(_, _) => {}
        Term::Join(a, b) | Term::Meet(a, b) => {
            var_occurrences(a, out);
            var_occurrences(b, out);
        }
        Term::Compl(a) | Term::Cyl(_, a) | Term::Subst(_, a) => var_occurrences(a, out),
    }
}

fn occurrence_linear(t: &Term) -> bool {
    let mut counts = BTreeMap::new();
    var_occurrences(t, &mut counts);
    counts.values().all(|&c| c <= 1)
}

/// Atom-level shortcut for positive equations in which each variable
/// occurs at most once per side. Every operator of a `FiniteBao` is
/// built additively from atom tables, so such a side preserves binary
/// joins in each variable separately; agreement on assignments drawn
/// from zero and the atoms then extends to all elements. Returns `None`
/// when the shortcut does not apply. A returned counterexample is
/// atomic, not the lexicographically least over all elements.
pub fn check_equation_on_atoms(a: &FiniteBao, eq: &Equation) -> Result<Option<CheckResult>> {
    if !is_positive_equation(eq) || !occurrence_linear(&eq.lhs) || !occurrence_linear(&eq.rhs) {
        return Ok(None);
    }
    let vars = eq.variables();
    let values: Vec<Elem> = std::iter::once(0).chain(a.ba().atoms()).collect();
    let mut idx = vec![0usize; vars.len()];
    let mut env: Env = vars.iter().map(|v| (v.clone(), 0)).collect();
    loop {
        for (v, &i) in vars.iter().zip(idx.iter()) {
            env.insert(v.clone(), values[i]);
        }
        if eval_term(a, &eq.lhs, &env)? != eval_term(a, &eq.rhs, &env)? {
            return Ok(Some(CheckResult::Counterexample(env)));
        }
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(Some(CheckResult::Valid));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Atomwise where sound, brute force over all assignments otherwise.
pub fn check_equation_fast(a: &FiniteBao, eq: &Equation) -> Result<CheckResult> {
    match check_equation_on_atoms(a, eq)? {
        Some(r) => Ok(r),
        None => check_equation(a, eq),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::Signature;
    use crate::boolean::FiniteBA;

    fn noncommuting_frame_algebra() -> FiniteBao {
        // Complex-algebra style tables for the 2-point frame with
        // T0 = {(0,1)}, T1 = {(1,0)}.
        let ba = FiniteBA::new(2).unwrap();
        let sig = Signature::trivial(2, false).unwrap();
        FiniteBao::new(
            ba,
            sig,
            vec![vec![0b10, 0b00], vec![0b00, 0b01]],
            vec![vec![0b01, 0b10]],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn eval_basics() {
        let a = noncommuting_frame_algebra();
        let mut env = Env::new();
        env.insert("x".into(), 0b10);
        assert_eq!(eval_term(&a, &Term::var("x"), &env).unwrap(), 0b10);
        assert_eq!(eval_term(&a, &Term::cyl(0, Term::Zero), &env).unwrap(), 0);
        let id = Transformation::identity(2);
        assert_eq!(
            eval_term(&a, &Term::subst(id, Term::var("x")), &env).unwrap(),
            0b10
        );
        assert!(eval_term(&a, &Term::var("y"), &env).is_err());
        assert!(eval_term(&a, &Term::cyl(5, Term::One), &env).is_err());
    }

    #[test]
    fn check_equation_reflexivity_and_additivity() {
        let a = noncommuting_frame_algebra();
        let xx = Equation::new(Term::var("x"), Term::var("x"));
        assert!(check_equation(&a, &xx).unwrap().is_valid());
        for i in 0..2 {
            let add = Equation::new(
                Term::cyl(i, Term::join(Term::var("x"), Term::var("y"))),
                Term::join(
                    Term::cyl(i, Term::var("x")),
                    Term::cyl(i, Term::var("y")),
                ),
            );
            assert!(check_equation(&a, &add).unwrap().is_valid());
        }
    }

    #[test]
    fn cylindrifier_commutation_fails_on_noncommuting_frame() {
        // c0 c1 x = c1 c0 x falsified at x = {0}.
        let a = noncommuting_frame_algebra();
        let eq = Equation::new(
            Term::cyl(0, Term::cyl(1, Term::var("x"))),
            Term::cyl(1, Term::cyl(0, Term::var("x"))),
        );
        match check_equation(&a, &eq).unwrap() {
            CheckResult::Counterexample(env) => {
                assert_eq!(env["x"], 0b01);
            }
            CheckResult::Valid => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn counterexample_is_lexicographically_least() {
        let a = noncommuting_frame_algebra();
        // x = y fails first at x=0, y=1.
        let eq = Equation::new(Term::var("x"), Term::var("y"));
        match check_equation(&a, &eq).unwrap() {
            CheckResult::Counterexample(env) => {
                assert_eq!(env["x"], 0);
                assert_eq!(env["y"], 1);
            }
            CheckResult::Valid => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn atomwise_agrees_with_brute_force() {
        let a = noncommuting_frame_algebra();
        let applicable = [
            // Valid: additivity of c0.
            Equation::new(
                Term::cyl(0, Term::join(Term::var("x"), Term::var("y"))),
                Term::join(Term::cyl(0, Term::var("x")), Term::cyl(0, Term::var("y"))),
            ),
            // Invalid here: commutation of the two cylindrifiers.
            Equation::new(
                Term::cyl(0, Term::cyl(1, Term::var("x"))),
                Term::cyl(1, Term::cyl(0, Term::var("x"))),
            ),
            // Ground equation.
            Equation::new(Term::cyl(0, Term::One), Term::cyl(0, Term::One)),
        ];
        for eq in &applicable {
            let fast = check_equation_on_atoms(&a, eq).unwrap().unwrap();
            let slow = check_equation(&a, eq).unwrap();
            assert_eq!(fast.is_valid(), slow.is_valid(), "{eq}");
            assert_eq!(check_equation_fast(&a, eq).unwrap().is_valid(), slow.is_valid());
        }
        // Not applicable: complement, or a repeated variable.
        let negated = Equation::new(Term::compl(Term::var("x")), Term::var("x"));
        assert!(check_equation_on_atoms(&a, &negated).unwrap().is_none());
        let repeated = Equation::new(
            Term::meet(Term::var("x"), Term::var("x")),
            Term::var("x"),
        );
        assert!(check_equation_on_atoms(&a, &repeated).unwrap().is_none());
        assert!(check_equation_fast(&a, &repeated).unwrap().is_valid());
    }

    #[test]
    fn positivity_examples() {
        let add = Equation::new(
            Term::cyl(0, Term::join(Term::var("x"), Term::var("y"))),
            Term::join(Term::cyl(0, Term::var("x")), Term::cyl(0, Term::var("y"))),
        );
        assert!(is_positive_equation(&add));
        let fix = Equation::new(
            Term::cyl(0, Term::compl(Term::cyl(0, Term::var("x")))),
            Term::compl(Term::cyl(0, Term::var("x"))),
        );
        assert!(!is_positive_equation(&fix));
        let tau = Transformation::identity(2);
        let hom = Equation::new(
            Term::subst(tau.clone(), Term::meet(Term::var("x"), Term::var("y"))),
            Term::meet(
                Term::subst(tau.clone(), Term::var("x")),
                Term::subst(tau, Term::var("y")),
            ),
        );
        assert!(is_positive_equation(&hom));
    }
}
