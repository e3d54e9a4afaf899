//! Operator-table algebras over cylindric-polyadic signatures: a finite
//! Boolean algebra equipped with cylindrifiers `c_i`, substitutions `s_tau`
//! indexed by an explicit transformation monoid, and optional diagonal
//! constants `d_ij`.
//!
//! Every unary operator is stored by its atom images. Extending additively
//! over atoms makes normality and additivity structural; endomorphism and
//! monoid-action laws for the substitutions are checked at construction.

use crate::boolean::{leq, Elem, FiniteBA};
use crate::error::{Error, Result};
use crate::limits;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A map `tau: dim -> dim`, stored pointwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transformation(pub Vec<usize>);

impl Transformation {
    pub fn identity(dim: usize) -> Self {
        Transformation((0..dim).collect())
    }

    /// `[i/j]`: sends `i` to `j`, fixes everything else.
    pub fn replace(dim: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..dim).collect();
        v[i] = j;
        Transformation(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `sigma . tau` with `(sigma . tau)(i) = sigma(tau(i))`.
    pub fn compose(&self, tau: &Transformation) -> Transformation {
        Transformation(tau.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &v in &self.0 {
            if v >= self.0.len() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<Transformation> {
        if !self.is_permutation() {
            return None;
        }
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Some(Transformation(inv))
    }

    pub fn agrees_on(&self, other: &Transformation, j_set: &BTreeSet<usize>) -> bool {
        j_set.iter().all(|&j| self.0[j] == other.0[j])
    }

    /// Indices moved by the transformation together with their images.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for (i, &v) in self.0.iter().enumerate() {
            if i != v {
                s.insert(i);
                s.insert(v);
            }
        }
        s
    }

    pub fn restrict(&self, to: usize) -> Transformation {
        Transformation(self.0[..to].to_vec())
    }

    /// True iff the restriction to `0..to` is injective.
    pub fn one_to_one_on(&self, to: usize) -> bool {
        let mut seen = BTreeSet::new();
        self.0[..to].iter().all(|&v| seen.insert(v))
    }
}

/// Dimension, admitted substitution indices (a monoid under composition),
/// and whether diagonal constants are present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    dim: usize,
    transformations: Vec<Transformation>,
    with_diagonals: bool,
}

impl Signature {
    pub fn new(
        dim: usize,
        transformations: Vec<Transformation>,
        with_diagonals: bool,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Signature("dimension must be positive".into()));
        }
        for t in &transformations {
            if t.dim() != dim {
                return Err(Error::Signature(format!(
                    "transformation {:?} has wrong arity for dimension {dim}",
                    t.0
                )));
            }
            if t.0.iter().any(|&v| v >= dim) {
                return Err(Error::Signature(format!(
                    "transformation {:?} maps outside 0..{dim}",
                    t.0
                )));
            }
        }
        let sig = Signature {
            dim,
            transformations,
            with_diagonals,
        };
        if sig.identity_index().is_none() {
            return Err(Error::Signature(
                "transformation list must contain the identity".into(),
            ));
        }
        for a in &sig.transformations {
            for b in &sig.transformations {
                let c = a.compose(b);
                if sig.index_of(&c).is_none() {
                    return Err(Error::Signature(format!(
                        "transformation list not closed under composition: {:?} . {:?} = {:?}",
                        a.0, b.0, c.0
                    )));
                }
            }
        }
        Ok(sig)
    }

    /// The full monoid `dim^dim`; only sensible for small dimensions.
    pub fn full(dim: usize, with_diagonals: bool) -> Result<Self> {
        let count = (dim as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
        limits::check_budget("full transformation monoid", count)?;
        let mut transformations = Vec::with_capacity(count as usize);
        let mut cur = vec![0usize; dim];
        loop {
            transformations.push(Transformation(cur.clone()));
            let mut k = 0;
            while k < dim {
                cur[k] += 1;
                if cur[k] < dim {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == dim {
                break;
            }
        }
        Signature::new(dim, transformations, with_diagonals)
    }

    /// Identity-only monoid.
    pub fn trivial(dim: usize, with_diagonals: bool) -> Result<Self> {
        Signature::new(dim, vec![Transformation::identity(dim)], with_diagonals)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn with_diagonals(&self) -> bool {
        self.with_diagonals
    }

    pub fn transformations(&self) -> &[Transformation] {
        &self.transformations
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.transformations.iter().position(|u| u == t)
    }

    pub fn identity_index(&self) -> Option<usize> {
        self.transformations.iter().position(|t| t.is_identity())
    }
}

/// A finite Boolean algebra with operators: cylindrifiers, substitutions
/// and (optionally) diagonals, all over an explicit signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBao {
    ba: FiniteBA,
    sig: Signature,
    /// `cyl[i][atom]` is the image of that atom under `c_i`.
    cyl: Vec<Vec<Elem>>,
    /// `subst[t][atom]` is the image of that atom under `s_tau`, `tau` the
    /// `t`-th transformation of the signature.
    subst: Vec<Vec<Elem>>,
    /// `diag[i * dim + j]`, empty when diagonals are absent.
    diag: Vec<Elem>,
}

impl FiniteBao {
    /// Build from atom-image tables. Normality and additivity are
    /// structural here; the substitution laws are verified.
    pub fn new(
        ba: FiniteBA,
        sig: Signature,
        cyl: Vec<Vec<Elem>>,
        subst: Vec<Vec<Elem>>,
        diag: Vec<Elem>,
    ) -> Result<Self> {
        let n = ba.atom_count();
        if cyl.len() != sig.dim() || cyl.iter().any(|t| t.len() != n) {
            return Err(Error::Signature(format!(
                "expected {} cylindrifier tables of {} atom images",
                sig.dim(),
                n
            )));
        }
        if subst.len() != sig.transformations().len() || subst.iter().any(|t| t.len() != n) {
            return Err(Error::Signature(format!(
                "expected {} substitution tables of {} atom images",
                sig.transformations().len(),
                n
            )));
        }
        if sig.with_diagonals() {
            if diag.len() != sig.dim() * sig.dim() {
                return Err(Error::Signature("diagonal table has wrong length".into()));
            }
        } else if !diag.is_empty() {
            return Err(Error::Signature(
                "diagonal table given for a diagonal-free signature".into(),
            ));
        }
        for table in cyl.iter().chain(subst.iter()) {
            for &img in table {
                if !ba.contains(img) {
                    return Err(Error::Signature("operator image outside algebra".into()));
                }
            }
        }
        for &d in &diag {
            if !ba.contains(d) {
                return Err(Error::Signature("diagonal outside algebra".into()));
            }
        }
        let a = FiniteBao {
            ba,
            sig,
            cyl,
            subst,
            diag,
        };
        a.validate_substitutions()?;
        Ok(a)
    }

    /// Build from full element tables (one image per element), validating
    /// normality and additivity before compressing to atom images.
    pub fn from_full_tables(
        ba: FiniteBA,
        sig: Signature,
        cyl_full: Vec<Vec<Elem>>,
        subst_full: Vec<Vec<Elem>>,
        diag: Vec<Elem>,
    ) -> Result<Self> {
        limits::check_budget("full operator tables", ba.element_count())?;
        let count = ba.element_count() as usize;
        let compress = |table: &Vec<Elem>, what: &str| -> Result<Vec<Elem>> {
            if table.len() != count {
                return Err(Error::Signature(format!("{what} table has wrong length")));
            }
            if table[0] != 0 {
                return Err(Error::Signature(format!("{what} is not normal (f(0) != 0)")));
            }
            for x in ba.elements() {
                for y in ba.elements() {
                    if table[(x | y) as usize] != table[x as usize] | table[y as usize] {
                        return Err(Error::Signature(format!(
                            "{what} is not additive at ({x}, {y})"
                        )));
                    }
                }
            }
            Ok(ba.atoms().map(|a| table[a as usize]).collect())
        };
        let mut cyl = Vec::new();
        for (i, t) in cyl_full.iter().enumerate() {
            cyl.push(compress(t, &format!("c_{i}"))?);
        }
        let mut subst = Vec::new();
        for (t_idx, t) in subst_full.iter().enumerate() {
            subst.push(compress(t, &format!("s_[{t_idx}]"))?);
        }
        FiniteBao::new(ba, sig, cyl, subst, diag)
    }

    /// Substitutions must be Boolean endomorphisms forming a monoid action.
    fn validate_substitutions(&self) -> Result<()> {
        let top = self.ba.top();
        for (t_idx, table) in self.subst.iter().enumerate() {
            let mut union: Elem = 0;
            for (a_idx, &img) in table.iter().enumerate() {
                for &other in &table[..a_idx] {
                    if img & other != 0 {
                        return Err(Error::Signature(format!(
                            "s_[{t_idx}] is not a Boolean endomorphism: atom images overlap"
                        )));
                    }
                }
                union |= img;
            }
            if union != top {
                return Err(Error::Signature(format!(
                    "s_[{t_idx}] is not a Boolean endomorphism: images do not cover 1"
                )));
            }
        }
        let id = self.sig.identity_index().expect("signature has identity");
        for (a_idx, atom) in self.ba.atoms().enumerate() {
            if self.subst[id][a_idx] != atom {
                return Err(Error::Signature("s_id is not the identity".into()));
            }
        }
        let ts = self.sig.transformations();
        for (si, s) in ts.iter().enumerate() {
            for (ti, t) in ts.iter().enumerate() {
                let comp = self
                    .sig
                    .index_of(&s.compose(t))
                    .expect("monoid closure checked by Signature::new");
                for (a_idx, atom) in self.ba.atoms().enumerate() {
                    let two_step = self.apply_subst(si, self.subst[ti][a_idx]);
                    if two_step != self.subst[comp][a_idx] {
                        return Err(Error::Signature(format!(
                            "s_[{si}] . s_[{ti}] != s_[{si} . {ti}] on atom {atom}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ba(&self) -> &FiniteBA {
        &self.ba
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    pub fn atom_count(&self) -> usize {
        self.ba.atom_count()
    }

    pub fn top(&self) -> Elem {
        self.ba.top()
    }

    pub fn complement(&self, x: Elem) -> Elem {
        self.ba.complement(x)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        self.ba.elements()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Elem> {
        self.ba.atoms()
    }

    fn fold_atoms(table: &[Elem], x: Elem) -> Elem {
        let mut out = 0;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= table[i];
            rest &= rest - 1;
        }
        out
    }

    pub fn apply_cyl(&self, i: usize, x: Elem) -> Elem {
        Self::fold_atoms(&self.cyl[i], x)
    }

    pub fn apply_subst(&self, t_idx: usize, x: Elem) -> Elem {
        Self::fold_atoms(&self.subst[t_idx], x)
    }

    pub fn apply_subst_map(&self, tau: &Transformation, x: Elem) -> Result<Elem> {
        let idx = self
            .sig
            .index_of(tau)
            .ok_or_else(|| Error::UnknownTransformation(tau.0.clone()))?;
        Ok(self.apply_subst(idx, x))
    }

    pub fn diag(&self, i: usize, j: usize) -> Result<Elem> {
        if !self.sig.with_diagonals() {
            return Err(Error::Signature("signature has no diagonals".into()));
        }
        if i >= self.dim() || j >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                dim: self.dim(),
            });
        }
        Ok(self.diag[i * self.dim() + j])
    }

    /// `c_i^d(x) = -c_i(-x)`, the dual cylindrifier.
    pub fn dual_cyl(&self, i: usize, x: Elem) -> Elem {
        self.complement(self.apply_cyl(i, self.complement(x)))
    }

    /// `s_i^j x`: `x` itself when `i = j`, else `c_i(d_ij . x)`.
    pub fn subst_ij(&self, i: usize, j: usize, x: Elem) -> Result<Elem> {
        if i >= self.dim() || j >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                dim: self.dim(),
            });
        }
        if i == j {
            return Ok(x);
        }
        Ok(self.apply_cyl(i, self.diag(i, j)? & x))
    }

    /// `Delta x = {i : c_i x != x}`.
    pub fn dimension_set(&self, x: Elem) -> BTreeSet<usize> {
        (0..self.dim())
            .filter(|&i| self.apply_cyl(i, x) != x)
            .collect()
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        leq(x, y)
    }
}
