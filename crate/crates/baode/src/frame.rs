//! Frames, complex algebras, atom structures, dual morphisms and the
//! zigzag-product machinery.
//!
//! A frame carries one binary relation `T_i` per cylindrifier, one `S_tau`
//! per admitted transformation, and designated subsets `D_ij` for the
//! diagonals. `S_tau` is required to be the converse graph of a total
//! function on the universe, so that the induced substitution on the
//! complex algebra is a Boolean endomorphism.

use crate::bao::{FiniteBao, Signature};
use crate::boolean::{leq, Elem, FiniteBA};
use crate::error::{Error, Result};
use crate::limits;
use crate::term::{check_equation, Equation};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub type Rel = BTreeSet<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    sig: Signature,
    universe: usize,
    /// `t[i]`: the accessibility relation of `c_i`.
    t: Vec<Rel>,
    /// `s[k]`: the relation of the signature's `k`-th transformation.
    s: Vec<Rel>,
    /// `d[i * dim + j]`: designated subset for `d_ij`; empty vec when the
    /// signature is diagonal-free.
    d: Vec<BTreeSet<usize>>,
}

impl Frame {
    pub fn new(
        sig: Signature,
        universe: usize,
        t: Vec<Rel>,
        s: Vec<Rel>,
        d: Vec<BTreeSet<usize>>,
    ) -> Result<Self> {
        if t.len() != sig.dim() {
            return Err(Error::Frame(format!(
                "expected {} cylindrifier relations, got {}",
                sig.dim(),
                t.len()
            )));
        }
        if s.len() != sig.transformations().len() {
            return Err(Error::Frame(format!(
                "expected {} substitution relations, got {}",
                sig.transformations().len(),
                s.len()
            )));
        }
        let want_d = if sig.with_diagonals() {
            sig.dim() * sig.dim()
        } else {
            0
        };
        if d.len() != want_d {
            return Err(Error::Frame(format!(
                "expected {want_d} diagonal subsets, got {}",
                d.len()
            )));
        }
        for rel in t.iter().chain(s.iter()) {
            for &(a, b) in rel {
                if a >= universe || b >= universe {
                    return Err(Error::Frame(format!(
                        "relation endpoint ({a},{b}) outside universe of size {universe}"
                    )));
                }
            }
        }
        for set in &d {
            for &p in set {
                if p >= universe {
                    return Err(Error::Frame(format!(
                        "diagonal point {p} outside universe of size {universe}"
                    )));
                }
            }
        }
        Ok(Frame {
            sig,
            universe,
            t,
            s,
            d,
        })
    }

    /// Build the substitution relations from a point-level monoid action:
    /// `action[k]` is the function `g_tau` for the `k`-th transformation,
    /// and `S_tau` is its converse graph.
    pub fn from_action(
        sig: Signature,
        universe: usize,
        t: Vec<Rel>,
        action: &[Vec<usize>],
        d: Vec<BTreeSet<usize>>,
    ) -> Result<Self> {
        if action.len() != sig.transformations().len() {
            return Err(Error::Frame("action has wrong number of maps".into()));
        }
        let mut s = Vec::new();
        for g in action {
            if g.len() != universe || g.iter().any(|&v| v >= universe) {
                return Err(Error::Frame("action map is not a self-map".into()));
            }
            s.push((0..universe).map(|p| (g[p], p)).collect());
        }
        Frame::new(sig, universe, t, s, d)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn t(&self, i: usize) -> &Rel {
        &self.t[i]
    }

    pub fn s(&self, k: usize) -> &Rel {
        &self.s[k]
    }

    pub fn d(&self, i: usize, j: usize) -> &BTreeSet<usize> {
        &self.d[i * self.sig.dim() + j]
    }

    /// Extract the function whose converse graph `S_tau` is; errors when
    /// the relation is not of that shape.
    pub fn action_of(&self, k: usize) -> Result<Vec<usize>> {
        let mut g = vec![usize::MAX; self.universe];
        for &(t, s) in &self.s[k] {
            if g[s] != usize::MAX {
                return Err(Error::Signature(format!(
                    "S_[{k}] relates point {s} to several predecessors"
                )));
            }
            g[s] = t;
        }
        if let Some(p) = g.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Signature(format!(
                "S_[{k}] has no predecessor for point {p}"
            )));
        }
        Ok(g)
    }
}

/// `F^+`: the powerset algebra of the universe with `c_i(X) = {s : exists
/// t in X with (t,s) in T_i}`, likewise for `s_tau`, and `d_ij = D_ij`.
pub fn complex_algebra(f: &Frame) -> Result<FiniteBao> {
    let ba = FiniteBA::new(f.universe())?;
    let n = f.universe();
    let mut cyl = Vec::new();
    for i in 0..f.sig().dim() {
        let mut table = vec![0 as Elem; n];
        for &(t, s) in f.t(i) {
            table[t] |= 1 << s;
        }
        cyl.push(table);
    }
    let mut subst = Vec::new();
    for k in 0..f.sig().transformations().len() {
        let g = f.action_of(k)?;
        let mut table = vec![0 as Elem; n];
        for (p, &img) in g.iter().enumerate() {
            table[img] |= 1 << p;
        }
        subst.push(table);
    }
    let mut diag = Vec::new();
    if f.sig().with_diagonals() {
        for i in 0..f.sig().dim() {
            for j in 0..f.sig().dim() {
                let mut e: Elem = 0;
                for &p in f.d(i, j) {
                    e |= 1 << p;
                }
                diag.push(e);
            }
        }
    }
    FiniteBao::new(ba, f.sig().clone(), cyl, subst, diag)
}

/// `A_+`: the atom structure. Finitely the universe is the atom list, with
/// `(t,s) in T_i` iff `atom_s <= c_i(atom_t)` and likewise for `S_tau`;
/// `D_ij` collects the atoms below `d_ij`.
pub fn atom_structure(a: &FiniteBao) -> Frame {
    let n = a.atom_count();
    let mut t = Vec::new();
    for i in 0..a.dim() {
        let mut rel = Rel::new();
        for (ti, tat) in a.atoms().enumerate() {
            let img = a.apply_cyl(i, tat);
            for (si, sat) in a.atoms().enumerate() {
                if leq(sat, img) {
                    rel.insert((ti, si));
                }
            }
        }
        t.push(rel);
    }
    let mut s = Vec::new();
    for k in 0..a.sig().transformations().len() {
        let mut rel = Rel::new();
        for (ti, tat) in a.atoms().enumerate() {
            let img = a.apply_subst(k, tat);
            for (si, sat) in a.atoms().enumerate() {
                if leq(sat, img) {
                    rel.insert((ti, si));
                }
            }
        }
        s.push(rel);
    }
    let mut d = Vec::new();
    if a.sig().with_diagonals() {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let e = a.diag(i, j).expect("signature has diagonals");
                d.push(
                    (0..n)
                        .filter(|&p| leq(1 << p, e))
                        .collect::<BTreeSet<usize>>(),
                );
            }
        }
    }
    Frame::new(a.sig().clone(), n, t, s, d).expect("atom structure is well formed")
}

/// A carrier map between algebras, stored element-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: FiniteBao,
    pub target: FiniteBao,
    pub map: Vec<Elem>,
}

impl AlgebraMorphism {
    pub fn new(source: FiniteBao, target: FiniteBao, map: Vec<Elem>) -> Result<Self> {
        if map.len() as u64 != source.ba().element_count() {
            return Err(Error::Morphism("map has wrong length".into()));
        }
        if map.iter().any(|&v| !target.ba().contains(v)) {
            return Err(Error::Morphism("map image outside target".into()));
        }
        Ok(AlgebraMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(a: &FiniteBao) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            map: a.elements().collect(),
        }
    }

    /// Lift an atom-level map `atom index -> target element` additively.
    pub fn from_atom_images(source: FiniteBao, target: FiniteBao, images: &[Elem]) -> Result<Self> {
        if images.len() != source.atom_count() {
            return Err(Error::Morphism("one image per source atom required".into()));
        }
        let map = source
            .elements()
            .map(|x| {
                let mut out = 0;
                let mut rest = x;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    out |= images[i];
                    rest &= rest - 1;
                }
                out
            })
            .collect();
        AlgebraMorphism::new(source, target, map)
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x as usize]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.iter().all(|&v| seen.insert(v))
    }

    /// Boolean homomorphism check via atoms: disjoint atom images joining
    /// to 1, with every element the join of its atoms' images.
    pub fn is_boolean_homomorphism(&self) -> bool {
        let atoms: Vec<Elem> = self.source.atoms().collect();
        let mut union: Elem = 0;
        for (i, &a) in atoms.iter().enumerate() {
            let img = self.apply(a);
            for &b in &atoms[..i] {
                if img & self.apply(b) != 0 {
                    return false;
                }
            }
            union |= img;
        }
        if union != self.target.top() {
            return false;
        }
        self.source.elements().all(|x| {
            let mut out = 0;
            let mut rest = x;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                out |= self.apply(atoms[i]);
                rest &= rest - 1;
            }
            self.apply(x) == out
        })
    }

    /// Full Boolean-and-operator homomorphism check. Operator commutation
    /// is checked on atoms, which suffices for additive maps.
    pub fn is_homomorphism(&self) -> bool {
        if self.source.sig() != self.target.sig() {
            return false;
        }
        if !self.is_boolean_homomorphism() {
            return false;
        }
        for i in 0..self.source.dim() {
            for a in self.source.atoms() {
                if self.apply(self.source.apply_cyl(i, a))
                    != self.target.apply_cyl(i, self.apply(a))
                {
                    return false;
                }
            }
        }
        for k in 0..self.source.sig().transformations().len() {
            for a in self.source.atoms() {
                if self.apply(self.source.apply_subst(k, a))
                    != self.target.apply_subst(k, self.apply(a))
                {
                    return false;
                }
            }
        }
        if self.source.sig().with_diagonals() {
            for i in 0..self.source.dim() {
                for j in 0..self.source.dim() {
                    let ds = self.source.diag(i, j).expect("diagonals present");
                    let dt = self.target.diag(i, j).expect("diagonals present");
                    if self.apply(ds) != dt {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A carrier map between frame universes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMorphism {
    pub source: Frame,
    pub target: Frame,
    pub map: Vec<usize>,
}

impl FrameMorphism {
    pub fn new(source: Frame, target: Frame, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.universe() {
            return Err(Error::Morphism("map must be total on the source".into()));
        }
        if map.iter().any(|&v| v >= target.universe()) {
            return Err(Error::Morphism("map image outside target universe".into()));
        }
        Ok(FrameMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(f: &Frame) -> Self {
        FrameMorphism {
            source: f.clone(),
            target: f.clone(),
            map: (0..f.universe()).collect(),
        }
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.universe()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Forth and back conditions for every `T_i` and `S_tau`, plus
/// `m^{-1}[D'_ij] = D_ij` componentwise.
pub fn is_bounded_morphism(m: &FrameMorphism) -> bool {
    if m.source.sig() != m.target.sig() {
        return false;
    }
    let rels = |f: &Frame| -> Vec<Rel> {
        let mut v: Vec<Rel> = (0..f.sig().dim()).map(|i| f.t(i).clone()).collect();
        for k in 0..f.sig().transformations().len() {
            v.push(f.s(k).clone());
        }
        v
    };
    for (rs, rt) in rels(&m.source).iter().zip(rels(&m.target).iter()) {
        // Forth.
        for &(x, y) in rs {
            if !rt.contains(&(m.apply(x), m.apply(y))) {
                return false;
            }
        }
        // Back, on predecessors: the operator is the forward image along
        // the relation, so `x` must cover the sources of its image.
        for x in 0..m.source.universe() {
            for &(u, b) in rt {
                if b != m.apply(x) {
                    continue;
                }
                let ok = (0..m.source.universe())
                    .any(|t| m.apply(t) == u && rs.contains(&(t, x)));
                if !ok {
                    return false;
                }
            }
        }
    }
    if m.source.sig().with_diagonals() {
        for i in 0..m.source.sig().dim() {
            for j in 0..m.source.sig().dim() {
                let pre: BTreeSet<usize> = (0..m.source.universe())
                    .filter(|&p| m.target.d(i, j).contains(&m.apply(p)))
                    .collect();
                if &pre != m.source.d(i, j) {
                    return false;
                }
            }
        }
    }
    true
}

/// `h_+`: the dual of an algebra homomorphism `h: A -> B`, mapping each
/// atom `u` of `B` to the unique atom of `A` generating `h^{-1}` of the
/// principal ultrafilter on `u`.
pub fn dual_morphism(h: &AlgebraMorphism) -> Result<FrameMorphism> {
    if !h.is_homomorphism() {
        return Err(Error::Morphism(
            "dual_morphism requires a Boolean-and-operator homomorphism".into(),
        ));
    }
    dual_of_boolean_hom(h)
}

/// The same atom-level dual, requiring only the Boolean part; the result
/// is a bounded morphism exactly when `h` also respects the operators.
pub fn dual_of_boolean_hom(h: &AlgebraMorphism) -> Result<FrameMorphism> {
    if !h.is_boolean_homomorphism() {
        return Err(Error::Morphism(
            "dual requires at least a Boolean homomorphism".into(),
        ));
    }
    let mut map = Vec::with_capacity(h.target.atom_count());
    for u in h.target.atoms() {
        let mut found = None;
        for (ai, a) in h.source.atoms().enumerate() {
            if leq(u, h.apply(a)) {
                found = Some(ai);
                break;
            }
        }
        // The atom images partition the target, so exactly one hit exists.
        map.push(found.expect("preimage of an ultrafilter is an ultrafilter"));
    }
    FrameMorphism::new(atom_structure(&h.target), atom_structure(&h.source), map)
}

/// Dual of a frame morphism `m: G -> F`: the inverse-image map
/// `Cm(F) -> Cm(G)`, a complete BAO homomorphism whenever `m` is bounded.
pub fn inverse_image_morphism(m: &FrameMorphism) -> Result<AlgebraMorphism> {
    let cm_target = complex_algebra(&m.target)?;
    let cm_source = complex_algebra(&m.source)?;
    let map = cm_target
        .elements()
        .map(|x| {
            let mut out: Elem = 0;
            for p in 0..m.source.universe() {
                if leq(1 << m.apply(p), x) {
                    out |= 1 << p;
                }
            }
            out
        })
        .collect();
    AlgebraMorphism::new(cm_target, cm_source, map)
}

/// Cartesian product with componentwise relations; diagonal subsets are
/// the products of the factors' diagonals.
pub fn product_frame(fs: &[Frame]) -> Result<Frame> {
    let first = fs
        .first()
        .ok_or_else(|| Error::Frame("empty product".into()))?;
    for f in fs {
        if f.sig() != first.sig() {
            return Err(Error::Signature(
                "product factors must share a signature".into(),
            ));
        }
    }
    let sizes: Vec<usize> = fs.iter().map(|f| f.universe()).collect();
    let total: u64 = sizes.iter().map(|&s| s as u64).product();
    limits::check_budget("product frame universe", total)?;
    let total = total as usize;
    let unrank = |mut idx: usize| -> Vec<usize> {
        let mut tuple = Vec::with_capacity(sizes.len());
        for &s in &sizes {
            tuple.push(idx % s);
            idx /= s;
        }
        tuple
    };
    let rank = |tuple: &[usize]| -> usize {
        let mut idx = 0;
        for (k, &v) in tuple.iter().enumerate().rev() {
            idx = idx * sizes[k] + v;
        }
        idx
    };
    let sig = first.sig().clone();
    let componentwise = |pick: &dyn Fn(&Frame) -> &Rel| -> Rel {
        let mut rel = Rel::new();
        for a in 0..total {
            let ta = unrank(a);
            'next: for b in 0..total {
                let tb = unrank(b);
                for (k, f) in fs.iter().enumerate() {
                    if !pick(f).contains(&(ta[k], tb[k])) {
                        continue 'next;
                    }
                }
                rel.insert((rank(&ta), rank(&tb)));
            }
        }
        rel
    };
    let t: Vec<Rel> = (0..sig.dim())
        .map(|i| componentwise(&move |f: &Frame| f.t(i)))
        .collect();
    let s: Vec<Rel> = (0..sig.transformations().len())
        .map(|k| componentwise(&move |f: &Frame| f.s(k)))
        .collect();
    let mut d = Vec::new();
    if sig.with_diagonals() {
        for i in 0..sig.dim() {
            for j in 0..sig.dim() {
                let set: BTreeSet<usize> = (0..total)
                    .filter(|&idx| {
                        let tuple = unrank(idx);
                        fs.iter()
                            .enumerate()
                            .all(|(k, f)| f.d(i, j).contains(&tuple[k]))
                    })
                    .collect();
                d.push(set);
            }
        }
    }
    Frame::new(sig, total, t, s, d)
}

/// Map each point of `sub` to its tuple of factor coordinates.
pub type PointTuples = Vec<Vec<usize>>;

/// True iff `sub` (whose `k`-th point is the product point `points[k]`) is
/// an induced substructure of the product of `fs` with all projections
/// surjective.
pub fn is_zigzag_product(sub: &Frame, points: &PointTuples, fs: &[Frame]) -> Result<bool> {
    if points.len() != sub.universe() {
        return Err(Error::Containment(
            "one coordinate tuple per point required".into(),
        ));
    }
    for tuple in points {
        if tuple.len() != fs.len() {
            return Err(Error::Containment("tuple arity mismatch".into()));
        }
        for (k, &v) in tuple.iter().enumerate() {
            if v >= fs[k].universe() {
                return Err(Error::Containment(format!(
                    "coordinate {v} outside factor {k}"
                )));
            }
        }
    }
    let mut distinct = BTreeSet::new();
    for tuple in points {
        if !distinct.insert(tuple.clone()) {
            return Err(Error::Containment("duplicate product point".into()));
        }
    }
    // Projections onto every factor.
    for (k, f) in fs.iter().enumerate() {
        let hit: BTreeSet<usize> = points.iter().map(|t| t[k]).collect();
        if hit.len() != f.universe() {
            return Ok(false);
        }
    }
    // Induced relations.
    for i in 0..sub.sig().dim() {
        for a in 0..sub.universe() {
            for b in 0..sub.universe() {
                let in_product = fs
                    .iter()
                    .enumerate()
                    .all(|(k, f)| f.t(i).contains(&(points[a][k], points[b][k])));
                if sub.t(i).contains(&(a, b)) != in_product {
                    return Ok(false);
                }
            }
        }
    }
    for k_rel in 0..sub.sig().transformations().len() {
        for a in 0..sub.universe() {
            for b in 0..sub.universe() {
                let in_product = fs
                    .iter()
                    .enumerate()
                    .all(|(k, f)| f.s(k_rel).contains(&(points[a][k], points[b][k])));
                if sub.s(k_rel).contains(&(a, b)) != in_product {
                    return Ok(false);
                }
            }
        }
    }
    if sub.sig().with_diagonals() {
        for i in 0..sub.sig().dim() {
            for j in 0..sub.sig().dim() {
                for a in 0..sub.universe() {
                    let in_product = fs
                        .iter()
                        .enumerate()
                        .all(|(k, f)| f.d(i, j).contains(&points[a][k]));
                    if sub.d(i, j).contains(&a) != in_product {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The INSEP pullback of `f: G -> F` and `h: H -> F`.
#[derive(Debug, Clone)]
pub struct Insep {
    pub frame: Frame,
    /// The `k`-th point of `frame` is the pair `pairs[k] = (x, y)` with
    /// `x` in `G`, `y` in `H`.
    pub pairs: Vec<(usize, usize)>,
    /// Set when the zigzag postcondition failed (possible when `f`, `h`
    /// are not surjective bounded morphisms).
    pub degenerate: bool,
}

/// `INSEP = {(x,y) in G x H : f(x) = h(y)}` as an induced subframe of the
/// product, together with the zigzag verdict.
pub fn insep(f: &FrameMorphism, h: &FrameMorphism) -> Result<Insep> {
    if f.target != h.target {
        return Err(Error::Morphism(
            "insep requires morphisms into a common target".into(),
        ));
    }
    let g_frame = &f.source;
    let h_frame = &h.source;
    let mut pairs = Vec::new();
    for x in 0..g_frame.universe() {
        for y in 0..h_frame.universe() {
            if f.apply(x) == h.apply(y) {
                pairs.push((x, y));
            }
        }
    }
    let index_of = |x: usize, y: usize| pairs.iter().position(|&p| p == (x, y));
    let sig = g_frame.sig().clone();
    let mut t = Vec::new();
    for i in 0..sig.dim() {
        let mut rel = Rel::new();
        for (a, &(x1, y1)) in pairs.iter().enumerate() {
            for (b, &(x2, y2)) in pairs.iter().enumerate() {
                if g_frame.t(i).contains(&(x1, x2)) && h_frame.t(i).contains(&(y1, y2)) {
                    rel.insert((a, b));
                }
            }
        }
        t.push(rel);
    }
    let mut s = Vec::new();
    for k in 0..sig.transformations().len() {
        let mut rel = Rel::new();
        for (a, &(x1, y1)) in pairs.iter().enumerate() {
            for (b, &(x2, y2)) in pairs.iter().enumerate() {
                if g_frame.s(k).contains(&(x1, x2)) && h_frame.s(k).contains(&(y1, y2)) {
                    rel.insert((a, b));
                }
            }
        }
        s.push(rel);
    }
    let mut d = Vec::new();
    if sig.with_diagonals() {
        for i in 0..sig.dim() {
            for j in 0..sig.dim() {
                let set: BTreeSet<usize> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, &(x, y))| {
                        g_frame.d(i, j).contains(&x) && h_frame.d(i, j).contains(&y)
                    })
                    .map(|(a, _)| a)
                    .collect();
                d.push(set);
            }
        }
    }
    let frame = Frame::new(sig, pairs.len(), t, s, d)?;
    // Commuting condition f . pi0 = h . pi1 holds by construction of the
    // pair set; assert it anyway.
    debug_assert!(pairs.iter().all(|&(x, y)| f.apply(x) == h.apply(y)));
    let tuples: PointTuples = pairs.iter().map(|&(x, y)| vec![x, y]).collect();
    let zigzag = is_zigzag_product(
        &frame,
        &tuples,
        &[g_frame.clone(), h_frame.clone()],
    )?;
    let _ = index_of;
    Ok(Insep {
        frame,
        pairs,
        degenerate: !zigzag,
    })
}

/// `Str K` membership: all of `eqs` valid in the complex algebra.
pub fn str_membership(f: &Frame, eqs: &[Equation]) -> Result<bool> {
    let cm = complex_algebra(f)?;
    for eq in eqs {
        if !check_equation(&cm, eq)?.is_valid() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search for a relation-preserving bijection between two frames;
/// backtracking, intended for small universes.
pub fn frame_isomorphism(a: &Frame, b: &Frame) -> Option<Vec<usize>> {
    if a.sig() != b.sig() || a.universe() != b.universe() {
        return None;
    }
    let n = a.universe();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn compatible(a: &Frame, b: &Frame, map: &[usize], placed: usize) -> bool {
        let check_rel = |ra: &Rel, rb: &Rel| -> bool {
            for x in 0..=placed {
                for y in 0..=placed {
                    if map[x] == usize::MAX || map[y] == usize::MAX {
                        continue;
                    }
                    if ra.contains(&(x, y)) != rb.contains(&(map[x], map[y])) {
                        return false;
                    }
                }
            }
            true
        };
        for i in 0..a.sig().dim() {
            if !check_rel(a.t(i), b.t(i)) {
                return false;
            }
        }
        for k in 0..a.sig().transformations().len() {
            if !check_rel(a.s(k), b.s(k)) {
                return false;
            }
        }
        if a.sig().with_diagonals() {
            for i in 0..a.sig().dim() {
                for j in 0..a.sig().dim() {
                    for x in 0..=placed {
                        if map[x] == usize::MAX {
                            continue;
                        }
                        if a.d(i, j).contains(&x) != b.d(i, j).contains(&map[x]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn go(
        a: &Frame,
        b: &Frame,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        if next == a.universe() {
            return true;
        }
        for cand in 0..b.universe() {
            if used[cand] {
                continue;
            }
            map[next] = cand;
            used[cand] = true;
            if compatible(a, b, map, next) && go(a, b, map, used, next + 1) {
                return true;
            }
            map[next] = usize::MAX;
            used[cand] = false;
        }
        false
    }

    if go(a, b, &mut map, &mut used, 0) {
        Some(map)
    } else {
        None
    }
}

/// Algebra isomorphism via the atom structures.
pub fn algebras_isomorphic(a: &FiniteBao, b: &FiniteBao) -> bool {
    frame_isomorphism(&atom_structure(a), &atom_structure(b)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two points, T0 = {(0,1)}, T1 = {(1,0)}, identity action only.
    fn noncommuting_frame() -> Frame {
        let sig = Signature::trivial(2, false).unwrap();
        Frame::from_action(
            sig,
            2,
            vec![
                [(0, 1)].into_iter().collect(),
                [(1, 0)].into_iter().collect(),
            ],
            &[vec![0, 1]],
            vec![],
        )
        .unwrap()
    }

    /// Two disjoint copies of the noncommuting frame.
    fn doubled_frame() -> Frame {
        let sig = Signature::trivial(2, false).unwrap();
        Frame::from_action(
            sig,
            4,
            vec![
                [(0, 1), (2, 3)].into_iter().collect(),
                [(1, 0), (3, 2)].into_iter().collect(),
            ],
            &[vec![0, 1, 2, 3]],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn complex_algebra_tables() {
        let cm = complex_algebra(&noncommuting_frame()).unwrap();
        // c_0({0}) = {1} since (0,1) in T0; c_0({1}) = 0.
        assert_eq!(cm.apply_cyl(0, 0b01), 0b10);
        assert_eq!(cm.apply_cyl(0, 0b10), 0b00);
        assert_eq!(cm.apply_cyl(1, 0b10), 0b01);
        assert_eq!(cm.apply_cyl(1, 0b01), 0b00);
    }

    #[test]
    fn duality_round_trip_frame() {
        for f in [noncommuting_frame(), doubled_frame()] {
            let cm = complex_algebra(&f).unwrap();
            assert_eq!(atom_structure(&cm), f);
        }
    }

    #[test]
    fn duality_round_trip_algebra() {
        let a = complex_algebra(&doubled_frame()).unwrap();
        let again = complex_algebra(&atom_structure(&a)).unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn diagonal_frame_round_trip() {
        let sig = Signature::trivial(2, true).unwrap();
        let full: Rel = [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect();
        let f = Frame::from_action(
            sig,
            2,
            vec![full.clone(), full],
            &[vec![0, 1]],
            vec![
                [0, 1].into_iter().collect(),
                [0].into_iter().collect(),
                [0].into_iter().collect(),
                [0, 1].into_iter().collect(),
            ],
        )
        .unwrap();
        let cm = complex_algebra(&f).unwrap();
        assert_eq!(cm.diag(0, 1).unwrap(), 0b01);
        assert_eq!(atom_structure(&cm), f);
    }

    #[test]
    fn fold_is_surjective_bounded() {
        let g = doubled_frame();
        let f = noncommuting_frame();
        let m = FrameMorphism::new(g, f, vec![0, 1, 0, 1]).unwrap();
        assert!(m.is_surjective());
        assert!(is_bounded_morphism(&m));
    }

    #[test]
    fn collapse_is_not_bounded() {
        // Sending both points of the noncommuting frame to a single
        // reflexive point breaks the back condition in neither direction,
        // but identifying them onto a point with no loop breaks forth.
        let f = noncommuting_frame();
        let sig = Signature::trivial(2, false).unwrap();
        let pt = Frame::from_action(sig, 1, vec![Rel::new(), Rel::new()], &[vec![0]], vec![])
            .unwrap();
        let m = FrameMorphism::new(f, pt, vec![0, 0]).unwrap();
        assert!(!is_bounded_morphism(&m));
    }

    #[test]
    fn inverse_image_of_bounded_is_homomorphism() {
        let g = doubled_frame();
        let f = noncommuting_frame();
        let m = FrameMorphism::new(g, f, vec![0, 1, 0, 1]).unwrap();
        let h = inverse_image_morphism(&m).unwrap();
        assert!(h.is_homomorphism());
        // m^{-1}[{0}] = {0, 2}.
        assert_eq!(h.apply(0b01), 0b0101);
    }

    #[test]
    fn dual_of_inverse_image_recovers_the_map() {
        let g = doubled_frame();
        let f = noncommuting_frame();
        let m = FrameMorphism::new(g, f, vec![0, 1, 0, 1]).unwrap();
        let h = inverse_image_morphism(&m).unwrap();
        let back = dual_morphism(&h).unwrap();
        assert_eq!(back.map, m.map);
        assert_eq!(back.source, m.source);
        assert_eq!(back.target, m.target);
    }

    #[test]
    fn dual_morphism_rejects_non_homomorphism() {
        let cm = complex_algebra(&noncommuting_frame()).unwrap();
        // Constant-to-top map is not a Boolean homomorphism.
        let bad =
            AlgebraMorphism::new(cm.clone(), cm, vec![0b11, 0b11, 0b11, 0b11]).unwrap();
        assert!(dual_morphism(&bad).is_err());
    }

    #[test]
    fn product_and_zigzag() {
        let f = noncommuting_frame();
        let p = product_frame(&[f.clone(), f.clone()]).unwrap();
        assert_eq!(p.universe(), 4);
        // The full product is trivially a zigzag product of its factors.
        let points: PointTuples = (0..4).map(|i| vec![i % 2, i / 2]).collect();
        assert!(is_zigzag_product(&p, &points, &[f.clone(), f]).unwrap());
    }

    #[test]
    fn insep_of_bounded_surjections_is_zigzag() {
        let g = doubled_frame();
        let f = noncommuting_frame();
        let fold = FrameMorphism::new(g, f.clone(), vec![0, 1, 0, 1]).unwrap();
        let id = FrameMorphism::identity(&f);
        let z = insep(&fold, &id).unwrap();
        assert_eq!(z.pairs, vec![(0, 0), (1, 1), (2, 0), (3, 1)]);
        assert!(!z.degenerate);
        // The complex algebra of the INSEP frame exists (substitution
        // relations stay converse-functional).
        assert!(complex_algebra(&z.frame).is_ok());
    }

    #[test]
    fn insep_of_non_surjective_degenerates() {
        // f hits only point 0 of the target, so the second projection of
        // the INSEP frame misses target point 1.
        let sig = Signature::trivial(1, false).unwrap();
        let target =
            Frame::from_action(sig.clone(), 2, vec![Rel::new()], &[vec![0, 1]], vec![]).unwrap();
        let source = Frame::from_action(sig, 1, vec![Rel::new()], &[vec![0]], vec![]).unwrap();
        let f = FrameMorphism::new(source, target.clone(), vec![0]).unwrap();
        assert!(is_bounded_morphism(&f));
        assert!(!f.is_surjective());
        let id = FrameMorphism::identity(&target);
        let z = insep(&f, &id).unwrap();
        assert_eq!(z.pairs, vec![(0, 0)]);
        assert!(z.degenerate);
    }

    #[test]
    fn isomorphism_search() {
        let f = noncommuting_frame();
        // Relabelled copy: swap the two points.
        let sig = Signature::trivial(2, false).unwrap();
        let g = Frame::from_action(
            sig,
            2,
            vec![
                [(1, 0)].into_iter().collect(),
                [(0, 1)].into_iter().collect(),
            ],
            &[vec![0, 1]],
            vec![],
        )
        .unwrap();
        assert_eq!(frame_isomorphism(&f, &g), Some(vec![1, 0]));
        assert!(frame_isomorphism(&f, &doubled_frame()).is_none());
        let a = complex_algebra(&f).unwrap();
        let b = complex_algebra(&g).unwrap();
        assert!(algebras_isomorphic(&a, &b));
    }

    #[test]
    fn str_membership_examples() {
        let f = noncommuting_frame();
        let comm = Equation::new(
            crate::term::Term::cyl(0, crate::term::Term::cyl(1, crate::term::Term::var("x"))),
            crate::term::Term::cyl(1, crate::term::Term::cyl(0, crate::term::Term::var("x"))),
        );
        assert!(!str_membership(&f, &[comm]).unwrap());
        assert!(str_membership(&f, &[]).unwrap());
    }
}
