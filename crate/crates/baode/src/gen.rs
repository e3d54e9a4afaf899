//! Deterministic seeded generators and exhaustive enumerators for the
//! property campaigns: frames, algebra morphisms, bounded surjections,
//! amalgamation instances and dilation pairs.

use crate::amalgam::AmalgamationInstance;
use crate::bao::{FiniteBao, Signature, Transformation};
use crate::boolean::Elem;
use crate::error::Result;
use crate::frame::{
    complex_algebra, dual_of_boolean_hom, frame_isomorphism, product_frame, AlgebraMorphism,
    Frame, FrameMorphism, Rel,
};
use crate::schema::{default_schema, positive_plain_axioms};
use crate::term::{check_equation, Equation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A valid contravariant action of the full monoid on a universe: the map
/// `g_tau` per transformation, with `g_{sigma tau} = g_tau . g_sigma`.
fn action_is_valid(sig: &Signature, action: &[Vec<usize>]) -> bool {
    let ts = sig.transformations();
    let id = sig.identity_index().unwrap();
    if action[id].iter().enumerate().any(|(p, &v)| p != v) {
        return false;
    }
    for (si, s) in ts.iter().enumerate() {
        for (ti, t) in ts.iter().enumerate() {
            let comp = sig.index_of(&s.compose(t)).unwrap();
            let n = action[comp].len();
            for p in 0..n {
                if action[comp][p] != action[ti][action[si][p]] {
                    return false;
                }
            }
        }
    }
    true
}

/// All valid actions of `sig`'s monoid on `universe` points.
pub fn enumerate_actions(sig: &Signature, universe: usize) -> Vec<Vec<Vec<usize>>> {
    let ts = sig.transformations();
    let k = ts.len();
    // Brute force over the non-identity maps; fine for universe <= 3 and
    // small monoids.
    let id_idx = sig.identity_index().unwrap();
    let fun_count = universe.pow(universe as u32);
    let decode = |mut f: usize| -> Vec<usize> {
        let mut g = Vec::with_capacity(universe);
        for _ in 0..universe {
            g.push(f % universe);
            f /= universe;
        }
        g
    };
    let mut out = Vec::new();
    let free: Vec<usize> = (0..k).filter(|&i| i != id_idx).collect();
    let mut choice = vec![0usize; free.len()];
    loop {
        let mut action: Vec<Vec<usize>> = vec![Vec::new(); k];
        action[id_idx] = (0..universe).collect();
        for (slot, &ti) in free.iter().enumerate() {
            action[ti] = decode(choice[slot]);
        }
        if action_is_valid(sig, &action) {
            out.push(action);
        }
        let mut i = 0;
        while i < free.len() {
            choice[i] += 1;
            if choice[i] < fun_count {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == free.len() {
            break;
        }
    }
    out
}

fn random_rel(r: &mut ChaCha8Rng, universe: usize, density: f64) -> Rel {
    let mut rel = Rel::new();
    for a in 0..universe {
        for b in 0..universe {
            if r.gen_bool(density) {
                rel.insert((a, b));
            }
        }
    }
    rel
}

/// A random frame over the full monoid of `dim`, with a valid action
/// picked from a catalog (trivial, assignment-style, or relabelled) and
/// freely random accessibility relations and diagonal subsets.
pub fn random_frame(
    r: &mut ChaCha8Rng,
    dim: usize,
    max_points: usize,
    with_diagonals: bool,
) -> Result<Frame> {
    let sig = Signature::full(dim, with_diagonals)?;
    let assignment_size = dim.pow(dim as u32).min(max_points);
    let (universe, action) = match r.gen_range(0..3) {
        // Trivial action on a random universe.
        0 => {
            let n = r.gen_range(1..=max_points);
            let action: Vec<Vec<usize>> = sig
                .transformations()
                .iter()
                .map(|_| (0..n).collect())
                .collect();
            (n, action)
        }
        // Assignment action on ^dim dim, possibly relabelled.
        _ if assignment_size == dim.pow(dim as u32) => {
            let n = assignment_size;
            let mut relabel: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                relabel.swap(i, r.gen_range(0..=i));
            }
            let encode = |t: &Transformation| -> usize {
                let mut idx = 0;
                for &v in t.0.iter().rev() {
                    idx = idx * dim + v;
                }
                idx
            };
            let decode = |mut idx: usize| -> Transformation {
                let mut v = Vec::with_capacity(dim);
                for _ in 0..dim {
                    v.push(idx % dim);
                    idx /= dim;
                }
                Transformation(v)
            };
            let action: Vec<Vec<usize>> = sig
                .transformations()
                .iter()
                .map(|tau| {
                    (0..n)
                        .map(|p| {
                            let y = decode(relabel[p]);
                            relabel
                                .iter()
                                .position(|&q| q == encode(&y.compose(tau)))
                                .unwrap()
                        })
                        .collect()
                })
                .collect();
            (n, action)
        }
        _ => {
            let action: Vec<Vec<usize>> =
                sig.transformations().iter().map(|_| vec![0]).collect();
            (1, action)
        }
    };
    let t: Vec<Rel> = (0..dim)
        .map(|_| random_rel(r, universe, 0.5))
        .collect();
    let d = if with_diagonals {
        (0..dim * dim)
            .map(|_| {
                (0..universe)
                    .filter(|_| r.gen_bool(0.5))
                    .collect::<BTreeSet<usize>>()
            })
            .collect()
    } else {
        Vec::new()
    };
    Frame::from_action(sig, universe, t, &action, d)
}

/// A random Boolean homomorphism `A -> B` presented by a random atom map
/// `At(B) -> At(A)`; always a Boolean homomorphism, an operator
/// homomorphism only by luck.
pub fn random_boolean_hom(
    r: &mut ChaCha8Rng,
    a: &FiniteBao,
    b: &FiniteBao,
) -> (AlgebraMorphism, Vec<usize>) {
    let atom_map: Vec<usize> = (0..b.atom_count())
        .map(|_| r.gen_range(0..a.atom_count()))
        .collect();
    let map: Vec<Elem> = a
        .elements()
        .map(|x| {
            let mut out = 0;
            for (bi, &ai) in atom_map.iter().enumerate() {
                if crate::boolean::leq(1 << ai, x) {
                    out |= 1 << bi;
                }
            }
            out
        })
        .collect();
    let h = AlgebraMorphism::new(a.clone(), b.clone(), map).expect("atom map lifts");
    debug_assert!(h.is_boolean_homomorphism());
    (h, atom_map)
}

/// The `k`-fold disjoint union of `f` with the fold map back onto `f`.
pub fn fold_morphism(f: &Frame, k: usize) -> Result<FrameMorphism> {
    let n = f.universe();
    let shift = |rel: &Rel, by: usize| -> Rel {
        rel.iter().map(|&(a, b)| (a + by, b + by)).collect()
    };
    let mut t: Vec<Rel> = (0..f.sig().dim()).map(|_| Rel::new()).collect();
    let mut s: Vec<Rel> = (0..f.sig().transformations().len())
        .map(|_| Rel::new())
        .collect();
    let mut d: Vec<BTreeSet<usize>> = if f.sig().with_diagonals() {
        vec![BTreeSet::new(); f.sig().dim() * f.sig().dim()]
    } else {
        Vec::new()
    };
    for copy in 0..k {
        let by = copy * n;
        for i in 0..f.sig().dim() {
            t[i].extend(shift(f.t(i), by));
        }
        for idx in 0..s.len() {
            s[idx].extend(shift(f.s(idx), by));
        }
        for (slot, set) in d.iter_mut().enumerate() {
            let i = slot / f.sig().dim();
            let j = slot % f.sig().dim();
            set.extend(f.d(i, j).iter().map(|&p| p + by));
        }
    }
    let source = Frame::new(f.sig().clone(), k * n, t, s, d)?;
    let map = (0..k * n).map(|p| p % n).collect();
    FrameMorphism::new(source, f.clone(), map)
}

/// Projection from the product of `f` with a full-relation companion of
/// the same signature, a surjective bounded morphism onto `f`.
pub fn blowup_morphism(f: &Frame, companion_points: usize) -> Result<FrameMorphism> {
    let sig = f.sig().clone();
    let full: Rel = (0..companion_points)
        .flat_map(|a| (0..companion_points).map(move |b| (a, b)))
        .collect();
    let t = vec![full; sig.dim()];
    let action: Vec<Vec<usize>> = sig
        .transformations()
        .iter()
        .map(|_| (0..companion_points).collect())
        .collect();
    let d = if sig.with_diagonals() {
        vec![
            (0..companion_points).collect::<BTreeSet<usize>>();
            sig.dim() * sig.dim()
        ]
    } else {
        Vec::new()
    };
    let companion = Frame::from_action(sig, companion_points, t, &action, d)?;
    let product = product_frame(&[f.clone(), companion.clone()])?;
    // Product rank: index = x + f.universe() * y.
    let map = (0..product.universe()).map(|p| p % f.universe()).collect();
    FrameMorphism::new(product, f.clone(), map)
}

/// A random surjective bounded morphism onto `target`.
pub fn random_bounded_surjection(
    r: &mut ChaCha8Rng,
    target: &Frame,
) -> Result<FrameMorphism> {
    match r.gen_range(0..3) {
        0 => fold_morphism(target, r.gen_range(1..=2)),
        1 => blowup_morphism(target, 2),
        _ => Ok(FrameMorphism::identity(target)),
    }
}

/// Enumerate, up to isomorphism, the frames on `1..=max_points` points
/// over the full monoid of `dim` (diagonal-free) whose complex algebras
/// satisfy the given equations.
pub fn enumerate_schema_frames(
    dim: usize,
    max_points: usize,
    eqs: &[Equation],
) -> Result<Vec<Frame>> {
    let sig = Signature::full(dim, false)?;
    let mut out: Vec<Frame> = Vec::new();
    for n in 1..=max_points {
        let actions = enumerate_actions(&sig, n);
        // Candidate relations per index, pre-filtered by the
        // single-cylindrifier equations on a one-dimensional probe.
        let rel_candidates = plausible_relations(n, eqs)?;
        for action in &actions {
            let mut chosen = vec![0usize; dim];
            loop {
                let t: Vec<Rel> = chosen
                    .iter()
                    .map(|&c| rel_candidates[c].clone())
                    .collect();
                if let Ok(frame) =
                    Frame::from_action(sig.clone(), n, t, action, Vec::new())
                {
                    if let Ok(cm) = complex_algebra(&frame) {
                        let valid = eqs
                            .iter()
                            .try_fold(true, |acc, eq| {
                                Ok::<bool, crate::error::Error>(
                                    acc && check_equation(&cm, eq)?.is_valid(),
                                )
                            })?;
                        if valid
                            && !out.iter().any(|g| frame_isomorphism(g, &frame).is_some())
                        {
                            out.push(frame);
                        }
                    }
                }
                let mut i = 0;
                while i < dim {
                    chosen[i] += 1;
                    if chosen[i] < rel_candidates.len() {
                        break;
                    }
                    chosen[i] = 0;
                    i += 1;
                }
                if i == dim {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Relations on `n` points whose one-dimensional complex algebra already
/// satisfies every single-`c` equation in `eqs`; cheap pre-filter for the
/// exhaustive frame search.
fn plausible_relations(n: usize, eqs: &[Equation]) -> Result<Vec<Rel>> {
    let probe_sig = Signature::full(1, false)?;
    let single_c: Vec<&Equation> = eqs
        .iter()
        .filter(|eq| only_cyl_zero(&eq.lhs) && only_cyl_zero(&eq.rhs))
        .collect();
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .collect();
    for mask in 0..(1u32 << pairs.len()) {
        let rel: Rel = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        let action = vec![(0..n).collect::<Vec<usize>>()];
        let frame = Frame::from_action(probe_sig.clone(), n, vec![rel.clone()], &action, vec![])?;
        let cm = complex_algebra(&frame)?;
        let mut ok = true;
        for eq in &single_c {
            if !check_equation(&cm, eq)?.is_valid() {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(rel);
        }
    }
    Ok(out)
}

/// True when the term uses no substitutions or diagonals and only the
/// cylindrifier index 0, so it can be probed in a one-dimensional
/// signature.
fn only_cyl_zero(t: &crate::term::Term) -> bool {
    use crate::term::Term;
    match t {
        Term::Var(_) | Term::Zero | Term::One => true,
        Term::Join(a, b) | Term::Meet(a, b) => only_cyl_zero(a) && only_cyl_zero(b),
        Term::Compl(a) => only_cyl_zero(a),
        Term::Cyl(i, a) => *i == 0 && only_cyl_zero(a),
        Term::Subst(_, _) | Term::Diag(_, _) => false,
    }
}

/// All injective homomorphisms from `a` into `b`, presented directly.
pub fn enumerate_monomorphisms(a: &FiniteBao, b: &FiniteBao) -> Vec<AlgebraMorphism> {
    // A mono a -> b dualizes to a surjection At(b) -> At(a); enumerate
    // those and keep the ones whose lift is an operator homomorphism.
    let na = a.atom_count();
    let nb = b.atom_count();
    if na > nb {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut atom_map = vec![0usize; nb];
    loop {
        let surjective = (0..na).all(|ai| atom_map.contains(&ai));
        if surjective {
            let map: Vec<Elem> = a
                .elements()
                .map(|x| {
                    let mut img = 0;
                    for (bi, &ai) in atom_map.iter().enumerate() {
                        if crate::boolean::leq(1 << ai, x) {
                            img |= 1 << bi;
                        }
                    }
                    img
                })
                .collect();
            if let Ok(h) = AlgebraMorphism::new(a.clone(), b.clone(), map) {
                if h.is_homomorphism() && h.is_injective() {
                    out.push(h);
                }
            }
        }
        let mut i = 0;
        while i < nb {
            atom_map[i] += 1;
            if atom_map[i] < na {
                break;
            }
            atom_map[i] = 0;
            i += 1;
        }
        if i == nb {
            break;
        }
    }
    out
}

/// Exhaustive amalgamation instances over the default positive schema:
/// every (f: A -> B, h: A -> C) with the three algebras drawn from the
/// schema-valid frame corpus.
pub fn exhaustive_amalgamation_instances(
    dim: usize,
    max_points: usize,
) -> Result<Vec<AmalgamationInstance>> {
    let mut out = Vec::new();
    for_each_amalgamation_instance(dim, max_points, |inst| {
        out.push(inst.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Streaming form of the exhaustive enumeration: visit every pair of
/// enumerated monomorphisms out of a common corpus algebra without
/// materializing the instance list. The corpus is schema-filtered and
/// the monos are checked during enumeration, so instances are built
/// with the trusted constructor. Returns the number of instances.
pub fn for_each_amalgamation_instance(
    dim: usize,
    max_points: usize,
    mut visit: impl FnMut(&AmalgamationInstance) -> Result<()>,
) -> Result<usize> {
    let sig = Signature::full(dim, false)?;
    let schema: Vec<Equation> = positive_plain_axioms(&default_schema(&sig))
        .into_iter()
        .map(|a| a.equation)
        .collect();
    let frames = enumerate_schema_frames(dim, max_points, &schema)?;
    let algebras: Vec<FiniteBao> = frames
        .iter()
        .map(complex_algebra)
        .collect::<Result<_>>()?;
    let mut count = 0usize;
    for a in &algebras {
        let mut monos_from_a: Vec<AlgebraMorphism> = Vec::new();
        for b in &algebras {
            monos_from_a.extend(enumerate_monomorphisms(a, b));
        }
        for f in &monos_from_a {
            for h in &monos_from_a {
                let inst =
                    AmalgamationInstance::trusted(f.clone(), h.clone(), schema.clone());
                visit(&inst)?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// A random instance: pick a base frame from the corpus, blow it up on
/// both sides by random bounded surjections, and dualize.
pub fn random_amalgamation_instance(
    r: &mut ChaCha8Rng,
    corpus: &[Frame],
    schema: &[Equation],
) -> Result<AmalgamationInstance> {
    let base_frame = &corpus[r.gen_range(0..corpus.len())];
    let mk = |r: &mut ChaCha8Rng| -> Result<AlgebraMorphism> {
        let m = random_bounded_surjection(r, base_frame)?;
        let h = crate::frame::inverse_image_morphism(&m)?;
        Ok(h)
    };
    let f = mk(r)?;
    let h = mk(r)?;
    AmalgamationInstance::new(f, h, schema.to_vec())
}

/// Check the hom/bounded equivalence on one random morphism instance;
/// returns (is_hom, is_bounded).
pub fn hom_bounded_probe(
    r: &mut ChaCha8Rng,
    a: &FiniteBao,
    b: &FiniteBao,
) -> Result<(bool, bool)> {
    let (h, _) = random_boolean_hom(r, a, b);
    let dual = dual_of_boolean_hom(&h)?;
    Ok((h.is_homomorphism(), crate::frame::is_bounded_morphism(&dual)))
}
