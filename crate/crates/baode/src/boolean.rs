//! Finite Boolean algebras given by their atoms, with filters, generated
//! filters and deterministic ultrafilter extension.
//!
//! Elements are canonical atom subsets packed into a `u32` bitmask, so
//! equality, `<=` and the Boolean operations are single machine operations.

use crate::error::{Error, Result};
use crate::limits::MAX_ATOMS;
use serde::{Deserialize, Serialize};

/// An element of a finite Boolean algebra: a bitmask over atom indices.
pub type Elem = u32;

/// The powerset Boolean algebra on `atom_count` atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBA {
    atom_count: usize,
}

impl FiniteBA {
    /// Powerset algebra on `atom_count` atoms, `1..=20`.
    pub fn new(atom_count: usize) -> Result<Self> {
        if atom_count == 0 || atom_count > MAX_ATOMS {
            return Err(Error::Size(atom_count, MAX_ATOMS));
        }
        Ok(FiniteBA { atom_count })
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn element_count(&self) -> u64 {
        1u64 << self.atom_count
    }

    pub fn top(&self) -> Elem {
        ((1u64 << self.atom_count) - 1) as Elem
    }

    pub fn complement(&self, x: Elem) -> Elem {
        !x & self.top()
    }

    pub fn contains(&self, x: Elem) -> bool {
        u64::from(x) < self.element_count()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.element_count() as Elem
    }

    /// Atoms in index order: the singletons `{0}, {1}, ...`.
    pub fn atoms(&self) -> impl Iterator<Item = Elem> {
        (0..self.atom_count).map(|i| 1 << i)
    }

    pub fn is_atom(&self, x: Elem) -> bool {
        x != 0 && x & (x - 1) == 0 && self.contains(x)
    }
}

pub fn leq(x: Elem, y: Elem) -> bool {
    x & !y == 0
}

/// A Boolean filter, kept as its principal generator. Every filter of a
/// finite BA is principal, so this is lossless: the members are exactly the
/// elements above the generator. Improper filters (generator 0) are
/// representable values, not errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Filter {
    atom_count: usize,
    generator: Elem,
}

impl Filter {
    /// The trivial filter `{1}`.
    pub fn trivial(ba: &FiniteBA) -> Self {
        Filter {
            atom_count: ba.atom_count(),
            generator: ba.top(),
        }
    }

    /// `fl(Y)`: the smallest filter containing every element of `Y`, i.e.
    /// all `z` with `y1 · ... · yk <= z` for finitely many `yi` in `Y`.
    pub fn generated(ba: &FiniteBA, ys: &[Elem]) -> Self {
        let generator = ys.iter().fold(ba.top(), |acc, &y| acc & y);
        Filter {
            atom_count: ba.atom_count(),
            generator,
        }
    }

    pub fn from_generator(ba: &FiniteBA, generator: Elem) -> Self {
        Filter {
            atom_count: ba.atom_count(),
            generator,
        }
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn contains(&self, x: Elem) -> bool {
        leq(self.generator, x)
    }

    pub fn is_proper(&self) -> bool {
        self.generator != 0
    }

    /// True iff for every `x` exactly one of `x`, `-x` is a member.
    pub fn is_ultra(&self, ba: &FiniteBA) -> bool {
        ba.is_atom(self.generator)
    }

    pub fn members(&self, ba: &FiniteBA) -> Vec<Elem> {
        ba.elements().filter(|&x| self.contains(x)).collect()
    }
}

/// Deterministic ultrafilter extension: walk the elements in ascending
/// bitmask order and adopt the first undecided element whose addition keeps
/// the filter proper, otherwise its complement.
pub fn extend_to_ultrafilter(ba: &FiniteBA, f: &Filter) -> Result<Filter> {
    if !f.is_proper() {
        return Err(Error::ImproperFilter);
    }
    let mut gen = f.generator();
    for x in ba.elements() {
        if leq(gen, x) || leq(gen, ba.complement(x)) {
            continue;
        }
        if gen & x != 0 {
            gen &= x;
        } else {
            gen &= ba.complement(x);
        }
    }
    debug_assert!(ba.is_atom(gen));
    Ok(Filter::from_generator(ba, gen))
}

/// One ultrafilter per atom, in atom order.
pub fn enumerate_ultrafilters(ba: &FiniteBA) -> Vec<Filter> {
    ba.atoms().map(|a| Filter::from_generator(ba, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mk_finite_ba_sizes() {
        assert_eq!(FiniteBA::new(1).unwrap().element_count(), 2);
        assert_eq!(FiniteBA::new(2).unwrap().element_count(), 4);
        assert_eq!(FiniteBA::new(3).unwrap().element_count(), 8);
        assert!(FiniteBA::new(0).is_err());
        assert!(FiniteBA::new(21).is_err());
    }

    #[test]
    fn boolean_axioms_exhaustive() {
        // Associativity, distributivity, complementation for <= 4 atoms.
        for n in 1..=4 {
            let ba = FiniteBA::new(n).unwrap();
            for x in ba.elements() {
                assert_eq!(x | ba.complement(x), ba.top());
                assert_eq!(x & ba.complement(x), 0);
                for y in ba.elements() {
                    for z in ba.elements() {
                        assert_eq!((x | y) | z, x | (y | z));
                        assert_eq!((x & y) & z, x & (y & z));
                        assert_eq!(x & (y | z), (x & y) | (x & z));
                        assert_eq!(x | (y & z), (x | y) & (x | z));
                    }
                }
            }
        }
    }

    #[test]
    fn generated_filter_examples() {
        let ba = FiniteBA::new(2).unwrap();
        // Empty generator set gives {1}.
        let f = Filter::generated(&ba, &[]);
        assert_eq!(f.members(&ba), vec![ba.top()]);
        // 0 generates the improper filter (everything).
        let f = Filter::generated(&ba, &[0]);
        assert!(!f.is_proper());
        assert_eq!(f.members(&ba).len(), 4);
        // Y = {{0}} in the 2-atom BA: {{0},{0,1}}.
        let f = Filter::generated(&ba, &[0b01]);
        assert_eq!(f.members(&ba), vec![0b01, 0b11]);
    }

    #[test]
    fn generated_filter_idempotent() {
        let ba = FiniteBA::new(3).unwrap();
        for x in ba.elements() {
            for y in ba.elements() {
                let f = Filter::generated(&ba, &[x, y]);
                let again = Filter::generated(&ba, &f.members(&ba));
                assert_eq!(f, again);
            }
        }
    }

    #[test]
    fn is_proper_examples() {
        let ba = FiniteBA::new(2).unwrap();
        assert!(Filter::trivial(&ba).is_proper());
        assert!(!Filter::generated(&ba, &[0]).is_proper());
        // fl of the two atoms: meet is 0, improper.
        assert!(!Filter::generated(&ba, &[0b01, 0b10]).is_proper());
    }

    #[test]
    fn extend_to_ultrafilter_examples() {
        let ba = FiniteBA::new(2).unwrap();
        // {1} extends to the atom-0 ultrafilter under the index tie-break.
        let u = extend_to_ultrafilter(&ba, &Filter::trivial(&ba)).unwrap();
        assert_eq!(u.members(&ba), vec![0b01, 0b11]);
        // A principal filter on an atom is already ultra and stays itself.
        let f = Filter::generated(&ba, &[0b10]);
        assert!(f.is_ultra(&ba));
        assert_eq!(extend_to_ultrafilter(&ba, &f).unwrap(), f);
        // fl{{0,1}} goes deterministically to the filter containing {0}.
        let f = Filter::generated(&ba, &[0b11]);
        let u = extend_to_ultrafilter(&ba, &f).unwrap();
        assert!(u.contains(0b01));
        // Improper input is rejected.
        assert!(extend_to_ultrafilter(&ba, &Filter::generated(&ba, &[0])).is_err());
    }

    #[test]
    fn ultrafilter_extension_is_maximal_and_extends() {
        let ba = FiniteBA::new(4).unwrap();
        for g in 1..ba.element_count() as Elem {
            let f = Filter::from_generator(&ba, g);
            let u = extend_to_ultrafilter(&ba, &f).unwrap();
            assert!(u.is_proper());
            assert!(u.is_ultra(&ba));
            for m in f.members(&ba) {
                assert!(u.contains(m));
            }
            for x in ba.elements() {
                assert!(u.contains(x) ^ u.contains(ba.complement(x)));
            }
        }
    }

    #[test]
    fn every_ultrafilter_is_principal_on_an_atom() {
        for n in 1..=3 {
            let ba = FiniteBA::new(n).unwrap();
            let us = enumerate_ultrafilters(&ba);
            assert_eq!(us.len(), n);
            for (i, u) in us.iter().enumerate() {
                assert_eq!(u.generator(), 1 << i);
                assert!(u.is_ultra(&ba));
            }
            // Maximality, exhaustively: no proper filter strictly extends one.
            for u in &us {
                for g in 1..ba.element_count() as Elem {
                    let f = Filter::from_generator(&ba, g);
                    if f.contains(u.generator()) && f != *u {
                        assert!(!f.is_proper() || !u.members(&ba).iter().all(|m| f.contains(*m)));
                    }
                }
            }
        }
    }
}
