//! Concrete unitriangular groups over small finite fields.
//!
//! Elements of a pattern subgroup (a closed root set) are indexed by their
//! above-diagonal entries at the group's roots, read in canonical `(i, j)`
//! order as base-`q` digits. The entries coincide with the coordinates of the
//! normal form `prod x_α(c_α)` taken with rows in descending order.

mod classes;
mod field;
mod hom;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootsys::{positive_roots, Root, RootError, RootSet};

pub use classes::{center, conjugacy_classes, ClassData, ClassDoc};
pub use field::{FieldSpec, Fq, SUPPORTED_Q};
pub use hom::{root_map_images, verify_homomorphism, HomCheck};

/// Largest supported matrix size.
pub const MAX_N: usize = 8;
const MAX_ENTRIES: usize = MAX_N * (MAX_N - 1) / 2;

/// Default enumeration cap (elements).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unsupported field size q = {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u64),
    #[error("rank {0} outside the supported range 1..={MAX_N}")]
    UnsupportedRank(usize),
    #[error("root set is not closed: {0} + {1} is missing")]
    NotClosed(Root, Root),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    #[error("rank or field mismatch between operands")]
    Mismatch,
    #[error("no image given for generator x_{0}({1})")]
    UndefinedImage(Root, Fq),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Unitriangular matrix; only the strictly upper entries are stored, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UTMat {
    n: u8,
    e: [Fq; MAX_ENTRIES],
}

impl fmt::Debug for UTMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UTMat{:?}", self.entries())
    }
}

#[inline]
fn offset(n: usize, r: usize, c: usize) -> usize {
    debug_assert!(r < c && c < n);
    r * n - r * (r + 1) / 2 + (c - r - 1)
}

impl UTMat {
    pub fn identity(n: usize) -> Self {
        UTMat { n: n as u8, e: [0; MAX_ENTRIES] }
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    /// Entry at zero-based `(r, c)`; diagonal is 1, below-diagonal 0.
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        use std::cmp::Ordering::*;
        match r.cmp(&c) {
            Less => self.e[offset(self.n as usize, r, c)],
            Equal => 1,
            Greater => 0,
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fq) {
        let n = self.n as usize;
        self.e[offset(n, r, c)] = v;
    }

    pub fn at_root(&self, r: &Root) -> Fq {
        let (a, b) = r.entry();
        self.get(a, b)
    }

    /// Above-diagonal entries in canonical `(i, j)` root order.
    pub fn entries(&self) -> Vec<Fq> {
        let n = self.n as usize;
        self.e[..n * (n - 1) / 2].to_vec()
    }

    pub fn from_entries(n: usize, entries: &[Fq]) -> Self {
        let mut m = UTMat::identity(n);
        m.e[..entries.len()].copy_from_slice(entries);
        m
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    pub fn support(&self) -> RootSet {
        let n = self.n as usize;
        let mut s = RootSet::empty(n);
        for r in 0..n {
            for c in r + 1..n {
                if self.get(r, c) != 0 {
                    let _ = s.insert(Root::from_entry(r, c));
                }
            }
        }
        s
    }
}

/// Ambient `U_n(q)`: rank plus field, and the matrix arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambient {
    n: usize,
    field: Arc<FieldSpec>,
}

impl Ambient {
    pub fn new(n: usize, q: u64) -> Result<Self, GroupError> {
        if n == 0 || n > MAX_N {
            return Err(GroupError::UnsupportedRank(n));
        }
        Ok(Ambient { n, field: Arc::new(FieldSpec::new(q)?) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn identity(&self) -> UTMat {
        UTMat::identity(self.n)
    }

    /// `x_α(c) = I + c e_{i, j+1}`
    pub fn root_elem(&self, alpha: Root, c: Fq) -> Result<UTMat, GroupError> {
        alpha.check(self.n)?;
        let mut m = self.identity();
        let (r, col) = alpha.entry();
        m.set(r, col, c);
        Ok(m)
    }

    /// Smallest `p^a >= n`: the exponent of `U_n(q)`.
    pub fn exponent(&self) -> u32 {
        let p = self.field.p() as u32;
        let mut e = p;
        while (e as usize) < self.n {
            e *= p;
        }
        e
    }

    #[inline]
    pub fn mul(&self, a: &UTMat, b: &UTMat) -> UTMat {
        let n = self.n;
        let f = &*self.field;
        let mut out = UTMat::identity(n);
        for r in 0..n {
            for c in r + 1..n {
                let mut acc = f.add(a.e[offset(n, r, c)], b.e[offset(n, r, c)]);
                for s in r + 1..c {
                    let x = a.e[offset(n, r, s)];
                    if x != 0 {
                        acc = f.add(acc, f.mul(x, b.e[offset(n, s, c)]));
                    }
                }
                out.e[offset(n, r, c)] = acc;
            }
        }
        out
    }

    pub fn inv(&self, a: &UTMat) -> UTMat {
        // X = a^{-1}: X[r][c] = -(a[r][c] + sum_{r<s<c} a[r][s] X[s][c]), rows bottom-up
        let n = self.n;
        let f = &*self.field;
        let mut x = UTMat::identity(n);
        for r in (0..n).rev() {
            for c in r + 1..n {
                let mut acc = a.e[offset(n, r, c)];
                for s in r + 1..c {
                    let y = a.e[offset(n, r, s)];
                    if y != 0 {
                        acc = f.add(acc, f.mul(y, x.e[offset(n, s, c)]));
                    }
                }
                x.e[offset(n, r, c)] = f.neg(acc);
            }
        }
        x
    }

    /// `[a, b] = a^{-1} b^{-1} a b`
    pub fn commutator(&self, a: &UTMat, b: &UTMat) -> UTMat {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }

    /// `x^{-1} g x`
    pub fn conj(&self, g: &UTMat, x: &UTMat) -> UTMat {
        self.mul(&self.mul(&self.inv(x), g), x)
    }

    pub fn pow(&self, g: &UTMat, mut e: u64) -> UTMat {
        let mut base = *g;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The graph automorphism `g -> w0^{-1} (g^t)^{-1} w0`.
    pub fn graph_auto(&self, g: &UTMat) -> UTMat {
        let n = self.n;
        let inv = self.inv(g);
        // (g^t)^{-1} = (g^{-1})^t; conjugating by w0 sends entry (c, r) to (n-1-c, n-1-r)
        let mut out = self.identity();
        for r in 0..n {
            for c in r + 1..n {
                out.set(n - 1 - c, n - 1 - r, inv.get(r, c));
            }
        }
        out
    }

    pub fn full_group(&self) -> GroupHandle {
        GroupHandle::new(self, positive_roots(self.n)).expect("positive roots are closed")
    }
}

/// A closed-root-set (pattern) subgroup of `U_n(q)`.
#[derive(Debug, Clone)]
pub struct GroupHandle {
    amb: Ambient,
    roots: RootSet,
    offsets: Vec<usize>,
    order: u64,
}

impl PartialEq for GroupHandle {
    fn eq(&self, o: &Self) -> bool {
        self.amb == o.amb && self.roots == o.roots
    }
}
impl Eq for GroupHandle {}

impl GroupHandle {
    pub fn new(amb: &Ambient, roots: RootSet) -> Result<Self, GroupError> {
        if roots.rank() != amb.n {
            return Err(GroupError::Mismatch);
        }
        if let Some((a, b)) = roots.closure_violation() {
            return Err(GroupError::NotClosed(a, b));
        }
        let offsets = roots
            .iter()
            .map(|r| {
                let (a, b) = r.entry();
                offset(amb.n, a, b)
            })
            .collect();
        let order = (amb.q() as u128)
            .checked_pow(roots.len() as u32)
            .and_then(|o| u64::try_from(o).ok())
            .unwrap_or(u64::MAX);
        Ok(GroupHandle { amb: amb.clone(), roots, offsets, order })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.amb
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn contains(&self, g: &UTMat) -> bool {
        let n = self.amb.n;
        let mut allowed = [false; MAX_ENTRIES];
        for &o in &self.offsets {
            allowed[o] = true;
        }
        g.n as usize == n && g.e[..n * (n - 1) / 2].iter().enumerate().all(|(k, &v)| v == 0 || allowed[k])
    }

    pub fn is_subgroup_of(&self, other: &GroupHandle) -> bool {
        self.amb == other.amb && self.roots.is_subset(&other.roots)
    }

    pub fn check_cap(&self, cap: u64) -> Result<(), GroupError> {
        if self.order > cap {
            Err(GroupError::CapExceeded { order: self.order, cap })
        } else {
            Ok(())
        }
    }

    /// Index of a member; the caller guarantees membership.
    #[inline]
    pub fn index(&self, g: &UTMat) -> u64 {
        let q = self.amb.q();
        self.offsets.iter().rev().fold(0u64, |acc, &o| acc * q + g.e[o] as u64)
    }

    pub fn index_checked(&self, g: &UTMat) -> Option<u64> {
        self.contains(g).then(|| self.index(g))
    }

    #[inline]
    pub fn element(&self, mut idx: u64) -> UTMat {
        let q = self.amb.q();
        let mut m = self.amb.identity();
        for &o in &self.offsets {
            m.e[o] = (idx % q) as Fq;
            idx /= q;
        }
        m
    }

    pub fn elements(&self, cap: u64) -> Result<impl Iterator<Item = UTMat> + '_, GroupError> {
        self.check_cap(cap)?;
        Ok((0..self.order).map(move |i| self.element(i)))
    }

    /// Roots of the group that are not a sum of two of its roots.
    pub fn minimal_roots(&self) -> Vec<Root> {
        self.roots
            .iter()
            .filter(|r| {
                !self.roots.iter().any(|a| self.roots.iter().any(|b| a.add(b).as_ref() == Some(*r)))
            })
            .copied()
            .collect()
    }

    /// `x_α(b)` for minimal roots `α` and `b` in an additive basis of GF(q).
    pub fn generators(&self) -> Vec<UTMat> {
        let basis = self.amb.field().additive_basis();
        let mut out = Vec::new();
        for r in self.minimal_roots() {
            for &b in &basis {
                out.push(self.amb.root_elem(r, b).expect("member root"));
            }
        }
        out
    }
}

/// JSON form of an element: above-diagonal entries in canonical root order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementDoc(pub Vec<Fq>);

impl From<&UTMat> for ElementDoc {
    fn from(m: &UTMat) -> Self {
        ElementDoc(m.entries())
    }
}

/// `subgroup_from_roots`: checks closure and builds the handle.
pub fn subgroup_from_roots(n: usize, q: u64, roots: RootSet) -> Result<GroupHandle, GroupError> {
    GroupHandle::new(&Ambient::new(n, q)?, roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{graph_auto, hook, region_roots, Region};

    fn r(i: usize, j: usize) -> Root {
        Root::new(i, j)
    }

    #[test]
    fn root_element_commutator() {
        for q in [2, 3, 4, 5] {
            let u = Ambient::new(4, q).unwrap();
            let f = u.field();
            for a in f.nonzero() {
                for b in f.nonzero() {
                    let x = u.root_elem(r(1, 2), a).unwrap();
                    let y = u.root_elem(r(3, 3), b).unwrap();
                    // entries (1,3) and (3,4) compose into (1,4): [x, y] = x_{a1,3}(ab)
                    let c = u.commutator(&x, &y);
                    assert_eq!(c, u.root_elem(r(1, 3), f.mul(a, b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn inverse_and_identity() {
        let u = Ambient::new(5, 3).unwrap();
        assert_eq!(u.inv(&u.identity()), u.identity());
        let g = u.full_group();
        for idx in [1u64, 77, 12345, 59048] {
            let x = g.element(idx);
            assert!(u.mul(&x, &u.inv(&x)).is_identity());
            assert_eq!(g.index(&x), idx);
        }
    }

    #[test]
    fn orders() {
        let u = Ambient::new(4, 3).unwrap();
        assert_eq!(u.full_group().order(), 729);
        let u2 = Ambient::new(4, 2).unwrap();
        let g = u2.full_group();
        assert_eq!(g.order(), 64);
        assert!(g.element(0).is_identity());
        let v = GroupHandle::new(&u2, region_roots(4, r(1, 3), Region::Base).unwrap()).unwrap();
        assert_eq!(v.order(), 16);
        let h = GroupHandle::new(&u2, hook(4, r(1, 3)).unwrap()).unwrap();
        assert_eq!(h.order(), 32);
    }

    #[test]
    fn not_closed() {
        let s = RootSet::new(3, [r(1, 1), r(2, 2)]).unwrap();
        assert!(matches!(subgroup_from_roots(3, 2, s), Err(GroupError::NotClosed(..))));
    }

    #[test]
    fn index_bijection_round_trip() {
        let u = Ambient::new(4, 2).unwrap();
        let g = u.full_group();
        for i in 0..g.order() {
            assert_eq!(g.index(&g.element(i)), i);
        }
    }

    #[test]
    fn membership_matches_generated_closure() {
        // the set generated by the subgroup's generators equals its support-defined members
        let u = Ambient::new(4, 2).unwrap();
        let s = RootSet::new(4, [r(1, 1), r(2, 3), r(1, 3)]).unwrap();
        let h = GroupHandle::new(&u, s).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![u.identity()];
        seen.insert(u.identity());
        while let Some(x) = stack.pop() {
            for gen in h.generators() {
                let y = u.mul(&x, &gen);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        assert_eq!(seen.len() as u64, h.order());
        let full = u.full_group();
        let members = full.elements(1 << 10).unwrap().filter(|x| h.contains(x)).count();
        assert_eq!(members as u64, h.order());
        assert!(seen.iter().all(|x| h.contains(x)));
    }

    #[test]
    fn graph_automorphism_on_root_subgroups() {
        for (n, q) in [(7usize, 2u64), (5, 3), (4, 4)] {
            let u = Ambient::new(n, q).unwrap();
            for root in positive_roots(n).iter() {
                let x = u.root_elem(*root, 1).unwrap();
                let y = u.graph_auto(&x);
                let s = y.support();
                assert_eq!(s.len(), 1);
                assert_eq!(*s.iter().next().unwrap(), graph_auto(n, *root).unwrap());
            }
        }
        let u = Ambient::new(7, 2).unwrap();
        assert_eq!(u.graph_auto(&u.root_elem(r(1, 2), 1).unwrap()).support().to_vec(), vec![r(5, 6)]);
    }

    #[test]
    fn graph_automorphism_is_homomorphism() {
        let u = Ambient::new(5, 3).unwrap();
        let g = u.full_group();
        for (a, b) in [(5u64, 900u64), (1234, 4321), (59000, 17)] {
            let x = g.element(a);
            let y = g.element(b);
            assert_eq!(u.graph_auto(&u.mul(&x, &y)), u.mul(&u.graph_auto(&x), &u.graph_auto(&y)));
        }
    }

    #[test]
    fn exponent() {
        assert_eq!(Ambient::new(3, 3).unwrap().exponent(), 3);
        assert_eq!(Ambient::new(4, 2).unwrap().exponent(), 4);
        assert_eq!(Ambient::new(5, 2).unwrap().exponent(), 8);
        assert_eq!(Ambient::new(3, 2).unwrap().exponent(), 4);
        let u = Ambient::new(5, 2).unwrap();
        let g = u.full_group();
        assert!((0..g.order()).all(|i| u.pow(&g.element(i), 8).is_identity()));
    }

    #[test]
    fn unsupported_rank() {
        assert!(matches!(Ambient::new(9, 2), Err(GroupError::UnsupportedRank(9))));
        assert!(Ambient::new(0, 2).is_err());
    }
}
