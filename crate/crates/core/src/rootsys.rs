//! Positive roots of type A_{n-1} and the root-set regions built from them.
//!
//! A root `α_{i,j} = α_i + ... + α_j` (1-based, `i <= j <= n-1`) sits at matrix
//! entry `(i, j+1)` of an `n x n` unitriangular matrix. All sets are ordered by
//! `(i, j)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root ({i},{j}) is out of bounds for rank {n}")]
    OutOfBounds { n: usize, i: usize, j: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("roots {0} and {1} lie on the same row")]
    SameRow(Root, Root),
    #[error("roots {0} and {1} lie on the same column")]
    SameColumn(Root, Root),
    #[error("a basic set must be nonempty")]
    EmptySet,
    #[error("cut index {k} out of range for rank {n}")]
    CutOutOfRange { n: usize, k: usize },
    #[error("internal: root set {0} is not closed")]
    NotClosed(String),
}

/// The positive root `α_{i,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub const fn new(i: usize, j: usize) -> Self {
        Root { i, j }
    }

    pub const fn simple(i: usize) -> Self {
        Root { i, j: i }
    }

    pub fn height(&self) -> usize {
        self.j - self.i
    }

    pub fn is_simple(&self) -> bool {
        self.i == self.j
    }

    /// Zero-based matrix entry `(row, col)` carrying this root.
    pub fn entry(&self) -> (usize, usize) {
        (self.i - 1, self.j)
    }

    /// Inverse of [`Root::entry`]; `row < col` required.
    pub fn from_entry(row: usize, col: usize) -> Self {
        debug_assert!(row < col);
        Root::new(row + 1, col)
    }

    pub fn check(&self, n: usize) -> Result<(), RootError> {
        if self.i >= 1 && self.i <= self.j && self.j < n {
            Ok(())
        } else {
            Err(RootError::OutOfBounds { n, i: self.i, j: self.j })
        }
    }

    /// `α + β` if it is a root.
    pub fn add(&self, other: &Root) -> Option<Root> {
        if self.j + 1 == other.i {
            Some(Root::new(self.i, other.j))
        } else if other.j + 1 == self.i {
            Some(Root::new(other.i, self.j))
        } else {
            None
        }
    }

    pub fn is_separate(&self, other: &Root) -> bool {
        self.i != other.i && self.j != other.j
    }

    /// Membership in the interval triangle `{α_{k,l} : i <= k <= l <= j}`.
    pub fn in_triangle_of(&self, pivot: &Root) -> bool {
        pivot.i <= self.i && self.j <= pivot.j
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_simple() {
            write!(f, "a{}", self.i)
        } else {
            write!(f, "a{},{}", self.i, self.j)
        }
    }
}

/// A set of positive roots for a fixed ambient rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet {
    n: usize,
    roots: BTreeSet<Root>,
}

impl RootSet {
    pub fn empty(n: usize) -> Self {
        RootSet { n, roots: BTreeSet::new() }
    }

    pub fn new<I: IntoIterator<Item = Root>>(n: usize, roots: I) -> Result<Self, RootError> {
        let mut set = RootSet::empty(n);
        for r in roots {
            r.check(n)?;
            set.roots.insert(r);
        }
        Ok(set)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.roots.contains(r)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Root> + '_ {
        self.roots.iter()
    }

    pub fn to_vec(&self) -> Vec<Root> {
        self.roots.iter().copied().collect()
    }

    pub fn insert(&mut self, r: Root) -> Result<bool, RootError> {
        r.check(self.n)?;
        Ok(self.roots.insert(r))
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        RootSet { n: self.n, roots: self.roots.union(&other.roots).copied().collect() }
    }

    pub fn intersection(&self, other: &RootSet) -> RootSet {
        RootSet { n: self.n, roots: self.roots.intersection(&other.roots).copied().collect() }
    }

    pub fn difference(&self, other: &RootSet) -> RootSet {
        RootSet { n: self.n, roots: self.roots.difference(&other.roots).copied().collect() }
    }

    pub fn is_disjoint(&self, other: &RootSet) -> bool {
        self.roots.is_disjoint(&other.roots)
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.roots.is_subset(&other.roots)
    }

    /// First pair `(α, β)` of members whose sum is a root outside the set.
    pub fn closure_violation(&self) -> Option<(Root, Root)> {
        for a in &self.roots {
            for b in &self.roots {
                if let Some(s) = a.add(b) {
                    if !self.roots.contains(&s) {
                        return Some((*a, *b));
                    }
                }
            }
        }
        None
    }

    pub fn is_closed(&self) -> bool {
        self.closure_violation().is_none()
    }
}

impl fmt::Display for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.roots.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// Pairwise separate, nonempty root set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicSet(RootSet);

impl BasicSet {
    pub fn roots(&self) -> &RootSet {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Root> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookParts {
    pub arm: RootSet,
    pub leg: RootSet,
    pub hook: RootSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Base,
    Subtri,
    Radical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    Arm,
    Leg,
    SeparateDisjoint,
    SeparateCrossing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub relation: Relation,
    pub hook_overlap: RootSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub pivot: Root,
    pub part_a: BasicSet,
    pub part_b: BasicSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TkEmbedding {
    pub roots: RootSet,
    /// `(root of T_k, image root in rank n-1)`, ordered by the domain root.
    pub phi: Vec<(Root, Root)>,
}

impl TkEmbedding {
    pub fn image(&self, r: &Root) -> Option<Root> {
        self.phi.iter().find(|(a, _)| a == r).map(|(_, b)| *b)
    }
}

pub fn positive_roots(n: usize) -> RootSet {
    let mut set = RootSet::empty(n);
    for i in 1..n {
        for j in i..n {
            set.roots.insert(Root::new(i, j));
        }
    }
    set
}

pub fn hook_parts(n: usize, alpha: Root) -> Result<HookParts, RootError> {
    alpha.check(n)?;
    let arm = RootSet::new(n, (alpha.i..alpha.j).map(|l| Root::new(alpha.i, l)))?;
    let leg = RootSet::new(n, (alpha.i + 1..=alpha.j).map(|k| Root::new(k, alpha.j)))?;
    let mut hook = arm.union(&leg);
    hook.roots.insert(alpha);
    Ok(HookParts { arm, leg, hook })
}

pub fn arm(n: usize, alpha: Root) -> Result<RootSet, RootError> {
    Ok(hook_parts(n, alpha)?.arm)
}

pub fn leg(n: usize, alpha: Root) -> Result<RootSet, RootError> {
    Ok(hook_parts(n, alpha)?.leg)
}

pub fn hook(n: usize, alpha: Root) -> Result<RootSet, RootError> {
    Ok(hook_parts(n, alpha)?.hook)
}

fn triangle(n: usize, alpha: Root) -> RootSet {
    let mut set = RootSet::empty(n);
    for k in alpha.i..=alpha.j {
        for l in k..=alpha.j {
            set.roots.insert(Root::new(k, l));
        }
    }
    set
}

pub fn region_roots(n: usize, alpha: Root, kind: Region) -> Result<RootSet, RootError> {
    alpha.check(n)?;
    let all = positive_roots(n);
    Ok(match kind {
        Region::Base => all.difference(&arm(n, alpha)?),
        Region::Subtri => triangle(n, alpha),
        Region::Radical => all.difference(&triangle(n, alpha)),
    })
}

/// Roots of the base group `V_D`: everything outside the arms of `D`.
pub fn base_of_set<'a, I: IntoIterator<Item = &'a Root>>(n: usize, roots: I) -> Result<RootSet, RootError> {
    let mut out = positive_roots(n);
    for r in roots {
        out = out.difference(&arm(n, *r)?);
    }
    Ok(out)
}

pub fn classify_pair(n: usize, alpha: Root, beta: Root) -> Result<PairClass, RootError> {
    let ha = hook(n, alpha)?;
    let hb = hook(n, beta)?;
    let hook_overlap = ha.intersection(&hb);
    let relation = if alpha == beta {
        Relation::Equal
    } else if alpha.i == beta.i {
        Relation::Arm
    } else if alpha.j == beta.j {
        Relation::Leg
    } else if hook_overlap.is_empty() {
        Relation::SeparateDisjoint
    } else {
        Relation::SeparateCrossing
    };
    Ok(PairClass { relation, hook_overlap })
}

pub fn validate_basic_set(n: usize, d: &RootSet) -> Result<BasicSet, RootError> {
    if d.is_empty() {
        return Err(RootError::EmptySet);
    }
    for r in d.iter() {
        r.check(n)?;
    }
    let v = d.to_vec();
    for (x, a) in v.iter().enumerate() {
        for b in &v[x + 1..] {
            if a.i == b.i {
                return Err(RootError::SameRow(*a, *b));
            }
            if a.j == b.j {
                return Err(RootError::SameColumn(*a, *b));
            }
        }
    }
    Ok(BasicSet(RootSet { n, roots: d.roots.clone() }))
}

/// All basic sets of rank `n`, in lexicographic order of their sorted root lists.
pub fn all_basic_sets(n: usize) -> Vec<BasicSet> {
    fn go(all: &[Root], start: usize, cur: &mut Vec<Root>, n: usize, out: &mut Vec<BasicSet>) {
        for k in start..all.len() {
            let r = all[k];
            if cur.iter().all(|c| c.is_separate(&r)) {
                cur.push(r);
                out.push(BasicSet(RootSet { n, roots: cur.iter().copied().collect() }));
                go(all, k + 1, cur, n, out);
                cur.pop();
            }
        }
    }
    let all = positive_roots(n).to_vec();
    let mut out = Vec::new();
    go(&all, 0, &mut Vec::new(), n, &mut out);
    out.sort();
    out
}

/// Checks the decomposability predicates for a given pivot, returning the forced split.
pub fn witness_for_pivot(d: &BasicSet, pivot: Root) -> Option<DecompositionWitness> {
    let n = d.rank();
    let tri = triangle(n, pivot);
    let part_a = d.roots().intersection(&tri);
    let part_b = d.roots().difference(&part_a);
    if part_a.is_empty() || part_b.is_empty() {
        return None;
    }
    let hooks_clear = part_b
        .iter()
        .all(|b| hook(n, *b).map(|h| h.is_disjoint(&tri)).unwrap_or(false));
    if !hooks_clear {
        return None;
    }
    Some(DecompositionWitness { pivot, part_a: BasicSet(part_a), part_b: BasicSet(part_b) })
}

/// Every pivot that certifies `d` as decomposable, in canonical order.
pub fn all_decomposition_witnesses(d: &BasicSet) -> Vec<DecompositionWitness> {
    positive_roots(d.rank()).iter().filter_map(|p| witness_for_pivot(d, *p)).collect()
}

pub fn decompose_basic_set(d: &BasicSet) -> Option<DecompositionWitness> {
    positive_roots(d.rank()).iter().find_map(|p| witness_for_pivot(d, *p))
}

pub fn graph_auto(n: usize, alpha: Root) -> Result<Root, RootError> {
    alpha.check(n)?;
    Ok(Root::new(n - alpha.j, n - alpha.i))
}

pub fn mu(n: usize) -> usize {
    let m = n / 2;
    if n.is_multiple_of(2) {
        m * m.saturating_sub(1)
    } else {
        m * m
    }
}

pub fn t_k_embedding(n: usize, k: usize) -> Result<TkEmbedding, RootError> {
    if n < 3 || k < 1 || k + 1 >= n {
        return Err(RootError::CutOutOfRange { n, k });
    }
    let a = Root::new(1, k);
    let b = Root::new(k + 1, n - 1);
    let mut removed = RootSet::new(n, [a, b])?;
    removed = removed.union(&leg(n, a)?).union(&arm(n, b)?);
    let roots = positive_roots(n).difference(&removed);
    if let Some((x, y)) = roots.closure_violation() {
        return Err(RootError::NotClosed(format!("{roots}: {x} + {y}")));
    }

    // Simple roots of T_k in order, with their images β_1..β_{n-2}.
    let mut simples: Vec<(usize, usize)> = Vec::new(); // (first, last) simple indices covered
    for i in 1..k {
        simples.push((i, i));
    }
    simples.push((k, k + 1));
    for i in (k + 1)..=(n - 2) {
        simples.push((i + 1, i + 1));
    }

    let mut phi = Vec::with_capacity(roots.len());
    for r in roots.iter() {
        // r is a contiguous run of T_k simples; its image is the matching run of β's.
        let first = simples.iter().position(|s| s.0 == r.i);
        let last = simples.iter().position(|s| s.1 == r.j);
        match (first, last) {
            (Some(f), Some(l)) if f <= l => phi.push((*r, Root::new(f + 1, l + 1))),
            _ => return Err(RootError::NotClosed(format!("{r} is not a sum of T_k simples"))),
        }
    }
    Ok(TkEmbedding { roots, phi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: usize, j: usize) -> Root {
        Root::new(i, j)
    }

    fn set(n: usize, v: &[(usize, usize)]) -> RootSet {
        RootSet::new(n, v.iter().map(|&(i, j)| r(i, j))).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(positive_roots(3), set(3, &[(1, 1), (2, 2), (1, 2)]));
        assert_eq!(positive_roots(5).len(), 10);
        assert!(positive_roots(1).is_empty());
        for n in 1..=12 {
            assert_eq!(positive_roots(n).len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn hooks() {
        let h = hook_parts(7, r(2, 5)).unwrap();
        assert_eq!(h.arm, set(7, &[(2, 2), (2, 3), (2, 4)]));
        assert_eq!(h.leg, set(7, &[(3, 5), (4, 5), (5, 5)]));
        let s = hook_parts(7, r(3, 3)).unwrap();
        assert!(s.arm.is_empty() && s.leg.is_empty());
        let h = hook(4, r(1, 3)).unwrap();
        assert_eq!(h, set(4, &[(1, 3), (1, 1), (1, 2), (2, 3), (3, 3)]));
        assert!(hook_parts(4, r(2, 4)).is_err());
    }

    #[test]
    fn regions() {
        assert_eq!(region_roots(4, r(1, 3), Region::Base).unwrap(), set(4, &[(2, 2), (3, 3), (2, 3), (1, 3)]));
        assert!(region_roots(4, r(1, 3), Region::Radical).unwrap().is_empty());
        assert_eq!(region_roots(4, r(2, 3), Region::Radical).unwrap(), set(4, &[(1, 1), (1, 2), (1, 3)]));
        assert!(region_roots(4, r(0, 3), Region::Base).is_err());
    }

    #[test]
    fn pair_classification() {
        let c = classify_pair(4, r(1, 2), r(2, 3)).unwrap();
        assert_eq!(c.relation, Relation::SeparateCrossing);
        assert_eq!(c.hook_overlap, set(4, &[(2, 2)]));
        let c = classify_pair(5, r(1, 2), r(3, 4)).unwrap();
        assert_eq!(c.relation, Relation::SeparateDisjoint);
        assert!(c.hook_overlap.is_empty());
        assert_eq!(classify_pair(4, r(2, 3), r(1, 3)).unwrap().relation, Relation::Leg);
        assert_eq!(classify_pair(4, r(1, 1), r(1, 3)).unwrap().relation, Relation::Arm);
        assert_eq!(classify_pair(4, r(1, 3), r(1, 3)).unwrap().relation, Relation::Equal);
    }

    #[test]
    fn basic_set_validation() {
        assert!(validate_basic_set(7, &set(7, &[(1, 2), (3, 4), (2, 5), (4, 6)])).is_ok());
        assert!(matches!(validate_basic_set(4, &set(4, &[(1, 2), (1, 3)])), Err(RootError::SameRow(..))));
        assert!(matches!(validate_basic_set(4, &set(4, &[(1, 3), (2, 3)])), Err(RootError::SameColumn(..))));
        assert!(matches!(validate_basic_set(4, &RootSet::empty(4)), Err(RootError::EmptySet)));
        assert!(validate_basic_set(6, &set(6, &[(2, 4)])).is_ok());
    }

    #[test]
    fn decomposition_search() {
        let d = validate_basic_set(7, &set(7, &[(3, 3), (4, 4), (2, 5), (1, 6)])).unwrap();
        let w = decompose_basic_set(&d).expect("decomposable");
        // first witness in canonical pivot order
        assert_eq!(w.pivot, r(2, 5));
        assert_eq!(w.part_a.roots(), &set(7, &[(3, 3), (4, 4), (2, 5)]));
        assert_eq!(w.part_b.roots(), &set(7, &[(1, 6)]));
        // the split {a3, a4} | {a2,5, a1,6} is certified by pivot a3,4
        let alt = witness_for_pivot(&d, r(3, 4)).expect("valid pivot");
        assert_eq!(alt.part_a.roots(), &set(7, &[(3, 3), (4, 4)]));
        assert_eq!(alt.part_b.roots(), &set(7, &[(2, 5), (1, 6)]));
        assert!(all_decomposition_witnesses(&d).iter().any(|w| w.pivot == r(3, 4)));

        let d = validate_basic_set(7, &set(7, &[(1, 2), (3, 4), (2, 5), (4, 6)])).unwrap();
        assert!(decompose_basic_set(&d).is_none());
        let d = validate_basic_set(5, &set(5, &[(2, 3)])).unwrap();
        assert!(decompose_basic_set(&d).is_none());
    }

    #[test]
    fn graph_automorphism() {
        assert_eq!(graph_auto(7, r(1, 2)).unwrap(), r(5, 6));
        assert_eq!(graph_auto(7, r(1, 6)).unwrap(), r(1, 6));
        assert_eq!(graph_auto(5, r(2, 2)).unwrap(), r(3, 3));
    }

    #[test]
    fn mu_values() {
        assert_eq!(mu(7), 9);
        assert_eq!(mu(6), 6);
        assert_eq!(mu(2), 0);
        assert_eq!(mu(1), 0);
    }

    #[test]
    fn t_k() {
        let t = t_k_embedding(4, 1).unwrap();
        assert_eq!(t.roots, set(4, &[(3, 3), (1, 2), (1, 3)]));
        assert_eq!(t.image(&r(1, 2)), Some(r(1, 1)));
        assert_eq!(t.image(&r(3, 3)), Some(r(2, 2)));
        assert_eq!(t.image(&r(1, 3)), Some(r(1, 2)));
        assert_eq!(r(1, 2).add(&r(3, 3)), Some(r(1, 3)));
        for n in 3..=9 {
            for k in 1..n - 1 {
                assert_eq!(t_k_embedding(n, k).unwrap().roots.len(), (n - 1) * (n - 2) / 2);
            }
        }
        assert!(t_k_embedding(4, 3).is_err());
        assert!(t_k_embedding(4, 0).is_err());
    }

    #[test]
    fn basic_set_enumeration() {
        // rook placements on the staircase: 1, 2, 4 (plus empty) for small n
        assert_eq!(all_basic_sets(2).len(), 1);
        assert_eq!(all_basic_sets(3).len(), 4);
        for d in all_basic_sets(5) {
            assert!(validate_basic_set(5, d.roots()).is_ok());
        }
    }
}
