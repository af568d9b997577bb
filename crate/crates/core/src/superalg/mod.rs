//! Symbolic algebra of elementary and basic characters.
//!
//! A basic symbol names the character `ξ_{D,φ}`: a set of pairwise separate
//! roots, each carrying a nonzero parameter `t` (the linear character
//! `c -> ψ(t c)` on its root subgroup). Sums of symbols with positive integer
//! coefficients form a [`SuperExpr`].

mod extremal;
mod rewrite;
mod stats;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffgroup::{Fq, GroupError};
use crate::polycount::{CountError, PolyQ};
use crate::rootsys::{validate_basic_set, Root, RootError, RootSet};

pub use extremal::{expand_inner_counts, extremal_constructions, CaseDescriptor, InnerRef};
pub use rewrite::{tensor_normalize, Normalizer};
pub use stats::{constituent_stats, ConstituentStats, StatEntry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperError {
    #[error("parameter must be a nonzero element of GF({q}), got {param}")]
    BadParam { q: u64, param: u64 },
    #[error("expressions live over different ambients ({0:?} vs {1:?})")]
    AmbientMismatch((usize, u64), (usize, u64)),
    #[error("a basic symbol cannot repeat a root")]
    RepeatedRoot,
    #[error("coefficient overflow")]
    CoefficientOverflow,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Field(#[from] GroupError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// One elementary character: a root and its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElemFactor {
    pub root: Root,
    pub param: Fq,
}

impl ElemFactor {
    pub fn new(root: Root, param: Fq) -> Self {
        ElemFactor { root, param }
    }

    fn key(&self) -> (usize, usize, Fq) {
        (self.root.j, self.root.i, self.param)
    }
}

/// Canonical order: by column end `j`, then row `i`, then parameter.
impl Ord for ElemFactor {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for ElemFactor {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for ElemFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}):{}", self.root.i, self.root.j, self.param)
    }
}

/// `ξ_{D,φ}`; the empty symbol is the trivial character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicSymbol {
    n: usize,
    q: u64,
    factors: Vec<ElemFactor>,
}

impl BasicSymbol {
    pub fn new(n: usize, q: u64, mut factors: Vec<ElemFactor>) -> Result<Self, SuperError> {
        for f in &factors {
            f.root.check(n)?;
            check_param(q, f.param)?;
        }
        if !factors.is_empty() {
            let set = RootSet::new(n, factors.iter().map(|f| f.root))?;
            if set.len() != factors.len() {
                return Err(SuperError::RepeatedRoot);
            }
            validate_basic_set(n, &set)?;
        }
        factors.sort();
        Ok(BasicSymbol { n, q, factors })
    }

    pub fn trivial(n: usize, q: u64) -> Self {
        BasicSymbol { n, q, factors: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn factors(&self) -> &[ElemFactor] {
        &self.factors
    }

    pub fn roots(&self) -> RootSet {
        RootSet::new(self.n, self.factors.iter().map(|f| f.root)).expect("validated")
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn terms(&self) -> Vec<(Root, Fq)> {
        self.factors.iter().map(|f| (f.root, f.param)).collect()
    }
}

impl fmt::Display for BasicSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn check_param(q: u64, param: Fq) -> Result<(), SuperError> {
    if param == 0 || param as u64 >= q {
        Err(SuperError::BadParam { q, param: param as u64 })
    } else {
        Ok(())
    }
}

/// Singleton symbol.
pub fn elementary(n: usize, q: u64, alpha: Root, t: Fq) -> Result<BasicSymbol, SuperError> {
    BasicSymbol::new(n, q, vec![ElemFactor::new(alpha, t)])
}

/// `sum (j - i)` over the factors.
pub fn degree_exponent(s: &BasicSymbol) -> usize {
    s.factors.iter().map(|f| f.root.height()).sum()
}

/// Nonnegative combination of basic symbols over one ambient `(n, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperExpr {
    n: usize,
    q: u64,
    terms: BTreeMap<Vec<ElemFactor>, u128>,
}

impl SuperExpr {
    pub fn zero(n: usize, q: u64) -> Self {
        SuperExpr { n, q, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, q: u64) -> Self {
        SuperExpr::from_symbol(&BasicSymbol::trivial(n, q))
    }

    pub fn from_symbol(s: &BasicSymbol) -> Self {
        SuperExpr { n: s.n, q: s.q, terms: BTreeMap::from([(s.factors.clone(), 1)]) }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ambient(&self) -> (usize, u64) {
        (self.n, self.q)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: &BasicSymbol, c: u128) -> Result<(), SuperError> {
        if (s.n, s.q) != (self.n, self.q) {
            return Err(SuperError::AmbientMismatch((self.n, self.q), (s.n, s.q)));
        }
        self.add_raw(s.factors.clone(), c)
    }

    pub(crate) fn add_raw(&mut self, factors: Vec<ElemFactor>, c: u128) -> Result<(), SuperError> {
        if c == 0 {
            return Ok(());
        }
        let e = self.terms.entry(factors).or_insert(0);
        *e = e.checked_add(c).ok_or(SuperError::CoefficientOverflow)?;
        Ok(())
    }

    pub fn add(&self, o: &SuperExpr) -> Result<SuperExpr, SuperError> {
        if self.ambient() != o.ambient() {
            return Err(SuperError::AmbientMismatch(self.ambient(), o.ambient()));
        }
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_raw(k.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasicSymbol, u128)> + '_ {
        self.terms
            .iter()
            .map(move |(k, c)| (BasicSymbol { n: self.n, q: self.q, factors: k.clone() }, *c))
    }

    pub fn coeff(&self, s: &BasicSymbol) -> u128 {
        self.terms.get(&s.factors).copied().unwrap_or(0)
    }

    pub fn to_doc(&self) -> Vec<TermDoc> {
        self.terms
            .iter()
            .map(|(k, c)| TermDoc { factors: k.clone(), coeff: *c })
            .collect()
    }

    pub fn from_doc(n: usize, q: u64, doc: &[TermDoc]) -> Result<SuperExpr, SuperError> {
        let mut e = SuperExpr::zero(n, q);
        for t in doc {
            let s = BasicSymbol::new(n, q, t.factors.clone())?;
            e.add_term(&s, t.coeff)?;
        }
        Ok(e)
    }
}

impl fmt::Display for SuperExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(s, c)| if c == 1 { s.to_string() } else { format!("{c}*{s}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub factors: Vec<ElemFactor>,
    pub coeff: u128,
}

/// `sum coeff * q^{degree exponent}`.
pub fn expr_total_degree(e: &SuperExpr) -> PolyQ {
    let mut acc = PolyQ::zero();
    for (k, c) in &e.terms {
        let d: usize = k.iter().map(|f| f.root.height()).sum();
        acc = &acc + &PolyQ::q().pow(d).scale(&BigInt::from(*c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: usize, j: usize) -> Root {
        Root::new(i, j)
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_exponent(&elementary(4, 2, r(1, 3), 1).unwrap()), 2);
        assert_eq!(degree_exponent(&elementary(7, 3, r(2, 5), 2).unwrap()), 3);
        assert_eq!(degree_exponent(&elementary(6, 3, r(4, 4), 2).unwrap()), 0);
        let s = BasicSymbol::new(5, 2, vec![ElemFactor::new(r(1, 4), 1), ElemFactor::new(r(2, 3), 1)]).unwrap();
        assert_eq!(degree_exponent(&s), 4);
        assert_eq!(degree_exponent(&BasicSymbol::trivial(4, 2)), 0);
        let top = BasicSymbol::new(7, 2, vec![ElemFactor::new(r(1, 6), 1), ElemFactor::new(r(2, 5), 1), ElemFactor::new(r(3, 4), 1)]).unwrap();
        assert_eq!(degree_exponent(&top), crate::rootsys::mu(7));
    }

    #[test]
    fn validation() {
        assert!(matches!(elementary(4, 3, r(1, 3), 0), Err(SuperError::BadParam { .. })));
        assert!(matches!(elementary(4, 3, r(1, 3), 3), Err(SuperError::BadParam { .. })));
        assert!(elementary(4, 3, r(2, 4), 1).is_err());
        assert!(BasicSymbol::new(4, 2, vec![ElemFactor::new(r(1, 2), 1), ElemFactor::new(r(1, 1), 1)]).is_err());
    }

    #[test]
    fn canonical_factor_order() {
        let s = BasicSymbol::new(5, 2, vec![ElemFactor::new(r(1, 4), 1), ElemFactor::new(r(2, 3), 1)]).unwrap();
        assert_eq!(s.factors()[0].root, r(2, 3));
        assert_eq!(s.to_string(), "(2,3):1*(1,4):1");
    }

    #[test]
    fn total_degree_and_json() {
        let mut e = SuperExpr::zero(3, 3);
        e.add_term(&elementary(3, 3, r(1, 2), 2).unwrap(), 3).unwrap();
        assert_eq!(expr_total_degree(&e), PolyQ::from_i64(&[0, 3]));
        let json = serde_json::to_string(&e.to_doc()).unwrap();
        let back: Vec<TermDoc> = serde_json::from_str(&json).unwrap();
        assert_eq!(SuperExpr::from_doc(3, 3, &back).unwrap(), e);
        let other = SuperExpr::one(4, 3);
        assert!(matches!(e.add(&other), Err(SuperError::AmbientMismatch(..))));
    }
}
