use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{ElemFactor, SuperError, SuperExpr};
use crate::ffgroup::FieldSpec;
use crate::rootsys::{arm, leg, Root};

type Normal = Arc<BTreeMap<Vec<ElemFactor>, u128>>;

/// Memoized normalizer for products of elementary characters over one ambient.
///
/// The memo is keyed by the sorted factor multiset, so it is a pure cache.
pub struct Normalizer {
    n: usize,
    q: u64,
    field: FieldSpec,
    memo: HashMap<Vec<ElemFactor>, Normal>,
}

fn same_line(a: &Root, b: &Root) -> bool {
    a.i == b.i || a.j == b.j
}

impl Normalizer {
    pub fn new(n: usize, q: u64) -> Result<Self, SuperError> {
        Ok(Normalizer { n, q, field: FieldSpec::new(q)?, memo: HashMap::new() })
    }

    fn nonzero(&self) -> impl Iterator<Item = u8> {
        1..self.q as u8
    }

    /// Elementary factors at every root of `roots` with every nonzero parameter.
    fn spread(&self, roots: impl IntoIterator<Item = Root>) -> Vec<ElemFactor> {
        let mut out = Vec::new();
        for r in roots {
            for u in self.nonzero() {
                out.push(ElemFactor::new(r, u));
            }
        }
        out
    }

    /// `1 + sum` over `spread(roots)`, each term alongside `keep`.
    fn with_optional(&self, keep: &[ElemFactor], extra: Vec<ElemFactor>) -> Vec<Vec<ElemFactor>> {
        let mut out = vec![keep.to_vec()];
        for e in extra {
            let mut v = keep.to_vec();
            v.push(e);
            out.push(v);
        }
        out
    }

    /// Replacement products for a non-separate pair `(x, y)`, `x <= y`.
    fn rewrite_pair(&self, x: ElemFactor, y: ElemFactor) -> Result<Vec<Vec<ElemFactor>>, SuperError> {
        let n = self.n;
        let (a, b) = (x.root, y.root);
        if a == b {
            let s = self.field.add(x.param, y.param);
            if s != 0 {
                // (λ_s ⊗ λ_t)^U times the arm permutation character
                let keep = [ElemFactor::new(a, s)];
                return Ok(self.with_optional(&keep, self.spread(arm(n, a)?.iter().copied())));
            }
            // conjugate pair: {1 + arm terms} x {1 + leg terms}
            let ones: Vec<Option<ElemFactor>> = std::iter::once(None)
                .chain(self.spread(arm(n, a)?.iter().copied()).into_iter().map(Some))
                .collect();
            let twos: Vec<Option<ElemFactor>> = std::iter::once(None)
                .chain(self.spread(leg(n, a)?.iter().copied()).into_iter().map(Some))
                .collect();
            let mut out = Vec::with_capacity(ones.len() * twos.len());
            for u in &ones {
                for v in &twos {
                    out.push(u.iter().chain(v.iter()).copied().collect());
                }
            }
            return Ok(out);
        }
        // one root lies in the other's arm or leg; the outer factor survives
        let (outer, inner) = if leg(n, a)?.contains(&b) || arm(n, a)?.contains(&b) { (x, y) } else { (y, x) };
        let extra = if leg(n, outer.root)?.contains(&inner.root) {
            self.spread(arm(n, inner.root)?.iter().copied())
        } else {
            debug_assert!(arm(n, outer.root)?.contains(&inner.root));
            self.spread(leg(n, inner.root)?.iter().copied())
        };
        Ok(self.with_optional(&[outer], extra))
    }

    /// Normal form of the product of the given elementary characters.
    pub fn normalize(&mut self, mut factors: Vec<ElemFactor>) -> Result<Normal, SuperError> {
        factors.sort();
        if let Some(hit) = self.memo.get(&factors) {
            return Ok(hit.clone());
        }
        let pair = (0..factors.len())
            .flat_map(|a| (a + 1..factors.len()).map(move |b| (a, b)))
            .find(|&(a, b)| same_line(&factors[a].root, &factors[b].root));
        let result: Normal = match pair {
            None => Arc::new(BTreeMap::from([(factors.clone(), 1u128)])),
            Some((a, b)) => {
                let rest: Vec<ElemFactor> = factors
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != a && k != b)
                    .map(|(_, f)| *f)
                    .collect();
                let mut acc: BTreeMap<Vec<ElemFactor>, u128> = BTreeMap::new();
                for repl in self.rewrite_pair(factors[a], factors[b])? {
                    let mut next = rest.clone();
                    next.extend(repl);
                    let sub = self.normalize(next)?;
                    for (k, c) in sub.iter() {
                        let e = acc.entry(k.clone()).or_insert(0);
                        *e = e.checked_add(*c).ok_or(SuperError::CoefficientOverflow)?;
                    }
                }
                Arc::new(acc)
            }
        };
        self.memo.insert(factors, result.clone());
        Ok(result)
    }

    /// Normal form of `e1 ⊗ e2`.
    pub fn tensor(&mut self, e1: &SuperExpr, e2: &SuperExpr) -> Result<SuperExpr, SuperError> {
        for e in [e1, e2] {
            if e.ambient() != (self.n, self.q) {
                return Err(SuperError::AmbientMismatch((self.n, self.q), e.ambient()));
            }
        }
        let mut out = SuperExpr::zero(self.n, self.q);
        for (k1, c1) in &e1.terms {
            for (k2, c2) in &e2.terms {
                let c = c1.checked_mul(*c2).ok_or(SuperError::CoefficientOverflow)?;
                let mut all = k1.clone();
                all.extend_from_slice(k2);
                for (k, m) in self.normalize(all)?.iter() {
                    out.add_raw(k.clone(), m.checked_mul(c).ok_or(SuperError::CoefficientOverflow)?)?;
                }
            }
        }
        Ok(out)
    }
}

/// Normal form of `e1 ⊗ e2` as a sum of basic symbols.
pub fn tensor_normalize(e1: &SuperExpr, e2: &SuperExpr) -> Result<SuperExpr, SuperError> {
    if e1.ambient() != e2.ambient() {
        return Err(SuperError::AmbientMismatch(e1.ambient(), e2.ambient()));
    }
    Normalizer::new(e1.rank(), e1.q())?.tensor(e1, e2)
}
