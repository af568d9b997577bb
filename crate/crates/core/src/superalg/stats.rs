use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{degree_exponent, BasicSymbol, SuperError};
use crate::polycount::PolyQ;
use crate::rootsys::{classify_pair, decompose_basic_set, validate_basic_set, Relation, Root, RootSet};

/// `count` distinct irreducible constituents of degree `q^exponent`, each with `multiplicity`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatEntry {
    pub exponent: usize,
    pub count: PolyQ,
    pub multiplicity: PolyQ,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstituentStats {
    pub entries: Vec<StatEntry>,
}

impl ConstituentStats {
    fn single(exponent: usize, count: PolyQ, multiplicity: PolyQ) -> Self {
        ConstituentStats { entries: vec![StatEntry { exponent, count, multiplicity }] }
    }

    /// `sum count * multiplicity * q^exponent`
    pub fn total_degree(&self) -> PolyQ {
        self.entries.iter().fold(PolyQ::zero(), |acc, e| {
            &acc + &(&(&e.count * &e.multiplicity) * &PolyQ::q().pow(e.exponent))
        })
    }

    /// `sum count * multiplicity^2`
    pub fn norm(&self) -> PolyQ {
        self.entries.iter().fold(PolyQ::zero(), |acc, e| {
            &acc + &(&e.count * &(&e.multiplicity * &e.multiplicity))
        })
    }

    /// Constituents of a product over a decomposition `D = A ⊔ B`.
    fn product(&self, o: &ConstituentStats) -> ConstituentStats {
        let mut merged: BTreeMap<(usize, Vec<BigInt>), PolyQ> = BTreeMap::new();
        for a in &self.entries {
            for b in &o.entries {
                let m = &a.multiplicity * &b.multiplicity;
                let key = (a.exponent + b.exponent, m.coeffs().to_vec());
                let c = &a.count * &b.count;
                let e = merged.entry(key).or_insert_with(PolyQ::zero);
                *e = &*e + &c;
            }
        }
        ConstituentStats {
            entries: merged
                .into_iter()
                .map(|((exponent, m), count)| StatEntry { exponent, count, multiplicity: PolyQ::from_coeffs(m) })
                .collect(),
        }
    }
}

fn set(n: usize, v: &[(usize, usize)]) -> RootSet {
    RootSet::new(n, v.iter().map(|&(i, j)| Root::new(i, j))).expect("in range")
}

fn stats_of(n: usize, d: &RootSet) -> Result<ConstituentStats, SuperError> {
    let one = PolyQ::one;
    let q = PolyQ::q;
    match d.len() {
        0 => return Ok(ConstituentStats::single(0, one(), one())),
        1 => return Ok(ConstituentStats::single(d.iter().next().unwrap().height(), one(), one())),
        _ => {}
    }
    let basic = validate_basic_set(n, d)?;
    if let Some(w) = decompose_basic_set(&basic) {
        return Ok(stats_of(n, w.part_a.roots())?.product(&stats_of(n, w.part_b.roots())?));
    }
    let heights: usize = d.iter().map(|r| r.height()).sum();
    if d.len() == 2 {
        let v = d.to_vec();
        return match classify_pair(n, v[0], v[1])?.relation {
            Relation::SeparateDisjoint => Ok(ConstituentStats::single(heights, one(), one())),
            Relation::SeparateCrossing => Ok(ConstituentStats::single(heights - 1, q(), one())),
            other => Err(SuperError::Unsupported(format!("pair relation {other:?}"))),
        };
    }
    if d.len() == 3 && n >= 7 {
        let nested = set(n, &[(2, n - 3), (1, n - 2), (3, n - 1)]);
        let mirrored = set(n, &[(1, n - 3), (3, n - 2), (2, n - 1)]);
        let staircase = set(n, &[(1, n - 3), (2, n - 2), (3, n - 1)]);
        if *d == nested || *d == mirrored {
            return Ok(ConstituentStats::single(3 * n - 14, q().pow(2), one()));
        }
        if *d == staircase {
            return Ok(ConstituentStats {
                entries: vec![
                    StatEntry { exponent: 3 * n - 15, count: q().pow(2), multiplicity: one() },
                    StatEntry { exponent: 3 * n - 14, count: PolyQ::qm1(), multiplicity: q() },
                ],
            });
        }
    }
    Err(SuperError::Unsupported(format!("constituents of the basic set {d} are not known")))
}

/// Constituent statistics for the configurations whose decomposition is known.
pub fn constituent_stats(s: &BasicSymbol) -> Result<ConstituentStats, SuperError> {
    let stats = stats_of(s.rank(), &s.roots())?;
    debug_assert_eq!(stats.total_degree(), PolyQ::q().pow(degree_exponent(s)));
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::super::ElemFactor;
    use super::*;

    fn sym(n: usize, v: &[(usize, usize)]) -> BasicSymbol {
        BasicSymbol::new(n, 2, v.iter().map(|&(i, j)| ElemFactor::new(Root::new(i, j), 1)).collect()).unwrap()
    }

    #[test]
    fn known_configurations() {
        let s = constituent_stats(&sym(4, &[(1, 2), (2, 3)])).unwrap();
        assert_eq!(s.entries, vec![StatEntry { exponent: 1, count: PolyQ::q(), multiplicity: PolyQ::one() }]);
        let s = constituent_stats(&sym(7, &[(1, 4), (2, 5), (3, 6)])).unwrap();
        assert_eq!(s.entries.len(), 2);
        assert_eq!(s.entries[0], StatEntry { exponent: 6, count: PolyQ::q().pow(2), multiplicity: PolyQ::one() });
        assert_eq!(s.entries[1], StatEntry { exponent: 7, count: PolyQ::qm1(), multiplicity: PolyQ::q() });
        assert_eq!(s.norm().eval_u64(2), 8.into());
        let s = constituent_stats(&sym(7, &[(2, 4), (1, 5), (3, 6)])).unwrap();
        assert_eq!(s.norm().eval_u64(2), 4.into());
        let s = constituent_stats(&sym(5, &[(2, 3)])).unwrap();
        assert_eq!(s.entries, vec![StatEntry { exponent: 1, count: PolyQ::one(), multiplicity: PolyQ::one() }]);
    }

    #[test]
    fn products_and_degree_identity() {
        // crossing pair beside a separate far-away root
        let s = constituent_stats(&sym(7, &[(1, 2), (2, 3), (5, 6)])).unwrap();
        assert_eq!(s.total_degree(), PolyQ::q().pow(3));
        assert_eq!(s.entries[0].count, PolyQ::q());
    }

    #[test]
    fn unsupported() {
        assert!(matches!(constituent_stats(&sym(6, &[(1, 3), (2, 4), (3, 5)])), Err(SuperError::Unsupported(_))));
    }
}
