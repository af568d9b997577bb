
use super::SuperError;
use crate::polycount::{n_top, second_any, third_inner, BaseValueTable, CountError, CountExpr, PolyQ, ThirdVariant};
use crate::rootsys::{mu, Root, RootSet};

/// An irreducible of the subtriangular block at `block` (isomorphic to
/// `U_rank(q)`) of degree `q^exponent`, tensored onto the outer template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerRef {
    pub block: Option<Root>,
    pub rank: usize,
    pub exponent: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseDescriptor {
    pub label: String,
    /// Outer basic-set templates; more than one when a joint count covers several.
    pub templates: Vec<RootSet>,
    pub inner: Option<InnerRef>,
    /// Count with the inner factor kept as the symbol `N[rank, exponent]`.
    pub count: CountExpr,
}

fn set(n: usize, v: &[(usize, usize)]) -> RootSet {
    RootSet::new(n, v.iter().map(|&(i, j)| Root::new(i, j))).expect("in range")
}

fn inner(n: usize, depth: usize, drop: usize) -> InnerRef {
    // block α_{depth+1, n-depth-1} spans U_{n-2 depth}
    let rank = n - 2 * depth;
    let block = (rank >= 2).then(|| Root::new(depth + 1, n - depth - 1));
    InnerRef { block, rank, exponent: mu(rank) - drop }
}

fn counted(coeff: PolyQ, r: &InnerRef) -> CountExpr {
    CountExpr::seed((r.rank, r.exponent)).mul_poly(&coeff)
}

/// Constructions of the top (`rank_index = 1`), second and third highest degree irreducibles.
pub fn extremal_constructions(n: usize, rank_index: usize) -> Result<Vec<CaseDescriptor>, SuperError> {
    let q = PolyQ::q();
    let qm1 = PolyQ::qm1();
    let min = match rank_index {
        1 => 1,
        2 => 5,
        3 => 7,
        _ => return Err(SuperError::Unsupported(format!("rank index {rank_index}"))),
    };
    if n < min {
        return Err(CountError::RankTooSmall { n, min, what: "extremal constructions" }.into());
    }
    let m = n / 2;
    let antidiagonal = |upto: usize| set(n, &(1..=upto).map(|k| (k, n - k)).collect::<Vec<_>>());
    let out = match rank_index {
        1 => {
            let templates = if n % 2 == 1 { vec![antidiagonal(m)] } else { vec![antidiagonal(m), antidiagonal(m - 1)] };
            vec![CaseDescriptor { label: "top".into(), templates, inner: None, count: CountExpr::poly(n_top(n)) }]
        }
        2 => {
            let r1 = inner(n, 1, 1);
            let r2 = inner(n, 2, 0);
            vec![
                CaseDescriptor {
                    label: "i".into(),
                    templates: vec![set(n, &[(1, n - 1)])],
                    count: counted(qm1.clone(), &r1),
                    inner: Some(r1),
                },
                CaseDescriptor {
                    label: "ii".into(),
                    templates: vec![set(n, &[(1, n - 2), (2, n - 1)])],
                    count: counted(&q * &qm1.pow(2), &r2),
                    inner: Some(r2),
                },
            ]
        }
        _ => {
            let r1 = inner(n, 1, 2);
            let r2 = inner(n, 2, 1);
            let r3 = inner(n, 3, 0);
            let c34 = &q.pow(2) * &qm1.pow(3);
            vec![
                CaseDescriptor {
                    label: "i".into(),
                    templates: vec![set(n, &[(1, n - 1)])],
                    count: counted(qm1.clone(), &r1),
                    inner: Some(r1),
                },
                CaseDescriptor {
                    label: "ii".into(),
                    templates: vec![set(n, &[(1, n - 2), (2, n - 1)])],
                    count: counted(&q * &qm1.pow(2), &r2),
                    inner: Some(r2),
                },
                CaseDescriptor {
                    label: "iii".into(),
                    templates: vec![set(n, &[(2, n - 3), (1, n - 2), (3, n - 1)])],
                    count: counted(c34.clone(), &r3),
                    inner: Some(r3.clone()),
                },
                CaseDescriptor {
                    label: "iv".into(),
                    templates: vec![set(n, &[(1, n - 3), (3, n - 2), (2, n - 1)])],
                    count: counted(c34, &r3),
                    inner: Some(r3.clone()),
                },
                CaseDescriptor {
                    label: "v".into(),
                    templates: vec![set(n, &[(1, n - 3), (2, n - 2), (3, n - 1)])],
                    count: counted(qm1.pow(4), &r3),
                    inner: Some(r3),
                },
            ]
        }
    };
    Ok(out)
}

/// Replaces each inner symbol `N[k, e]` by the top, second or third count of
/// `U_k(q)`; third counts recurse and may leave seed symbols behind.
pub fn expand_inner_counts(
    e: &CountExpr,
    seeds: &BaseValueTable,
    variant: ThirdVariant,
) -> Result<CountExpr, SuperError> {
    let mut out = CountExpr::poly(e.constant.clone());
    for (&(k, ex), c) in &e.seeds {
        let top = mu(k);
        let value = if ex == top {
            CountExpr::poly(n_top(k))
        } else if ex + 1 == top {
            CountExpr::poly(second_any(k))
        } else if ex + 2 == top {
            third_inner(k, seeds, variant)?
        } else {
            CountExpr::seed((k, ex))
        };
        out = out.add(&value.mul_poly(c));
    }
    Ok(out.resolve(seeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycount::{n_second, n_third, SecondMode};

    #[test]
    fn top_templates() {
        let c = extremal_constructions(7, 1).unwrap();
        assert_eq!(c[0].templates, vec![set(7, &[(1, 6), (2, 5), (3, 4)])]);
        assert_eq!(c[0].count.as_poly(), Some(&PolyQ::qm1().pow(3)));
        let c = extremal_constructions(6, 1).unwrap();
        assert_eq!(c[0].templates.len(), 2);
        assert_eq!(c[0].count.as_poly(), Some(&(&PolyQ::q() * &PolyQ::qm1().pow(2))));
    }

    #[test]
    fn second_counts_sum_to_closed_form() {
        let seeds = BaseValueTable::standard();
        for n in 5..=20 {
            let total = extremal_constructions(n, 2)
                .unwrap()
                .iter()
                .fold(CountExpr::default(), |acc, c| acc.add(&expand_inner_counts(&c.count, &seeds, ThirdVariant::Prose).unwrap()));
            assert_eq!(total.as_poly(), Some(&n_second(n, SecondMode::Closed).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn third_counts_sum_to_recursion() {
        let mut seeds = BaseValueTable::standard();
        seeds.insert((5, 2), crate::polycount::SeedValue::Symbolic);
        seeds.insert((6, 4), crate::polycount::SeedValue::Symbolic);
        for n in 7..=16 {
            let total = extremal_constructions(n, 3)
                .unwrap()
                .iter()
                .fold(CountExpr::default(), |acc, c| acc.add(&expand_inner_counts(&c.count, &seeds, ThirdVariant::Prose).unwrap()));
            assert_eq!(total, n_third(n, &seeds, ThirdVariant::Prose).unwrap(), "n = {n}");
        }
        let c = extremal_constructions(7, 3).unwrap();
        assert_eq!(c[1].templates[0], set(7, &[(1, 5), (2, 6)]));
        assert_eq!(c[1].inner.as_ref().unwrap().rank, 3);
        assert_eq!(c[1].inner.as_ref().unwrap().exponent, 0);
    }

    #[test]
    fn thresholds() {
        assert!(extremal_constructions(4, 2).is_err());
        assert!(extremal_constructions(6, 3).is_err());
        assert!(extremal_constructions(0, 1).is_err());
        assert!(extremal_constructions(7, 4).is_err());
    }
}
