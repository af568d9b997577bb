use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::ffgroup::{conjugacy_classes, Ambient, GroupHandle};
use crate::rootsys::{hook, leg, Root, RootSet};

fn r(i: usize, j: usize) -> Root {
    Root::new(i, j)
}

fn table(n: usize, q: u64) -> CharTable {
    irr_table(&Ambient::new(n, q).unwrap().full_group(), TABLE_CAP).unwrap()
}

fn hist(n: usize, q: u64) -> BTreeMap<u32, u64> {
    degree_histogram(&table(n, q), q).unwrap()
}

#[test]
fn psi_values() {
    let f2 = crate::ffgroup::FieldSpec::new(2).unwrap();
    assert_eq!(psi(&f2, 1), Cyclo::from_int(2, -1));
    assert_eq!(psi(&f2, 0), Cyclo::one(2));
    let f4 = crate::ffgroup::FieldSpec::new(4).unwrap();
    assert_eq!(psi(&f4, 2), Cyclo::from_int(2, -1));
    let f9 = crate::ffgroup::FieldSpec::new(9).unwrap();
    for a in f9.elements() {
        for b in f9.elements() {
            assert_eq!(psi(&f9, f9.add(a, b)), &psi(&f9, a) * &psi(&f9, b));
        }
    }
}

#[test]
fn small_histograms() {
    assert_eq!(hist(3, 2), BTreeMap::from([(0, 4), (1, 1)]));
    assert_eq!(hist(3, 3), BTreeMap::from([(0, 9), (1, 2)]));
    assert_eq!(hist(4, 2), BTreeMap::from([(0, 8), (1, 6), (2, 2)]));
    assert_eq!(hist(3, 4), BTreeMap::from([(0, 16), (1, 3)]));
}

#[test]
fn column_orthogonality_u43() {
    let t = table(4, 3);
    let c = t.classes();
    let order = c.group().order() as i128;
    for a in 0..c.len() {
        for b in 0..c.len() {
            let mut acc = Cyclo::zero(3);
            for chi in t.irreducibles() {
                acc = &acc + &(chi.value(a) * &chi.value(b).conj());
            }
            let expect = if a == b { order / c.size(a) as i128 } else { 0 };
            assert_eq!(acc, Cyclo::from_int(3, expect), "columns {a} {b}");
        }
    }
}

#[test]
fn table_doc_round_trip_and_corruption() {
    let t = table(3, 3);
    let doc = t.to_doc();
    let json = serde_json::to_string(&doc).unwrap();
    let back: TableDoc = serde_json::from_str(&json).unwrap();
    let t2 = CharTable::from_doc(&back, t.classes().clone()).unwrap();
    assert_eq!(t2.irreducibles(), t.irreducibles());
    let mut bad = back.clone();
    bad.irreducibles[3].values[1][0] = "5".into();
    assert!(CharTable::from_doc(&bad, t.classes().clone()).is_err());
}

#[test]
fn linear_lambda_on_base_group() {
    let amb = Ambient::new(4, 2).unwrap();
    let v = base_group(&amb, &[(r(1, 3), 1)]).unwrap();
    let vc = Arc::new(conjugacy_classes(&v, TABLE_CAP).unwrap());
    let lam = linear_lambda(vc.clone(), &[(r(1, 3), 1)]).unwrap();
    assert_eq!(*lam.at(&amb.root_elem(r(1, 3), 1).unwrap()), Cyclo::from_int(4, -1));
    assert_eq!(*lam.at(&amb.root_elem(r(2, 3), 1).unwrap()), Cyclo::one(4));
    for q in [2u64, 3] {
        let amb = Ambient::new(4, q).unwrap();
        let v = base_group(&amb, &[(r(1, 3), 1)]).unwrap();
        let vc = Arc::new(conjugacy_classes(&v, TABLE_CAP).unwrap());
        let lam = linear_lambda(vc, &[(r(1, 3), 1)]).unwrap();
        for a in 0..v.order() {
            for b in 0..v.order() {
                let (x, y) = (v.element(a), v.element(b));
                assert_eq!(*lam.at(&amb.mul(&x, &y)), lam.at(&x) * lam.at(&y));
            }
        }
    }
    let wrong = Arc::new(conjugacy_classes(&amb.full_group(), TABLE_CAP).unwrap());
    assert!(matches!(linear_lambda(wrong, &[(r(1, 3), 1)]), Err(OracleError::WrongBaseGroup)));
    assert!(base_group(&amb, &[(r(1, 3), 0)]).is_err());
    assert!(base_group(&amb, &[(r(1, 3), 1), (r(1, 1), 1)]).is_err());
}

#[test]
fn elementary_is_irreducible_of_expected_degree() {
    let t = table(4, 2);
    let g = t.classes().clone();
    let e = elementary_character(g.clone(), r(1, 3), 1).unwrap();
    assert_eq!(e.degree(), Some(4));
    assert_eq!(e.inner_rational(&e).unwrap(), Rational::from_integer(1));
    assert_eq!(decompose_into_irr(&e, &t).unwrap().len(), 1);
    // generic induction from class data agrees with the direct route
    let amb = g.group().ambient().clone();
    let v = base_group(&amb, &[(r(1, 3), 1)]).unwrap();
    let vc = Arc::new(conjugacy_classes(&v, TABLE_CAP).unwrap());
    let lam = linear_lambda(vc, &[(r(1, 3), 1)]).unwrap();
    assert_eq!(induce(&lam, g).unwrap(), e);
}

#[test]
fn crossing_pair_splits_into_q_constituents() {
    let t = table(4, 2);
    let xi = basic_character(t.classes().clone(), &[(r(1, 2), 1), (r(2, 3), 1)]).unwrap();
    let dec = decompose_into_irr(&xi, &t).unwrap();
    assert_eq!(dec.len(), 2);
    assert!(dec.iter().all(|&(i, m)| m == 1 && t.degrees()[i] == 2));
}

#[test]
fn regular_and_trivial() {
    let t = table(4, 2);
    let g = t.classes().clone();
    let reg = ClassFunction::regular(g.clone());
    let triv = ClassFunction::trivial(g.clone());
    assert_eq!(reg.inner_rational(&triv).unwrap(), Rational::from_integer(1));
    let dec = decompose_into_irr(&reg, &t).unwrap();
    assert_eq!(dec.len(), t.len());
    let deg = t.degrees();
    assert!(dec.iter().all(|&(i, m)| m == deg[i]));
    let one = GroupHandle::new(g.group().ambient(), RootSet::empty(4)).unwrap();
    let oc = Arc::new(conjugacy_classes(&one, 1).unwrap());
    assert_eq!(induce(&ClassFunction::trivial(oc), g).unwrap(), reg);
}

#[test]
fn restriction_to_leg_group_is_regular() {
    for (n, alpha) in [(4usize, r(1, 3)), (5, r(1, 4))] {
        let g = Arc::new(conjugacy_classes(&Ambient::new(n, 2).unwrap().full_group(), TABLE_CAP).unwrap());
        let e = elementary_character(g.clone(), alpha, 1).unwrap();
        let l = GroupHandle::new(g.group().ambient(), leg(n, alpha).unwrap()).unwrap();
        let lc = Arc::new(conjugacy_classes(&l, TABLE_CAP).unwrap());
        assert_eq!(e.restrict(lc.clone()).unwrap(), ClassFunction::regular(lc));
    }
}

#[test]
fn frobenius_reciprocity() {
    let t = table(4, 3);
    let g = t.classes().clone();
    let amb = g.group().ambient().clone();
    let h = GroupHandle::new(&amb, hook(4, r(1, 3)).unwrap()).unwrap();
    let ht = irr_table(&h, TABLE_CAP).unwrap();
    for (a, psi_h) in ht.irreducibles().iter().enumerate().step_by(5) {
        let ind = induce(psi_h, g.clone()).unwrap();
        for chi in t.irreducibles().iter().step_by(7) {
            let res = chi.restrict(ht.classes().clone()).unwrap();
            assert_eq!(ind.inner(chi).unwrap(), psi_h.inner(&res).unwrap(), "hook irreducible {a}");
        }
    }
}

#[test]
fn almost_faithful_counts() {
    for (n, q, expect) in [(3usize, 2u64, 1usize), (3, 3, 2), (4, 2, 2)] {
        let t = table(n, q);
        let amb = t.classes().group().ambient().clone();
        let z = GroupHandle::new(&amb, RootSet::new(n, [r(1, n - 1)]).unwrap()).unwrap();
        let b = almost_faithful_subset(&t, &z).unwrap();
        assert_eq!(b.len() as u64, q - 1);
        assert_eq!(b.iter().map(|x| x.irreducibles.len()).sum::<usize>(), expect);
        if n == 4 {
            assert!(b.iter().flat_map(|x| &x.irreducibles).all(|&i| t.degrees()[i] == 4));
        }
        let wrong = GroupHandle::new(&amb, RootSet::new(n, [r(1, 1)]).unwrap()).unwrap();
        assert!(matches!(almost_faithful_subset(&t, &wrong), Err(OracleError::WrongCenter)));
    }
}

#[test]
fn mackey_norm_matches_decomposition() {
    let t = table(4, 3);
    let amb = t.classes().group().ambient().clone();
    for d in [vec![(r(1, 2), 1u8), (r(2, 3), 2)], vec![(r(1, 3), 2)], vec![(r(1, 1), 1), (r(2, 3), 1)]] {
        let xi = basic_character(t.classes().clone(), &d).unwrap();
        let norm: u64 = decompose_into_irr(&xi, &t).unwrap().iter().map(|&(_, m)| m * m).sum();
        assert_eq!(mackey_inner(&amb, &d, &d, MACKEY_COSET_CAP).unwrap(), norm);
    }
}
