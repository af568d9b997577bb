use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Fq, GroupError, GroupHandle, UTMat};
use crate::rootsys::Root;

/// Outcome of checking that a generator assignment extends to an isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomCheck {
    pub bijective: bool,
    pub multiplicative: bool,
    /// Products `phi(g s) = phi(g) phi(s)` that were checked.
    pub relations_checked: u64,
}

/// Checks that `x_α(b) -> image(α, b)` on the generators of `dom` extends to
/// a homomorphism into `cod`, and whether that homomorphism is bijective.
///
/// The map is propagated over the Cayley graph of `dom`; it extends iff every
/// edge `g -> g s` satisfies `phi(g s) = phi(g) phi(s)`. When `|dom|^2 <= pair_cap`
/// all pairs are checked as well.
pub fn verify_homomorphism<F>(
    dom: &GroupHandle,
    cod: &GroupHandle,
    image: F,
    cap: u64,
    pair_cap: u64,
) -> Result<HomCheck, GroupError>
where
    F: Fn(Root, Fq) -> Option<UTMat>,
{
    dom.check_cap(cap)?;
    cod.check_cap(cap)?;
    let da = dom.ambient();
    let ca = cod.ambient();
    if da.q() != ca.q() {
        return Err(GroupError::Mismatch);
    }
    let basis = da.field().additive_basis();
    let mut gens = Vec::new();
    for r in dom.minimal_roots() {
        for &b in &basis {
            let img = image(r, b).ok_or(GroupError::UndefinedImage(r, b))?;
            gens.push((da.root_elem(r, b)?, img));
        }
    }

    let order = dom.order() as usize;
    let mut phi: Vec<Option<UTMat>> = vec![None; order];
    phi[0] = Some(ca.identity());
    let mut queue = std::collections::VecDeque::from([0u64]);
    let mut multiplicative = gens.iter().all(|(_, h)| cod.contains(h));
    let mut checked = 0u64;
    while let Some(k) = queue.pop_front() {
        let g = dom.element(k);
        let fg = phi[k as usize].expect("visited");
        for (s, fs) in &gens {
            let gs = dom.index(&da.mul(&g, s));
            let v = ca.mul(&fg, fs);
            checked += 1;
            match phi[gs as usize] {
                None => {
                    phi[gs as usize] = Some(v);
                    queue.push_back(gs);
                }
                Some(w) => multiplicative &= w == v,
            }
        }
    }
    let reached = phi.iter().all(Option::is_some);
    multiplicative &= reached;

    let mut bijective = false;
    if multiplicative {
        let mut seen = HashMap::with_capacity(order);
        for (k, v) in phi.iter().enumerate() {
            let v = v.expect("reached");
            multiplicative &= cod.contains(&v);
            seen.insert(cod.index(&v), k);
        }
        bijective = seen.len() == order && dom.order() == cod.order();
        if (order as u64).saturating_mul(order as u64) <= pair_cap {
            for a in 0..order {
                let ga = dom.element(a as u64);
                for b in 0..order {
                    let gb = dom.element(b as u64);
                    let ab = dom.index(&da.mul(&ga, &gb)) as usize;
                    checked += 1;
                    if phi[ab] != Some(ca.mul(&phi[a].unwrap(), &phi[b].unwrap())) {
                        multiplicative = false;
                    }
                }
            }
        }
    }
    Ok(HomCheck { bijective, multiplicative, relations_checked: checked })
}

/// Generator map `x_α(c) -> x_{phi(α)}(c)` for a root correspondence.
pub fn root_map_images<'a>(
    cod: &'a GroupHandle,
    pairs: &'a [(Root, Root)],
) -> impl Fn(Root, Fq) -> Option<UTMat> + 'a {
    move |r, c| {
        let (_, t) = pairs.iter().find(|(s, _)| *s == r)?;
        cod.ambient().root_elem(*t, c).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffgroup::Ambient;
    use crate::rootsys::t_k_embedding;

    #[test]
    fn t_k_maps_are_isomorphisms() {
        for q in [2u64, 3] {
            let emb = t_k_embedding(4, 1).unwrap();
            let dom = GroupHandle::new(&Ambient::new(4, q).unwrap(), emb.roots.clone()).unwrap();
            let cod = Ambient::new(3, q).unwrap().full_group();
            assert_eq!(dom.order(), q.pow(3));
            let chk = verify_homomorphism(&dom, &cod, root_map_images(&cod, &emb.phi), 1 << 21, 1 << 20).unwrap();
            assert!(chk.bijective && chk.multiplicative, "{chk:?}");
        }
    }

    #[test]
    fn generator_swap_and_collapse() {
        // swapping the two simple generators of U_3 extends to an automorphism
        let dom = Ambient::new(3, 2).unwrap().full_group();
        let cod = dom.clone();
        let pairs = [(Root::new(1, 1), Root::new(2, 2)), (Root::new(2, 2), Root::new(1, 1))];
        let chk = verify_homomorphism(&dom, &cod, root_map_images(&cod, &pairs), 1 << 21, 1 << 20).unwrap();
        assert!(chk.multiplicative && chk.bijective);
        let killer = |r: Root, c: Fq| -> Option<UTMat> {
            if r == Root::new(1, 1) {
                Some(cod.ambient().identity())
            } else {
                cod.ambient().root_elem(r, c).ok()
            }
        };
        let chk = verify_homomorphism(&dom, &cod, killer, 1 << 21, 1 << 20).unwrap();
        assert!(!chk.bijective);
    }

    #[test]
    fn non_homomorphism_detected() {
        // x_a1(1) has order 2 but is sent to an element of order 4
        let dom = Ambient::new(3, 2).unwrap().full_group();
        let cod = Ambient::new(4, 2).unwrap().full_group();
        let a = cod.ambient();
        let img = move |r: Root, _c: Fq| -> Option<UTMat> {
            if r == Root::new(1, 1) {
                Some(a.mul(&a.root_elem(Root::new(1, 1), 1).unwrap(), &a.root_elem(Root::new(2, 2), 1).unwrap()))
            } else {
                a.root_elem(Root::new(3, 3), 1).ok()
            }
        };
        let chk = verify_homomorphism(&dom, &cod, img, 1 << 21, 1 << 20).unwrap();
        assert!(!chk.multiplicative);
    }

    #[test]
    fn missing_image() {
        let dom = Ambient::new(3, 2).unwrap().full_group();
        let cod = dom.clone();
        let r = verify_homomorphism(&dom, &cod, |_, _| None, 1 << 21, 1 << 20);
        assert!(matches!(r, Err(GroupError::UndefinedImage(..))));
    }
}
