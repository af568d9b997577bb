use std::collections::VecDeque;

use super::classfn::{base_group, lambda_exponent};
use super::OracleError;
use crate::ffgroup::{Ambient, Fq, GroupHandle, UTMat};
use crate::rootsys::{positive_roots, Root};

/// Default cap on `|U : V_D|`.
pub const MACKEY_COSET_CAP: u64 = 1 << 14;

/// Right cosets `H g` of a pattern subgroup, each named by its unique member
/// supported off the roots of `H`.
struct Cosets<'a> {
    amb: &'a Ambient,
    h: &'a GroupHandle,
    outside: Vec<(usize, usize)>,
}

impl<'a> Cosets<'a> {
    fn new(amb: &'a Ambient, h: &'a GroupHandle) -> Self {
        let outside = positive_roots(amb.n()).difference(h.roots()).iter().map(Root::entry).collect();
        Cosets { amb, h, outside }
    }

    fn count(&self) -> u64 {
        self.amb.q().saturating_pow(self.outside.len() as u32)
    }

    /// Left-multiplies by root elements of `H` to clear its entries, row by row.
    fn canon(&self, g: &UTMat) -> UTMat {
        let n = self.amb.n();
        let f = self.amb.field();
        let mut x = *g;
        for r in 0..n {
            for c in r + 1..n {
                let v = x.get(r, c);
                if v != 0 && self.h.roots().contains(&Root::from_entry(r, c)) {
                    // row r -= v * row c
                    for c2 in c..n {
                        let y = x.get(c, c2);
                        if y != 0 {
                            x.set(r, c2, f.sub(x.get(r, c2), f.mul(v, y)));
                        }
                    }
                }
            }
        }
        x
    }

    fn index(&self, rep: &UTMat) -> usize {
        let q = self.amb.q();
        self.outside.iter().rev().fold(0u64, |acc, &(r, c)| acc * q + rep.get(r, c) as u64) as usize
    }

    fn rep(&self, mut idx: u64) -> UTMat {
        let q = self.amb.q();
        let mut t = self.amb.identity();
        for &(r, c) in &self.outside {
            t.set(r, c, (idx % q) as Fq);
            idx /= q;
        }
        t
    }
}

/// `<λ_D^U, λ_{D'}^U>` by Mackey's formula.
///
/// Double cosets `H x K` are the `K`-orbits on `H\U`; each contributes 1 iff
/// `y -> λ(x y x^{-1})` and `λ'` agree on Schreier generators of the
/// stabilizer `K ∩ x^{-1} H x`.
pub fn mackey_inner(
    amb: &Ambient,
    d1: &[(Root, Fq)],
    d2: &[(Root, Fq)],
    cap: u64,
) -> Result<u64, OracleError> {
    let h = base_group(amb, d1)?;
    let k = base_group(amb, d2)?;
    let cosets = Cosets::new(amb, &h);
    let total = cosets.count();
    if total > cap {
        return Err(OracleError::CapExceeded);
    }
    let p = amb.field().p() as u32;
    let gens: Vec<UTMat> = k.generators();
    let mut seen = vec![false; total as usize];
    // transversal element u with canon(x u) = this coset, for the current orbit
    let mut word: Vec<Option<UTMat>> = vec![None; total as usize];
    let mut norm = 0u64;
    for start in 0..total {
        if seen[start as usize] {
            continue;
        }
        let x = cosets.rep(start);
        let xinv = amb.inv(&x);
        let mut agree = true;
        let mut queue = VecDeque::from([start as usize]);
        seen[start as usize] = true;
        word[start as usize] = Some(amb.identity());
        let mut orbit = Vec::new();
        while let Some(c) = queue.pop_front() {
            orbit.push(c);
            let y = cosets.rep(c as u64);
            let uy = word[c].expect("orbit member");
            for s in &gens {
                let dst = cosets.index(&cosets.canon(&amb.mul(&y, s)));
                let us = amb.mul(&uy, s);
                if !seen[dst] {
                    seen[dst] = true;
                    word[dst] = Some(us);
                    queue.push_back(dst);
                } else if agree {
                    // u_y s u_dst^{-1} fixes H x
                    let st = amb.mul(&us, &amb.inv(&word[dst].expect("orbit member")));
                    let conj = amb.mul(&amb.mul(&x, &st), &xinv);
                    debug_assert!(h.contains(&conj) && k.contains(&st));
                    agree = lambda_exponent(amb, d1, &conj) % p == lambda_exponent(amb, d2, &st) % p;
                }
            }
        }
        for c in orbit {
            word[c] = None;
        }
        if agree {
            norm += 1;
        }
    }
    Ok(norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: usize, j: usize) -> Root {
        Root::new(i, j)
    }

    #[test]
    fn canonical_coset_reps() {
        let amb = Ambient::new(4, 3).unwrap();
        let h = base_group(&amb, &[(r(1, 3), 1), (r(2, 2), 1)]).unwrap();
        let cos = Cosets::new(&amb, &h);
        let g = amb.full_group();
        let mut hits = vec![0u64; cos.count() as usize];
        for i in 0..g.order() {
            let x = g.element(i);
            let c = cos.canon(&x);
            assert!(h.contains(&amb.mul(&x, &amb.inv(&c))));
            hits[cos.index(&c)] += 1;
            assert_eq!(cos.rep(cos.index(&c) as u64), c);
        }
        assert!(hits.iter().all(|&n| n == h.order()));
    }

    #[test]
    fn single_roots_have_norm_one() {
        let amb = Ambient::new(5, 2).unwrap();
        for a in positive_roots(5).iter() {
            assert_eq!(mackey_inner(&amb, &[(*a, 1)], &[(*a, 1)], MACKEY_COSET_CAP).unwrap(), 1);
        }
        let amb = Ambient::new(4, 3).unwrap();
        assert_eq!(mackey_inner(&amb, &[(r(1, 3), 1)], &[(r(1, 3), 2)], MACKEY_COSET_CAP).unwrap(), 0);
        assert_eq!(mackey_inner(&amb, &[(r(1, 3), 2)], &[(r(1, 3), 2)], MACKEY_COSET_CAP).unwrap(), 1);
    }

    #[test]
    fn crossing_pair() {
        // two crossing roots: q constituents, multiplicity 1
        let amb = Ambient::new(4, 3).unwrap();
        let d = [(r(1, 2), 1), (r(2, 3), 2)];
        assert_eq!(mackey_inner(&amb, &d, &d, MACKEY_COSET_CAP).unwrap(), 3);
    }

    #[test]
    fn cap() {
        let amb = Ambient::new(5, 2).unwrap();
        assert!(matches!(mackey_inner(&amb, &[(r(1, 4), 1)], &[(r(1, 4), 1)], 4), Err(OracleError::CapExceeded)));
    }
}
