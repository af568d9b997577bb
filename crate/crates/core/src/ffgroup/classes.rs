use serde::{Deserialize, Serialize};

use super::{ElementDoc, GroupError, GroupHandle, UTMat};
use crate::rootsys::Root;

/// Conjugacy classes of a pattern group.
///
/// Classes are numbered in order of their smallest element index, so class 0
/// is the identity and `reps[c]` is the smallest index in class `c`.
#[derive(Debug, Clone)]
pub struct ClassData {
    group: GroupHandle,
    reps: Vec<u64>,
    sizes: Vec<u64>,
    class_of: Vec<u32>,
}

impl ClassData {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep_index(&self, c: usize) -> u64 {
        self.reps[c]
    }

    pub fn rep(&self, c: usize) -> UTMat {
        self.group.element(self.reps[c])
    }

    pub fn size(&self, c: usize) -> u64 {
        self.sizes[c]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn class_of_index(&self, idx: u64) -> usize {
        self.class_of[idx as usize] as usize
    }

    /// Class of a group member.
    pub fn class_of(&self, g: &UTMat) -> usize {
        self.class_of_index(self.group.index(g))
    }

    /// Class of the inverse of the representative of `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        let amb = self.group.ambient();
        self.class_of(&amb.inv(&self.rep(c)))
    }

    /// Class of `rep(c)^t`.
    pub fn power_class(&self, c: usize, t: u64) -> usize {
        let amb = self.group.ambient();
        self.class_of(&amb.pow(&self.rep(c), t))
    }

    pub fn to_doc(&self) -> ClassDoc {
        ClassDoc {
            schema: 1,
            n: self.group.ambient().n(),
            q: self.group.ambient().q(),
            roots: self.group.roots().iter().copied().collect(),
            reps: self.reps.iter().map(|&i| ElementDoc::from(&self.group.element(i))).collect(),
            sizes: self.sizes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub schema: u32,
    pub n: usize,
    pub q: u64,
    pub roots: Vec<Root>,
    pub reps: Vec<ElementDoc>,
    pub sizes: Vec<u64>,
}

/// Conjugation orbits under the group's generators; `cap` bounds the order.
pub fn conjugacy_classes(group: &GroupHandle, cap: u64) -> Result<ClassData, GroupError> {
    group.check_cap(cap)?;
    let amb = group.ambient();
    let order = group.order() as usize;
    let gens: Vec<(UTMat, UTMat)> = group.generators().into_iter().map(|s| (amb.inv(&s), s)).collect();
    let mut class_of = vec![u32::MAX; order];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..order {
        if class_of[start] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(start as u64);
        class_of[start] = c;
        stack.push(group.element(start as u64));
        let mut size = 0u64;
        while let Some(x) = stack.pop() {
            size += 1;
            for (si, s) in &gens {
                let y = amb.mul(&amb.mul(si, &x), s);
                let k = group.index(&y) as usize;
                if class_of[k] == u32::MAX {
                    class_of[k] = c;
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    Ok(ClassData { group: group.clone(), reps, sizes, class_of })
}

/// Center, by brute force against the generators.
pub fn center(group: &GroupHandle, cap: u64) -> Result<Vec<UTMat>, GroupError> {
    let amb = group.ambient();
    let gens = group.generators();
    Ok(group
        .elements(cap)?
        .filter(|z| gens.iter().all(|s| amb.mul(z, s) == amb.mul(s, z)))
        .collect())
}
