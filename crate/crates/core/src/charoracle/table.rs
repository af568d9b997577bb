use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classfn::{conductor, ClassFunction};
use super::cyclo::{Cyclo, Rational};
use super::modp::{self, Mat};
use super::OracleError;
use crate::ffgroup::{center, conjugacy_classes, ClassData, ElementDoc, GroupHandle};
use crate::rootsys::Root;

/// Mandatory-tier order cap for tables.
pub const TABLE_CAP: u64 = 1 << 16;
/// Stretch-tier order cap.
pub const STRETCH_CAP: u64 = 1 << 21;

/// Irreducible characters, sorted by degree and then by values.
#[derive(Clone, Debug)]
pub struct CharTable {
    classes: Arc<ClassData>,
    irr: Vec<ClassFunction>,
}

impl CharTable {
    pub fn classes(&self) -> &Arc<ClassData> {
        &self.classes
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irr
    }

    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irr.iter().map(|c| c.degree().expect("degree") as u64).collect()
    }

    pub fn to_doc(&self) -> TableDoc {
        let g = self.classes.group();
        TableDoc {
            schema: 1,
            n: g.ambient().n(),
            q: g.ambient().q(),
            roots: g.roots().to_vec(),
            classes: ClassesDoc {
                reps: (0..self.classes.len()).map(|c| ElementDoc::from(&self.classes.rep(c))).collect(),
                sizes: self.classes.sizes().to_vec(),
            },
            conductor: conductor(&self.classes),
            irreducibles: self
                .irr
                .iter()
                .map(|chi| IrrDoc {
                    degree: chi.degree().expect("degree") as u64,
                    values: chi.values().iter().map(|v| v.coeffs().iter().map(ToString::to_string).collect()).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a table from its document against freshly computed classes,
    /// re-validating every invariant.
    pub fn from_doc(doc: &TableDoc, classes: Arc<ClassData>) -> Result<CharTable, OracleError> {
        let corrupt = |why: &str| OracleError::CorruptTable(why.to_string());
        let g = classes.group();
        if doc.schema != 1 || doc.n != g.ambient().n() || doc.q != g.ambient().q() || doc.roots != g.roots().to_vec() {
            return Err(corrupt("header does not match the group"));
        }
        if doc.classes.sizes != classes.sizes()
            || doc.classes.reps.len() != classes.len()
            || doc.classes.reps.iter().enumerate().any(|(c, r)| *r != ElementDoc::from(&classes.rep(c)))
        {
            return Err(corrupt("class data does not match"));
        }
        let m = conductor(&classes);
        if doc.conductor != m {
            return Err(corrupt("conductor does not match"));
        }
        let mut irr = Vec::with_capacity(doc.irreducibles.len());
        for chi in &doc.irreducibles {
            if chi.values.len() != classes.len() {
                return Err(corrupt("row length"));
            }
            let mut values = Vec::with_capacity(chi.values.len());
            for v in &chi.values {
                let coeffs: Result<Vec<Rational>, _> = v.iter().map(|s| s.parse::<Rational>()).collect();
                let coeffs = coeffs.map_err(|_| corrupt("coefficient"))?;
                values.push(Cyclo::from_coeffs(m, coeffs).ok_or_else(|| corrupt("coefficient count"))?);
            }
            let f = ClassFunction::new(classes.clone(), values)?;
            if f.degree() != Some(chi.degree as i128) {
                return Err(corrupt("degree"));
            }
            irr.push(f);
        }
        let t = CharTable { classes, irr };
        t.validate()?;
        Ok(t)
    }

    /// Row orthogonality, `sum d^2 = |G|`, one row per class, sorted order.
    pub fn validate(&self) -> Result<(), OracleError> {
        let k = self.classes.len();
        let order = self.classes.group().order() as i128;
        if self.irr.len() != k {
            return Err(OracleError::Validation(format!("{} irreducibles for {k} classes", self.irr.len())));
        }
        let sumsq: i128 = self.irr.iter().map(|c| c.degree().map_or(0, |d| d * d)).sum();
        if sumsq != order {
            return Err(OracleError::Validation(format!("sum of squared degrees {sumsq} != {order}")));
        }
        let m = conductor(&self.classes) as usize;
        let dense: Option<Vec<Vec<Vec<i128>>>> =
            self.irr.iter().map(|c| c.values().iter().map(Cyclo::int_coeffs).collect()).collect();
        let dense = dense.ok_or_else(|| OracleError::Validation("non-integral character value".into()))?;
        let sizes = self.classes.sizes();
        let bad = (0..k).into_par_iter().find_any(|&a| {
            (a..k).any(|b| {
                let mut acc = vec![0i128; m];
                for c in 0..k {
                    let s = sizes[c] as i128;
                    for (i, x) in dense[a][c].iter().enumerate().filter(|p| *p.1 != 0) {
                        for (j, y) in dense[b][c].iter().enumerate().filter(|p| *p.1 != 0) {
                            acc[(i + m - j) % m] += s * x * y;
                        }
                    }
                }
                let v = Cyclo::from_dense_i128(m as u32, &acc);
                v != Cyclo::from_int(m as u32, if a == b { order } else { 0 })
            })
        });
        if let Some(a) = bad {
            return Err(OracleError::Validation(format!("row {a} fails orthogonality")));
        }
        if self.irr.windows(2).any(|w| sort_key(&w[0]) > sort_key(&w[1])) {
            return Err(OracleError::Validation("rows out of order".into()));
        }
        Ok(())
    }
}

fn sort_key(c: &ClassFunction) -> (i128, &[Cyclo]) {
    (c.degree().unwrap_or(i128::MAX), c.values())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesDoc {
    pub reps: Vec<ElementDoc>,
    pub sizes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrDoc {
    pub degree: u64,
    /// Per class: rational coefficients over `ζ^0 .. ζ^{φ(m)-1}`.
    pub values: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub schema: u32,
    pub n: usize,
    pub q: u64,
    pub roots: Vec<Root>,
    pub classes: ClassesDoc,
    pub conductor: u32,
    pub irreducibles: Vec<IrrDoc>,
}

/// Classes and table of a pattern group, refusing orders above `cap`.
pub fn irr_table(g: &GroupHandle, cap: u64) -> Result<CharTable, OracleError> {
    let classes = Arc::new(conjugacy_classes(g, cap)?);
    irr_table_for(classes)
}

/// Class-matrix common-eigenvector method over GF(ℓ).
pub fn irr_table_for(classes: Arc<ClassData>) -> Result<CharTable, OracleError> {
    let g = classes.group().clone();
    let amb = g.ambient().clone();
    let k = classes.len();
    let order = g.order();
    let m = conductor(&classes) as u64;
    let l = modp::choose_prime(m, order);
    let z = modp::root_of_unity(m, l);

    let mut members: Vec<Vec<u64>> = vec![Vec::new(); k];
    for idx in 0..order {
        members[classes.class_of_index(idx)].push(idx);
    }
    let member_inv: Vec<Vec<_>> = members
        .iter()
        .map(|v| v.iter().map(|&i| amb.inv(&g.element(i))).collect())
        .collect();

    // M_j[a][i] = #{x in C_j : x^{-1} g_i in C_a}
    let class_matrix = |j: usize| -> Mat {
        let cols: Vec<Vec<u64>> = (0..k)
            .into_par_iter()
            .map(|i| {
                let gi = classes.rep(i);
                let mut col = vec![0u64; k];
                for xi in &member_inv[j] {
                    col[classes.class_of(&amb.mul(xi, &gi))] += 1;
                }
                col
            })
            .collect();
        (0..k).map(|a| (0..k).map(|i| cols[i][a] % l).collect()).collect()
    };

    let mut spaces: Vec<Mat> = vec![(0..k).map(|i| (0..k).map(|c| (c == i) as u64).collect()).collect()];
    let mut order_j: Vec<usize> = (1..k).collect();
    order_j.sort_by_key(|&j| (classes.size(j), j));
    for j in order_j {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mj = class_matrix(j);
        let mut next = Vec::with_capacity(spaces.len());
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            next.extend(split(&mj, space, l)?);
        }
        spaces = next;
    }
    if let Some(s) = spaces.iter().find(|s| s.len() > 1) {
        return Err(OracleError::SplittingFailure(format!("eigenspace of dimension {} survives", s.len())));
    }
    if spaces.len() != k {
        return Err(OracleError::SplittingFailure(format!("{} eigenvectors for {k} classes", spaces.len())));
    }

    let inverse: Vec<usize> = (0..k).map(|c| classes.inverse_class(c)).collect();
    let powers: Vec<Vec<usize>> = (0..k).map(|c| (0..m).map(|t| classes.power_class(c, t)).collect()).collect();
    let minv = modp::inv(m % l, l).expect("ℓ does not divide m");
    let zinv = modp::inv(z, l).unwrap();

    let mut irr: Vec<ClassFunction> = spaces
        .into_par_iter()
        .map(|space| -> Result<ClassFunction, OracleError> {
            let mut w = space.into_iter().next().unwrap();
            let w0 = modp::inv(w[0], l).ok_or_else(|| OracleError::SplittingFailure("ω(1) = 0".into()))?;
            for x in w.iter_mut() {
                *x = *x * w0 % l;
            }
            // ṽ_c = ω_c / |C_c| = χ(g_c)/χ(1)
            let v: Vec<u64> = (0..k).map(|c| w[c] * modp::inv(classes.size(c) % l, l).unwrap() % l).collect();
            let s = (0..k).fold(0u64, |acc, c| (acc + classes.size(c) % l * v[c] % l * v[inverse[c]]) % l);
            let d2 = order % l * modp::inv(s, l).ok_or_else(|| OracleError::SplittingFailure("zero norm".into()))? % l;
            let d = (1..=l / 2)
                .find(|&d| d * d % l == d2)
                .ok_or_else(|| OracleError::SplittingFailure("degree is not a square".into()))?;
            let chi: Vec<u64> = v.iter().map(|x| x * d % l).collect();
            let mut values = Vec::with_capacity(k);
            for c in 0..k {
                let mut mult = vec![0i128; m as usize];
                for (sidx, slot) in mult.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for t in 0..m {
                        let e = (sidx as u64 * t) % m;
                        acc = (acc + chi[powers[c][t as usize]] * modp::pow(zinv, e, l)) % l;
                    }
                    let mu = acc * minv % l;
                    if mu > d {
                        return Err(OracleError::SplittingFailure(format!("eigenvalue multiplicity {mu} exceeds degree {d}")));
                    }
                    *slot = mu as i128;
                }
                let val = Cyclo::from_dense_i128(m as u32, &mult);
                if val.reduce_mod(l, z) != Some(chi[c]) {
                    return Err(OracleError::SplittingFailure("lifted value disagrees mod ℓ".into()));
                }
                values.push(val);
            }
            ClassFunction::new(classes.clone(), values)
        })
        .collect::<Result<_, _>>()?;
    irr.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    let t = CharTable { classes, irr };
    t.validate()?;
    Ok(t)
}

/// Splits an invariant subspace (RREF rows) into eigenspaces of `mj`.
fn split(mj: &Mat, space: Mat, l: u64) -> Result<Vec<Mat>, OracleError> {
    let d = space.len();
    let k = mj.len();
    let pivots: Vec<usize> = space.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    // R[s][r] = (M v_r)[P_s]
    let r: Mat = pivots
        .iter()
        .map(|&ps| {
            space
                .iter()
                .map(|v| (0..k).fold(0u64, |acc, t| (acc + mj[ps][t] * v[t]) % l))
                .collect()
        })
        .collect();
    let eig = modp::roots(&modp::charpoly(&r, l), l);
    if eig.len() == 1 {
        return Ok(vec![space]);
    }
    let mut out = Vec::with_capacity(eig.len());
    let mut total = 0;
    for lam in eig {
        let mut a = r.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = (row[i] + l - lam) % l;
        }
        let ker = modp::kernel(&a, l);
        let mut rows: Mat = ker
            .iter()
            .map(|c| {
                let mut u = vec![0u64; k];
                for (cr, v) in c.iter().zip(&space) {
                    if *cr != 0 {
                        for (x, y) in u.iter_mut().zip(v) {
                            *x = (*x + cr * y) % l;
                        }
                    }
                }
                u
            })
            .collect();
        modp::rref(&mut rows, l);
        total += rows.len();
        out.push(rows);
    }
    if total != d {
        return Err(OracleError::SplittingFailure(format!("eigenspaces span {total} of {d} dimensions")));
    }
    Ok(out)
}

/// Number of irreducibles per degree exponent `e` (degree `q^e`).
pub fn degree_histogram(t: &CharTable, q: u64) -> Result<BTreeMap<u32, u64>, OracleError> {
    let mut h = BTreeMap::new();
    for d in t.degrees() {
        let mut e = 0u32;
        let mut x = d;
        while x > 1 && x % q == 0 {
            x /= q;
            e += 1;
        }
        if x != 1 {
            return Err(OracleError::NonPowerDegree(d));
        }
        *h.entry(e).or_insert(0) += 1;
    }
    Ok(h)
}

/// Multiplicities of irreducible constituents, nonzero ones only.
pub fn decompose_into_irr(f: &ClassFunction, t: &CharTable) -> Result<Vec<(usize, u64)>, OracleError> {
    let mut out = Vec::new();
    let mut rebuilt = f.zero_like();
    for (i, chi) in t.irreducibles().iter().enumerate() {
        let r = f.inner_rational(chi)?;
        if !r.is_integer() || r.is_negative() {
            return Err(OracleError::NotACharacter(format!("multiplicity {r} at irreducible {i}")));
        }
        if !r.is_zero() {
            out.push((i, r.to_integer() as u64));
            rebuilt = rebuilt.add(&chi.scale(r))?;
        }
    }
    if rebuilt != *f {
        return Err(OracleError::NotACharacter("not in the span of the irreducibles".into()));
    }
    Ok(out)
}

/// Almost faithful irreducibles grouped by the central character they lie over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralBucket {
    /// `χ(z)/χ(1)` on the center's elements in index order.
    pub sigma: Vec<Cyclo>,
    pub irreducibles: Vec<usize>,
}

pub fn almost_faithful_subset(t: &CharTable, z: &GroupHandle) -> Result<Vec<CentralBucket>, OracleError> {
    let g = t.classes().group();
    if !z.is_subgroup_of(g) {
        return Err(OracleError::WrongCenter);
    }
    let actual = center(g, TABLE_CAP.max(g.order()))?;
    if actual.len() as u64 != z.order() || !actual.iter().all(|x| z.contains(x)) {
        return Err(OracleError::WrongCenter);
    }
    let elems: Vec<_> = (0..z.order()).map(|i| z.element(i)).collect();
    let mut buckets: BTreeMap<Vec<Cyclo>, Vec<usize>> = BTreeMap::new();
    for (i, chi) in t.irreducibles().iter().enumerate() {
        let d = chi.degree().expect("degree");
        let sigma: Vec<Cyclo> = elems.iter().map(|e| chi.at(e).scale(Rational::new(1, d))).collect();
        if sigma.iter().any(|s| s.as_integer() != Some(1)) {
            buckets.entry(sigma).or_default().push(i);
        }
    }
    Ok(buckets.into_iter().map(|(sigma, irreducibles)| CentralBucket { sigma, irreducibles }).collect())
}
