use std::sync::Arc;

use rayon::prelude::*;

use super::cyclo::{Cyclo, Rational};
use super::OracleError;
use crate::ffgroup::{Ambient, ClassData, FieldSpec, Fq, GroupHandle, UTMat};
use crate::rootsys::{base_of_set, validate_basic_set, Root, RootSet};

/// `ψ(c) = ζ_p^{Tr(c)}`
pub fn psi(field: &FieldSpec, c: Fq) -> Cyclo {
    Cyclo::zeta(field.p() as u32, field.trace(c) as i64)
}

/// A class function with one value per class of its owner.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    owner: Arc<ClassData>,
    values: Vec<Cyclo>,
}

pub fn conductor(classes: &ClassData) -> u32 {
    classes.group().ambient().exponent()
}

impl PartialEq for ClassFunction {
    fn eq(&self, o: &Self) -> bool {
        self.same_owner(o) && self.values == o.values
    }
}
impl Eq for ClassFunction {}

impl ClassFunction {
    pub fn new(owner: Arc<ClassData>, values: Vec<Cyclo>) -> Result<Self, OracleError> {
        if values.len() != owner.len() {
            return Err(OracleError::OwnerMismatch);
        }
        let m = conductor(&owner);
        let values = values.into_iter().map(|v| v.lift(m)).collect();
        Ok(ClassFunction { owner, values })
    }

    pub fn trivial(owner: Arc<ClassData>) -> Self {
        let m = conductor(&owner);
        let values = vec![Cyclo::one(m); owner.len()];
        ClassFunction { owner, values }
    }

    pub fn regular(owner: Arc<ClassData>) -> Self {
        let m = conductor(&owner);
        let mut values = vec![Cyclo::zero(m); owner.len()];
        values[0] = Cyclo::from_int(m, owner.group().order() as i128);
        ClassFunction { owner, values }
    }

    pub fn owner(&self) -> &Arc<ClassData> {
        &self.owner
    }

    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclo {
        &self.values[class]
    }

    /// Value at any member of the owner.
    pub fn at(&self, g: &UTMat) -> &Cyclo {
        &self.values[self.owner.class_of(g)]
    }

    /// Value at the identity as an integer, when it is one.
    pub fn degree(&self) -> Option<i128> {
        self.values[0].as_integer()
    }

    pub fn same_owner(&self, o: &ClassFunction) -> bool {
        Arc::ptr_eq(&self.owner, &o.owner) || self.owner.group() == o.owner.group()
    }

    fn check(&self, o: &ClassFunction) -> Result<(), OracleError> {
        if self.same_owner(o) {
            Ok(())
        } else {
            Err(OracleError::OwnerMismatch)
        }
    }

    pub fn tensor(&self, o: &ClassFunction) -> Result<ClassFunction, OracleError> {
        self.check(o)?;
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a * b).collect();
        Ok(ClassFunction { owner: self.owner.clone(), values })
    }

    pub fn add(&self, o: &ClassFunction) -> Result<ClassFunction, OracleError> {
        self.check(o)?;
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect();
        Ok(ClassFunction { owner: self.owner.clone(), values })
    }

    pub fn scale(&self, r: Rational) -> ClassFunction {
        ClassFunction { owner: self.owner.clone(), values: self.values.iter().map(|v| v.scale(r)).collect() }
    }

    pub fn zero_like(&self) -> ClassFunction {
        let m = conductor(&self.owner);
        ClassFunction { owner: self.owner.clone(), values: vec![Cyclo::zero(m); self.values.len()] }
    }

    pub fn conjugate(&self) -> ClassFunction {
        ClassFunction { owner: self.owner.clone(), values: self.values.iter().map(Cyclo::conj).collect() }
    }

    /// Restriction to a subgroup with its own class data.
    pub fn restrict(&self, sub: Arc<ClassData>) -> Result<ClassFunction, OracleError> {
        if !sub.group().is_subgroup_of(self.owner.group()) {
            return Err(OracleError::NotSubgroup);
        }
        let values = (0..sub.len()).map(|c| self.at(&sub.rep(c)).clone()).collect();
        ClassFunction::new(sub, values)
    }

    /// `(1/|G|) sum_g f(g) conj(h(g))`
    pub fn inner(&self, o: &ClassFunction) -> Result<Cyclo, OracleError> {
        self.check(o)?;
        let m = conductor(&self.owner);
        let order = self.owner.group().order() as i128;
        let fast: Option<Vec<(Vec<i128>, Vec<i128>)>> = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| Some((a.int_coeffs()?, b.int_coeffs()?)))
            .collect();
        let total = if let Some(pairs) = fast {
            let mm = m as usize;
            let mut acc = vec![0i128; mm];
            for (k, (a, b)) in pairs.iter().enumerate() {
                let size = self.owner.size(k) as i128;
                for (s, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
                    for (t, y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                        acc[(s + mm - t) % mm] += size * x * y;
                    }
                }
            }
            Cyclo::from_dense_i128(m, &acc)
        } else {
            let mut acc = Cyclo::zero(m);
            for (k, (a, b)) in self.values.iter().zip(&o.values).enumerate() {
                let t = (a * &b.conj()).scale(Rational::from_integer(self.owner.size(k) as i128));
                acc = &acc + &t;
            }
            acc
        };
        Ok(total.scale(Rational::new(1, order)))
    }

    /// Inner product as an exact rational; errors when it is not rational.
    pub fn inner_rational(&self, o: &ClassFunction) -> Result<Rational, OracleError> {
        self.inner(o)?.as_rational().ok_or(OracleError::NotRational)
    }
}

/// Right transversal of a pattern subgroup `h` in a pattern group `g`: the
/// members of `g` supported on the roots of `g` outside `h`.
pub fn transversal(g: &GroupHandle, h: &GroupHandle) -> Result<Vec<UTMat>, OracleError> {
    if !h.is_subgroup_of(g) {
        return Err(OracleError::NotSubgroup);
    }
    let amb = g.ambient();
    let outside: Vec<Root> = g.roots().difference(h.roots()).to_vec();
    let q = amb.q();
    let count = q.checked_pow(outside.len() as u32).ok_or(OracleError::CapExceeded)?;
    Ok((0..count)
        .map(|mut idx| {
            let mut t = amb.identity();
            for r in &outside {
                let (a, b) = r.entry();
                t.set(a, b, (idx % q) as Fq);
                idx /= q;
            }
            t
        })
        .collect())
}

/// `f^G(g_k) = sum_t f°(t g_k t^{-1})` over a right transversal of `h`.
pub fn induce_from<F>(g: Arc<ClassData>, h: &GroupHandle, f: F) -> Result<ClassFunction, OracleError>
where
    F: Fn(&UTMat) -> Cyclo + Sync,
{
    let trans = transversal(g.group(), h)?;
    let amb = g.group().ambient().clone();
    let m = conductor(&g);
    let inv: Vec<UTMat> = trans.iter().map(|t| amb.inv(t)).collect();
    let values: Vec<Cyclo> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let x = g.rep(k);
            let mut acc = Cyclo::zero(m);
            for (t, ti) in trans.iter().zip(&inv) {
                let y = amb.mul(&amb.mul(t, &x), ti);
                if h.contains(&y) {
                    acc = &acc + &f(&y);
                }
            }
            acc
        })
        .collect();
    ClassFunction::new(g, values)
}

pub fn induce(f: &ClassFunction, g: Arc<ClassData>) -> Result<ClassFunction, OracleError> {
    let h = f.owner().group().clone();
    induce_from(g, &h, |y| f.at(y).clone())
}

/// Validated basic data: pairwise separate roots with nonzero parameters.
pub fn check_basic_data(amb: &Ambient, terms: &[(Root, Fq)]) -> Result<(), OracleError> {
    let set = RootSet::new(amb.n(), terms.iter().map(|t| t.0))?;
    if set.len() != terms.len() {
        return Err(OracleError::InvalidBasicData("repeated root".into()));
    }
    if !terms.is_empty() {
        validate_basic_set(amb.n(), &set)?;
    }
    if let Some((r, _)) = terms.iter().find(|t| t.1 == 0 || t.1 as u64 >= amb.q()) {
        return Err(OracleError::InvalidBasicData(format!("parameter at {r} must be a nonzero field element")));
    }
    Ok(())
}

/// The base group `V_D`.
pub fn base_group(amb: &Ambient, terms: &[(Root, Fq)]) -> Result<GroupHandle, OracleError> {
    check_basic_data(amb, terms)?;
    let roots = base_of_set(amb.n(), terms.iter().map(|t| &t.0))?;
    Ok(GroupHandle::new(amb, roots)?)
}

/// Exponent of `λ_D(v)` as a power of `ζ_p`.
pub fn lambda_exponent(amb: &Ambient, terms: &[(Root, Fq)], v: &UTMat) -> u32 {
    let f = amb.field();
    let mut e = 0u32;
    for &(r, t) in terms {
        e += f.trace(f.mul(t, v.at_root(&r))) as u32;
    }
    e % f.p() as u32
}

/// `λ_D` as a class function on `V_D`.
pub fn linear_lambda(vd: Arc<ClassData>, terms: &[(Root, Fq)]) -> Result<ClassFunction, OracleError> {
    let amb = vd.group().ambient().clone();
    let expected = base_group(&amb, terms)?;
    if &expected != vd.group() {
        return Err(OracleError::WrongBaseGroup);
    }
    let p = amb.field().p() as u32;
    let values = (0..vd.len()).map(|c| Cyclo::zeta(p, lambda_exponent(&amb, terms, &vd.rep(c)) as i64)).collect();
    ClassFunction::new(vd, values)
}

/// `ξ_{D,φ} = λ_D^U`, induced without class data for `V_D`.
pub fn basic_character(g: Arc<ClassData>, terms: &[(Root, Fq)]) -> Result<ClassFunction, OracleError> {
    let amb = g.group().ambient().clone();
    let vd = base_group(&amb, terms)?;
    let p = amb.field().p() as u32;
    let terms = terms.to_vec();
    induce_from(g, &vd, move |y| Cyclo::zeta(p, lambda_exponent(&amb, &terms, y) as i64))
}

/// Elementary character at one root.
pub fn elementary_character(g: Arc<ClassData>, alpha: Root, t: Fq) -> Result<ClassFunction, OracleError> {
    basic_character(g, &[(alpha, t)])
}

/// Product of elementary characters, one per factor (roots may repeat).
pub fn tensor_of_elementaries(g: Arc<ClassData>, factors: &[(Root, Fq)]) -> Result<ClassFunction, OracleError> {
    let mut acc = ClassFunction::trivial(g.clone());
    for &(r, t) in factors {
        acc = acc.tensor(&elementary_character(g.clone(), r, t)?)?;
    }
    Ok(acc)
}
