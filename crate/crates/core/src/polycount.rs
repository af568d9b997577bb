//! Integer polynomials in `q` and the counts `N_{n,e}(q)` of irreducible
//! characters of `U_n(q)` in the three highest degrees.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootsys::mu;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("rank {n} is below the validity threshold {min} for {what}")]
    RankTooSmall { n: usize, min: usize, what: &'static str },
    #[error("missing seed N_{{{n},{e}}}")]
    MissingSeed { n: usize, e: usize },
    #[error("seed N_{{{n},{e}}} has no certified value at q = {q}")]
    SeedValueUnavailable { n: usize, e: usize, q: u64 },
    #[error("malformed polynomial document: {0}")]
    Malformed(String),
}

/// Dense integer polynomial in `q`; `coeffs[k]` multiplies `q^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<BigInt>,
}

impl PolyQ {
    pub fn from_coeffs<I: IntoIterator<Item = BigInt>>(c: I) -> Self {
        let mut p = PolyQ { coeffs: c.into_iter().collect() };
        p.trim();
        p
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigInt::from(x)))
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_i64(&[c])
    }

    /// `q`
    pub fn q() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `q - 1`
    pub fn qm1() -> Self {
        Self::from_i64(&[-1, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = PolyQ::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c))
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    /// Coefficients in powers of `(q - 1)`, obtained by substituting `q = (q-1) + 1`.
    pub fn to_qminus1(&self) -> Vec<BigInt> {
        taylor_shift(&self.coeffs, 1)
    }

    /// Inverse of [`PolyQ::to_qminus1`].
    pub fn from_qminus1(c: &[BigInt]) -> Self {
        Self::from_coeffs(taylor_shift(c, -1))
    }

    pub fn has_nonnegative_qm1_coeffs(&self) -> bool {
        self.to_qminus1().iter().all(|c| !c.is_negative())
    }
}

/// Coefficients of `p(x + shift)` given those of `p(x)`.
fn taylor_shift(c: &[BigInt], shift: i64) -> Vec<BigInt> {
    let mut out = c.to_vec();
    let s = BigInt::from(shift);
    let len = out.len();
    // repeated synthetic division (Horner's shift)
    for k in 0..len {
        for t in (k..len.saturating_sub(1)).rev() {
            let add = &out[t + 1] * &s;
            out[t] += add;
        }
    }
    while out.last().is_some_and(|x| x.is_zero()) {
        out.pop();
    }
    out
}

impl<'a> Add<&'a PolyQ> for &'a PolyQ {
    type Output = PolyQ;
    fn add(self, o: &PolyQ) -> PolyQ {
        let len = self.coeffs.len().max(o.coeffs.len());
        PolyQ::from_coeffs((0..len).map(|k| {
            self.coeffs.get(k).cloned().unwrap_or_default() + o.coeffs.get(k).cloned().unwrap_or_default()
        }))
    }
}

impl<'a> Sub<&'a PolyQ> for &'a PolyQ {
    type Output = PolyQ;
    fn sub(self, o: &PolyQ) -> PolyQ {
        self + &(-o)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::from_coeffs(self.coeffs.iter().map(|c| -c))
    }
}

impl<'a> Mul<&'a PolyQ> for &'a PolyQ {
    type Output = PolyQ;
    fn mul(self, o: &PolyQ) -> PolyQ {
        if self.is_zero() || o.is_zero() {
            return PolyQ::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in o.coeffs.iter().enumerate() {
                c[a + b] += x * y;
            }
        }
        PolyQ::from_coeffs(c)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $f(self, o: PolyQ) -> PolyQ {
                (&self).$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{mag}q^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "q-1")]
    QMinus1,
}

/// `{"basis": "q" | "q-1", "coeffs": [ints]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub basis: Basis,
    pub coeffs: Vec<serde_json::Value>,
}

fn big_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

fn json_to_big(v: &serde_json::Value) -> Result<BigInt, CountError> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| CountError::Malformed(format!("non-integer coefficient {n}"))),
        serde_json::Value::String(s) => {
            s.parse::<BigInt>().map_err(|_| CountError::Malformed(format!("bad integer {s:?}")))
        }
        other => Err(CountError::Malformed(format!("unexpected coefficient {other}"))),
    }
}

impl PolyDoc {
    pub fn new(p: &PolyQ, basis: Basis) -> Self {
        let coeffs = match basis {
            Basis::Q => p.coeffs().iter().map(big_to_json).collect(),
            Basis::QMinus1 => p.to_qminus1().iter().map(big_to_json).collect(),
        };
        PolyDoc { basis, coeffs }
    }

    pub fn to_poly(&self) -> Result<PolyQ, CountError> {
        let c: Vec<BigInt> = self.coeffs.iter().map(json_to_big).collect::<Result<_, _>>()?;
        Ok(match self.basis {
            Basis::Q => PolyQ::from_coeffs(c),
            Basis::QMinus1 => PolyQ::from_qminus1(&c),
        })
    }
}

/// Key `(n, e)` of a count `N_{n,e}`.
pub type SeedKey = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub enum SeedValue {
    /// A certified polynomial.
    Poly(PolyQ),
    /// Certified values at individual field sizes only.
    PerQ(BTreeMap<u64, BigInt>),
    /// Unknown value, kept as a formal symbol.
    Symbolic,
}

/// Seed counts that the recursions bottom out on.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseValueTable {
    entries: BTreeMap<SeedKey, SeedValue>,
}

impl Default for BaseValueTable {
    fn default() -> Self {
        Self::standard()
    }
}

impl BaseValueTable {
    /// `N_{1,0} = 1`, `N_{2,0} = q`, `N_{3,0} = q^2`, `N_{3,1} = q - 1`, plus `N_{4,1}`.
    ///
    /// `N_{4,1}` follows from `N_{4,0} = q^3` (abelianization), `N_{4,2} = n_top(4)` and
    /// `sum_e N_{4,e} q^{2e} = |U_4(q)| = q^6`.
    pub fn standard() -> Self {
        let q = PolyQ::q();
        let mut entries = BTreeMap::new();
        entries.insert((1, 0), SeedValue::Poly(PolyQ::one()));
        entries.insert((2, 0), SeedValue::Poly(q.clone()));
        entries.insert((3, 0), SeedValue::Poly(q.pow(2)));
        entries.insert((3, 1), SeedValue::Poly(PolyQ::qm1()));
        let rest = &(&q.pow(6) - &q.pow(3)) - &(&n_top(4) * &q.pow(4));
        // rest = N_{4,1} q^2
        let n41 = PolyQ::from_coeffs(rest.coeffs().iter().skip(2).cloned());
        debug_assert!(rest.coeffs().iter().take(2).all(|c| c.is_zero()));
        entries.insert((4, 1), SeedValue::Poly(n41));
        BaseValueTable { entries }
    }

    pub fn insert(&mut self, key: SeedKey, value: SeedValue) {
        self.entries.insert(key, value);
    }

    /// Record a value certified at a single `q`, merging with existing per-q values.
    pub fn insert_value(&mut self, key: SeedKey, q: u64, value: BigInt) {
        match self.entries.get_mut(&key) {
            Some(SeedValue::PerQ(m)) => {
                m.insert(q, value);
            }
            _ => {
                self.entries.insert(key, SeedValue::PerQ(BTreeMap::from([(q, value)])));
            }
        }
    }

    pub fn get(&self, key: &SeedKey) -> Option<&SeedValue> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&SeedKey, &SeedValue)> {
        self.entries.iter()
    }

    fn poly(&self, key: SeedKey) -> Result<PolyQ, CountError> {
        match self.entries.get(&key) {
            Some(SeedValue::Poly(p)) => Ok(p.clone()),
            _ => Err(CountError::MissingSeed { n: key.0, e: key.1 }),
        }
    }
}

/// A count that is linear in (possibly unresolved) seeds:
/// `constant(q) + sum_k coeff_k(q) * N_k(q)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CountExpr {
    pub constant: PolyQ,
    pub seeds: BTreeMap<SeedKey, PolyQ>,
}

impl CountExpr {
    pub fn poly(p: PolyQ) -> Self {
        CountExpr { constant: p, seeds: BTreeMap::new() }
    }

    pub fn seed(key: SeedKey) -> Self {
        CountExpr { constant: PolyQ::zero(), seeds: BTreeMap::from([(key, PolyQ::one())]) }
    }

    pub fn as_poly(&self) -> Option<&PolyQ> {
        self.seeds.is_empty().then_some(&self.constant)
    }

    pub fn add(&self, o: &CountExpr) -> CountExpr {
        let mut out = self.clone();
        out.constant = &out.constant + &o.constant;
        for (k, p) in &o.seeds {
            let e = out.seeds.entry(*k).or_insert_with(PolyQ::zero);
            *e = &*e + p;
        }
        out.seeds.retain(|_, p| !p.is_zero());
        out
    }

    pub fn mul_poly(&self, p: &PolyQ) -> CountExpr {
        let mut seeds: BTreeMap<SeedKey, PolyQ> = self.seeds.iter().map(|(k, c)| (*k, c * p)).collect();
        seeds.retain(|_, c| !c.is_zero());
        CountExpr { constant: &self.constant * p, seeds }
    }

    /// Substitutes every seed that has a polynomial value in `table`.
    pub fn resolve(&self, table: &BaseValueTable) -> CountExpr {
        let mut out = CountExpr::poly(self.constant.clone());
        for (k, c) in &self.seeds {
            match table.get(k) {
                Some(SeedValue::Poly(p)) => out.constant = &out.constant + &(c * p),
                _ => {
                    out.seeds.insert(*k, c.clone());
                }
            }
        }
        out
    }

    pub fn eval(&self, q: u64, table: &BaseValueTable) -> Result<BigInt, CountError> {
        let mut acc = self.constant.eval_u64(q);
        for ((n, e), c) in &self.seeds {
            let v = match table.get(&(*n, *e)) {
                Some(SeedValue::Poly(p)) => p.eval_u64(q),
                Some(SeedValue::PerQ(m)) => m
                    .get(&q)
                    .cloned()
                    .ok_or(CountError::SeedValueUnavailable { n: *n, e: *e, q })?,
                Some(SeedValue::Symbolic) => {
                    return Err(CountError::SeedValueUnavailable { n: *n, e: *e, q })
                }
                None => return Err(CountError::MissingSeed { n: *n, e: *e }),
            };
            acc += c.eval_u64(q) * v;
        }
        Ok(acc)
    }
}

impl fmt::Display for CountExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for ((n, e), c) in &self.seeds {
            write!(f, " + ({c})*N[{n},{e}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SecondMode {
    Closed,
    Recursion,
}

/// Coefficient used for the case where two crossing roots sit over a second-highest factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThirdVariant {
    /// `q(q-1)^2`
    #[default]
    Prose,
    /// `q(q-1)` as printed in the recursion statement
    Theorem,
}

/// Number of irreducible characters of `U_n(q)` of the maximal degree `q^{mu(n)}`.
pub fn n_top(n: usize) -> PolyQ {
    let m = n / 2;
    if n % 2 == 1 {
        PolyQ::qm1().pow(m)
    } else if m == 0 {
        // U_0 is trivial; treated as one character
        PolyQ::one()
    } else {
        &PolyQ::q() * &PolyQ::qm1().pow(m - 1)
    }
}

fn second_closed(n: usize) -> PolyQ {
    let m = n / 2;
    let q = PolyQ::q();
    let head = &q * &PolyQ::qm1().pow(m - 1);
    let tail = if n % 2 == 1 {
        // m(q-1) + 1
        &PolyQ::qm1().scale(&BigInt::from(m)) + &PolyQ::one()
    } else {
        // (m-1)q + 1
        &q.scale(&BigInt::from(m - 1)) + &PolyQ::one()
    };
    &head * &tail
}

/// `N_{n, mu(n)-1}` read from the seed table for `n <= 4`, recursed otherwise.
fn second_rec(n: usize, seeds: &BaseValueTable) -> Result<PolyQ, CountError> {
    if n <= 4 {
        return seeds.poly((n, mu(n) - 1));
    }
    let qm1 = PolyQ::qm1();
    let a = &qm1 * &second_rec(n - 2, seeds)?;
    let top = if n - 4 <= 2 { seeds.poly((n - 4, 0))? } else { n_top(n - 4) };
    let b = &(&PolyQ::q() * &qm1.pow(2)) * &top;
    Ok(&a + &b)
}

pub fn n_second(n: usize, mode: SecondMode) -> Result<PolyQ, CountError> {
    match mode {
        SecondMode::Closed => {
            if n < 4 {
                return Err(CountError::RankTooSmall { n, min: 4, what: "closed second-highest count" });
            }
            Ok(second_closed(n))
        }
        SecondMode::Recursion => {
            if n < 5 {
                return Err(CountError::RankTooSmall { n, min: 5, what: "second-highest recursion" });
            }
            second_rec(n, &BaseValueTable::standard())
        }
    }
}

/// `N_{k, mu(k)-1}` for any `k >= 3`, from the seed table below 5.
pub fn second_any(k: usize) -> PolyQ {
    if k >= 5 {
        second_closed(k)
    } else {
        BaseValueTable::standard().poly((k, mu(k) - 1)).expect("standard seeds cover k = 3, 4")
    }
}

/// Third-highest count `N_{n, mu(n)-2}`, linear in whichever of `N_{5,2}`, `N_{6,4}`
/// the recursion reaches and `seeds` does not resolve to a polynomial.
pub fn n_third(n: usize, seeds: &BaseValueTable, variant: ThirdVariant) -> Result<CountExpr, CountError> {
    if n < 7 {
        return Err(CountError::RankTooSmall { n, min: 7, what: "third-highest recursion" });
    }
    third_rec(n, seeds, variant).map(|e| e.resolve(seeds))
}

pub fn third_inner(k: usize, seeds: &BaseValueTable, variant: ThirdVariant) -> Result<CountExpr, CountError> {
    if k == 5 || k == 6 {
        let key = (k, mu(k) - 2);
        if seeds.get(&key).is_none() {
            return Err(CountError::MissingSeed { n: key.0, e: key.1 });
        }
        Ok(CountExpr::seed(key))
    } else {
        third_rec(k, seeds, variant)
    }
}

fn third_rec(n: usize, seeds: &BaseValueTable, variant: ThirdVariant) -> Result<CountExpr, CountError> {
    let q = PolyQ::q();
    let qm1 = PolyQ::qm1();
    let inner = third_inner(n - 2, seeds, variant)?.mul_poly(&qm1);
    let c2 = match variant {
        ThirdVariant::Prose => &q * &qm1.pow(2),
        ThirdVariant::Theorem => &q * &qm1,
    };
    let second = CountExpr::poly(&c2 * &second_any(n - 4));
    let top = n_top(n - 6);
    let c34 = (&q.pow(2) * &qm1.pow(3)).scale(&BigInt::from(2));
    let c5 = qm1.pow(4);
    let rest = CountExpr::poly(&(&c34 + &c5) * &top);
    Ok(inner.add(&second).add(&rest))
}
