use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i128>;

/// Element of `Q(ζ_m)` for `m` a prime power (or 1).
///
/// Coefficients are over `ζ^0 .. ζ^{φ(m)-1}`, reduced modulo `Φ_m`, so the
/// representation is unique for a fixed conductor. Values of different
/// conductors compare and combine after lifting to the larger one.
#[derive(Clone, Debug)]
pub struct Cyclo {
    m: u32,
    c: Vec<Rational>,
}

fn prime_of(m: u32) -> u32 {
    (2..=m).find(|d| m.is_multiple_of(*d)).unwrap_or(1)
}

fn is_prime_power(m: u32) -> bool {
    let p = prime_of(m);
    let mut x = m;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

fn phi(m: u32) -> usize {
    if m == 1 {
        1
    } else {
        let p = prime_of(m);
        (m / p * (p - 1)) as usize
    }
}

fn common(a: u32, b: u32) -> u32 {
    let m = a.max(b);
    debug_assert!(m.is_multiple_of(a.min(b)), "conductors {a} and {b} are not compatible");
    m
}

impl Cyclo {
    pub fn zero(m: u32) -> Self {
        assert!(is_prime_power(m), "conductor {m} is not a prime power");
        Cyclo { m, c: vec![Rational::zero(); phi(m)] }
    }

    pub fn from_rational(m: u32, r: Rational) -> Self {
        let mut z = Cyclo::zero(m);
        z.c[0] = r;
        z
    }

    pub fn from_int(m: u32, v: i128) -> Self {
        Cyclo::from_rational(m, Rational::from_integer(v))
    }

    /// Builds from integer coefficients of `ζ^0 .. ζ^{m-1}`, exponents taken mod `m`.
    pub fn from_dense_i128(m: u32, coeffs: &[i128]) -> Self {
        let mut dense = vec![Rational::zero(); m as usize];
        for (s, &c) in coeffs.iter().enumerate() {
            dense[s % m as usize] += Rational::from_integer(c);
        }
        Cyclo::reduce(m, dense)
    }

    /// From reduced-basis coefficients; `None` when the count is not `φ(m)`.
    pub fn from_coeffs(m: u32, c: Vec<Rational>) -> Option<Self> {
        (is_prime_power(m) && c.len() == phi(m)).then_some(Cyclo { m, c })
    }

    /// Reduced-basis coefficients when all are integers.
    pub fn int_coeffs(&self) -> Option<Vec<i128>> {
        self.c.iter().map(|r| r.is_integer().then(|| r.to_integer())).collect()
    }

    pub fn one(m: u32) -> Self {
        Cyclo::from_int(m, 1)
    }

    /// `ζ_m^s`
    pub fn zeta(m: u32, s: i64) -> Self {
        let mut dense = vec![Rational::zero(); m as usize];
        dense[s.rem_euclid(m as i64) as usize] = Rational::one();
        Cyclo::reduce(m, dense)
    }

    fn reduce(m: u32, mut dense: Vec<Rational>) -> Self {
        if m == 1 {
            let s = dense.into_iter().fold(Rational::zero(), |a, b| a + b);
            return Cyclo { m, c: vec![s] };
        }
        let p = prime_of(m) as usize;
        let step = m as usize / p;
        let f = phi(m);
        for d in (f..m as usize).rev() {
            let c = std::mem::take(&mut dense[d]);
            if c.is_zero() {
                continue;
            }
            // x^f = -(1 + x^step + ... + x^{(p-2) step})
            for i in 0..p - 1 {
                dense[d - f + i * step] -= c;
            }
        }
        dense.truncate(f);
        Cyclo { m, c: dense }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    /// Same value with conductor `m2`, a multiple of the current one.
    pub fn lift(&self, m2: u32) -> Cyclo {
        if m2 == self.m {
            return self.clone();
        }
        assert!(m2.is_multiple_of(self.m), "cannot lift conductor {} to {m2}", self.m);
        let k = (m2 / self.m) as usize;
        let mut z = Cyclo::zero(m2);
        for (s, c) in self.c.iter().enumerate() {
            z.c[s * k] = *c;
        }
        z
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.c[1..].iter().all(Zero::is_zero).then(|| self.c[0])
    }

    pub fn as_integer(&self) -> Option<i128> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn scale(&self, r: Rational) -> Cyclo {
        Cyclo { m: self.m, c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Complex conjugate: `ζ -> ζ^{-1}`.
    pub fn conj(&self) -> Cyclo {
        if self.m == 1 {
            return self.clone();
        }
        let m = self.m as usize;
        let mut dense = vec![Rational::zero(); m];
        for (s, c) in self.c.iter().enumerate() {
            dense[(m - s) % m] += c;
        }
        Cyclo::reduce(self.m, dense)
    }

    /// Galois action `ζ -> ζ^k`, `k` coprime to the conductor.
    pub fn galois(&self, k: u32) -> Cyclo {
        let m = self.m as usize;
        let mut dense = vec![Rational::zero(); m];
        for (s, c) in self.c.iter().enumerate() {
            dense[s * k as usize % m] += c;
        }
        Cyclo::reduce(self.m, dense)
    }

    fn zip(&self, o: &Cyclo, f: impl Fn(&Rational, &Rational) -> Rational) -> Cyclo {
        let m = common(self.m, o.m);
        let (a, b) = (self.lift(m), o.lift(m));
        Cyclo { m, c: a.c.iter().zip(&b.c).map(|(x, y)| f(x, y)).collect() }
    }

    /// Reduction into GF(ℓ) under `ζ -> z`.
    pub fn reduce_mod(&self, ell: u64, z: u64) -> Option<u64> {
        let mut acc = 0u64;
        let mut zp = 1u64;
        for c in &self.c {
            let num = c.numer().rem_euclid(ell as i128) as u64;
            let den = c.denom().rem_euclid(ell as i128) as u64;
            let dinv = super::modp::inv(den, ell)?;
            acc = (acc + num * dinv % ell * zp) % ell;
            zp = zp * z % ell;
        }
        Some(acc)
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Cyclo {}

impl PartialOrd for Cyclo {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Cyclo {
    fn cmp(&self, o: &Self) -> Ordering {
        let m = common(self.m, o.m);
        let (a, b) = (self.lift(m), o.lift(m));
        a.c.cmp(&b.c)
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        self.zip(o, |x, y| x + y)
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self.zip(o, |x, y| x - y)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { m: self.m, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        let m = common(self.m, o.m);
        let (a, b) = (self.lift(m), o.lift(m));
        if let Some(r) = a.as_rational() {
            return b.scale(r);
        }
        if let Some(r) = b.as_rational() {
            return a.scale(r);
        }
        let mut dense = vec![Rational::zero(); 2 * a.c.len()];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        let mm = m as usize;
        let mut folded = vec![Rational::zero(); mm];
        for (d, c) in dense.into_iter().enumerate() {
            folded[d % mm] += c;
        }
        Cyclo::reduce(m, folded)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Cyclo {
            type Output = Cyclo;
            fn $f(self, o: Cyclo) -> Cyclo {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match s {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.m)?;
                    if s > 1 {
                        write!(f, "^{s}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
