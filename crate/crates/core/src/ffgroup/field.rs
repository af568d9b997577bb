use std::fmt;

use super::GroupError;

/// Field element: the integer `sum a_k p^k` encoding the polynomial `sum a_k x^k`.
pub type Fq = u8;

/// GF(q) for small q, realized as GF(p)[x]/(modulus) with lookup tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u8,
    k: u8,
    q: u8,
    /// Monic modulus, low degree first; `[0, 1]` (i.e. `x`) for prime fields.
    modulus: Vec<u8>,
    add: Vec<Fq>,
    mul: Vec<Fq>,
    neg: Vec<Fq>,
    inv: Vec<Fq>,
    trace: Vec<Fq>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

pub const SUPPORTED_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn poly_mulmod(a: &[u8], b: &[u8], modulus: &[u8], p: u8) -> Vec<u8> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u16; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        // x^d = x^{d-k} * x^k, x^k = -(lower part of modulus)
        for (t, &m) in modulus[..k].iter().enumerate() {
            let sub = c * m as u16 % p as u16;
            prod[d - k + t] = (prod[d - k + t] + p as u16 - sub) % p as u16;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|x| x as u8).collect()
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self, GroupError> {
        let (p, k, modulus): (u8, u8, Vec<u8>) = match q {
            2 | 3 | 5 | 7 => (q as u8, 1, vec![0, 1]),
            4 => (2, 2, vec![1, 1, 1]),
            8 => (2, 3, vec![1, 1, 0, 1]),
            9 => (3, 2, vec![1, 0, 1]),
            _ => return Err(GroupError::UnsupportedField(q)),
        };
        let q = q as u8;
        let qs = q as usize;
        let digits = |e: u8| -> Vec<u8> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = e;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |v: &[u8]| -> u8 { v.iter().rev().fold(0u8, |acc, &d| acc * p + d) };

        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&s);
                mul[a as usize * qs + b as usize] = if k == 1 {
                    ((a as u16 * b as u16) % p as u16) as u8
                } else {
                    encode(&poly_mulmod(&da, &db, &modulus, p))
                };
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..qs {
            neg[a] = (0..q).find(|&b| add[a * qs + b as usize] == 0).unwrap();
            if a != 0 {
                inv[a] = (0..q)
                    .find(|&b| mul[a * qs + b as usize] == 1)
                    .ok_or(GroupError::UnsupportedField(q as u64))?;
            }
        }
        let mut trace = vec![0; qs];
        for a in 0..qs {
            // a + a^p + ... + a^{p^{k-1}}
            let mut t = 0u8;
            let mut pw = a as u8;
            for _ in 0..k {
                t = add[t as usize * qs + pw as usize];
                let mut next = 1u8;
                for _ in 0..p {
                    next = mul[next as usize * qs + pw as usize];
                }
                pw = next;
            }
            trace[a] = t;
        }
        Ok(FieldSpec { p, k, q, modulus, add, mul, neg, inv, trace })
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.k
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    /// `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// Absolute trace to GF(p); the result is an element `< p`.
    #[inline]
    pub fn trace(&self, a: Fq) -> Fq {
        self.trace[a as usize]
    }

    /// Additive basis `1, x, ..., x^{k-1}` over GF(p).
    pub fn additive_basis(&self) -> Vec<Fq> {
        (0..self.k).map(|i| self.p.pow(i as u32)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fq> {
        1..self.q
    }
}
