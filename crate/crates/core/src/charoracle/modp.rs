//! Arithmetic and linear algebra over a prime field GF(ℓ), ℓ < 2^31.

pub fn pow(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut acc = 1 % l;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, l: u64) -> Option<u64> {
    let a = a % l;
    (a != 0).then(|| pow(a, l - 2, l))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Smallest prime `ℓ ≡ 1 (mod m)` with `ℓ^2 > 4 * order`.
pub fn choose_prime(m: u64, order: u64) -> u64 {
    let mut l = m + 1;
    loop {
        if (l as u128) * (l as u128) > 4 * order as u128 && is_prime(l) {
            return l;
        }
        l += m;
    }
}

/// An element of exact multiplicative order `m` in GF(ℓ); requires `m | ℓ-1`.
pub fn root_of_unity(m: u64, l: u64) -> u64 {
    let primes: Vec<u64> = (2..=m).filter(|&d| m.is_multiple_of(d) && is_prime(d)).collect();
    (2..l)
        .map(|g| pow(g, (l - 1) / m, l))
        .find(|&z| primes.iter().all(|&p| pow(z, m / p, l) != 1))
        .expect("ℓ ≡ 1 mod m")
}

pub type Mat = Vec<Vec<u64>>;

/// Row-reduces in place, dropping zero rows; returns pivot columns.
pub fn rref(rows: &mut Mat, l: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let iv = inv(rows[r][c], l).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * iv % l;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (l - f) * y) % l;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for a square or rectangular `A`.
pub fn kernel(a: &Mat, l: u64) -> Mat {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let pivots = rref(&mut m, l);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; ncols];
            x[f] = 1;
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = (l - row[f]) % l;
            }
            x
        })
        .collect()
}

/// Characteristic polynomial `det(xI - A)`, low degree first, via Hessenberg form.
pub fn charpoly(a: &Mat, l: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let t = inv(h[m][m - 1], l).unwrap();
        for i in m + 1..n {
            let u = h[i][m - 1] * t % l;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = h[m][j];
                h[i][j] = (h[i][j] + (l - u) * v) % l;
            }
            for row in h.iter_mut() {
                let v = row[i];
                row[m] = (row[m] + u * v) % l;
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{i<j<=k} h_{j,j-1}) p_{i-1}, 1-indexed
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let prev = &p[k - 1];
        let mut cur = vec![0u64; k + 1];
        for (d, &c) in prev.iter().enumerate() {
            cur[d + 1] = (cur[d + 1] + c) % l;
            cur[d] = (cur[d] + (l - h[k - 1][k - 1]) * c) % l;
        }
        let mut t = 1u64;
        for i in (1..k).rev() {
            t = t * h[i][i - 1] % l;
            let f = h[i - 1][k - 1] * t % l;
            if f != 0 {
                for (d, &c) in p[i - 1].iter().enumerate() {
                    cur[d] = (cur[d] + (l - f) * c) % l;
                }
            }
        }
        p.push(cur);
    }
    p.pop().unwrap()
}

/// Distinct roots in GF(ℓ) of a polynomial (low degree first).
pub fn roots(poly: &[u64], l: u64) -> Vec<u64> {
    (0..l)
        .filter(|&x| poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % l) == 0)
        .collect()
}
