//! Exact integer and rational linear algebra on small square matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Integer polynomial, constant term first.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Quotient of `a` by `d`, or `None` if the division is not exact over Z.
pub fn poly_div_exact(a: &IntPoly, d: &IntPoly) -> Option<IntPoly> {
    let d = trim(d.clone());
    let lead = d.last()?.clone();
    if lead.is_zero() {
        return None;
    }
    let mut r = trim(a.clone());
    if r.len() < d.len() {
        return r.iter().all(|c| c.is_zero()).then(|| vec![BigInt::zero()]);
    }
    let mut q = vec![BigInt::zero(); r.len() - d.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &r[i + d.len() - 1];
        if top.is_zero() {
            continue;
        }
        if !(top % &lead).is_zero() {
            return None;
        }
        let c = top / &lead;
        for (j, dj) in d.iter().enumerate() {
            r[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| trim(q))
}

/// `det(x I - m)` by fraction-free elimination over Z[x]. Every leading
/// principal minor of `x I - m` is monic, so no pivot vanishes and every
/// division is exact.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut a: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = -m[i][j].clone();
                    if i == j {
                        vec![c, BigInt::one()]
                    } else {
                        vec![c]
                    }
                })
                .collect()
        })
        .collect();
    let mut prev: IntPoly = vec![BigInt::one()];
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = poly_sub(&poly_mul(&a[k][k], &a[i][j]), &poly_mul(&a[i][k], &a[k][j]));
                a[i][j] = poly_div_exact(&num, &prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * &b[k][j];
            }
        }
    }
    out
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let p = a.first().map_or(0, |r| r.len());
    (0..p).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Rank over Q by Gaussian elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<Rational>> =
        m.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Smallest `k` with `rank((m - I)^k) = rank((m - I)^{k+1})`: the size of the
/// largest Jordan block for eigenvalue 1 (0 if 1 is not an eigenvalue).
pub fn nilpotency_index_at_one(m: &IntMatrix) -> usize {
    let n = m.len();
    let mut d = m.clone();
    for (i, row) in d.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    let mut power = identity(n);
    let mut last = n;
    for k in 0..=n {
        let next = mat_mul(&power, &d);
        let r = rank(&next);
        if r == last {
            return k;
        }
        last = r;
        power = next;
    }
    n
}

pub fn is_zero_poly(p: &IntPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}
