//! Hermite normal form over the integers, computed modulo a lattice multiple.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .row_iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combine(a: &[BigInt], ca: &BigInt, b: &[BigInt], cb: &BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

fn reduce_tail(row: &mut [BigInt], from: usize, modulus: &BigInt) {
    for v in &mut row[from..] {
        *v = v.mod_floor(modulus);
    }
}

/// Upper-triangular row Hermite form of the lattice spanned by `rows`
/// together with `modulus · Z^n`.
///
/// Every intermediate entry stays below `modulus`, so the computation is
/// bounded even for large determinants. The result has positive pivots
/// `d_k` on the diagonal and, above each pivot, entries in `[0, d_k)`.
pub fn hermite_mod(rows: &[Vec<i64>], n: usize, modulus: &BigInt) -> Result<IntMatrix> {
    assert!(modulus.is_positive());
    let mut work: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigInt::from(v).mod_floor(modulus))
                .collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(work.len() + 1);
        for row in work.drain(..) {
            if row[k].is_zero() {
                rest.push(row);
                continue;
            }
            pivot = Some(match pivot.take() {
                None => row,
                Some(p) => {
                    let ext = p[k].extended_gcd(&row[k]);
                    let (ga, gb) = (&p[k] / &ext.gcd, &row[k] / &ext.gcd);
                    let mut np = combine(&p, &ext.x, &row, &ext.y);
                    let mut nr = combine(&p, &-gb, &row, &ga);
                    debug_assert!(nr[k].is_zero());
                    reduce_tail(&mut np, k, modulus);
                    reduce_tail(&mut nr, k + 1, modulus);
                    if nr.iter().any(|v| !v.is_zero()) {
                        rest.push(nr);
                    }
                    np
                }
            });
        }
        // fold modulus·e_k into the pivot
        let p = match pivot {
            None => {
                let mut e = vec![BigInt::zero(); n];
                e[k] = modulus.clone();
                e
            }
            Some(p) => {
                let a = p[k].clone();
                let ext = a.extended_gcd(modulus);
                let g = ext.gcd;
                let mut np: Vec<BigInt> = p.iter().map(|v| &ext.x * v).collect();
                np[k] = g.clone();
                reduce_tail(&mut np, k + 1, modulus);
                let cof = -(modulus / &g);
                let mut z: Vec<BigInt> = p.iter().map(|v| &cof * v).collect();
                z[k] = BigInt::zero();
                reduce_tail(&mut z, k + 1, modulus);
                if z.iter().any(|v| !v.is_zero()) {
                    rest.push(z);
                }
                np
            }
        };
        pivots.push(p);
        work = rest;
    }
    debug_assert!(work.iter().all(|r| r.iter().all(Zero::is_zero)));

    for r in 0..n {
        for c in r + 1..n {
            let d = pivots[c][c].clone();
            let q = pivots[r][c].div_floor(&d);
            if !q.is_zero() {
                let (head, tail) = pivots.split_at_mut(c);
                for (x, y) in head[r][c..].iter_mut().zip(&tail[0][c..]) {
                    *x -= &q * y;
                }
            }
        }
    }

    let mut out = IntMatrix::zeros(n, n);
    for (i, row) in pivots.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            out[(i, j)] = v
                .to_i64()
                .ok_or_else(|| Error::Overflow(format!("canonical entry {v}")))?;
        }
    }
    Ok(out)
}
