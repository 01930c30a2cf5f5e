//! Howell form: the canonical generating set of a submodule of `Z_m^n`.
//!
//! Rows are in echelon order with pivots dividing `m`, entries above a pivot
//! `d` lie in `[0, d)`, and for every pivot row `r` the annihilator multiple
//! `(m/d)·r` is folded back into the rows below. The last condition makes the
//! rows whose first `c` entries vanish span exactly the codewords with that
//! property, which is what kernel extraction relies on.

use crate::arith::{gcd, normalizing_unit, xgcd};

/// A row with its pivot column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct HowellRow {
    pub pivot: usize,
    pub entries: Vec<u64>,
}

fn is_zero(r: &[u64]) -> bool {
    r.iter().all(|&v| v == 0)
}

/// `a·x + b·y mod m`, entrywise from `from`.
fn combine(x: &[u64], a: u64, y: &[u64], b: u64, m: u64, from: usize) -> Vec<u64> {
    let mut out = vec![0u64; x.len()];
    for j in from..x.len() {
        out[j] = (a * x[j] + b * y[j]) % m;
    }
    out
}

fn neg(a: u64, m: u64) -> u64 {
    (m - a % m) % m
}

pub(crate) fn howell_form(m: u64, n: usize, generators: &[Vec<u64>]) -> Vec<HowellRow> {
    let mut pool: Vec<Vec<u64>> = generators
        .iter()
        .map(|g| g.iter().map(|&v| v % m).collect::<Vec<_>>())
        .filter(|g| !is_zero(g))
        .collect();
    let mut out: Vec<HowellRow> = Vec::new();
    for c in 0..n {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::with_capacity(pool.len() + 1);
        for row in pool.drain(..) {
            if row[c] == 0 {
                rest.push(row);
                continue;
            }
            pivot = Some(match pivot.take() {
                None => row,
                Some(p) => {
                    let (g, s, t) = xgcd(p[c] as i64, row[c] as i64);
                    let s = s.rem_euclid(m as i64) as u64;
                    let t = t.rem_euclid(m as i64) as u64;
                    let (pa, rb) = (p[c] / g as u64, row[c] / g as u64);
                    let np = combine(&p, s, &row, t, m, c);
                    let nr = combine(&p, neg(rb, m), &row, pa, m, c);
                    debug_assert_eq!(nr[c], 0);
                    if !is_zero(&nr) {
                        rest.push(nr);
                    }
                    np
                }
            });
        }
        if let Some(p) = pivot {
            let u = normalizing_unit(p[c], m);
            let p: Vec<u64> = p.iter().map(|&v| v * u % m).collect();
            let d = p[c];
            debug_assert_eq!(d, gcd(d, m));
            for above in out.iter_mut() {
                let q = above.entries[c] / d;
                if q != 0 {
                    let nq = neg(q, m);
                    for j in c..n {
                        above.entries[j] = (above.entries[j] + nq * p[j]) % m;
                    }
                }
            }
            let ann: Vec<u64> = p.iter().map(|&v| v * (m / d) % m).collect();
            if !is_zero(&ann) {
                rest.push(ann);
            }
            out.push(HowellRow {
                pivot: c,
                entries: p,
            });
        }
        pool = rest;
    }
    debug_assert!(pool.is_empty());
    out
}

/// Reduces `x` against a Howell form; the residue is zero iff `x` is in the
/// row span.
pub(crate) fn reduce(rows: &[HowellRow], m: u64, x: &mut [u64]) {
    for r in rows {
        let d = r.entries[r.pivot];
        let q = x[r.pivot] / d;
        if q != 0 {
            let nq = neg(q, m);
            for j in r.pivot..x.len() {
                x[j] = (x[j] + nq * r.entries[j]) % m;
            }
        }
    }
}

/// Generators of `{x ∈ Z_m^n : A·x ≡ 0}` for the `k × n` matrix `a`.
pub(crate) fn kernel(m: u64, a: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let k = a.len();
    // rows (column j of A | e_j); the span restricted to zero first block
    // is {(0, u) : A·u = 0}
    let aug: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let mut r = vec![0u64; k + n];
            for (i, ai) in a.iter().enumerate() {
                r[i] = ai[j] % m;
            }
            r[k + j] = 1 % m;
            r
        })
        .collect();
    howell_form(m, k + n, &aug)
        .into_iter()
        .filter(|r| r.pivot >= k)
        .map(|r| r.entries[k..].to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(m: u64, n: usize, gens: &[Vec<u64>]) -> std::collections::BTreeSet<Vec<u64>> {
        // closure under addition, for oracles on tiny modules
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0u64; n]);
        let mut frontier = vec![vec![0u64; n]];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
                if set.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        set
    }

    #[test]
    fn howell_rows_span_the_same_module() {
        let cases: Vec<(u64, Vec<Vec<u64>>)> = vec![
            (4, vec![vec![2, 0], vec![0, 2]]),
            (12, vec![vec![4, 6, 3], vec![2, 2, 0]]),
            (
                8,
                vec![vec![2, 4, 6, 1], vec![4, 0, 4, 2], vec![6, 6, 2, 3]],
            ),
            (6, vec![vec![3, 2], vec![2, 3]]),
        ];
        for (m, gens) in cases {
            let n = gens[0].len();
            let h = howell_form(m, n, &gens);
            let rows: Vec<Vec<u64>> = h.iter().map(|r| r.entries.clone()).collect();
            let want = span(m, n, &gens);
            assert_eq!(span(m, n, &rows), want, "m={m} {gens:?}");
            let card: u64 = h.iter().map(|r| m / r.entries[r.pivot]).product();
            assert_eq!(card, want.len() as u64);
        }
    }

    #[test]
    fn kernel_is_exact_on_small_cases() {
        let m = 6;
        let a = vec![vec![2, 3, 1], vec![0, 3, 3]];
        let ker = kernel(m, &a, 3);
        let ker_set = span(m, 3, &ker);
        let mut brute = std::collections::BTreeSet::new();
        for x0 in 0..m {
            for x1 in 0..m {
                for x2 in 0..m {
                    let x = [x0, x1, x2];
                    if a.iter()
                        .all(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum::<u64>() % m == 0)
                    {
                        brute.insert(x.to_vec());
                    }
                }
            }
        }
        assert_eq!(ker_set, brute);
    }
}
