//! The doubling family: the 0/1 matrices `H_m`, the scaled bases `G(m,j)`,
//! the parity-check matrices `F(m,j)`, and the lattices `Λ(m,j)` they span.
//!
//! Row `s` of `H_m` is the indicator of the supersets of `s` (as bit sets) in
//! `0..2^m`, so its weight is `2^{m - popcount(s)}`.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::arith::binomial;
use crate::budget::Budgets;
use crate::codes::LinearCodeZm;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::lattice::{DistanceResult, Lattice};
use crate::matrices::sylvester_hadamard;

fn order(m: u32, max_order: usize) -> Result<usize> {
    let n = 1usize
        .checked_shl(m)
        .filter(|&n| n <= max_order && m < 31)
        .ok_or_else(|| Error::budget("matrix order", format!("2^{m}"), max_order as u64))?;
    Ok(n)
}

fn check_j(m: u32, j: u32) -> Result<()> {
    if j > m {
        return Err(Error::precondition(format!(
            "need 0 <= j <= m, got m={m}, j={j}"
        )));
    }
    Ok(())
}

/// `log2` of the weight of row `s` of `H_m`.
pub fn row_level(m: u32, s: usize) -> u32 {
    m - s.count_ones()
}

/// `H_0 = [1]`, `H_{m+1} = [[H_m, H_m], [0, H_m]]`.
pub fn h01(m: u32, max_order: usize) -> Result<IntMatrix> {
    let n = order(m, max_order)?;
    let mut h = IntMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            h[(r, c)] = i64::from(r & c == r);
        }
    }
    Ok(h)
}

/// `G(m,j)`: row `s` of `H_m` scaled by `2^{j-ℓ}` when its weight `2^ℓ`
/// has `ℓ < j`.
pub fn g_matrix(m: u32, j: u32, max_order: usize) -> Result<IntMatrix> {
    check_j(m, j)?;
    let mut g = h01(m, max_order)?;
    for s in 0..g.rows() {
        let l = row_level(m, s);
        if l < j {
            let f = 1i64 << (j - l);
            g.row_mut(s).iter_mut().for_each(|v| *v *= f);
        }
    }
    Ok(g)
}

fn stack(top: &IntMatrix, bottom: &IntMatrix, bottom_left_zero: bool) -> IntMatrix {
    let z = IntMatrix::zeros(bottom.rows(), top.cols());
    let left = if bottom_left_zero { &z } else { bottom };
    IntMatrix::blocks(top, top, left, bottom).expect("shapes agree")
}

/// `G(m,j)` by its block recursion; agrees with [`g_matrix`].
pub fn g_matrix_recursive(m: u32, j: u32, max_order: usize) -> Result<IntMatrix> {
    check_j(m, j)?;
    order(m, max_order)?;
    fn rec(m: u32, j: u32) -> IntMatrix {
        if j == 0 {
            return h01(m, usize::MAX).expect("order checked");
        }
        if j == m {
            let g = rec(m - 1, m - 1);
            return stack(&g, &g.scale(2), true);
        }
        stack(&rec(m - 1, j - 1), &rec(m - 1, j), true)
    }
    Ok(rec(m, j))
}

/// `F'(m,j)` by its block recursion.
pub fn f_prime(m: u32, j: u32, max_order: usize) -> Result<IntMatrix> {
    check_j(m, j)?;
    order(m, max_order)?;
    fn rec(m: u32, j: u32) -> IntMatrix {
        if j == 0 {
            return IntMatrix::from_rows(&[vec![1i64; 1 << m]]).expect("one row");
        }
        if j == m {
            let f = rec(m - 1, m - 1);
            return stack(&f, &f.scale(2), true);
        }
        stack(&rec(m - 1, j), &rec(m - 1, j - 1).scale(2), true)
    }
    Ok(rec(m, j))
}

/// `F(m,j)`: `F'(m,j)` without its last row.
pub fn parity_check(m: u32, j: u32, max_order: usize) -> Result<IntMatrix> {
    Ok(f_prime(m, j, max_order)?.remove_last_row())
}

/// Rows `s` of `H_m` with `m - ℓ < j`, each scaled by `2^{m-ℓ}`.
pub fn parity_check_direct(m: u32, j: u32, max_order: usize) -> Result<IntMatrix> {
    check_j(m, j)?;
    let h = h01(m, max_order)?;
    let rows: Vec<Vec<i64>> = (0..h.rows())
        .filter(|&s| m - row_level(m, s) < j)
        .map(|s| {
            let f = 1i64 << (m - row_level(m, s));
            h.row(s).iter().map(|v| v * f).collect()
        })
        .collect();
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, h.cols()));
    }
    IntMatrix::from_rows(&rows)
}

/// Lattice spanned by `G(m,j)`.
pub fn lambda_mj(m: u32, j: u32, max_order: usize) -> Result<Lattice> {
    Lattice::canonicalize(&g_matrix(m, j, max_order)?)
}

/// Reduction of `Λ(m,j)` to `Z_{2^j}`.
pub fn c_mj(m: u32, j: u32, max_order: usize) -> Result<LinearCodeZm> {
    if j == 0 {
        return Err(Error::precondition("C(m,0) would live over Z_1"));
    }
    lambda_mj(m, j, max_order)?.reduce_to_code(1 << j)
}

/// `Π_{i=0}^{j} 2^{(j-i)·C(m,i)}`.
pub fn volume_formula(m: u32, j: u32) -> BigUint {
    let e: u64 = (0..=j as u64)
        .map(|i| (j as u64 - i) * binomial(m as u64, i))
        .sum();
    BigUint::one() << e
}

/// Number of rows of `H_m` of weight `2^i`, indexed by `i`.
pub fn row_weight_census(m: u32, max_order: usize) -> Result<Vec<u64>> {
    let h = h01(m, max_order)?;
    let mut census = vec![0u64; m as usize + 1];
    for r in h.row_iter() {
        let w = r.iter().sum::<i64>() as u64;
        if !w.is_power_of_two() {
            return Err(Error::precondition("row weight not a power of two"));
        }
        census[w.trailing_zeros() as usize] += 1;
    }
    Ok(census)
}

/// Whether `G(m,m)` and the ±1 Sylvester matrix span the same lattice.
pub fn lambda_mm_equals_hadamard(m: u32, max_order: usize) -> Result<bool> {
    let g = lambda_mj(m, m, max_order)?;
    let h = Lattice::canonicalize(&sylvester_hadamard(m, max_order)?.to_int_matrix())?;
    Ok(g == h)
}

pub fn covering_radius_exact(m: u32, j: u32, budgets: &Budgets) -> Result<u32> {
    lambda_mj(m, j, budgets.max_order)?.covering_radius(budgets.coset_budget)
}

/// Upper bound on `r(m,j)` from the two recursions, seeded with
/// `r(m,2) = 2`, `r(2,2) = 2`, `r(3,3) = 6` and `r(4,4) <= 20`.
pub fn covering_radius_bound(m: u32, j: u32) -> Result<u64> {
    if j < 2 || j > m {
        return Err(Error::precondition(format!(
            "bound defined for 2 <= j <= m, got m={m}, j={j}"
        )));
    }
    Ok(match (m, j) {
        (_, 2) => 2,
        (3, 3) => 6,
        (4, 4) => 20,
        (m, j) if m == j => 3 * covering_radius_bound(m - 1, m - 1)? + (1 << (m - 1)),
        (m, j) => covering_radius_bound(m - 1, j - 1)? + covering_radius_bound(m - 1, j)?,
    })
}

/// Modulus conventions for the syndrome test `F(m,j)·x ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityModulus {
    /// Every row modulo `2^j`.
    TwoPowJ,
    /// Every row modulo `2^m`.
    TwoPowM,
    /// Row derived from `H_m` row `s` modulo that row's weight `2^ℓ`.
    RowWeight,
}

impl ParityModulus {
    pub const ALL: [ParityModulus; 3] = [
        ParityModulus::TwoPowJ,
        ParityModulus::TwoPowM,
        ParityModulus::RowWeight,
    ];
}

/// `{x ∈ Z^n : F(m,j)·x ≡ 0}` under `convention`, compared with `Λ(m,j)`.
pub fn parity_check_exact(
    m: u32,
    j: u32,
    convention: ParityModulus,
    max_order: usize,
) -> Result<bool> {
    let f = parity_check(m, j, max_order)?;
    let n = f.cols();
    let moduli: Vec<u64> = f
        .row_iter()
        .map(|r| match convention {
            ParityModulus::TwoPowJ => 1u64 << j,
            ParityModulus::TwoPowM => 1u64 << m,
            ParityModulus::RowWeight => {
                // the row is 2^t times a 0/1 row of weight 2^ℓ
                let g = r.iter().copied().filter(|&v| v != 0).min().unwrap_or(1) as u64;
                let ones = r.iter().filter(|&&v| v != 0).count() as u64;
                debug_assert!(g.is_power_of_two() && ones.is_power_of_two());
                ones
            }
        })
        .collect();
    let lhs = if f.rows() == 0 {
        Lattice::canonicalize(&IntMatrix::identity(n))?
    } else {
        crate::lattice::kernel_lattice_multi(&f, &moduli)?
    };
    Ok(lhs == lambda_mj(m, j, max_order)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub m: u32,
    pub j: u32,
    pub volume: String,
    pub volume_matches_determinant: bool,
    pub min_distance: DistanceResult,
    /// `None` when the coset count exceeds the budget.
    pub covering_radius: Option<u32>,
    pub bound: Option<u64>,
}

/// Invariants of `Λ(m,j)` for every `0 <= j <= m`.
pub fn table(m: u32, budgets: &Budgets) -> Result<Vec<TableRow>> {
    (0..=m)
        .map(|j| {
            let l = lambda_mj(m, j, budgets.max_order)?;
            let formula = volume_formula(m, j);
            let covering_radius = match l.covering_radius(budgets.coset_budget) {
                Ok(r) => Some(r),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(TableRow {
                m,
                j,
                volume: formula.to_string(),
                volume_matches_determinant: *l.volume() == formula,
                min_distance: l.min_manhattan_distance(budgets.node_budget),
                covering_radius,
                bound: covering_radius_bound(m, j).ok(),
            })
        })
        .collect()
}
