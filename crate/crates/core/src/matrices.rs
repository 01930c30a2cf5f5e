//! Weighing, conference and Hadamard matrices.
//!
//! A weighing matrix of order `n` and weight `w` is a square `{-1, 0, 1}`
//! matrix with exactly `w` nonzeros in every row and column and
//! `M · Mᵀ = w I`. Hadamard matrices have `w = n`; conference matrices have
//! `w = n - 1` and a zero diagonal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, legendre};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    SkewSymmetric,
    None,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::SkewSymmetric => "skew_symmetric",
            Symmetry::None => "none",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeighingMatrix {
    order: usize,
    weight: usize,
    entries: Vec<i8>,
    symmetry: Symmetry,
}

/// Shape data returned by [`verify_weighing`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeighingShape {
    pub order: usize,
    pub weight: usize,
    pub symmetry: Symmetry,
}

impl WeighingMatrix {
    /// Validates `m` and wraps it. Fails unless every weighing invariant holds.
    pub fn new(m: &IntMatrix) -> Result<Self> {
        let shape = verify_weighing(m)?;
        Ok(WeighingMatrix {
            order: shape.order,
            weight: shape.weight,
            entries: m.as_slice().iter().map(|&v| v as i8).collect(),
            symmetry: shape.symmetry,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_hadamard(&self) -> bool {
        self.weight == self.order
    }

    pub fn is_conference(&self) -> bool {
        self.weight + 1 == self.order && (0..self.order).all(|i| self.get(i, i) == 0)
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_vec(
            self.order,
            self.order,
            self.entries.iter().map(|&v| v as i64).collect(),
        )
        .expect("square by construction")
    }

    /// `W · x` accumulated in 64 bits.
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        (0..self.order)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a as i64 * b).sum())
            .collect()
    }

    /// Whether `w` is a perfect square; returns its root.
    pub fn weight_root(&self) -> Option<u64> {
        let w = self.weight as u64;
        let d = (w as f64).sqrt().round() as u64;
        (d * d == w).then_some(d)
    }
}

impl fmt::Debug for WeighingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "W(n={}, w={}, {}) [",
            self.order, self.weight, self.symmetry
        )?;
        for i in 0..self.order {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

fn check_order(n: usize, max_order: usize) -> Result<()> {
    if n > max_order {
        return Err(Error::budget("matrix order", n, max_order as u64));
    }
    Ok(())
}

/// Checks every weighing-matrix invariant of `m` exactly.
pub fn verify_weighing(m: &IntMatrix) -> Result<WeighingShape> {
    if !m.is_square() {
        return Err(Error::NotWeighing(format!(
            "matrix is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    if let Some(v) = m.as_slice().iter().find(|v| !(-1..=1).contains(*v)) {
        return Err(Error::NotWeighing(format!("entry {v} outside {{-1,0,1}}")));
    }
    let w = m.row(0).iter().filter(|&&v| v != 0).count();
    if w == 0 {
        return Err(Error::NotWeighing("zero row".into()));
    }
    for i in 0..n {
        let rw = m.row(i).iter().filter(|&&v| v != 0).count();
        let cw = (0..n).filter(|&r| m[(r, i)] != 0).count();
        if rw != w || cw != w {
            return Err(Error::NotWeighing(format!(
                "row/column {i} has {rw}/{cw} nonzeros, expected {w}"
            )));
        }
    }
    let gram = m.mul(&m.transpose())?;
    if gram != IntMatrix::scalar(n, w as i64) {
        return Err(Error::NotWeighing("rows are not orthogonal".into()));
    }
    let t = m.transpose();
    let symmetry = if &t == m {
        Symmetry::Symmetric
    } else if t == m.neg() {
        Symmetry::SkewSymmetric
    } else {
        Symmetry::None
    };
    Ok(WeighingShape {
        order: n,
        weight: w,
        symmetry,
    })
}

/// Sylvester Hadamard matrix of order `2^m`.
pub fn sylvester_hadamard(m: u32, max_order: usize) -> Result<WeighingMatrix> {
    if m >= usize::BITS - 1 {
        return Err(Error::budget(
            "matrix order",
            format!("2^{m}"),
            max_order as u64,
        ));
    }
    check_order(1usize << m, max_order)?;
    let mut h = WeighingMatrix::new(&IntMatrix::identity(1))?;
    for _ in 0..m {
        h = doubling(&h, max_order)?;
    }
    Ok(h)
}

/// `[[H, H], [H, -H]]`.
pub fn doubling(h: &WeighingMatrix, max_order: usize) -> Result<WeighingMatrix> {
    if !h.is_hadamard() {
        return Err(Error::precondition("doubling needs a Hadamard matrix"));
    }
    check_order(2 * h.order(), max_order)?;
    let a = h.to_int_matrix();
    WeighingMatrix::new(&IntMatrix::blocks(&a, &a, &a, &a.neg())?)
}

fn require_odd_prime(q: u64) -> Result<()> {
    if q == 2 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(())
}

/// Jacobsthal matrix `Q[a][b] = χ(b - a)` over `F_q`.
fn jacobsthal(q: u64) -> IntMatrix {
    let n = q as usize;
    let mut j = IntMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            j[(a, b)] = legendre(b as i64 - a as i64, q) as i64;
        }
    }
    j
}

/// Paley conference matrix of order `q + 1`, bordered Jacobsthal form.
///
/// Symmetric for `q ≡ 1 (mod 4)`, skew-symmetric for `q ≡ 3 (mod 4)`. Rows
/// and columns are indexed by `{∞} ∪ F_q`; the first row is `(0, 1, …, 1)`,
/// so the result is already in normal form.
pub fn paley_conference(q: u64, max_order: usize) -> Result<WeighingMatrix> {
    require_odd_prime(q)?;
    check_order(q as usize + 1, max_order)?;
    let n = q as usize + 1;
    let jac = jacobsthal(q);
    let below = if q % 4 == 1 { 1 } else { -1 };
    let mut c = IntMatrix::zeros(n, n);
    for i in 1..n {
        c[(0, i)] = 1;
        c[(i, 0)] = below;
        for j in 1..n {
            c[(i, j)] = jac[(i - 1, j - 1)];
        }
    }
    WeighingMatrix::new(&c)
}

/// The symmetric variant only: rejects `q ≡ 3 (mod 4)`.
pub fn paley_conference_symmetric(q: u64, max_order: usize) -> Result<WeighingMatrix> {
    require_odd_prime(q)?;
    if q % 4 != 1 {
        return Err(Error::precondition(format!(
            "symmetric conference matrix needs q ≡ 1 (mod 4), got q = {q}"
        )));
    }
    paley_conference(q, max_order)
}

/// Hadamard matrix of order `q + 1` as `I + C` for the skew conference matrix `C`.
pub fn paley_hadamard(q: u64, max_order: usize) -> Result<WeighingMatrix> {
    require_odd_prime(q)?;
    if q % 4 != 3 {
        return Err(Error::precondition(format!(
            "Paley Hadamard construction needs q ≡ 3 (mod 4), got q = {q}"
        )));
    }
    let c = paley_conference(q, max_order)?.to_int_matrix();
    let mut h = c.clone();
    for i in 0..c.rows() {
        h[(i, i)] = 1;
    }
    WeighingMatrix::new(&h)
}

/// Symmetric Hadamard matrix of order `2(q + 1)` for `q ≡ 1 (mod 4)`:
/// `[[C + I, C - I], [C - I, -C - I]]` with `C` the symmetric conference matrix.
pub fn paley_hadamard_symmetric(q: u64, max_order: usize) -> Result<WeighingMatrix> {
    require_odd_prime(q)?;
    if q % 4 != 1 {
        return Err(Error::precondition(format!(
            "symmetric Paley Hadamard construction needs q ≡ 1 (mod 4), got q = {q}"
        )));
    }
    check_order(2 * (q as usize + 1), max_order)?;
    let c = paley_conference(q, max_order)?.to_int_matrix();
    let n = c.rows();
    let mut plus = c.clone();
    let mut minus = c.clone();
    for i in 0..n {
        plus[(i, i)] += 1;
        minus[(i, i)] -= 1;
    }
    WeighingMatrix::new(&IntMatrix::blocks(&plus, &minus, &minus, &plus.neg())?)
}

/// Negates and permutes columns so the first row reads `0…0 1…1`.
///
/// The column permutation is stable: zero columns keep their relative
/// order, then the nonzero columns keep theirs. Idempotent.
pub fn normal_form(w: &WeighingMatrix) -> WeighingMatrix {
    let n = w.order();
    let first = w.row(0);
    let order: Vec<usize> = (0..n)
        .filter(|&j| first[j] == 0)
        .chain((0..n).filter(|&j| first[j] != 0))
        .collect();
    let mut entries = vec![0i8; n * n];
    for i in 0..n {
        for (dst, &src) in order.iter().enumerate() {
            let sign = if first[src] < 0 { -1 } else { 1 };
            entries[i * n + dst] = w.get(i, src) * sign;
        }
    }
    let m = IntMatrix::from_vec(n, n, entries.iter().map(|&v| v as i64).collect()).expect("square");
    WeighingMatrix::new(&m).expect("column operations preserve weighing invariants")
}

/// Builds a matrix from a name: `sylvester:M`, `paley-i:Q`, `paley-ii:Q`,
/// `conference:Q` or `doubling:<name>`.
pub fn named(name: &str, max_order: usize) -> Result<WeighingMatrix> {
    let bad = || Error::precondition(format!("unknown matrix name {name:?}"));
    let (kind, arg) = name.split_once(':').ok_or_else(bad)?;
    if kind == "doubling" {
        return doubling(&named(arg, max_order)?, max_order);
    }
    let v: u64 = arg.parse().map_err(|_| bad())?;
    match kind {
        "sylvester" => sylvester_hadamard(u32::try_from(v).map_err(|_| bad())?, max_order),
        "paley-i" => paley_hadamard(v, max_order),
        "paley-ii" => paley_hadamard_symmetric(v, max_order),
        "conference" => paley_conference(v, max_order),
        _ => Err(bad()),
    }
}

/// Name of the default matrix of order `n`, tried in this order: Sylvester
/// for powers of two, Paley I Hadamard, Paley conference (`q ≡ 1 mod 4`),
/// Paley II Hadamard.
pub fn default_name_for_order(n: usize) -> Result<String> {
    let q = n as u64 - 1;
    if n.is_power_of_two() {
        Ok(format!("sylvester:{}", n.trailing_zeros()))
    } else if n > 2 && is_prime(q) && q % 4 == 3 {
        Ok(format!("paley-i:{q}"))
    } else if n > 2 && is_prime(q) && q % 4 == 1 {
        Ok(format!("conference:{q}"))
    } else if n.is_multiple_of(2) && is_prime(n as u64 / 2 - 1) && (n as u64 / 2 - 1) % 4 == 1 {
        Ok(format!("paley-ii:{}", n / 2 - 1))
    } else {
        Err(Error::precondition(format!(
            "no construction for order {n}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: usize = 64;

    #[test]
    fn names_and_default_orders() {
        let names: Vec<String> = [4, 6, 8, 12, 14, 20]
            .iter()
            .map(|&n| default_name_for_order(n).unwrap())
            .collect();
        assert_eq!(
            names,
            [
                "sylvester:2",
                "conference:5",
                "sylvester:3",
                "paley-i:11",
                "conference:13",
                "paley-i:19"
            ]
        );
        assert!(default_name_for_order(10).is_err());
        assert!(default_name_for_order(22).is_err());
        for name in &names {
            assert_eq!(named(name, BUDGET).unwrap().order(), name_order(name));
        }
        assert!(named("doubling:paley-i:3", BUDGET).unwrap().is_hadamard());
        assert!(named("paley-ii:5", BUDGET).unwrap().symmetry() == Symmetry::Symmetric);
        assert!(named("hadamard:4", BUDGET).is_err());
        assert!(named("sylvester", BUDGET).is_err());
    }

    fn name_order(name: &str) -> usize {
        let (kind, v) = name.split_once(':').unwrap();
        let v: usize = v.parse().unwrap();
        if kind == "sylvester" {
            1 << v
        } else {
            v + 1
        }
    }

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    /// Exhaustive equivalence under signed row and column permutations.
    fn equivalent(a: &WeighingMatrix, b: &WeighingMatrix) -> bool {
        assert!(a.order() <= 8);
        let n = a.order();
        if n != b.order() || a.weight() != b.weight() {
            return false;
        }
        let canon_rows = |rows: Vec<Vec<i8>>| {
            let mut rs: Vec<Vec<i8>> = rows
                .into_iter()
                .map(|r| {
                    let lead = r.iter().copied().find(|&v| v != 0).unwrap_or(1);
                    r.into_iter().map(|v| v * lead).collect()
                })
                .collect();
            rs.sort();
            rs
        };
        let target = canon_rows((0..n).map(|i| b.row(i).to_vec()).collect());
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            for signs in 0u32..(1 << n) {
                let rows = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let s = if signs >> j & 1 == 1 { -1 } else { 1 };
                                a.get(i, perm[j]) * s
                            })
                            .collect()
                    })
                    .collect();
                if canon_rows(rows) == target {
                    return true;
                }
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn sylvester_examples() {
        let h0 = sylvester_hadamard(0, BUDGET).unwrap();
        assert_eq!(h0.entries(), &[1]);
        let h2 = sylvester_hadamard(2, BUDGET).unwrap();
        let expected = mat(&[
            &[1, 1, 1, 1],
            &[1, -1, 1, -1],
            &[1, 1, -1, -1],
            &[1, -1, -1, 1],
        ]);
        assert_eq!(h2.to_int_matrix(), expected);
        assert_eq!(h2.symmetry(), Symmetry::Symmetric);
        let h3 = sylvester_hadamard(3, BUDGET).unwrap().to_int_matrix();
        assert_eq!(h3.mul(&h3.transpose()).unwrap(), IntMatrix::scalar(8, 8));
        assert_eq!(h3.transpose(), h3);
    }

    #[test]
    fn sylvester_is_iterated_doubling() {
        for m in 1..=6 {
            let prev = sylvester_hadamard(m - 1, BUDGET).unwrap();
            assert_eq!(
                doubling(&prev, BUDGET).unwrap(),
                sylvester_hadamard(m, BUDGET).unwrap()
            );
        }
    }

    #[test]
    fn sylvester_budget() {
        assert!(matches!(
            sylvester_hadamard(7, BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(sylvester_hadamard(7, 128).is_ok());
    }

    #[test]
    fn doubling_examples() {
        let one = WeighingMatrix::new(&IntMatrix::identity(1)).unwrap();
        let d = doubling(&one, BUDGET).unwrap();
        assert_eq!(d.to_int_matrix(), mat(&[&[1, 1], &[1, -1]]));
        let p3 = paley_hadamard(3, BUDGET).unwrap();
        let d8 = doubling(&p3, BUDGET).unwrap().to_int_matrix();
        assert_eq!(d8.mul(&d8.transpose()).unwrap(), IntMatrix::scalar(8, 8));
        let conf = paley_conference(5, BUDGET).unwrap();
        assert!(doubling(&conf, BUDGET).is_err());
    }

    #[test]
    fn conference_examples() {
        let c5 = paley_conference(5, BUDGET).unwrap();
        assert_eq!((c5.order(), c5.weight()), (6, 5));
        assert_eq!(c5.symmetry(), Symmetry::Symmetric);
        assert!(c5.is_conference());
        let c13 = paley_conference_symmetric(13, BUDGET).unwrap();
        assert_eq!(
            (c13.order(), c13.weight(), c13.symmetry()),
            (14, 13, Symmetry::Symmetric)
        );
        let c7 = paley_conference(7, BUDGET).unwrap();
        assert_eq!(c7.symmetry(), Symmetry::SkewSymmetric);
        assert!(matches!(
            paley_conference(4, BUDGET),
            Err(Error::NotPrime(4))
        ));
        assert!(paley_conference_symmetric(7, BUDGET).is_err());
    }

    #[test]
    fn paley_hadamard_examples() {
        let p3 = paley_hadamard(3, BUDGET).unwrap();
        let h2 = sylvester_hadamard(2, BUDGET).unwrap();
        assert!(p3.is_hadamard());
        assert!(equivalent(&p3, &h2));
        let p11 = paley_hadamard(11, BUDGET).unwrap().to_int_matrix();
        assert_eq!(
            p11.mul(&p11.transpose()).unwrap(),
            IntMatrix::scalar(12, 12)
        );
        assert!(paley_hadamard(5, BUDGET).is_err());
        let s5 = paley_hadamard_symmetric(5, BUDGET).unwrap();
        assert_eq!((s5.order(), s5.symmetry()), (12, Symmetry::Symmetric));
        assert!(s5.is_hadamard());
    }

    #[test]
    fn equivalence_is_not_trivially_true() {
        let c5 = paley_conference(5, BUDGET).unwrap();
        let h2 = sylvester_hadamard(2, BUDGET).unwrap();
        assert!(!equivalent(
            &h2,
            &WeighingMatrix::new(&IntMatrix::identity(4)).unwrap()
        ));
        assert!(equivalent(&c5, &normal_form(&c5)));
    }

    #[test]
    fn verify_examples() {
        let s = verify_weighing(&IntMatrix::identity(3)).unwrap();
        assert_eq!((s.order, s.weight, s.symmetry), (3, 1, Symmetry::Symmetric));
        let h2 = sylvester_hadamard(2, BUDGET).unwrap().to_int_matrix();
        let s = verify_weighing(&h2).unwrap();
        assert_eq!((s.order, s.weight, s.symmetry), (4, 4, Symmetry::Symmetric));
        assert!(verify_weighing(&mat(&[&[1, 1], &[1, 1]])).is_err());
        assert!(verify_weighing(&mat(&[&[1, 1, 0], &[1, -1, 0]])).is_err());
        assert!(verify_weighing(&mat(&[&[2, 0], &[0, 2]])).is_err());
        assert!(verify_weighing(&mat(&[&[1, 0], &[1, 1]])).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let h2 = sylvester_hadamard(2, BUDGET).unwrap();
        assert_eq!(normal_form(&h2), h2);
        let mut negated = h2.to_int_matrix();
        for i in 0..4 {
            negated[(i, 2)] *= -1;
        }
        let negated = WeighingMatrix::new(&negated).unwrap();
        assert_eq!(normal_form(&negated), h2);
        let c5 = normal_form(&paley_conference(5, BUDGET).unwrap());
        assert_eq!(c5.row(0), &[0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn normal_form_idempotent_and_shape_preserving() {
        let ms = [
            paley_conference(7, BUDGET).unwrap(),
            paley_hadamard(11, BUDGET).unwrap(),
            paley_hadamard_symmetric(5, BUDGET).unwrap(),
        ];
        for m in &ms {
            let nf = normal_form(m);
            assert_eq!(normal_form(&nf), nf);
            let w = m.weight();
            let n = m.order();
            let first: Vec<i8> = (0..n).map(|j| i8::from(j >= n - w)).collect();
            assert_eq!(nf.row(0), &first[..]);
            assert_eq!((nf.order(), nf.weight()), (n, w));
        }
    }

    #[test]
    fn all_constructions_are_orthogonal_both_ways() {
        let ms = [
            sylvester_hadamard(4, BUDGET).unwrap(),
            paley_conference(13, BUDGET).unwrap(),
            paley_conference(11, BUDGET).unwrap(),
            paley_hadamard(7, BUDGET).unwrap(),
            paley_hadamard_symmetric(13, BUDGET).unwrap(),
        ];
        for m in &ms {
            let a = m.to_int_matrix();
            let w = IntMatrix::scalar(m.order(), m.weight() as i64);
            assert_eq!(a.mul(&a.transpose()).unwrap(), w);
            assert_eq!(a.transpose().mul(&a).unwrap(), w);
        }
    }
}
