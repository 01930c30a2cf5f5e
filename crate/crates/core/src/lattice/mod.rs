//! Full-rank sublattices of `Z^n`.
//!
//! Every [`Lattice`] caches its canonical basis: rows are basis vectors,
//! the row matrix is upper triangular with positive pivots `d_k`, and every
//! entry above a pivot lies in `[0, d_k)`. Read column-wise this is the
//! lower-triangular Hermite form, so two bases span the same lattice exactly
//! when their canonical forms are equal.

mod coset;
mod distance;
mod hnf;

pub use coset::{covering_radius_bitset, CosetAtlas, CosetIndexer};
pub use distance::DistanceResult;
pub use hnf::determinant;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{lcm, prime_factors};
use crate::codes::LinearCodeZm;
use crate::error::{Error, Result};
use crate::intmat::{manhattan, IntMatrix};

#[derive(Clone)]
pub struct Lattice {
    basis: IntMatrix,
    canonical: IntMatrix,
    volume: BigUint,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("dimension", &self.dimension())
            .field("volume", &self.volume)
            .field("diagonal", &self.diagonal())
            .finish()
    }
}

impl Lattice {
    /// Canonicalizes a square nonsingular basis.
    pub fn canonicalize(basis: &IntMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch {
                expected: basis.rows(),
                got: basis.cols(),
            });
        }
        let n = basis.rows();
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        let det = determinant(basis).abs();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let canonical = hnf::hermite_mod(&basis.to_rows(), n, &det)?;
        let volume = det.to_biguint().expect("positive");
        debug_assert_eq!(diag_product(&canonical), volume);
        Ok(Lattice {
            basis: basis.clone(),
            canonical,
            volume,
        })
    }

    /// Lattice spanned by `generators` together with `modulus · Z^n`.
    pub fn from_generators(n: usize, generators: &[Vec<i64>], modulus: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        if modulus == 0 {
            return Err(Error::precondition("modulus must be positive"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
        let canonical = hnf::hermite_mod(generators, n, &BigInt::from(modulus))?;
        let volume = diag_product(&canonical);
        Ok(Lattice {
            basis: canonical.clone(),
            canonical,
            volume,
        })
    }

    pub fn dimension(&self) -> usize {
        self.canonical.rows()
    }

    /// The basis this lattice was built from.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn canonical(&self) -> &IntMatrix {
        &self.canonical
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dimension())
            .map(|i| self.canonical[(i, i)])
            .collect()
    }

    pub fn volume(&self) -> &BigUint {
        &self.volume
    }

    pub fn volume_u64(&self) -> Option<u64> {
        self.volume.to_u64()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.dimension() {
            return false;
        }
        let mut v: Vec<i128> = x.iter().map(|&a| a as i128).collect();
        for k in 0..v.len() {
            let d = self.canonical[(k, k)] as i128;
            if v[k] % d != 0 {
                return false;
            }
            let q = v[k] / d;
            if q != 0 {
                for (vj, &rj) in v[k..].iter_mut().zip(&self.canonical.row(k)[k..]) {
                    *vj -= q * rj as i128;
                }
            }
        }
        true
    }

    fn contains_big(&self, x: &[BigInt]) -> bool {
        let mut v = x.to_vec();
        for k in 0..v.len() {
            let d = BigInt::from(self.canonical[(k, k)]);
            let (q, r) = v[k].div_rem(&d);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for (vj, &rj) in v[k..].iter_mut().zip(&self.canonical.row(k)[k..]) {
                    *vj -= &q * rj;
                }
            }
        }
        true
    }

    /// Whether every vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.canonical.row_iter().all(|r| self.contains(r))
    }

    /// Order of `e_axis` in `Z^n / L`.
    pub fn axis_period(&self, axis: usize) -> Result<u64> {
        let n = self.dimension();
        let mut order = BigInt::from(self.volume.clone());
        let mut primes: Vec<u64> = self
            .diagonal()
            .iter()
            .flat_map(|&d| prime_factors(d as u64))
            .collect();
        primes.sort_unstable();
        primes.dedup();
        let mut probe = vec![BigInt::zero(); n];
        for p in primes {
            let p = BigInt::from(p);
            loop {
                let (q, r) = order.div_rem(&p);
                if !r.is_zero() {
                    break;
                }
                probe[axis] = q.clone();
                if self.contains_big(&probe) {
                    order = q;
                } else {
                    break;
                }
            }
        }
        order
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("axis period {order}")))
    }

    /// Least `m` with `m · e_i ∈ L` for every axis.
    pub fn period(&self) -> Result<u64> {
        (0..self.dimension()).try_fold(1u64, |acc, i| Ok(lcm(acc, self.axis_period(i)?)))
    }

    /// `{x mod m : x ∈ L}`; requires the period to divide `m`.
    pub fn reduce_to_code(&self, m: u64) -> Result<LinearCodeZm> {
        let period = self.period()?;
        if m == 0 || !m.is_multiple_of(period) {
            return Err(Error::precondition(format!(
                "period {period} does not divide modulus {m}"
            )));
        }
        let gens: Vec<Vec<u64>> = self
            .canonical
            .row_iter()
            .map(|r| r.iter().map(|&v| v.rem_euclid(m as i64) as u64).collect())
            .collect();
        let code = LinearCodeZm::new(m, self.dimension(), gens)?;
        debug_assert_eq!(
            code.cardinality() * &self.volume,
            BigUint::from(m).pow(self.dimension() as u32)
        );
        Ok(code)
    }

    /// Image of the canonical basis under `x ↦ A·x / s`; fails unless the
    /// image is integral.
    pub fn map_rows<F>(&self, f: F) -> Result<Lattice>
    where
        F: Fn(&[i64]) -> Option<Vec<i64>>,
    {
        let rows: Vec<Vec<i64>> = self
            .canonical
            .row_iter()
            .map(|r| f(r).ok_or_else(|| Error::precondition("image is not integral")))
            .collect::<Result<_>>()?;
        Lattice::canonicalize(&IntMatrix::from_rows(&rows)?)
    }

    /// Minimum Manhattan weight over the basis rows; an upper bound on the
    /// minimum distance.
    pub fn lightest_row(&self) -> u64 {
        self.basis
            .row_iter()
            .chain(self.canonical.row_iter())
            .map(manhattan)
            .min()
            .unwrap_or(0)
    }

    pub fn indexer(&self) -> CosetIndexer {
        CosetIndexer::new(self)
    }

    /// Exact per-coset minimum weights by breadth-first search on `Z^n / L`.
    pub fn coset_bfs(&self, store_leaders: bool, coset_budget: u64) -> Result<CosetAtlas> {
        CosetAtlas::build(self, store_leaders, coset_budget)
    }

    pub fn covering_radius(&self, coset_budget: u64) -> Result<u32> {
        Ok(self.coset_bfs(false, coset_budget)?.covering_radius())
    }

    /// Minimum Manhattan weight of a nonzero lattice vector.
    pub fn min_manhattan_distance(&self, node_budget: u64) -> DistanceResult {
        distance::min_manhattan(self, node_budget)
    }
}

fn diag_product(m: &IntMatrix) -> BigUint {
    (0..m.rows()).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(m[(i, i)] as u64)
    })
}

/// Lattice `{x ∈ Z^n : A·x ≡ 0 (mod modulus)}`.
pub fn kernel_lattice(a: &IntMatrix, modulus: u64) -> Result<Lattice> {
    let n = a.cols();
    if modulus == 1 {
        return Lattice::from_generators(n, &[], 1);
    }
    let gens = crate::codes::kernel_mod(a, modulus)?;
    let gens: Vec<Vec<i64>> = gens
        .into_iter()
        .map(|g| g.into_iter().map(|v| v as i64).collect())
        .collect();
    Lattice::from_generators(n, &gens, modulus)
}

/// Lattice `{x ∈ Z^n : a_i·x ≡ 0 (mod moduli_i)}` for the rows `a_i` of `a`.
pub fn kernel_lattice_multi(a: &IntMatrix, moduli: &[u64]) -> Result<Lattice> {
    if moduli.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: moduli.len(),
        });
    }
    if moduli.contains(&0) {
        return Err(Error::precondition("moduli must be positive"));
    }
    let l = moduli.iter().fold(1u64, |acc, &m| lcm(acc, m));
    let rows: Vec<Vec<i64>> = a
        .row_iter()
        .zip(moduli)
        .map(|(r, &m)| r.iter().map(|&v| v * (l / m) as i64).collect())
        .collect();
    kernel_lattice(&IntMatrix::from_rows(&rows)?, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{paley_conference, sylvester_hadamard};

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        Lattice::canonicalize(&IntMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn identity_basis() {
        let l = Lattice::canonicalize(&IntMatrix::identity(5)).unwrap();
        assert_eq!(l.canonical(), &IntMatrix::identity(5));
        assert_eq!(l.volume_u64(), Some(1));
        assert_eq!(l.period().unwrap(), 1);
    }

    #[test]
    fn hadamard_basis_volume_and_form() {
        let h2 = sylvester_hadamard(2, 64).unwrap().to_int_matrix();
        let l = Lattice::canonicalize(&h2).unwrap();
        assert_eq!(l.volume_u64(), Some(16));
        let g22 = lat(&[
            vec![1, 1, 1, 1],
            vec![0, 2, 0, 2],
            vec![0, 0, 2, 2],
            vec![0, 0, 0, 4],
        ]);
        assert_eq!(g22.diagonal(), vec![1, 2, 2, 4]);
        assert_eq!(l, g22);
        assert!(l.contains(&[4, 0, 0, 0]));
        assert!(l.contains(&[0; 4]));
        assert!(!l.contains(&[2, 0, 0, 0]));
        assert_eq!(l.period().unwrap(), 4);
    }

    #[test]
    fn volumes_of_weighing_lattices() {
        let h3 = sylvester_hadamard(3, 64).unwrap().to_int_matrix();
        assert_eq!(Lattice::canonicalize(&h3).unwrap().volume_u64(), Some(4096));
        let c5 = paley_conference(5, 64).unwrap().to_int_matrix();
        let l = Lattice::canonicalize(&c5).unwrap();
        assert_eq!(l.volume_u64(), Some(125));
        assert_eq!(l.period().unwrap(), 5);
    }

    #[test]
    fn singular_and_empty_rejected() {
        let s = IntMatrix::from_rows(&[[1, 2], [2, 4]]).unwrap();
        assert!(matches!(Lattice::canonicalize(&s), Err(Error::Singular)));
        assert!(matches!(
            Lattice::canonicalize(&IntMatrix::zeros(0, 0)),
            Err(Error::EmptyDimension)
        ));
    }

    #[test]
    fn basis_rows_are_members() {
        let c5 = paley_conference(5, 64).unwrap().to_int_matrix();
        let l = Lattice::canonicalize(&c5).unwrap();
        for r in c5.row_iter() {
            assert!(l.contains(r));
        }
        assert!(!l.contains(&[1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn even_sum_lattice_period() {
        let mut rows = vec![vec![0i64; 4]; 4];
        rows[0] = vec![1, 1, 0, 0];
        rows[1] = vec![0, 1, 1, 0];
        rows[2] = vec![0, 0, 1, 1];
        rows[3] = vec![0, 0, 0, 2];
        let l = lat(&rows);
        assert_eq!(l.volume_u64(), Some(2));
        assert_eq!(l.period().unwrap(), 2);
    }

    #[test]
    fn reduction_sizes() {
        let h2 = sylvester_hadamard(2, 64).unwrap().to_int_matrix();
        let l = Lattice::canonicalize(&h2).unwrap();
        assert_eq!(l.reduce_to_code(4).unwrap().cardinality_u64(), Some(16));
        assert!(l.reduce_to_code(2).is_err());
        let c5 = paley_conference(5, 64).unwrap().to_int_matrix();
        let l = Lattice::canonicalize(&c5).unwrap();
        assert_eq!(l.reduce_to_code(5).unwrap().cardinality_u64(), Some(125));
        let i2 = Lattice::canonicalize(&IntMatrix::identity(2)).unwrap();
        assert_eq!(i2.reduce_to_code(3).unwrap().cardinality_u64(), Some(9));
    }

    #[test]
    fn generators_with_modulus() {
        // even-sum lattice in Z^3 from one generator plus 2Z^3
        let l = Lattice::from_generators(3, &[vec![1, 1, 0], vec![0, 1, 1]], 2).unwrap();
        assert_eq!(l.volume_u64(), Some(2));
        assert!(l.contains(&[1, 0, 1]));
        assert!(!l.contains(&[1, 0, 0]));
    }

    #[test]
    fn kernel_of_hadamard_mod_two_is_even_sum() {
        let h2 = sylvester_hadamard(2, 64).unwrap().to_int_matrix();
        let k = kernel_lattice(&h2, 2).unwrap();
        assert_eq!(k.volume_u64(), Some(2));
        assert!(k.contains(&[1, 1, 0, 0]));
        assert!(!k.contains(&[1, 0, 0, 0]));
    }
}
