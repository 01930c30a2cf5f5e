//! Linear codes over `Z_m`.

mod distance;
mod howell;

pub use distance::{CodeDistance, Metric};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::arith::is_prime;
use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use howell::HowellRow;

pub const MAX_MODULUS: u64 = 1 << 16;

/// A submodule of `Z_m^n`, stored by its Howell form.
///
/// Two codes compare equal exactly when they contain the same words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearCodeZm {
    modulus: u64,
    length: usize,
    howell: Vec<HowellRow>,
}

impl std::fmt::Debug for LinearCodeZm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearCodeZm")
            .field("modulus", &self.modulus)
            .field("length", &self.length)
            .field("howell", &self.howell_rows())
            .finish()
    }
}

pub fn lee_weight(x: &[u64], m: u64) -> u64 {
    x.iter().map(|&v| (v % m).min(m - v % m)).sum()
}

pub fn hamming_weight(x: &[u64]) -> u64 {
    x.iter().filter(|&&v| v != 0).count() as u64
}

/// Generators of `{x ∈ Z_m^n : A·x ≡ 0 (mod m)}`.
pub fn kernel_mod(a: &IntMatrix, m: u64) -> Result<Vec<Vec<u64>>> {
    check_modulus(m)?;
    let rows: Vec<Vec<u64>> = a
        .row_iter()
        .map(|r| r.iter().map(|&v| v.rem_euclid(m as i64) as u64).collect())
        .collect();
    Ok(howell::kernel(m, &rows, a.cols()))
}

fn check_modulus(m: u64) -> Result<()> {
    if !(2..=MAX_MODULUS).contains(&m) {
        return Err(Error::precondition(format!(
            "modulus {m} outside 2..={MAX_MODULUS}"
        )));
    }
    Ok(())
}

impl LinearCodeZm {
    pub fn new(modulus: u64, length: usize, generators: Vec<Vec<u64>>) -> Result<Self> {
        check_modulus(modulus)?;
        if length == 0 {
            return Err(Error::EmptyDimension);
        }
        if let Some(g) = generators.iter().find(|g| g.len() != length) {
            return Err(Error::DimensionMismatch {
                expected: length,
                got: g.len(),
            });
        }
        Ok(LinearCodeZm {
            modulus,
            length,
            howell: howell::howell_form(modulus, length, &generators),
        })
    }

    /// Row span of an integer matrix reduced modulo `m`.
    pub fn from_matrix(a: &IntMatrix, m: u64) -> Result<Self> {
        let gens = a
            .row_iter()
            .map(|r| r.iter().map(|&v| v.rem_euclid(m as i64) as u64).collect())
            .collect();
        Self::new(m, a.cols(), gens)
    }

    pub fn full_space(m: u64, n: usize) -> Result<Self> {
        let gens = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        Self::new(m, n, gens)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// The Howell rows, in echelon order.
    pub fn howell_rows(&self) -> Vec<Vec<u64>> {
        self.howell.iter().map(|r| r.entries.clone()).collect()
    }

    /// Same code with its generators replaced by the Howell rows.
    pub fn howell_form(&self) -> LinearCodeZm {
        LinearCodeZm::new(self.modulus, self.length, self.howell_rows()).expect("valid code")
    }

    pub fn rank(&self) -> usize {
        self.howell.len()
    }

    pub fn pivots(&self) -> Vec<(usize, u64)> {
        self.howell
            .iter()
            .map(|r| (r.pivot, r.entries[r.pivot]))
            .collect()
    }

    pub fn cardinality(&self) -> BigUint {
        self.howell.iter().fold(BigUint::one(), |acc, r| {
            acc * BigUint::from(self.modulus / r.entries[r.pivot])
        })
    }

    pub fn cardinality_u64(&self) -> Option<u64> {
        self.cardinality().to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.howell.is_empty()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        if x.len() != self.length {
            return false;
        }
        let mut v: Vec<u64> = x.iter().map(|&a| a % self.modulus).collect();
        howell::reduce(&self.howell, self.modulus, &mut v);
        v.iter().all(|&a| a == 0)
    }

    pub fn contains_code(&self, other: &LinearCodeZm) -> bool {
        self.modulus == other.modulus
            && self.length == other.length
            && other.howell.iter().all(|r| self.contains(&r.entries))
    }

    pub fn dual(&self) -> LinearCodeZm {
        let gens = self.howell_rows();
        let ker = howell::kernel(self.modulus, &gens, self.length);
        LinearCodeZm::new(self.modulus, self.length, ker).expect("valid code")
    }

    pub fn is_self_dual(&self) -> bool {
        *self == self.dual()
    }

    /// Minimum weight by visiting every codeword.
    pub fn min_weight_enumerate(&self, metric: Metric, enum_budget: u64) -> Result<CodeDistance> {
        let size = self.cardinality();
        if size > BigUint::from(enum_budget) {
            return Err(Error::budget("codeword enumeration", size, enum_budget));
        }
        let (distance, witness) =
            distance::enumerate_min(self.modulus, self.length, &self.howell, metric)
                .ok_or_else(|| Error::precondition("zero code has no minimum distance"))?;
        Ok(CodeDistance::Exact { distance, witness })
    }

    /// Minimum weight by branch-and-bound over Howell coefficients.
    pub fn min_weight_pruned(&self, metric: Metric, node_budget: u64) -> Result<CodeDistance> {
        distance::pruned_min(self.modulus, self.length, &self.howell, metric, node_budget)
            .ok_or_else(|| Error::precondition("zero code has no minimum distance"))
    }

    /// Full enumeration when the code fits the enumeration budget, pruned
    /// search otherwise.
    pub fn min_distance(&self, metric: Metric, budgets: &Budgets) -> Result<CodeDistance> {
        if self.cardinality() <= BigUint::from(budgets.enum_budget) {
            self.min_weight_enumerate(metric, budgets.enum_budget)
        } else {
            self.min_weight_pruned(metric, budgets.node_budget)
        }
    }

    /// Whether `d_H = n - k + 1`; defined over prime fields only.
    pub fn is_mds(&self, budgets: &Budgets) -> Result<MdsReport> {
        if !is_prime(self.modulus) {
            return Err(Error::NotPrime(self.modulus));
        }
        let k = self.rank();
        let d = self.min_distance(Metric::Hamming, budgets)?;
        let singleton = (self.length - k + 1) as u64;
        Ok(MdsReport {
            length: self.length,
            dimension: k,
            distance: d.clone(),
            mds: d.exact().map(|d| d == singleton),
        })
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MdsReport {
    pub length: usize,
    pub dimension: usize,
    pub distance: CodeDistance,
    /// `None` when the distance is only bracketed.
    pub mds: Option<bool>,
}
