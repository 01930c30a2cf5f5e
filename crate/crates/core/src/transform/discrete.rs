//! `T̃^W(x) = W(x - s)/D + s`, where `s` is the coset leader of `x` in
//! `Λ^W_D` and `w = D^2`.
//!
//! The syndrome `Wx mod D` identifies the coset of `x` exactly, so a table
//! from syndromes to leaders replaces any lattice reduction at apply time.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lambda_ws;
use super::sphere::lee_sphere_size;
use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::io::matrix_hash;
use crate::lattice::Lattice;
use crate::matrices::{Symmetry, WeighingMatrix};

#[derive(Debug, Clone)]
struct Leader {
    s: Vec<i64>,
    ws: Vec<i64>,
}

pub struct DiscreteTransform {
    w: WeighingMatrix,
    d: i64,
    bits: u32,
    lattice: Lattice,
    covering_radius: u32,
    table: HashMap<u128, Leader>,
}

impl std::fmt::Debug for DiscreteTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiscreteTransform")
            .field("order", &self.w.order())
            .field("d", &self.d)
            .field("cosets", &self.table.len())
            .field("covering_radius", &self.covering_radius)
            .finish()
    }
}

impl DiscreteTransform {
    pub fn new(w: &WeighingMatrix, budgets: &Budgets) -> Result<Self> {
        if w.symmetry() != Symmetry::Symmetric {
            return Err(Error::precondition("matrix must be symmetric"));
        }
        let d = w
            .weight_root()
            .ok_or_else(|| Error::precondition("weight is not a perfect square"))?;
        let n = w.order();
        let bits = 64 - (d.max(2) - 1).leading_zeros();
        if n as u32 * bits > 128 {
            return Err(Error::precondition("syndrome does not fit 128 bits"));
        }
        let lattice = lambda_ws(w, d)?;
        let atlas = lattice.coset_bfs(true, budgets.coset_budget)?;
        let mut table = HashMap::with_capacity(atlas.len());
        for c in 0..atlas.len() as u64 {
            let s = atlas.leader(c).expect("leaders stored");
            let ws = w.apply(&s);
            let key = pack(&ws, d as i64, bits);
            let prev = table.insert(key, Leader { s, ws });
            debug_assert!(prev.is_none(), "syndrome collision");
        }
        Ok(DiscreteTransform {
            w: w.clone(),
            d: d as i64,
            bits,
            lattice,
            covering_radius: atlas.covering_radius(),
            table,
        })
    }

    pub fn matrix(&self) -> &WeighingMatrix {
        &self.w
    }

    pub fn d(&self) -> u64 {
        self.d as u64
    }

    /// `Λ^W_D`, whose cosets the leaders represent.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn covering_radius(&self) -> u32 {
        self.covering_radius
    }

    fn leader(&self, wx: &[i64]) -> &Leader {
        &self.table[&pack(wx, self.d, self.bits)]
    }

    /// `T̃^W(x)` given `Wx`.
    fn apply_with_image(&self, wx: &[i64], out: &mut [i64]) {
        let l = self.leader(wx);
        for i in 0..wx.len() {
            out[i] = (wx[i] - l.ws[i]) / self.d + l.s[i];
        }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let wx = self.w.apply(x);
        let mut out = vec![0; x.len()];
        self.apply_with_image(&wx, &mut out);
        out
    }

    /// Leader of the coset of `x`.
    pub fn leader_of(&self, x: &[i64]) -> Vec<i64> {
        self.leader(&self.w.apply(x)).s.clone()
    }
}

fn pack(wx: &[i64], d: i64, bits: u32) -> u128 {
    wx.iter()
        .fold(0u128, |acc, &v| (acc << bits) | v.rem_euclid(d) as u128)
}

#[derive(Debug, Clone, Serialize)]
pub struct TransformReport {
    pub matrix: String,
    pub matrix_sha256: String,
    pub order: usize,
    pub d: u64,
    pub rho: u32,
    pub radius: u64,
    pub center: Vec<i64>,
    pub points: u64,
    pub expected_points: String,
    pub extents: Vec<u64>,
    pub bound: u64,
    pub pass: bool,
}

/// Transforms every point of the Lee sphere of radius `R` around `center`
/// and compares each axis extent `max - min + 1` of the image with
/// `2⌊(R+ρ)/D⌋ + 2ρ + 1`.
pub fn bounding_box_experiment(
    t: &DiscreteTransform,
    name: &str,
    radius: u64,
    center: &[i64],
    enum_budget: u64,
) -> Result<TransformReport> {
    let n = t.w.order();
    if center.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: center.len(),
        });
    }
    let expected = lee_sphere_size(n, radius);
    expected
        .to_u64()
        .filter(|&c| c <= enum_budget)
        .ok_or_else(|| Error::budget("Lee sphere enumeration", &expected, enum_budget))?;

    let w = t.w.to_int_matrix().transpose();
    let columns: Vec<&[i64]> = w.row_iter().collect();
    let wc = t.w.apply(center);

    struct Acc {
        lo: Vec<i64>,
        hi: Vec<i64>,
        count: u64,
    }
    impl Acc {
        fn new(n: usize) -> Self {
            Acc {
                lo: vec![i64::MAX; n],
                hi: vec![i64::MIN; n],
                count: 0,
            }
        }
        fn merge(mut self, o: Acc) -> Acc {
            for i in 0..self.lo.len() {
                self.lo[i] = self.lo[i].min(o.lo[i]);
                self.hi[i] = self.hi[i].max(o.hi[i]);
            }
            self.count += o.count;
            self
        }
    }

    // walks offsets coordinate by coordinate, keeping W·x current
    fn walk(
        t: &DiscreteTransform,
        cols: &[&[i64]],
        k: usize,
        rem: i64,
        wx: &mut Vec<i64>,
        out: &mut Vec<i64>,
        acc: &mut Acc,
    ) {
        let n = wx.len();
        if k == n {
            t.apply_with_image(wx, out);
            for i in 0..n {
                acc.lo[i] = acc.lo[i].min(out[i]);
                acc.hi[i] = acc.hi[i].max(out[i]);
            }
            acc.count += 1;
            return;
        }
        let col = cols[k];
        for (wi, &c) in wx.iter_mut().zip(col) {
            *wi -= rem * c;
        }
        for v in -rem..=rem {
            walk(t, cols, k + 1, rem - v.abs(), wx, out, acc);
            for (wi, &c) in wx.iter_mut().zip(col) {
                *wi += c;
            }
        }
        for (wi, &c) in wx.iter_mut().zip(col) {
            *wi -= (rem + 1) * c;
        }
    }

    let r = radius as i64;
    let acc = (-r..=r)
        .into_par_iter()
        .map(|v0| {
            let mut wx: Vec<i64> = wc.iter().zip(columns[0]).map(|(a, c)| a + v0 * c).collect();
            let mut out = vec![0; n];
            let mut acc = Acc::new(n);
            walk(t, &columns, 1, r - v0.abs(), &mut wx, &mut out, &mut acc);
            acc
        })
        .reduce(|| Acc::new(n), Acc::merge);

    let extents: Vec<u64> = acc
        .lo
        .iter()
        .zip(&acc.hi)
        .map(|(lo, hi)| (hi - lo + 1) as u64)
        .collect();
    let rho = t.covering_radius as u64;
    let bound = 2 * ((radius + rho) / t.d as u64) + 2 * rho + 1;
    Ok(TransformReport {
        matrix: name.to_string(),
        matrix_sha256: matrix_hash(&t.w),
        order: n,
        d: t.d as u64,
        rho: t.covering_radius,
        radius,
        center: center.to_vec(),
        points: acc.count,
        expected_points: expected.to_string(),
        pass: extents.iter().all(|&e| e <= bound) && expected == acc.count.into(),
        extents,
        bound,
    })
}

/// A seeded center with coordinates in `[-span, span]`.
pub fn random_center(n: usize, span: i64, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..n).map(|_| rng.random_range(-span..=span)).collect()
}

/// Generator for seeded experiments.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::sylvester_hadamard;

    #[test]
    fn leaders_and_lattice_points() {
        let h2 = sylvester_hadamard(2, 64).unwrap();
        let t = DiscreteTransform::new(&h2, &Budgets::default()).unwrap();
        assert_eq!(t.covering_radius(), 1);
        assert_eq!(t.lattice().volume_u64(), Some(2));
        let x = [1, 1, 0, 0];
        assert_eq!(t.leader_of(&x), vec![0; 4]);
        let wx = h2.apply(&x);
        assert_eq!(t.apply(&x), wx.iter().map(|v| v / 2).collect::<Vec<_>>());
        for x in [[3, -1, 0, 2], [0, 0, 0, 1], [7, 7, -5, 1]] {
            assert_eq!(t.apply(&t.apply(&x)), x.to_vec());
        }
    }

    #[test]
    fn origin_experiments() {
        let h2 = sylvester_hadamard(2, 64).unwrap();
        let t = DiscreteTransform::new(&h2, &Budgets::default()).unwrap();
        let r = bounding_box_experiment(&t, "H2", 4, &[0; 4], 1 << 20).unwrap();
        assert_eq!(r.bound, 7);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.points, 321);
        let r0 = bounding_box_experiment(&t, "H2", 0, &[3, 1, 4, 1], 1 << 20).unwrap();
        assert_eq!(r0.extents, vec![1; 4]);
        assert!(r0.pass);
    }

    #[test]
    fn rejects_non_square_weight() {
        let h3 = sylvester_hadamard(3, 64).unwrap();
        assert!(DiscreteTransform::new(&h3, &Budgets::default()).is_err());
    }
}
