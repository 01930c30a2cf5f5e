//! Lee spheres and cross-polytopes.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrices::WeighingMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeeSphereSpec {
    pub radius: u64,
    pub center: Vec<i64>,
}

impl LeeSphereSpec {
    pub fn dimension(&self) -> usize {
        self.center.len()
    }
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// `|S_{n,R}| = Σ_i 2^i C(n,i) C(R,i)`.
pub fn lee_sphere_size(n: usize, r: u64) -> BigUint {
    let n = n as u64;
    (0..=n.min(r))
        .map(|i| (BigUint::from(1u32) << i) * binom(n, i) * binom(r, i))
        .sum()
}

fn visit(x: &mut [i64], k: usize, rem: u64, f: &mut dyn FnMut(&[i64])) {
    if k == x.len() {
        f(x);
        return;
    }
    let c = x[k];
    let r = rem as i64;
    for v in -r..=r {
        x[k] = c + v;
        visit(x, k + 1, rem - v.unsigned_abs(), f);
    }
    x[k] = c;
}

/// Calls `f` on every point within Manhattan distance `R` of the center,
/// in lexicographic order of the offset.
pub fn for_each_sphere_point(spec: &LeeSphereSpec, mut f: impl FnMut(&[i64])) {
    let mut x = spec.center.clone();
    visit(&mut x, 0, spec.radius, &mut f);
}

pub fn lee_sphere_points(spec: &LeeSphereSpec, enum_budget: u64) -> Result<Vec<Vec<i64>>> {
    let size = lee_sphere_size(spec.dimension(), spec.radius);
    let count = size
        .to_u64()
        .filter(|&c| c <= enum_budget)
        .ok_or_else(|| Error::budget("Lee sphere enumeration", &size, enum_budget))?;
    let mut out = Vec::with_capacity(count as usize);
    for_each_sphere_point(spec, |x| out.push(x.to_vec()));
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossPolytopeReport {
    pub radius: u64,
    pub points_checked: u64,
    pub sampled: bool,
    /// Largest `2·|Wx|_∞ · (4/q)` seen, in units of `1/4`.
    pub max_scaled_image: u64,
    /// `4·(2R+1)`, the same bound in units of `1/4`.
    pub bound: u64,
    pub vertices_tight: bool,
    pub inside: bool,
}

/// Checks `2·|Wx|_∞ <= 2R+1` over rational points `x = y/q` with
/// `2·|x|_1 <= 2R+1`, `q ∈ {1, 2, 4}`, plus all `2n` vertices.
///
/// A grid larger than `sample_budget` is sampled with a seeded generator.
pub fn cross_polytope_check(
    w: &WeighingMatrix,
    radius: u64,
    sample_budget: u64,
    seed: u64,
) -> Result<CrossPolytopeReport> {
    let n = w.order();
    let span = 2 * radius + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_scaled = 0u64;
    let mut checked = 0u64;
    let mut sampled = false;
    let mut check = |y: &[i64], q: u64| {
        let img = w
            .apply(y)
            .iter()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0);
        max_scaled = max_scaled.max(2 * img * (4 / q));
        checked += 1;
    };
    for q in [1u64, 2, 4] {
        // integer y with 2|y|_1 <= q(2R+1)
        let r = q * span / 2;
        let size = lee_sphere_size(n, r);
        if size <= BigUint::from(sample_budget) {
            for_each_sphere_point(
                &LeeSphereSpec {
                    radius: r,
                    center: vec![0; n],
                },
                |y| check(y, q),
            );
        } else {
            sampled = true;
            for _ in 0..sample_budget {
                let y = sample_ball_point(&mut rng, n, r);
                check(&y, q);
            }
        }
    }
    let mut vertices_tight = true;
    for i in 0..n {
        for sign in [1i64, -1] {
            let mut y = vec![0i64; n];
            y[i] = sign * span as i64;
            let img = w
                .apply(&y)
                .iter()
                .map(|v| v.unsigned_abs())
                .max()
                .unwrap_or(0);
            vertices_tight &= 2 * img == 2 * span;
            check(&y, 2);
        }
    }
    let bound = 4 * span;
    Ok(CrossPolytopeReport {
        radius,
        points_checked: checked,
        sampled,
        max_scaled_image: max_scaled,
        bound,
        vertices_tight,
        inside: max_scaled <= bound,
    })
}

/// A point of the integer l1-ball of radius `r`: random total weight, a
/// uniform composition of it, random signs.
fn sample_ball_point(rng: &mut ChaCha8Rng, n: usize, r: u64) -> Vec<i64> {
    let t = rng.random_range(0..=r);
    // stars and bars: n-1 cut points among t + n - 1 slots
    let mut cuts: Vec<u64> = rand::seq::index::sample(rng, (t + n as u64 - 1) as usize, n - 1)
        .into_iter()
        .map(|c| c as u64)
        .collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(n);
    let mut prev = 0u64;
    for (i, &c) in cuts.iter().enumerate() {
        let start = if i == 0 { 0 } else { prev + 1 };
        out.push((c - start) as i64);
        prev = c;
    }
    let start = if cuts.is_empty() { 0 } else { prev + 1 };
    out.push((t + n as u64 - 1 - start) as i64);
    for v in out.iter_mut() {
        if rng.random_bool(0.5) {
            *v = -*v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::manhattan;
    use crate::matrices::sylvester_hadamard;

    #[test]
    fn sphere_sizes() {
        assert_eq!(lee_sphere_size(2, 1), BigUint::from(5u32));
        assert_eq!(lee_sphere_size(3, 2), BigUint::from(25u32));
        assert_eq!(lee_sphere_size(7, 0), BigUint::from(1u32));
        let pts = lee_sphere_points(
            &LeeSphereSpec {
                radius: 2,
                center: vec![5, -1, 0],
            },
            1000,
        )
        .unwrap();
        assert_eq!(pts.len(), 25);
        assert!(pts
            .iter()
            .all(|p| manhattan(&[p[0] - 5, p[1] + 1, p[2]]) <= 2));
    }

    #[test]
    fn sampled_points_lie_in_the_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = sample_ball_point(&mut rng, 6, 9);
            assert_eq!(p.len(), 6);
            assert!(manhattan(&p) <= 9);
        }
    }

    #[test]
    fn hadamard_cross_polytope() {
        let h3 = sylvester_hadamard(3, 64).unwrap();
        let r = cross_polytope_check(&h3, 5, 200_000, 0).unwrap();
        assert!(r.inside && r.vertices_tight);
        assert_eq!(r.max_scaled_image, r.bound);
    }
}
