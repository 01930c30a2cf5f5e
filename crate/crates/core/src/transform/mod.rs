//! The maps `x ↦ Wx/s` for a weighing matrix `W`, their kernel lattices
//! `Λ^W_s = {x : Wx ≡ 0 (mod s)}`, and the discrete variant that maps `Z^n`
//! onto itself by correcting with coset leaders.

mod discrete;
mod sphere;

pub use discrete::{
    bounding_box_experiment, random_center, seeded_rng, DiscreteTransform, TransformReport,
};
pub use sphere::{
    cross_polytope_check, for_each_sphere_point, lee_sphere_points, lee_sphere_size,
    CrossPolytopeReport, LeeSphereSpec,
};

use num_integer::Integer;
use serde::Serialize;

use crate::arith::gcd;
use crate::budget::Budgets;
use crate::codes::{CodeDistance, Metric};
use crate::error::{Error, Result};
use crate::intmat::{dot, IntMatrix};
use crate::lattice::{kernel_lattice, Lattice};
use crate::matrices::{sylvester_hadamard, Symmetry, WeighingMatrix};
use crate::sylvester::{g_matrix, h01, lambda_mj, row_level};

/// The rational vector `numerator / scale`, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ScaledVector {
    numerator: Vec<i64>,
    scale: u64,
}

impl ScaledVector {
    pub fn new(numerator: Vec<i64>, scale: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::precondition("scale must be positive"));
        }
        let g = numerator
            .iter()
            .fold(scale, |acc, &v| gcd(acc, v.unsigned_abs()));
        Ok(ScaledVector {
            numerator: numerator.iter().map(|v| v / g as i64).collect(),
            scale: scale / g,
        })
    }

    pub fn integer(x: &[i64]) -> Self {
        ScaledVector {
            numerator: x.to_vec(),
            scale: 1,
        }
    }

    pub fn numerator(&self) -> &[i64] {
        &self.numerator
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_integral(&self) -> bool {
        self.scale == 1
    }

    pub fn to_integer(&self) -> Option<Vec<i64>> {
        self.is_integral().then(|| self.numerator.clone())
    }

    pub fn neg(&self) -> Self {
        ScaledVector {
            numerator: self.numerator.iter().map(|v| -v).collect(),
            scale: self.scale,
        }
    }

    /// `W · self / (p/q)`.
    pub fn transform(&self, w: &WeighingMatrix, p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::precondition("scale must be positive"));
        }
        let wx = w.apply(&self.numerator);
        ScaledVector::new(wx.iter().map(|v| v * q as i64).collect(), self.scale * p)
    }
}

/// `T^W_s(x) = Wx / s`.
pub fn t_ws(w: &WeighingMatrix, s: u64, x: &[i64]) -> Result<ScaledVector> {
    ScaledVector::integer(x).transform(w, s, 1)
}

/// `T^W_{w/s}(T^W_s(x))`; equals `x` for symmetric `W`, `-x` for skew.
pub fn involution_image(w: &WeighingMatrix, s: u64, x: &[i64]) -> Result<ScaledVector> {
    let weight = w.weight() as u64;
    let (p, q) = (weight / gcd(weight, s), s / gcd(weight, s));
    t_ws(w, s, x)?.transform(w, p, q)
}

/// Expected value of [`involution_image`] when it is an involution.
pub fn involution_sign(w: &WeighingMatrix) -> Option<i64> {
    match w.symmetry() {
        Symmetry::Symmetric => Some(1),
        Symmetry::SkewSymmetric => Some(-1),
        Symmetry::None => None,
    }
}

fn check_ws(w: &WeighingMatrix, s: u64) -> Result<()> {
    if w.symmetry() == Symmetry::None {
        return Err(Error::precondition(
            "matrix must be symmetric or skew-symmetric",
        ));
    }
    let weight = w.weight() as u64;
    if s == 0 || !weight.is_multiple_of(s) {
        return Err(Error::precondition(format!(
            "{s} does not divide weight {weight}"
        )));
    }
    Ok(())
}

/// `Λ^W_s = {x ∈ Z^n : Wx ≡ 0 (mod s)}`.
pub fn lambda_ws(w: &WeighingMatrix, s: u64) -> Result<Lattice> {
    check_ws(w, s)?;
    kernel_lattice(&w.to_int_matrix(), s)
}

/// Lattice spanned by the rows of `W`.
pub fn lambda_w(w: &WeighingMatrix) -> Result<Lattice> {
    Lattice::canonicalize(&w.to_int_matrix())
}

/// Image of `l` under `x ↦ Wx/s`; fails unless every image is integral.
pub fn image_lattice(w: &WeighingMatrix, s: u64, l: &Lattice) -> Result<Lattice> {
    l.map_rows(|r| t_ws(w, s, r).ok()?.to_integer())
}

/// Whether `T^W_{w/s}` maps `Λ^W_{w/s}` onto `Λ^W_s`.
pub fn kernel_trans_check(w: &WeighingMatrix, s: u64) -> Result<bool> {
    check_ws(w, s)?;
    let co = w.weight() as u64 / s;
    let source = lambda_ws(w, co)?;
    Ok(image_lattice(w, co, &source)? == lambda_ws(w, s)?)
}

/// Whether `Λ^W_{s2}` is a proper sublattice of `Λ^W_{s1}`.
pub fn nesting_check(w: &WeighingMatrix, s1: u64, s2: u64) -> Result<bool> {
    check_ws(w, s1)?;
    check_ws(w, s2)?;
    if s1 >= s2 || !s2.is_multiple_of(s1) {
        return Err(Error::precondition(format!(
            "need s1 | s2 and s1 < s2, got {s1}, {s2}"
        )));
    }
    let (a, b) = (lambda_ws(w, s1)?, lambda_ws(w, s2)?);
    Ok(a.contains_lattice(&b) && b.volume() > a.volume())
}

#[derive(Debug, Clone, Serialize)]
pub struct HadamardDistanceClass {
    pub order: usize,
    pub s: u64,
    pub distance: CodeDistance,
    /// Even `s`: the distance is exactly `s`. Odd `s`: it lies in `(s, n/2]`.
    pub expected: String,
    pub holds: Option<bool>,
}

/// Minimum Lee distance of `C^H_s`, the reduction of `Λ^H_s` modulo `s`,
/// classified against the even/odd dichotomy. Refuses orders `n <= 4`.
pub fn hadamard_lee_distance_class(
    h: &WeighingMatrix,
    s: u64,
    budgets: &Budgets,
) -> Result<HadamardDistanceClass> {
    let n = h.order();
    if !h.is_hadamard() || n <= 4 {
        return Err(Error::precondition("needs a Hadamard matrix of order > 4"));
    }
    if s < 2 {
        return Err(Error::precondition("needs s >= 2"));
    }
    let code = lambda_ws(h, s)?.reduce_to_code(s)?;
    let distance = code.min_distance(Metric::Lee, budgets)?;
    let half = n as u64 / 2;
    let (expected, holds) = if s.is_even() {
        (format!("= {s}"), distance.exact().map(|d| d == s))
    } else {
        let (lo, hi) = distance.bounds();
        let holds = if lo > s && hi <= half {
            Some(true)
        } else if hi <= s || lo > half {
            Some(false)
        } else {
            None
        };
        (format!("in ({s}, {half}]"), holds)
    };
    Ok(HadamardDistanceClass {
        order: n,
        s,
        distance,
        expected,
        holds,
    })
}

/// Whether `x ↦ Wx/D` preserves the volume of `l`, for `w = D^2`.
pub fn volume_preservation_check(w: &WeighingMatrix, l: &Lattice) -> Result<bool> {
    let d = w
        .weight_root()
        .ok_or_else(|| Error::precondition("weight is not a perfect square"))?;
    Ok(image_lattice(w, d, l)?.volume() == l.volume())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Inclusion {
    /// `C(m,j) ⊆ C^{H_m}_{2^j}`.
    pub contained: bool,
    /// The two codes coincide.
    pub equal: bool,
}

/// Compares `Λ(m,j)` with `Λ^{H_m}_{2^j}`.
pub fn einc_check(m: u32, j: u32, max_order: usize) -> Result<Inclusion> {
    if j > m {
        return Err(Error::precondition("need j <= m"));
    }
    let h = sylvester_hadamard(m, max_order)?;
    let g = g_matrix(m, j, max_order)?;
    let modulus = 1i64 << j;
    let contained = g
        .row_iter()
        .all(|r| h.apply(r).iter().all(|v| v % modulus == 0));
    let equal =
        contained && *lambda_mj(m, j, max_order)?.volume() == *lambda_ws(&h, 1 << j)?.volume();
    Ok(Inclusion { contained, equal })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReverseDuality {
    /// Reversed `G(m,j)` rows map onto a basis of `Λ(m,m-j)`.
    pub image_equal: bool,
    /// For every row `x_i` of weight `2^ℓ`: `H_m x_i^R = 2^ℓ (x_{2^m+1-i})^R`.
    pub row_multiples: bool,
    /// Weights of rows `i` and `2^m+1-i` multiply to `2^m`.
    pub complementary_weights: bool,
}

pub fn reverse_duality_check(m: u32, j: u32, max_order: usize) -> Result<ReverseDuality> {
    if j > m {
        return Err(Error::precondition("need j <= m"));
    }
    let h = sylvester_hadamard(m, max_order)?;
    let h0 = h01(m, max_order)?;
    let n = h0.rows();
    let reversed = g_matrix(m, j, max_order)?.reverse_columns();
    let image_rows: Vec<Vec<i64>> = reversed
        .row_iter()
        .map(|r| {
            t_ws(&h, 1 << j, r)?
                .to_integer()
                .ok_or_else(|| Error::precondition("image is not integral"))
        })
        .collect::<Result<_>>()?;
    let image = Lattice::canonicalize(&IntMatrix::from_rows(&image_rows)?)?;
    let image_equal = image == lambda_mj(m, m - j, max_order)?;

    let row_multiples = (0..n).all(|i| {
        let x: Vec<i64> = h0.row(i).iter().rev().copied().collect();
        let partner: Vec<i64> = h0.row(n - 1 - i).iter().rev().copied().collect();
        let f = 1i64 << row_level(m, i);
        h.apply(&x) == partner.iter().map(|v| v * f).collect::<Vec<_>>()
    });
    let complementary_weights = (0..n).all(|i| row_level(m, i) + row_level(m, n - 1 - i) == m);
    Ok(ReverseDuality {
        image_equal,
        row_multiples,
        complementary_weights,
    })
}

/// Every inner product of a `G(m,j)` row with a `G(m,m)` row is divisible by
/// `2^j`.
pub fn divisibility_check(m: u32, j: u32, max_order: usize) -> Result<bool> {
    let a = g_matrix(m, j, max_order)?;
    let b = g_matrix(m, m, max_order)?;
    let modulus = 1i64 << j;
    let ok = a
        .row_iter()
        .all(|r| b.row_iter().all(|t| dot(r, t) % modulus == 0));
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{paley_conference, paley_hadamard_symmetric};

    const MAX: usize = 64;

    #[test]
    fn scaled_vectors_reduce() {
        let v = ScaledVector::new(vec![4, -6, 8], 2).unwrap();
        assert_eq!(v.to_integer(), Some(vec![2, -3, 4]));
        let v = ScaledVector::new(vec![3, 6], 4).unwrap();
        assert_eq!((v.numerator(), v.scale()), (&[3i64, 6][..], 4));
        assert!(ScaledVector::new(vec![1], 0).is_err());
    }

    #[test]
    fn involution_examples() {
        let h = sylvester_hadamard(2, MAX).unwrap();
        for s in [1, 2, 3, 4] {
            let back = involution_image(&h, s, &[3, -1, 4, 1]).unwrap();
            assert_eq!(back.to_integer(), Some(vec![3, -1, 4, 1]));
        }
        let skew = paley_conference(7, MAX).unwrap();
        assert_eq!(skew.symmetry(), Symmetry::SkewSymmetric);
        let x = [1, 0, -2, 0, 0, 5, 0, 1];
        let back = involution_image(&skew, 7, &x).unwrap();
        assert_eq!(back, ScaledVector::integer(&x).neg());
        assert_eq!(t_ws(&h, 2, &[0; 4]).unwrap().to_integer(), Some(vec![0; 4]));
    }

    #[test]
    fn kernel_lattice_examples() {
        let h2 = sylvester_hadamard(2, MAX).unwrap();
        let l1 = lambda_ws(&h2, 1).unwrap();
        assert_eq!(l1.volume_u64(), Some(1));
        assert_eq!(lambda_ws(&h2, 4).unwrap(), lambda_w(&h2).unwrap());
        let even = lambda_ws(&h2, 2).unwrap();
        assert_eq!(even.volume_u64(), Some(2));
        assert!(even.contains(&[1, 1, 0, 0]) && !even.contains(&[1, 0, 0, 0]));
        assert!(lambda_ws(&h2, 3).is_err());
        let h = paley_hadamard_symmetric(5, MAX).unwrap();
        assert_eq!(lambda_ws(&h, 12).unwrap(), lambda_w(&h).unwrap());
    }

    #[test]
    fn kernel_trans_and_nesting() {
        let h2 = sylvester_hadamard(2, MAX).unwrap();
        let h3 = sylvester_hadamard(3, MAX).unwrap();
        assert!(kernel_trans_check(&h2, 2).unwrap());
        assert!(kernel_trans_check(&h3, 4).unwrap());
        assert!(kernel_trans_check(&h3, 8).unwrap());
        assert!(nesting_check(&h3, 2, 4).unwrap());
        assert!(nesting_check(&h3, 2, 8).unwrap());
        assert!(nesting_check(&h2, 4, 4).is_err());
    }

    #[test]
    fn odd_s_refused_for_small_orders() {
        let h2 = sylvester_hadamard(2, MAX).unwrap();
        assert!(hadamard_lee_distance_class(&h2, 2, &Budgets::default()).is_err());
    }

    #[test]
    fn sylvester_relations() {
        assert!(einc_check(3, 2, MAX).unwrap().contained);
        assert!(einc_check(3, 3, MAX).unwrap().equal);
        for (m, j) in [(2, 1), (3, 3), (4, 2)] {
            let r = reverse_duality_check(m, j, MAX).unwrap();
            assert!(
                r.image_equal && r.row_multiples && r.complementary_weights,
                "{m} {j}"
            );
        }
        assert!(divisibility_check(4, 2, MAX).unwrap());
    }

    #[test]
    fn volume_is_preserved() {
        let h4 = sylvester_hadamard(4, MAX).unwrap();
        let l = Lattice::canonicalize(&IntMatrix::scalar(16, 4)).unwrap();
        assert!(volume_preservation_check(&h4, &l).unwrap());
        assert!(volume_preservation_check(&h4, &lambda_mj(4, 3, MAX).unwrap()).unwrap());
    }
}
