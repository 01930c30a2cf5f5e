use num_bigint::BigUint;
use proptest::prelude::*;

use lee_lattice::codes::{lee_weight, Metric};
use lee_lattice::intmat::manhattan;
use lee_lattice::io::{
    format_code, format_lattice, format_matrix, parse_code, parse_lattice, parse_matrix,
};
use lee_lattice::matrices::{named, normal_form, verify_weighing};
use lee_lattice::transform::{
    involution_image, lee_sphere_points, lee_sphere_size, DiscreteTransform, LeeSphereSpec,
};
use lee_lattice::{Budgets, IntMatrix, Lattice, LinearCodeZm, WeighingMatrix};

fn matrix_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec![
        "sylvester:1",
        "sylvester:2",
        "sylvester:3",
        "paley-i:3",
        "paley-i:7",
        "conference:5",
        "conference:7",
        "paley-ii:5",
    ])
}

/// A random signed row and column permutation of a named matrix.
fn scrambled() -> impl Strategy<Value = WeighingMatrix> {
    (matrix_name(), any::<u64>()).prop_map(|(name, seed)| {
        let w = named(name, 64).unwrap().to_int_matrix();
        let n = w.rows();
        let mut rows_perm: Vec<usize> = (0..n).collect();
        let mut cols_perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            s >> 33
        };
        for i in (1..n).rev() {
            rows_perm.swap(i, next() as usize % (i + 1));
            cols_perm.swap(i, next() as usize % (i + 1));
        }
        let signs: Vec<i64> = (0..2 * n)
            .map(|_| if next() % 2 == 0 { 1 } else { -1 })
            .collect();
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| w[(rows_perm[i], cols_perm[j])] * signs[i] * signs[n + j])
                    .collect()
            })
            .collect();
        WeighingMatrix::new(&IntMatrix::from_rows(&rows).unwrap()).unwrap()
    })
}

fn small_basis(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), n)
        .prop_filter("nonsingular", |rows| {
            Lattice::canonicalize(&IntMatrix::from_rows(rows).unwrap()).is_ok()
        })
}

fn small_code() -> impl Strategy<Value = LinearCodeZm> {
    (
        prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 9]),
        2usize..=5,
        1usize..=3,
    )
        .prop_flat_map(|(m, n, k)| {
            prop::collection::vec(prop::collection::vec(0..m, n), k)
                .prop_map(move |gens| LinearCodeZm::new(m, n, gens).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(w in scrambled()) {
        let f = normal_form(&w);
        prop_assert_eq!(normal_form(&f).clone(), f.clone());
        let a = verify_weighing(&w.to_int_matrix()).unwrap();
        let b = verify_weighing(&f.to_int_matrix()).unwrap();
        prop_assert_eq!((a.order, a.weight), (b.order, b.weight));
        let first = f.row(0);
        let zeros = first.iter().take_while(|&&v| v == 0).count();
        prop_assert!(first[zeros..].iter().all(|&v| v == 1));
    }

    #[test]
    fn canonical_form_ignores_unimodular_changes(
        rows in small_basis(3),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..8),
    ) {
        let base = Lattice::canonicalize(&IntMatrix::from_rows(&rows).unwrap()).unwrap();
        let mut r = rows.clone();
        for (i, j, f) in ops {
            if i != j {
                let src = r[j].clone();
                for (a, b) in r[i].iter_mut().zip(src) {
                    *a += f * b;
                }
            } else {
                r.swap(i, (i + 1) % 3);
            }
        }
        let moved = Lattice::canonicalize(&IntMatrix::from_rows(&r).unwrap()).unwrap();
        prop_assert_eq!(&moved, &base);
        prop_assert!(rows.iter().all(|row| base.contains(row)));
    }

    #[test]
    fn coset_leaders_are_lightest(rows in small_basis(3), x in prop::collection::vec(-12i64..=12, 3)) {
        let l = Lattice::canonicalize(&IntMatrix::from_rows(&rows).unwrap()).unwrap();
        prop_assume!(l.volume_u64().unwrap() <= 4096);
        let atlas = l.coset_bfs(true, 4096).unwrap();
        let leader = atlas.leader_of(&x).unwrap();
        let diff: Vec<i64> = x.iter().zip(&leader).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&diff));
        prop_assert!(manhattan(&leader) <= manhattan(&x));
        prop_assert!(atlas.covering_radius() as u64 >= manhattan(&leader));
    }

    #[test]
    fn pruned_search_matches_enumeration(code in small_code()) {
        prop_assume!(!code.is_zero());
        for metric in [Metric::Lee, Metric::Hamming] {
            let e = code.min_weight_enumerate(metric, 1 << 20).unwrap();
            let p = code.min_weight_pruned(metric, 1 << 30).unwrap();
            prop_assert_eq!(e.exact(), p.exact());
            prop_assert!(code.contains(p.witness()));
            if metric == Metric::Lee {
                prop_assert_eq!(Some(lee_weight(p.witness(), code.modulus())), p.exact());
            }
        }
    }

    #[test]
    fn dual_is_an_involution(code in small_code()) {
        let dual = code.dual();
        prop_assert_eq!(dual.dual(), code.clone());
        let m = BigUint::from(code.modulus());
        prop_assert_eq!(code.cardinality() * dual.cardinality(), m.pow(code.length() as u32));
    }

    #[test]
    fn continuous_involution(name in matrix_name(), x in prop::collection::vec(-50i64..=50, 12)) {
        let w = named(name, 64).unwrap();
        let n = w.order();
        prop_assume!(n <= x.len());
        let x = &x[..n];
        let sign = match w.symmetry() {
            lee_lattice::Symmetry::Symmetric => 1,
            lee_lattice::Symmetry::SkewSymmetric => -1,
            lee_lattice::Symmetry::None => return Ok(()),
        };
        let weight = w.weight() as u64;
        for s in (1..=weight).filter(|s| weight.is_multiple_of(*s)) {
            let y = involution_image(&w, s, x).unwrap();
            prop_assert_eq!(y.to_integer(), Some(x.iter().map(|v| v * sign).collect()));
        }
    }

    #[test]
    fn discrete_transform_is_an_involution(x in prop::collection::vec(-10_000i64..=10_000, 16)) {
        for (name, n) in [("sylvester:2", 4), ("sylvester:4", 16)] {
            let w = named(name, 64).unwrap();
            let t = DiscreteTransform::new(&w, &Budgets::default()).unwrap();
            let x = &x[..n];
            prop_assert_eq!(t.apply(&t.apply(x)), x.to_vec());
            let lattice_point = t.lattice().contains(x);
            if lattice_point {
                let wx = w.apply(x);
                prop_assert_eq!(t.apply(x), wx.iter().map(|v| v / t.d() as i64).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn sphere_size_formula(n in 1usize..=4, r in 0u64..=6) {
        let pts = lee_sphere_points(&LeeSphereSpec { radius: r, center: vec![0; n] }, 1 << 20).unwrap();
        prop_assert_eq!(BigUint::from(pts.len()), lee_sphere_size(n, r));
    }

    #[test]
    fn text_formats_round_trip(w in scrambled(), rows in small_basis(3), code in small_code()) {
        prop_assert_eq!(parse_matrix(&format_matrix(&w)).unwrap(), w);
        let b = IntMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(parse_lattice(&format_lattice(&b)).unwrap(), b);
        prop_assert_eq!(parse_code(&format_code(&code)).unwrap(), code);
    }
}
