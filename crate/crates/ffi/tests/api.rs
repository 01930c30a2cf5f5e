use std::ffi::{c_char, CString};
use std::ptr;

use lee_lattice_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { ll_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn matrix(name: &str) -> *mut LlMatrix {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { ll_matrix_named(name.as_ptr(), 64, &mut m) },
        LlStatus::Ok
    );
    m
}

#[test]
fn matrix_round_trip() {
    let m = matrix("sylvester:3");
    unsafe {
        assert_eq!(ll_matrix_order(m), 8);
        assert_eq!(ll_matrix_weight(m), 8);
        let mut entries = vec![0i8; 64];
        assert_eq!(ll_matrix_entries(m, entries.as_mut_ptr(), 64), LlStatus::Ok);
        assert!(entries.iter().all(|&e| e == 1 || e == -1));
        assert_eq!(
            ll_matrix_entries(m, entries.as_mut_ptr(), 63),
            LlStatus::InvalidArgument
        );

        let wide: Vec<i64> = entries.iter().map(|&e| e as i64).collect();
        let mut again = ptr::null_mut();
        assert_eq!(
            ll_matrix_from_entries(8, wide.as_ptr(), &mut again),
            LlStatus::Ok
        );
        assert_eq!(ll_matrix_weight(again), 8);
        ll_matrix_free(again);
        ll_matrix_free(m);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut m = ptr::null_mut();
        let bad = CString::new("paley-i:15").unwrap();
        assert_eq!(
            ll_matrix_named(bad.as_ptr(), 64, &mut m),
            LlStatus::InvalidArgument
        );
        assert!(m.is_null());
        assert!(last_error().contains("15"), "{}", last_error());

        assert_eq!(
            ll_matrix_named(ptr::null(), 64, &mut m),
            LlStatus::NullArgument
        );

        let big = CString::new("sylvester:9").unwrap();
        assert_eq!(
            ll_matrix_named(big.as_ptr(), 64, &mut m),
            LlStatus::BudgetExceeded
        );

        let text = CString::new("2 2\n1 1\n1 x\n").unwrap();
        assert_eq!(ll_matrix_parse(text.as_ptr(), &mut m), LlStatus::Parse);
        assert!(last_error().contains("line 3"), "{}", last_error());

        let ok = CString::new("sylvester:1").unwrap();
        assert_eq!(ll_matrix_named(ok.as_ptr(), 64, &mut m), LlStatus::Ok);
        assert_eq!(last_error(), "");
        ll_matrix_free(m);

        // null handles are tolerated by queries and frees
        assert_eq!(ll_matrix_order(ptr::null()), 0);
        ll_matrix_free(ptr::null_mut());
        ll_lattice_free(ptr::null_mut());
    }
}

#[test]
fn truncated_strings_report_full_length() {
    let mut l = ptr::null_mut();
    unsafe {
        assert_eq!(ll_lattice_sylvester(4, 4, 64, &mut l), LlStatus::Ok);
        let mut len = 0;
        let mut small = [0 as c_char; 4];
        assert_eq!(
            ll_lattice_volume(l, small.as_mut_ptr(), 4, &mut len),
            LlStatus::Ok
        );
        assert_eq!(len, "4294967296".len());
        assert_eq!(small[3], 0);
        let mut buf = vec![0 as c_char; len + 1];
        ll_lattice_volume(l, buf.as_mut_ptr(), buf.len(), &mut len);
        let s: String = buf[..len].iter().map(|&c| c as u8 as char).collect();
        assert_eq!(s, "4294967296");
        ll_lattice_free(l);
    }
}

#[test]
fn lattice_queries() {
    let m = matrix("sylvester:2");
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(ll_lattice_of_matrix(m, &mut l), LlStatus::Ok);
        assert_eq!(ll_lattice_dimension(l), 4);

        let mut inside = false;
        let row = [1i64, 1, 1, 1];
        assert_eq!(
            ll_lattice_contains(l, row.as_ptr(), 4, &mut inside),
            LlStatus::Ok
        );
        assert!(inside);
        let e1 = [1i64, 0, 0, 0];
        ll_lattice_contains(l, e1.as_ptr(), 4, &mut inside);
        assert!(!inside);

        let mut d = LlDistance::default();
        let mut witness = [0i64; 4];
        assert_eq!(
            ll_lattice_min_distance(l, 1 << 20, witness.as_mut_ptr(), &mut d),
            LlStatus::Ok
        );
        assert!(d.exact);
        assert_eq!((d.lower, d.upper), (4, 4));
        assert_eq!(witness.iter().map(|x| x.abs()).sum::<i64>(), 4);

        let mut r = 0;
        assert_eq!(ll_lattice_covering_radius(l, 1 << 20, &mut r), LlStatus::Ok);
        assert_eq!(r, 2);
        assert_eq!(
            ll_lattice_covering_radius(l, 2, &mut r),
            LlStatus::BudgetExceeded
        );

        let mut basis = [0i64; 16];
        assert_eq!(
            ll_lattice_canonical_basis(l, basis.as_mut_ptr(), 16),
            LlStatus::Ok
        );
        let mut same = ptr::null_mut();
        assert_eq!(
            ll_lattice_from_basis(4, basis.as_ptr(), &mut same),
            LlStatus::Ok
        );
        let mut again = [0i64; 16];
        ll_lattice_canonical_basis(same, again.as_mut_ptr(), 16);
        assert_eq!(basis, again);

        let singular = [1i64, 2, 2, 4];
        let mut bad = ptr::null_mut();
        assert_eq!(
            ll_lattice_from_basis(2, singular.as_ptr(), &mut bad),
            LlStatus::InvalidArgument
        );

        ll_lattice_free(same);
        ll_lattice_free(l);
        ll_matrix_free(m);
    }
}

#[test]
fn code_queries() {
    let m = matrix("conference:5");
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(ll_code_of_matrix(m, 5, &mut c), LlStatus::Ok);
        assert_eq!(ll_code_length(c), 6);
        assert_eq!(ll_code_modulus(c), 5);
        assert_eq!(ll_code_rank(c), 3);
        let mut self_dual = false;
        assert_eq!(ll_code_is_self_dual(c, &mut self_dual), LlStatus::Ok);
        assert!(self_dual);

        let mut d = LlDistance::default();
        let mut w = [0u64; 6];
        let budgets = ll_budgets_default();
        assert_eq!(
            ll_code_min_distance(c, LlMetric::Hamming, budgets, w.as_mut_ptr(), &mut d),
            LlStatus::Ok
        );
        assert_eq!((d.lower, d.exact), (4, true));
        assert_eq!(w.iter().filter(|&&v| v != 0).count(), 4);

        let mut dual = ptr::null_mut();
        assert_eq!(ll_code_dual(c, &mut dual), LlStatus::Ok);
        assert_eq!(ll_code_rank(dual), 3);

        let gens = [1u64, 1, 0, 0, 1, 1];
        let mut rep = ptr::null_mut();
        assert_eq!(
            ll_code_from_generators(4, 2, 3, gens.as_ptr(), &mut rep),
            LlStatus::Ok
        );
        ll_code_min_distance(rep, LlMetric::Lee, budgets, ptr::null_mut(), &mut d);
        assert_eq!(d.upper, 2);

        let mut syl = ptr::null_mut();
        assert_eq!(ll_code_sylvester(3, 2, 64, &mut syl), LlStatus::Ok);
        assert_eq!(ll_code_modulus(syl), 4);

        for h in [c, dual, rep, syl] {
            ll_code_free(h);
        }
        ll_matrix_free(m);
    }
}

#[test]
fn transform_is_an_involution() {
    let m = matrix("sylvester:2");
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            ll_transform_new(m, ll_budgets_default(), &mut t),
            LlStatus::Ok
        );
        assert_eq!(ll_transform_dimension(t), 4);
        let x = [7i64, -3, 0, 12];
        let mut y = [0i64; 4];
        let mut z = [0i64; 4];
        assert_eq!(
            ll_transform_apply(t, x.as_ptr(), 4, y.as_mut_ptr()),
            LlStatus::Ok
        );
        assert_eq!(
            ll_transform_apply(t, y.as_ptr(), 4, z.as_mut_ptr()),
            LlStatus::Ok
        );
        assert_eq!(x, z);
        assert_eq!(
            ll_transform_apply(t, x.as_ptr(), 3, y.as_mut_ptr()),
            LlStatus::InvalidArgument
        );
        ll_transform_free(t);

        // weight 3 is not a perfect square
        let p = matrix("paley-i:3");
        assert_ne!(
            ll_transform_new(p, ll_budgets_default(), &mut t),
            LlStatus::Ok
        );
        ll_matrix_free(p);
        ll_matrix_free(m);
    }
}
