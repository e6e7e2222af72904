use nonss::linalg::{self, CMat};
use nonss::mcg::*;
use nonss::qcore::{c, re, RootData, C64};
use proptest::prelude::*;

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn r2_pairings_and_matrices() {
    let rd = RootData::new(2).unwrap();
    let t = torus_rep_r2(&rd).unwrap();
    let p = &t.pairings;
    assert!((p.empty_p0 - re(1.0)).norm() < 1e-9);
    assert!(p.empty_xp0.norm() < 1e-9);
    assert!(p.s_empty_p0.norm() < 1e-9);
    assert!((p.s_empty_xp0 - re(-0.5)).norm() < 1e-9);
    let (t_ref, s_ref) = torus_rep_r2_reference();
    assert!(close(&t.t_mat, &t_ref, 1e-9));
    assert!(close(&t.s_mat, &s_ref, 1e-9));
    assert!(torus_rep_r2(&RootData::new(3).unwrap()).is_err());
}

#[test]
fn r2_relations() {
    let (t, s) = torus_rep_r2_reference();
    let id = CMat::identity(2, 2);
    let ts = &t * &s;
    let ts3 = &ts * &ts * &ts;
    assert!(close(&ts3, &(&s * &s * C64::i()), 1e-12));
    assert!(close(&(&s * &s), &id, 1e-12));
    let sc = &s * c(0.0, -1.0);
    let tsc = &t * &sc;
    assert!(close(&(&tsc * &tsc * &tsc), &(&sc * &sc), 1e-12));
    assert!(close(&(&sc * &sc * &sc * &sc), &id, 1e-12));
    let t5 = (0..5).fold(id.clone(), |acc, _| acc * &t);
    assert!((t5[(0, 1)] - c(0.0, -10.0)).norm() < 1e-12);
}

#[test]
fn generic_pairing_zero_pattern() {
    for r in [2usize, 3, 5, 6] {
        let rd = RootData::new(r).unwrap();
        let hs = rd.h_r();
        let alpha = c(0.4, 0.05);
        let p = pairing_matrix_on(&rd, alpha, c(0.29, 0.13), &hs, &hs).unwrap();
        let rp = if r % 2 == 0 { r as i64 / 2 } else { r as i64 };
        for (i, h) in hs.iter().enumerate() {
            for (j, k) in hs.iter().enumerate() {
                let z = p.entries[(i, j)].norm();
                if (h + k).rem_euclid(2 * rp) == 0 {
                    assert!(z > 1e-6, "r={r} h={h} k={k}");
                } else {
                    assert!(z < 1e-9, "r={r} h={h} k={k} {z}");
                }
            }
        }
    }
    let rd2 = RootData::new(2).unwrap();
    let p = pairing_matrix(&rd2, re(0.5)).unwrap();
    assert_eq!(p.entries.shape(), (1, 1));
    assert!(p.entries[(0, 0)].norm() > 1e-6);
    assert!(pairing_matrix(&rd2, re(1.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]
    #[test]
    fn pairing_invertible(ri in 0usize..3, a in 0.05f64..0.95, b in -0.3f64..0.3) {
        let r = [2usize, 3, 5][ri];
        let rd = RootData::new(r).unwrap();
        let p = pairing_matrix(&rd, c(a, b)).unwrap();
        prop_assert_eq!(linalg::rank(&p.entries, 1e-9), generic_torus_basis(&rd).len());
    }
}

#[test]
fn twist_never_returns_to_identity() {
    let rd = RootData::new(2).unwrap();
    let rep = twist_order_probe(&rd, 0, 1000).unwrap();
    assert!(rep.never_vanishes);
    for (n, (_, cn)) in rep.powers.iter().enumerate() {
        assert!((cn - c(0.0, -2.0 * n as f64)).norm() < 1e-9);
    }
    for r in [3usize, 5] {
        let rd = RootData::new(r).unwrap();
        for j in 0..r - 1 {
            assert!(twist_order_probe(&rd, j, 50).unwrap().never_vanishes);
        }
        assert!(twist_order_probe(&rd, r - 1, 5).is_err());
    }
}
