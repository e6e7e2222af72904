use nonss::qcore::{c, re, RootData, C64};
use nonss::repcat::ColorLabel;
use nonss::surgery::{eval_z, eval_z_disjoint, eval_z_with, presets, verify_kirby_invariance, EvalOptions, SurgeryPresentation};
use nonss::Error;
use proptest::prelude::*;

fn z(rd: &RootData, p: &SurgeryPresentation) -> C64 {
    eval_z(rd, p, false).unwrap().value
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn kirby_moves_on_s3() {
    for r in [2usize, 3, 5, 6] {
        let rd = RootData::new(r).unwrap();
        for a in [c(0.3, 0.1), re(0.5), c(-0.41, 0.2)] {
            let target = rd.normalization_constants().eta * rd.modified_dim(a).unwrap();
            let ps = [
                presets::s3_unknot(a, 0),
                presets::s3_unknot_blown_up(&rd, a, 0),
                presets::s3_unknot_cancelling_pair(&rd, a, 0),
            ];
            for p in &ps {
                assert!(close(z(&rd, p), target, 1e-9), "r={r} a={a}");
            }
            let rep = verify_kirby_invariance(&rd, &ps, false).unwrap();
            assert!(rep.pass, "r={r}: {rep:?}");
        }
    }
}

#[test]
fn reduced_kirby_color_agrees() {
    for r in [2usize, 6] {
        let rd = RootData::new(r).unwrap();
        let a = c(0.3, 0.1);
        let p = presets::s3_unknot_blown_up(&rd, a, 1);
        let full = eval_z(&rd, &p, false).unwrap().value;
        let red = eval_z(&rd, &p, true).unwrap().value;
        assert!(close(full, red, 1e-9));
    }
    let rd3 = RootData::new(3).unwrap();
    assert!(eval_z(&rd3, &presets::s3_unknot_blown_up(&rd3, re(0.3), 0), true).is_err());
}

#[test]
fn s2xs1_with_projective_cores() {
    let rd = RootData::new(2).unwrap();
    for beta in [c(0.3, 0.2), re(0.71)] {
        assert!(close(z(&rd, &presets::s2xs1_core(beta, ColorLabel::Pj(0))), re(1.0), 1e-9));
        // P₁ = V₀ has degree 1 here; the meridian fails compatibility
        let p1 = presets::s2xs1_core(beta, ColorLabel::Pj(1));
        assert!(matches!(eval_z(&rd, &p1, false), Err(Error::NotAdmissible(_))));
        let o = EvalOptions { reduced_kirby: false, enforce_compatibility: false };
        let v = eval_z_with(&rd, &p1, o).unwrap();
        assert!(v.value.norm() < 1e-9);
        assert!(!v.warnings.is_empty());
    }
}

#[test]
fn shat_times_circle_closed_form() {
    for r in [2usize, 3] {
        let rd = RootData::new(r).unwrap();
        let beta = c(0.37, 0.12);
        for k in 0..3i64 {
            let v = z(&rd, &presets::shat_times_circle(k, beta));
            let e = rd.qpow(beta * (-2.0 * (rd.r_prime as i64 * k) as f64)) * rd.sign((r as i64 - 1) * k);
            assert!(close(v, e, 1e-9), "r={r} k={k}: {v} vs {e}");
        }
    }
}

#[test]
fn connected_sum_and_sigma() {
    for r in [2usize, 3] {
        let rd = RootData::new(r).unwrap();
        let a = c(0.23, 0.11);
        let n1 = presets::braid_knot_with_meridian(&rd, a, 1, &[], Some(2)).unwrap();
        let n2 = presets::braid_knot_with_meridian(&rd, a, 2, &[1, 1, 1], None).unwrap();
        let sum = presets::braid_knot_with_meridian(&rd, a, 2, &[1, 1, 1], Some(2)).unwrap();
        let lhs = z(&rd, &sum);
        let rhs = eval_z_disjoint(&rd, &[n1, n2], false).unwrap().value
            / (rd.modified_dim(a).unwrap() * rd.normalization_constants().eta);
        assert!(close(lhs, rhs, 1e-9), "r={r}");
        let deg = ColorLabel::Valpha(a).degree(&rd);
        let with = z(&rd, &presets::with_sigma_loop(a, 2, &[1, 1, 1], Some((-deg / 2.0, 2)), 1));
        assert!(close(lhs, with * rd.sigma_removal_scalar(deg), 1e-9), "r={r}");
    }
}

#[test]
fn empty_and_disconnected() {
    let rd = RootData::new(3).unwrap();
    assert_eq!(eval_z_disjoint(&rd, &[], false).unwrap().value, re(1.0));
    let a = presets::s3_unknot(re(0.3), 0);
    let b = presets::s3_unknot(re(0.4), 1);
    let v = eval_z_disjoint(&rd, &[a.clone(), b.clone()], false).unwrap().value;
    assert!(close(v, z(&rd, &a) * z(&rd, &b), 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn framing_changes_by_twist(ri in 0usize..2, x in -0.9f64..0.9, y in -0.3f64..0.3, f in -3i64..4) {
        prop_assume!(x.abs() > 0.05);
        let r = [2usize, 3][ri];
        let rd = RootData::new(r).unwrap();
        let a = c(x, y);
        let z0 = z(&rd, &presets::s3_unknot(a, 0));
        let zf = z(&rd, &presets::s3_unknot(a, f));
        let th = rd.qpow((a * a - ((r - 1) * (r - 1)) as f64) / 2.0);
        prop_assert!(close(zf, z0 * th.powi(f as i32), 1e-9));
    }
}
