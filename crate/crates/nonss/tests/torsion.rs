use nonss::qcore::{c, re, RootData, C64};
use nonss::repcat::ColorLabel;
use nonss::tangle::{library, Diagram, StrandColor};
use nonss::torsion_r2::*;
use proptest::prelude::*;

fn v() -> StrandColor {
    StrandColor::Color(ColorLabel::Valpha(re(0.3)))
}

/// Conway polynomial of the closure of σ₁ⁿ by the skein relation
/// ∇(σⁿ) = ∇(σⁿ⁻²) + z∇(σⁿ⁻¹), returned as coefficients in z.
fn two_braid_conway(n: usize) -> Vec<i64> {
    let mut prev = vec![0i64]; // split unlink
    let mut cur = vec![1i64]; // unknot
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let mut next = vec![0i64; cur.len() + 1];
        for (i, a) in prev.iter().enumerate() {
            next[i] += a;
        }
        for (i, a) in cur.iter().enumerate() {
            next[i + 1] += a;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn poly_over_z(p: &[i64], t: C64) -> C64 {
    let z = t - t.inv();
    p.iter().rev().fold(re(0.0), |acc, &a| acc * z + a as f64) / z
}

#[test]
fn fixtures_match_skein_on_the_diagonal() {
    assert_eq!(two_braid_conway(2), vec![0, 1]);
    assert_eq!(two_braid_conway(3), vec![1, 0, 1]);
    for t in [c(0.7, 0.3), c(-1.2, 0.5), c(0.1, -2.0)] {
        assert!(((HOPF.nabla)(&[t, t]) - poly_over_z(&two_braid_conway(2), t)).norm() < 1e-12);
        assert!(((TREFOIL.nabla)(&[t]) - poly_over_z(&two_braid_conway(3), t)).norm() < 1e-12);
        assert!(((UNKNOT.nabla)(&[t]) - poly_over_z(&two_braid_conway(1), t)).norm() < 1e-12);
    }
}

fn cases() -> Vec<(Diagram, ConwayFixture)> {
    vec![
        (library::unknot(v(), 0), UNKNOT),
        (library::unknot(v(), -3), UNKNOT),
        (library::hopf_link(v(), 0, v(), 0), HOPF),
        (library::hopf_link(v(), 2, v(), -1), HOPF),
        (library::braid_closure(2, &[1, 1], &[v(), v()], &[]), HOPF),
        (library::trefoil(v()), TREFOIL),
    ]
}

#[test]
fn fprime_matches_conway() {
    let rd = RootData::new(2).unwrap();
    let cols = [c(0.31, 0.1), c(-0.57, 0.2)];
    for (d, f) in cases() {
        let rep = conway_crosscheck(&rd, &d, &f, &cols[..f.components]).unwrap();
        assert!(rep.relative_deviation < 1e-8, "{} {:?}", f.link_name, rep);
        let rev = conway_crosscheck(&rd, &library::reversed(&d), &f, &cols[..f.components]).unwrap();
        assert!(rev.relative_deviation < 1e-8, "reversed {} {:?}", f.link_name, rev);
        assert!((rev.fprime - rep.fprime).norm() < 1e-8 * rep.fprime.norm());
    }
}

#[test]
fn unknot_calibration_is_modified_dimension() {
    let rd = RootData::new(2).unwrap();
    let a = c(0.41, -0.2);
    let rep = conway_crosscheck(&rd, &library::unknot(v(), 0), &UNKNOT, &[a]).unwrap();
    assert!((rep.conway_side - rd.modified_dim(a).unwrap()).norm() < 1e-12);
}

#[test]
fn rejects_bad_input() {
    let rd = RootData::new(2).unwrap();
    assert!(conway_crosscheck(&rd, &library::unknot(v(), 0), &HOPF, &[re(0.3)]).is_err());
    assert!(conway_crosscheck(&rd, &library::unknot(v(), 0), &UNKNOT, &[re(1.0)]).is_err());
    let rd3 = RootData::new(3).unwrap();
    assert!(conway_crosscheck(&rd3, &library::unknot(v(), 0), &UNKNOT, &[re(0.3)]).is_err());
}

#[test]
fn lens_fingerprints() {
    let f71 = lens_fingerprint(7, 1).unwrap();
    let f72 = lens_fingerprint(7, 2).unwrap();
    assert!(fingerprints_differ(&f71, &f72, 1e-8));
    let f52 = lens_fingerprint(5, 2).unwrap();
    let f53 = lens_fingerprint(5, 3).unwrap();
    assert!(!fingerprints_differ(&f52, &f53, 1e-8));
    assert!(lens_fingerprint(4, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]
    #[test]
    fn conway_symmetry(a in -2.0f64..2.0, b in -2.0f64..2.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let t = [C64::from_polar(1.0 + 0.3 * a.abs(), b), C64::from_polar(1.0 + 0.2 * x.abs(), y)];
        for f in [UNKNOT, HOPF, TREFOIL] {
            prop_assert!(conway_symmetry_defect(&f, &t[..f.components]) < 1e-10);
        }
    }

    #[test]
    fn hopf_random_colors(a in -1.9f64..1.9, b in -1.9f64..1.9, ia in -0.5f64..0.5, ib in -0.5f64..0.5) {
        prop_assume!((a.abs() - 1.0).abs() > 0.05 && (b.abs() - 1.0).abs() > 0.05);
        let rd = RootData::new(2).unwrap();
        let rep = conway_crosscheck(&rd, &library::hopf_link(v(), 0, v(), 0), &HOPF, &[c(a, ia), c(b, ib)]).unwrap();
        prop_assert!(rep.relative_deviation < 1e-8);
    }
}
