use nonss::linalg::{self, CMat};
use nonss::qcore::{c, re, RootData, C64};
use nonss::repcat::{self, ColorLabel, TwistValue};
use nonss::tangle::library::{self, Thread};
use nonss::tangle::{self, CutPoint, DiagramBuilder, Orientation, StrandColor};

fn va(x: C64) -> ColorLabel {
    ColorLabel::Valpha(x)
}

fn rel(a: &CMat, b: &CMat) -> f64 {
    linalg::max_abs(&(a - b)) / linalg::max_abs(b).max(1.0)
}

fn strand_with(label: ColorLabel, o: Orientation, f: impl Fn(&mut DiagramBuilder)) -> tangle::Diagram {
    let mut b = DiagramBuilder::new();
    let w = b.component("W", StrandColor::Color(label));
    b.boundary(w, o);
    f(&mut b);
    b.finish()
}

#[test]
fn bare_strand_is_identity() {
    let rd = RootData::new(3).unwrap();
    let d = strand_with(va(re(0.4)), Orientation::Up, |_| {});
    let m = tangle::evaluate_f(&rd, &d).unwrap();
    assert!(rel(&m, &linalg::eye(3)) < 1e-14);
}

#[test]
fn hopf_engine_matches_closed_forms() {
    for r in [2usize, 3, 5, 6] {
        let rd = RootData::new(r).unwrap();
        let mut labels = vec![va(c(0.37, 0.11)), va(re(0.5)), va(re(0.0)), ColorLabel::SigmaPow(1), ColorLabel::Trivial];
        for i in 0..r {
            labels.push(ColorLabel::Si(i));
        }
        for j in 0..r.saturating_sub(1) {
            labels.push(ColorLabel::Pj(j));
        }
        let strands: Vec<ColorLabel> = labels.iter().cloned().filter(|l| l.is_projective(&rd) || matches!(l, ColorLabel::Si(_))).collect();
        for v in &labels {
            for w in &strands {
                let Some(cf) = repcat::hopf_closed_form(&rd, *v, *w).unwrap() else { continue };
                let en = repcat::hopf_engine(&rd, *v, *w).unwrap();
                let e = rel(&en, &cf);
                assert!(e < 1e-9, "r={r} Phi[{v},{w}] off by {e:e}");
            }
        }
    }
}

#[test]
fn curls_act_by_twist() {
    for r in [2usize, 3, 5] {
        let rd = RootData::new(r).unwrap();
        let mut labels = vec![va(c(0.3, -0.2)), va(re(0.0))];
        for j in 0..r - 1 {
            labels.push(ColorLabel::Pj(j));
        }
        for l in labels {
            let th = match repcat::twist_scalar(&rd, l).unwrap() {
                TwistValue::Scalar(s) => linalg::eye(repcat::realize(&rd, l).unwrap().dim) * s,
                TwistValue::Matrix(m) => m,
            };
            let up = tangle::evaluate_f(&rd, &strand_with(l, Orientation::Up, |b| {
                b.kink(0, true);
            }))
            .unwrap();
            assert!(rel(&up, &th) < 1e-9, "r={r} {l} up curl");
            let down = tangle::evaluate_f(&rd, &strand_with(l, Orientation::Down, |b| {
                b.kink(0, true);
            }))
            .unwrap();
            assert!(rel(&down, &th.transpose()) < 1e-9, "r={r} {l} down curl");
            let neg = tangle::evaluate_f(&rd, &strand_with(l, Orientation::Up, |b| {
                b.kink(0, true).kink(0, false);
            }))
            .unwrap();
            assert!(rel(&neg, &linalg::eye(th.nrows())) < 1e-9);
        }
    }
}

#[test]
fn unknot_and_hopf_fprime() {
    for r in [2usize, 3, 6] {
        let rd = RootData::new(r).unwrap();
        let a = c(0.31, 0.07);
        let b = c(-0.22, 0.13);
        let u = tangle::evaluate_fprime(&rd, &library::unknot(StrandColor::Color(va(a)), 0)).unwrap();
        assert!(rd.close(u.value, rd.modified_dim(a).unwrap()));
        let h = library::hopf_link(StrandColor::Color(va(a)), 0, StrandColor::Color(va(b)), 0);
        let levels = h.levels().unwrap();
        let mut vals = vec![];
        for (lv, word) in levels.iter().enumerate() {
            for p in 0..word.len() {
                vals.push(tangle::evaluate_fprime_at(&rd, &h, CutPoint { level: lv, position: p }).unwrap().value);
            }
        }
        let expect = rd.modified_dim(a).unwrap() * rd.qpow(a * b) * rd.sign(r as i64 - 1) * r as f64 / rd.modified_dim(a).unwrap();
        for v in vals {
            assert!(rd.close(v, expect), "r={r}: {v} vs {expect}");
        }
    }
}

#[test]
fn sigma_double_crossing() {
    for r in [2usize, 3, 6] {
        let rd = RootData::new(r).unwrap();
        let a = c(0.41, 0.2);
        let m = tangle::evaluate_f(&rd, &library::sigma_double_crossing(1, va(a))).unwrap();
        let deg = a + (r as f64 - 1.0);
        let s = rd.qpow(deg * 2.0 * rd.r_prime as f64);
        assert!(rel(&m, &(linalg::eye(r) * s)) < 1e-9);
    }
}

#[test]
fn threads_cut_independent() {
    let rd = RootData::new(3).unwrap();
    let d = library::threads_through_loop(
        &[
            Thread { color: StrandColor::Color(va(re(0.3))), framing: 1, orientation: Orientation::Down },
            Thread { color: StrandColor::Color(ColorLabel::Pj(0)), framing: 0, orientation: Orientation::Up },
        ],
        StrandColor::Color(va(c(0.2, 0.1))),
        -1,
        true,
    );
    let levels = d.levels().unwrap();
    let mut vals = vec![];
    for (lv, word) in levels.iter().enumerate() {
        for (p, s) in word.iter().enumerate() {
            if d.components[s.component].color.label().unwrap().is_projective(&rd) {
                vals.push(tangle::evaluate_fprime_at(&rd, &d, CutPoint { level: lv, position: p }).unwrap().value);
            }
        }
    }
    for v in &vals {
        assert!(rd.close(*v, vals[0]), "{v} vs {}", vals[0]);
    }
}

#[test]
fn encircling_kirby_meridian() {
    for r in [2usize, 3, 5, 6] {
        let rd = RootData::new(r).unwrap();
        let alpha = c(0.27, 0.05);
        let beta = c(0.33, -0.1);
        let rp = rd.r_prime as i64;
        for k in [0i64, 1, 2, rp, 2 * rp, -rp] {
            let d = library::encircled_pair(alpha, k, beta);
            let m = tangle::evaluate_f_expanded(&rd, &d, false).unwrap();
            let exp = repcat::encircling_closed_form(&rd, alpha, k, beta).unwrap();
            let scale = linalg::max_abs(&exp).max(1.0);
            assert!(linalg::max_abs(&(&m - &exp)) / scale < 1e-9, "r={r} k={k}");
        }
    }
}

fn braid_sides(rd: &RootData, labels: [ColorLabel; 3], o: [Orientation; 3]) -> (CMat, CMat) {
    let mk = |word: &[usize]| {
        let mut b = DiagramBuilder::new();
        for (i, l) in labels.iter().enumerate() {
            let w = b.component(&format!("W{i}"), StrandColor::Color(*l));
            b.boundary(w, o[i]);
        }
        for p in word {
            b.over(*p);
        }
        tangle::evaluate_f(rd, &b.finish()).unwrap()
    };
    (mk(&[0, 1, 0]), mk(&[1, 0, 1]))
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
    #[test]
    fn braid_relation(ri in 0usize..3, xs in proptest::collection::vec(-0.9f64..0.9, 6), os in proptest::collection::vec(proptest::bool::ANY, 3)) {
        let r = [2usize, 3, 5][ri];
        let rd = RootData::new(r).unwrap();
        let labels = [va(c(xs[0], xs[1])), va(c(xs[2], xs[3])), va(c(xs[4], xs[5]))];
        let o = [0, 1, 2].map(|i| if os[i] { Orientation::Up } else { Orientation::Down });
        let (l, rr) = braid_sides(&rd, labels, o);
        proptest::prop_assert!(rel(&l, &rr) < 1e-9);
    }

    #[test]
    fn over_then_under_is_identity(x in -0.9f64..0.9, y in -0.9f64..0.9, up in proptest::bool::ANY) {
        let rd = RootData::new(3).unwrap();
        let mut b = DiagramBuilder::new();
        let w0 = b.component("A", StrandColor::Color(va(c(x, 0.1))));
        let w1 = b.component("B", StrandColor::Color(va(c(y, -0.2))));
        let o = if up { Orientation::Up } else { Orientation::Down };
        b.boundary(w0, o).boundary(w1, Orientation::Up).over(0).under(0);
        let m = tangle::evaluate_f(&rd, &b.finish()).unwrap();
        proptest::prop_assert!(rel(&m, &linalg::eye(9)) < 1e-9);
    }
}
