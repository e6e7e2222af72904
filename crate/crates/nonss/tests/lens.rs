use nonss::closedforms::{chain_coefficients, continued_fraction, lens_chain_presentation, lens_z2};
use nonss::qcore::{c, RootData};
use nonss::surgery::eval_z;

#[test]
fn chain_surgery_matches_closed_form() {
    let rd = RootData::new(2).unwrap();
    for (p, q) in [(3i64, 1i64), (5, 1), (5, 2), (7, 1), (7, 2), (7, 3)] {
        for k in 1..p {
            let sp = lens_chain_presentation(p, q, k).unwrap();
            let z = eval_z(&rd, &sp, false).unwrap().value;
            let zr = eval_z(&rd, &sp, true).unwrap().value;
            let cf = lens_z2(&rd, p, q, k).unwrap();
            assert!((z - cf).norm() < 1e-8, "({p},{q},{k}) {z} vs {cf}");
            assert!((zr - cf).norm() < 1e-8, "reduced ({p},{q},{k})");
        }
    }
}

#[test]
fn closed_form_example() {
    let rd = RootData::new(2).unwrap();
    assert!((lens_z2(&rd, 3, 1, 1).unwrap() - c(-0.28867513459481287, 0.16666666666666666)).norm() < 1e-7);
}

#[test]
fn chain_data() {
    let a = continued_fraction(7, 3).unwrap();
    assert!(a.iter().all(|&x| x >= 2));
    let cs = chain_coefficients(&a);
    let n = a.len() as i64;
    assert_eq!(cs[0], (-1i64).pow(n as u32) * 7);
    assert_eq!(cs[1], (-1i64).pow((n - 1) as u32) * 3);
    assert!(continued_fraction(4, 2).is_err());
}
