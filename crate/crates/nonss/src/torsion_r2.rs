//! r = 2 cross-checks against classical invariants: F′ against fixtures of the
//! Alexander–Conway function, and lens-space fingerprints.

use crate::closedforms::lens_z2;
use crate::error::{Error, Result};
use crate::qcore::{re, RootData, C64};
use crate::repcat::ColorLabel;
use crate::tangle::{evaluate_fprime, linking_matrix_all, Diagram, StrandColor};

/// ∇ of one link type, as a function of (t₁,…,t_m).
///
/// Fixtures are normalized so that the unknot gives 1/(t − t⁻¹); with
/// t_j = i^{1−α_j} this makes −2i·∇(unknot) equal to d(α) at r = 2.
#[derive(Clone, Copy, Debug)]
pub struct ConwayFixture {
    pub link_name: &'static str,
    pub components: usize,
    pub nabla: fn(&[C64]) -> C64,
    pub note: &'static str,
}

fn nabla_unknot(t: &[C64]) -> C64 {
    (t[0] - t[0].inv()).inv()
}

fn nabla_hopf(_: &[C64]) -> C64 {
    re(1.0)
}

fn nabla_trefoil(t: &[C64]) -> C64 {
    let z = t[0] - t[0].inv();
    (re(1.0) + z * z) / z
}

pub const UNKNOT: ConwayFixture = ConwayFixture {
    link_name: "unknot",
    components: 1,
    nabla: nabla_unknot,
    note: "normalization fixed on the unknot: F'(unknot, a) = d(a) = -2i/(t - 1/t), t = i^(1-a)",
};

pub const HOPF: ConwayFixture = ConwayFixture {
    link_name: "hopf",
    components: 2,
    nabla: nabla_hopf,
    note: "skein on one crossing: L+ = Hopf, L- = split unlink (0), L0 = unknot; \
           z * 1/(t - 1/t) = 1 on the diagonal, constant in (t1, t2)",
};

pub const TREFOIL: ConwayFixture = ConwayFixture {
    link_name: "trefoil",
    components: 1,
    nabla: nabla_trefoil,
    note: "skein on sigma^3: L+ = trefoil, L- = unknot, L0 = Hopf; polynomial 1 + z^2, divided by z = t - 1/t",
};

pub fn fixture(name: &str) -> Result<ConwayFixture> {
    match name {
        "unknot" => Ok(UNKNOT),
        "hopf" => Ok(HOPF),
        "trefoil" => Ok(TREFOIL),
        _ => Err(Error::MissingFixture(name.to_string())),
    }
}

/// ∇(t⁻¹) − (−1)^m ∇(t).
pub fn conway_symmetry_defect(f: &ConwayFixture, t: &[C64]) -> f64 {
    let inv: Vec<C64> = t.iter().map(|x| x.inv()).collect();
    let sign = if f.components % 2 == 0 { 1.0 } else { -1.0 };
    ((f.nabla)(&inv) - (f.nabla)(t) * sign).norm()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConwayReport {
    pub fprime: C64,
    pub conway_side: C64,
    pub relative_deviation: f64,
}

/// Recolors the components of `diagram` with V_{α_j} and compares F′ with
/// −2i ∇(i^{1−α₁},…) i^{Σ_{j,k} (α_jα_k − 1)/2 · lk_jk}, lk_jj being the framing.
pub fn conway_crosscheck(rd2: &RootData, diagram: &Diagram, fixture: &ConwayFixture, colors: &[C64]) -> Result<ConwayReport> {
    if rd2.r != 2 {
        return Err(Error::WrongR { expected: 2, got: rd2.r });
    }
    if diagram.components.len() != fixture.components || colors.len() != fixture.components {
        return Err(Error::MissingFixture(format!(
            "{} has {} components, diagram {}, colors {}",
            fixture.link_name,
            fixture.components,
            diagram.components.len(),
            colors.len()
        )));
    }
    for &a in colors {
        if let Some(n) = rd2.integral_part(a) {
            if n.rem_euclid(2) == 1 {
                return Err(Error::NotAdmissibleColor(crate::qcore::fmt_c(a)));
            }
        }
    }
    let mut d = diagram.clone();
    for (comp, &a) in d.components.iter_mut().zip(colors) {
        comp.color = StrandColor::Color(ColorLabel::Valpha(a));
    }
    let fprime = evaluate_fprime(rd2, &d)?.value;
    let lk = linking_matrix_all(&d)?;
    let i = C64::i();
    let ts: Vec<C64> = colors.iter().map(|&a| i.powc(re(1.0) - a)).collect();
    let mut expo = re(0.0);
    for (j, row) in lk.iter().enumerate() {
        for (k, &l) in row.iter().enumerate() {
            expo += (colors[j] * colors[k] - 1.0) / 2.0 * l as f64;
        }
    }
    let conway_side = -2.0 * i * (fixture.nabla)(&ts) * i.powc(expo);
    let relative_deviation = (fprime - conway_side).norm() / conway_side.norm().max(1e-300);
    Ok(ConwayReport { fprime, conway_side, relative_deviation })
}

/// Sorted multiset {lens_Z2(p,q,k) : k = 1..p−1}, rounded to 1e-9.
pub fn lens_fingerprint(p: i64, q: i64) -> Result<Vec<C64>> {
    let rd2 = RootData::new(2)?;
    let round = |x: f64| {
        let y = (x * 1e9).round() / 1e9;
        if y == 0.0 {
            0.0
        } else {
            y
        }
    };
    let mut out = (1..p)
        .map(|k| lens_z2(&rd2, p, q, k).map(|z| C64::new(round(z.re), round(z.im))))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// Whether two fingerprints differ as multisets beyond `tol`.
pub fn fingerprints_differ(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x - y).norm() > tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c;

    #[test]
    fn fixture_symmetry() {
        for f in [UNKNOT, HOPF, TREFOIL] {
            let t: Vec<C64> = (0..f.components).map(|j| c(0.7 + 0.1 * j as f64, 0.4)).collect();
            assert!(conway_symmetry_defect(&f, &t) < 1e-12, "{}", f.link_name);
        }
        assert!(matches!(fixture("whitehead"), Err(Error::MissingFixture(_))));
    }

    #[test]
    fn fingerprint_basics() {
        let a = lens_fingerprint(7, 1).unwrap();
        assert_eq!(a.len(), 6);
        assert!(!fingerprints_differ(&a, &lens_fingerprint(7, 1).unwrap(), 1e-8));
    }
}
