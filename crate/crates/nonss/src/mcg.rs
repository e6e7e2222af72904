//! Torus mapping-class-group data: the r = 2 representation on
//! span([T_{xP₀}], [T_{P₀}]), generic-torus pairing matrices, Torelli scalars
//! and the growth of θ_{P_j}ⁿ.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qcore::{c, re, RootData, C64};
use crate::repcat::{self, ColorLabel};
use crate::surgery::{eval_z, SurgeryPresentation};
use crate::tangle::library::{self, Thread};
use crate::tangle::{DiagramBuilder, Orientation, StrandColor};

#[derive(Clone, Debug, PartialEq)]
pub struct TorusPairings {
    /// Z(S²×S¹, P₀ core) = ⟨T′_∅, T_{P₀}⟩
    pub empty_p0: C64,
    /// ⟨T′_∅, T_{xP₀}⟩
    pub empty_xp0: C64,
    /// Z(S³, P₀ unknot) = ⟨ST′_∅, T_{P₀}⟩
    pub s_empty_p0: C64,
    /// ⟨ST′_∅, T_{xP₀}⟩
    pub s_empty_xp0: C64,
    /// ⟨T′_∅, ·⟩ on the cores with reversed orientation: (xP₀, P₀)
    pub empty_reversed: (C64, C64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusRepMatrices {
    /// Both in the basis ([T_{xP₀}], [T_{P₀}]).
    pub t_mat: CMat,
    pub s_mat: CMat,
    pub pairings: TorusPairings,
    /// Gram matrix: rows (T′_∅, ST′_∅), columns (T_{xP₀}, T_{P₀}).
    pub gram: CMat,
}

fn m2(a: C64, b: C64, cc: C64, d: C64) -> CMat {
    CMat::from_row_slice(2, 2, &[a, b, cc, d])
}

/// P₀ core, optionally with an x coupon, either in S³ or threaded through a
/// 0-framed Kirby loop of degree β (S²×S¹).
fn p0_core(with_x: bool, orientation: Orientation, kirby: Option<C64>) -> SurgeryPresentation {
    let mut b = DiagramBuilder::new();
    let t = b.component("core", StrandColor::Color(ColorLabel::Pj(0)));
    b.cup(0, t, orientation);
    if with_x {
        b.coupon(0, "x");
    }
    if let Some(beta) = kirby {
        let u = b.component("U", StrandColor::Kirby(beta));
        b.encircle(0, 1, u, true, 0);
    }
    b.cap(0);
    SurgeryPresentation::new(b.finish())
}

pub fn torus_pairings_r2(rd: &RootData, beta: C64) -> Result<TorusPairings> {
    if rd.r != 2 {
        return Err(Error::WrongR { expected: 2, got: rd.r });
    }
    let z = |p: SurgeryPresentation| eval_z(rd, &p, false).map(|v| v.value);
    Ok(TorusPairings {
        empty_p0: z(p0_core(false, Orientation::Up, Some(beta)))?,
        empty_xp0: z(p0_core(true, Orientation::Up, Some(beta)))?,
        s_empty_p0: z(p0_core(false, Orientation::Up, None))?,
        s_empty_xp0: z(p0_core(true, Orientation::Up, None))?,
        empty_reversed: (
            z(p0_core(true, Orientation::Down, Some(beta)))?,
            z(p0_core(false, Orientation::Down, Some(beta)))?,
        ),
    })
}

/// T and S on span([T_{xP₀}], [T_{P₀}]) at r = 2, recomputed from Z.
/// N_S is read off from ⟨T′_∅, N_S v⟩ = ⟨ST′_∅, v⟩ and ⟨ST′_∅, N_S v⟩ = ⟨S²T′_∅, v⟩,
/// where S² reverses the core.
pub fn torus_rep_r2(rd: &RootData) -> Result<TorusRepMatrices> {
    let pr = torus_pairings_r2(rd, c(0.37, 0.11))?;
    let gram = m2(pr.empty_xp0, pr.empty_p0, pr.s_empty_xp0, pr.s_empty_p0);
    let ginv = gram
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("torus pairing is degenerate".into()))?;
    let image = |phi_s: C64, phi_rev: C64| &ginv * CMat::from_column_slice(2, 1, &[phi_s, phi_rev]);
    let s_x = image(pr.s_empty_xp0, pr.empty_reversed.0);
    let s_p = image(pr.s_empty_p0, pr.empty_reversed.1);
    let s_mat = m2(s_x[0], s_p[0], s_x[1], s_p[1]);
    // θ_{P₀} = a·Id + b·x from a curl on the engine
    let mut bld = DiagramBuilder::new();
    let w = bld.component("W", StrandColor::Color(ColorLabel::Pj(0)));
    bld.boundary(w, Orientation::Up).kink(0, true);
    let theta = crate::tangle::evaluate_f(rd, &bld.finish())?;
    let (a, b) = repcat::decompose_p(rd, 0, &theta)?;
    let t_mat = m2(a, b, re(0.0), a);
    Ok(TorusRepMatrices { t_mat, s_mat, pairings: pr, gram })
}

/// Expected T and S, written out by hand.
pub fn torus_rep_r2_reference() -> (CMat, CMat) {
    (
        m2(re(1.0), c(0.0, -2.0), re(0.0), re(1.0)),
        m2(re(0.0), re(-2.0), re(-0.5), re(0.0)),
    )
}

/// Labels k of the basis [T_{α+k}]: H_r for r odd, H_r⁺ for r even.
pub fn generic_torus_basis(rd: &RootData) -> Vec<i64> {
    if rd.is_even() {
        rd.h_r_plus()
    } else {
        rd.h_r()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingMatrix {
    /// entries[(i, j)] = ⟨[T′_{−α+h_i}], [T_{α+k_j}]⟩
    pub entries: CMat,
    pub rows: Vec<i64>,
    pub cols: Vec<i64>,
}

/// Pairings computed by Z on a 0-framed Kirby loop of degree β around two
/// parallel circles colored α+k and −α+h.
pub fn pairing_matrix_on(rd: &RootData, alpha: C64, beta: C64, hs: &[i64], ks: &[i64]) -> Result<PairingMatrix> {
    if rd.integral_part(alpha).is_some() {
        return Err(Error::NotAdmissibleColor(crate::qcore::fmt_c(alpha)));
    }
    let mut entries = linalg::zeros(hs.len(), ks.len());
    for (i, h) in hs.iter().enumerate() {
        for (j, k) in ks.iter().enumerate() {
            let threads = [
                Thread { color: StrandColor::Color(ColorLabel::Valpha(alpha + *k as f64)), framing: 0, orientation: Orientation::Up },
                Thread { color: StrandColor::Color(ColorLabel::Valpha(-alpha + *h as f64)), framing: 0, orientation: Orientation::Up },
            ];
            let sp = SurgeryPresentation::new(library::threads_through_loop(&threads, StrandColor::Kirby(beta), 0, true));
            entries[(i, j)] = eval_z(rd, &sp, false)?.value;
        }
    }
    Ok(PairingMatrix { entries, rows: hs.to_vec(), cols: ks.to_vec() })
}

pub fn pairing_matrix(rd: &RootData, alpha: C64) -> Result<PairingMatrix> {
    let ks = generic_torus_basis(rd);
    pairing_matrix_on(rd, alpha, c(0.29, 0.13), &ks, &ks)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorelliScalar {
    pub value: C64,
    /// Smallest n ≤ n_max with valueⁿ = 1.
    pub order: Option<u64>,
}

/// q^{(h−k)(α+(h+k)/2)} and its order, searched up to `n_max`.
pub fn torelli_scalar(rd: &RootData, alpha: C64, h: i64, k: i64, n_max: u64) -> TorelliScalar {
    let e = (alpha + (h + k) as f64 / 2.0) * (h - k) as f64;
    let value = rd.qpow(e);
    let mut order = None;
    for n in 1..=n_max {
        if (rd.qpow(e * n as f64) - re(1.0)).norm() < 1e-9 {
            order = Some(n);
            break;
        }
    }
    TorelliScalar { value, order }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistOrderReport {
    pub j: usize,
    /// θ_{P_j}ⁿ = aⁿ (Id + c_n x_j) for n = 0..=n_max, listed as (aⁿ, c_n).
    pub powers: Vec<(C64, C64)>,
    /// c_n = −n (r−j−1) {j+1}; nonzero for every n ≥ 1.
    pub never_vanishes: bool,
}

pub fn twist_order_probe(rd: &RootData, j: usize, n_max: usize) -> Result<TwistOrderReport> {
    if j + 2 > rd.r {
        return Err(Error::InvalidLabel(format!("P_{j} needs j ≤ r−2")));
    }
    let (a, b) = repcat::twist_coefficients_p(rd, j);
    let step = b / a;
    let mut powers = Vec::with_capacity(n_max + 1);
    let mut never_vanishes = true;
    for n in 0..=n_max {
        let cn = step * n as f64;
        if n > 0 && cn.norm() < 1e-12 {
            never_vanishes = false;
        }
        powers.push((a.powi(n as i32), cn));
    }
    Ok(TwistOrderReport { j, powers, never_vanishes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torelli_examples() {
        let rd = RootData::new(3).unwrap();
        assert_eq!(torelli_scalar(&rd, re(0.3), 1, 1, 10).value, re(1.0));
        let t = torelli_scalar(&rd, re(0.5), 2, 0, 10_000);
        assert!((t.value - re(-1.0)).norm() < 1e-12);
        assert_eq!(t.order, Some(2));
        let irr = torelli_scalar(&rd, re(2f64.sqrt()), 2, 0, 10_000);
        assert!((irr.value - C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (2f64.sqrt() + 1.0) / 3.0)).norm() < 1e-12);
        assert_eq!(irr.order, None);
    }

    #[test]
    fn twist_powers() {
        let rd2 = RootData::new(2).unwrap();
        let rep = twist_order_probe(&rd2, 0, 3).unwrap();
        assert!(rep.never_vanishes);
        assert_eq!(rep.powers[0].1, re(0.0));
        assert!((rep.powers[3].1 - c(0.0, -6.0)).norm() < 1e-12);
        let rd3 = RootData::new(3).unwrap();
        let rep = twist_order_probe(&rd3, 1, 2).unwrap();
        assert!((rep.powers[2].1.norm() - (2.0 * rd3.qbracket_re(2.0)).norm()).abs() < 1e-12);
    }
}
