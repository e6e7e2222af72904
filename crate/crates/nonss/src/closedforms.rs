//! Closed formulas that bypass the diagram engine: graded Verlinde dimensions
//! of Σ_g × S¹ and the r = 2 lens-space values.

use crate::error::{Error, Result};
use crate::qcore::{c, fmt_c, re, RootData, C64};
use crate::repcat::{self, ColorLabel};
use crate::surgery::SurgeryPresentation;
use crate::tangle::{library, StrandColor};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Φ_{W,V_x} as a scalar for a point color W.
fn point_scalar(rd: &RootData, w: ColorLabel, x: C64) -> Result<C64> {
    let m = repcat::hopf_closed_form(rd, w, ColorLabel::Valpha(x))?
        .ok_or_else(|| Error::InvalidLabel(format!("no closed-form Hopf scalar for a point colored {w}")))?;
    Ok(m[(0, 0)])
}

/// Z(Σ_g × S¹_β) = (r′)^g / r · Σ_{k∈H_r} ({rβ}/{β+k})^{2g−2} Π_i Φ_{W_i, β+k}.
pub fn verlinde_value(rd: &RootData, genus: u32, beta: C64, points: &[ColorLabel]) -> Result<C64> {
    if genus == 0 {
        return Err(Error::InvalidLabel("genus must be at least 1".into()));
    }
    if rd.integral_part(beta).is_some() {
        return Err(Error::PoleAtBeta(fmt_c(beta)));
    }
    let r = rd.rf();
    let rb = rd.qbracket(beta * r);
    let mut sum = re(0.0);
    for k in rd.h_r() {
        let x = beta + k as f64;
        let mut term = (rb / rd.qbracket(x)).powi(2 * genus as i32 - 2);
        for w in points {
            term *= point_scalar(rd, *w, x)?;
        }
        sum += term;
    }
    Ok(sum * (rd.r_prime as f64).powi(genus as i32) / r)
}

/// The V-colored-points form: (−1)^{n(r−1)}/r (r′)^g q^{cβ} Σ_k q^{ck} ({rβ}/{β+k})^{2g−2+n}.
pub fn verlinde_value_v_points(rd: &RootData, genus: u32, beta: C64, colors: &[C64]) -> Result<C64> {
    if rd.integral_part(beta).is_some() {
        return Err(Error::PoleAtBeta(fmt_c(beta)));
    }
    let n = colors.len() as i32;
    let cs: C64 = colors.iter().sum();
    let rb = rd.qbracket(beta * rd.rf());
    let mut sum = re(0.0);
    for k in rd.h_r() {
        sum += rd.qpow(cs * k as f64) * (rb / rd.qbracket(beta + k as f64)).powi(2 * genus as i32 - 2 + n);
    }
    Ok(sum * rd.qpow(cs * beta) * rd.sign(n as i64 * (rd.r as i64 - 1)) * (rd.r_prime as f64).powi(genus as i32) / rd.rf())
}

/// Graded dimension of Σ^g with one point colored P_{2j}:
/// (−1)^{r−1}(r′)^g/r Σ_k ({rβ}/{β+k})^{2g−1}(q^{m(β+k)} + q^{−m(β+k)}), m = r−1−2j.
pub fn verlinde_value_p_point(rd: &RootData, genus: u32, beta: C64, j: usize) -> Result<C64> {
    if 2 * j + 1 >= rd.r {
        return Err(Error::InvalidLabel(format!("P_{} needs 2j < r−1", 2 * j)));
    }
    if rd.integral_part(beta).is_some() {
        return Err(Error::PoleAtBeta(fmt_c(beta)));
    }
    let m = rd.rf() - 1.0 - 2.0 * j as f64;
    let rb = rd.qbracket(beta * rd.rf());
    let mut sum = re(0.0);
    for k in rd.h_r() {
        let x = beta + k as f64;
        sum += (rb / rd.qbracket(x)).powi(2 * genus as i32 - 1) * (rd.qpow(x * m) + rd.qpow(-x * m));
    }
    Ok(sum * rd.sign(rd.r as i64 - 1) * (rd.r_prime as f64).powi(genus as i32) / rd.rf())
}

/// The integer β approached by the dimension limit: 0 for r odd, 1 for r even.
pub fn limit_point(rd: &RootData) -> f64 {
    if rd.is_even() {
        1.0
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub value: C64,
    /// Difference between the extrapolations from (1e-3, 1e-4) and (1e-4, 1e-5).
    pub stability: f64,
}

/// lim_{β→β₀} Z(Σ_g × S¹_β) by first-order Richardson extrapolation.
pub fn verlinde_limit(rd: &RootData, genus: u32, points: &[ColorLabel]) -> Result<LimitReport> {
    let b0 = limit_point(rd);
    let f = |h: f64| verlinde_value(rd, genus, re(b0 + h), points);
    let rich = |h: f64| -> Result<C64> { Ok((f(h / 10.0)? * 10.0 - f(h)?) / 9.0) };
    let coarse = rich(1e-3)?;
    let fine = rich(1e-4)?;
    let stability = (coarse - fine).norm() / fine.norm().max(1.0);
    Ok(LimitReport { value: fine, stability })
}

/// dim 𝕍(Σ_g): the limit of the Verlinde formula, rounded.
pub fn dim_limit(rd: &RootData, genus: u32) -> Result<i64> {
    let rep = verlinde_limit(rd, genus, &[])?;
    if rep.stability > 1e-6 {
        return Err(Error::Numeric(format!("limit unstable ({:e})", rep.stability)));
    }
    let v = rep.value.re.round();
    if (rep.value - re(v)).norm() > 1e-6 {
        return Err(Error::Numeric(format!("limit {} is not an integer", fmt_c(rep.value))));
    }
    Ok(v as i64)
}

/// The closed values of dim 𝕍(Σ_g): r′ for g = 1, r^{3g−3} (r odd), r^{3g−3}/2^{g−1} (r even).
pub fn dim_closed(rd: &RootData, genus: u32) -> i64 {
    if genus == 1 {
        return rd.r_prime as i64;
    }
    let e = 3 * genus - 3;
    let p = (rd.r as i64).pow(e);
    if rd.is_even() {
        p / 2i64.pow(genus - 1)
    } else {
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedDim {
    /// Coefficients of dim_t in t = q^{−2r′β} (signed by (−1)^k when r is even).
    pub signed: BTreeMap<i64, i64>,
    /// dim 𝕍_k, without the (−1)^k.
    pub unsigned: BTreeMap<i64, i64>,
    pub rounding_error: f64,
}

/// Laurent coefficients of Z(Σ_g × S¹_β) in t = q^{−2r′β}, recovered by a DFT
/// over β placed so that t runs over a circle of radius ρ.
pub fn graded_dim_poly(rd: &RootData, genus: u32, points: &[ColorLabel]) -> Result<GradedDim> {
    let rp = rd.r_prime as f64;
    let r = rd.rf();
    let mut extra = 0.0;
    for w in points {
        extra += match w.canonical(rd)? {
            ColorLabel::Pj(j) => r - 1.0 - j as f64 + (r - 1.0),
            ColorLabel::Valpha(a) if rd.integral_part(a).is_some() => r - 1.0,
            ColorLabel::Si(i) => i as f64,
            ColorLabel::SigmaPow(n) => 2.0 * rp * n.abs() as f64,
            ColorLabel::Trivial => 0.0,
            other => {
                return Err(Error::InvalidLabel(format!("{other} makes Z non-polynomial in t")));
            }
        };
    }
    let kmax = (((r - 1.0) * (2.0 * genus as f64 - 2.0) + extra) / (2.0 * rp)).floor() as i64 + 1;
    let n = (2 * kmax + 9) as usize;
    let rho: f64 = 1.1;
    let mut samples = Vec::with_capacity(n);
    for jx in 0..n {
        let theta = 2.0 * PI * jx as f64 / n as f64;
        // q^{−2r′β} = ρ e^{iθ}  ⇔  β = −r(θ − i ln ρ)/(2π r′)
        let beta = c(theta, -rho.ln()) * (-r / (2.0 * PI * rp));
        samples.push(verlinde_value(rd, genus, beta, points)?);
    }
    let mut signed = BTreeMap::new();
    let mut unsigned = BTreeMap::new();
    let mut err: f64 = 0.0;
    for k in -kmax..=kmax {
        let mut acc = re(0.0);
        for (jx, z) in samples.iter().enumerate() {
            let theta = 2.0 * PI * jx as f64 / n as f64;
            acc += z * C64::from_polar(1.0, -theta * k as f64);
        }
        let coef = acc / n as f64 / rho.powi(k as i32);
        let ci = coef.re.round();
        err = err.max((coef - re(ci)).norm());
        let ci = ci as i64;
        if ci != 0 {
            signed.insert(k, ci);
            let sgn = if rd.is_even() && k.rem_euclid(2) == 1 { -1 } else { 1 };
            unsigned.insert(k, sgn * ci);
        }
    }
    Ok(GradedDim { signed, unsigned, rounding_error: err })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn check_lens(p: i64, q: i64) -> Result<()> {
    if !(p > q && q > 0) || gcd(p, q) != 1 {
        return Err(Error::InvalidLens(format!("need p > q > 0 coprime, got ({p}, {q})")));
    }
    Ok(())
}

/// Z₂(L(p,q), ω_k) = (−1)^k e^{iπk²q/p} / (4i sin(πkq/p) sin(πk/p)).
pub fn lens_z2(rd: &RootData, p: i64, q: i64, k: i64) -> Result<C64> {
    if rd.r != 2 {
        return Err(Error::WrongR { expected: 2, got: rd.r });
    }
    check_lens(p, q)?;
    if k.rem_euclid(p) == 0 {
        return Err(Error::InvalidLens(format!("k = {k} is divisible by p = {p}")));
    }
    let (pf, qf, kf) = (p as f64, q as f64, k as f64);
    let num = C64::from_polar(1.0, PI * kf * kf * qf / pf) * if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let den = c(0.0, 4.0) * (PI * kf * qf / pf).sin() * (PI * kf / pf).sin();
    Ok(num / den)
}

/// Digits a_i ≥ 2 of p/q = a₁ − 1/(a₂ − 1/(⋯ − 1/a_n)).
pub fn continued_fraction(p: i64, q: i64) -> Result<Vec<i64>> {
    check_lens(p, q)?;
    let (mut a, mut b) = (p, q);
    let mut out = Vec::new();
    while b != 0 {
        let d = (a + b - 1).div_euclid(b);
        out.push(d);
        let rem = d * b - a;
        a = b;
        b = rem;
    }
    Ok(out)
}

/// c_{n+1} = 0, c_n = 1, c_i = −a_{i+1} c_{i+1} − c_{i+2}; returns c_0 … c_n.
pub fn chain_coefficients(a: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut cs = vec![0i64; n + 2];
    cs[n] = 1;
    for i in (0..n).rev() {
        cs[i] = -a[i] * cs[i + 1] - cs[i + 2];
    }
    cs.truncate(n + 1);
    cs
}

/// Surgery on the chain link C(a₁,…,a_n) presenting L(p,q), with Kirby
/// degrees ω_i = (−1)^{n−1}(2k/p) c_i.
pub fn lens_chain_presentation(p: i64, q: i64, k: i64) -> Result<SurgeryPresentation> {
    let a = continued_fraction(p, q)?;
    if k.rem_euclid(p) == 0 {
        return Err(Error::InvalidLens(format!("k = {k} is divisible by p = {p}")));
    }
    let n = a.len();
    let cs = chain_coefficients(&a);
    let sign = if (n - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let links: Vec<(StrandColor, i64)> = (0..n)
        .map(|i| {
            let w = sign * 2.0 * k as f64 / p as f64 * cs[i + 1] as f64;
            (StrandColor::Kirby(re(w)), a[i])
        })
        .collect();
    Ok(SurgeryPresentation::new(library::chain_link(&links)))
}

/// The torsion relation τ = Z₂ · i^{1 + b₁ + 4ψ_σ(ω)}, with ψ_σ left symbolic.
pub fn torsion_relation_doc(value: Option<C64>, b1: i64) -> String {
    let Some(v) = value else {
        return "usage: torsion_relation_doc(Z₂ value, b₁) reports τ^φ(M,σ) = Z₂·i^{1+b₁}·i^{4ψ_σ(ω)}".into();
    };
    let base = v * c(0.0, 1.0).powi((1 + b1).rem_euclid(4) as i32);
    format!(
        "τ^φ(M,σ) = Z₂ · i^(1+b₁) · i^(4ψ_σ(ω)) = {} · i^(4ψ_σ(ω)) with b₁ = {b1}; ψ_σ is not computed",
        fmt_c(base)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(continued_fraction(3, 1).unwrap(), vec![3]);
        assert_eq!(continued_fraction(5, 2).unwrap(), vec![3, 2]);
        assert_eq!(continued_fraction(7, 2).unwrap(), vec![4, 2]);
        assert_eq!(continued_fraction(7, 3).unwrap(), vec![3, 2, 2]);
        assert!(continued_fraction(4, 2).is_err());
        let cs = chain_coefficients(&[3, 2]);
        assert_eq!(cs, vec![5, -2, 1]);
    }

    #[test]
    fn lens_values() {
        let rd = RootData::new(2).unwrap();
        let v = lens_z2(&rd, 3, 1, 1).unwrap();
        assert!((v - c(-0.28867513459481287, 0.16666666666666666)).norm() < 1e-7);
        assert!(lens_z2(&rd, 3, 1, 3).is_err());
        assert!(lens_z2(&RootData::new(3).unwrap(), 3, 1, 1).is_err());
    }

    #[test]
    fn verlinde_small() {
        for (r, want) in [(3usize, 3.0), (2, 1.0), (5, 5.0), (6, 3.0)] {
            let rd = RootData::new(r).unwrap();
            let v = verlinde_value(&rd, 1, c(0.37, 0.2), &[]).unwrap();
            assert!((v - re(want)).norm() < 1e-10);
        }
        assert_eq!(dim_limit(&RootData::new(3).unwrap(), 2).unwrap(), 27);
        assert_eq!(dim_limit(&RootData::new(2).unwrap(), 3).unwrap(), 16);
        let g = graded_dim_poly(&RootData::new(2).unwrap(), 2, &[]).unwrap();
        assert_eq!(g.signed, BTreeMap::from([(-1, -1), (0, 2), (1, -1)]));
        assert_eq!(g.unsigned, BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
    }
}
