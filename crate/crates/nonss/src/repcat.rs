//! Weight-basis realizations of the modules of 𝒞 over Ū_q^H sl(2) and the
//! closed-form data attached to them (modified traces, twists, Hopf coefficients).
//!
//! Hopf-algebra conventions: Δ(E) = 1⊗E + E⊗K, Δ(F) = K⁻¹⊗F + F⊗1,
//! S(E) = −EK⁻¹, S(F) = −KF, pivotal element g = K^{1−r}.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qcore::{fmt_c, re, RootData, C64};
use nalgebra::DVector;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ColorLabel {
    Valpha(C64),
    Si(usize),
    /// ℂ^H_{kr}
    CH(i64),
    /// σ^n = ℂ^H_{2nr′}
    SigmaPow(i64),
    Pj(usize),
    Trivial,
}

impl fmt::Display for ColorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorLabel::Valpha(a) => write!(f, "V({})", fmt_c(*a)),
            ColorLabel::Si(i) => write!(f, "S{i}"),
            ColorLabel::CH(k) => write!(f, "CH({k})"),
            ColorLabel::SigmaPow(n) => write!(f, "sigma^{n}"),
            ColorLabel::Pj(j) => write!(f, "P{j}"),
            ColorLabel::Trivial => write!(f, "1"),
        }
    }
}

impl ColorLabel {
    /// Checks ranges and folds the coincidences P_{r−1} = S_{r−1} = V_0.
    pub fn canonical(&self, rd: &RootData) -> Result<ColorLabel> {
        let r = rd.r;
        match *self {
            ColorLabel::Valpha(a) => {
                if !rd.is_admissible_color(a) {
                    return Err(Error::NotAdmissibleColor(fmt_c(a)));
                }
                match rd.integral_part(a) {
                    Some(n) => Ok(ColorLabel::Valpha(re(n as f64))),
                    None => Ok(*self),
                }
            }
            ColorLabel::Si(i) if i + 1 == r => Ok(ColorLabel::Valpha(re(0.0))),
            ColorLabel::Si(i) if i < r => Ok(*self),
            ColorLabel::Pj(j) if j + 1 == r => Ok(ColorLabel::Valpha(re(0.0))),
            ColorLabel::Pj(j) if j + 2 <= r => Ok(*self),
            ColorLabel::Si(_) | ColorLabel::Pj(_) => {
                Err(Error::InvalidLabel(format!("{self} out of range for r = {r}")))
            }
            _ => Ok(*self),
        }
    }

    /// Degree in ℂ/2ℤ, returned as a representative.
    pub fn degree(&self, rd: &RootData) -> C64 {
        let r = rd.r as f64;
        match *self {
            ColorLabel::Valpha(a) => a + r - 1.0,
            ColorLabel::Si(i) => re(i as f64),
            ColorLabel::CH(k) => re(k as f64 * r),
            ColorLabel::SigmaPow(n) => re(2.0 * n as f64 * rd.r_prime as f64),
            ColorLabel::Pj(j) => re(j as f64),
            ColorLabel::Trivial => re(0.0),
        }
    }

    pub fn is_projective(&self, rd: &RootData) -> bool {
        match self.canonical(rd) {
            Ok(ColorLabel::Valpha(_)) | Ok(ColorLabel::Pj(_)) => true,
            _ => false,
        }
    }
}

/// True when a − b ∈ 2ℤ up to the integrality guard.
pub fn congruent_mod2(rd: &RootData, a: C64, b: C64) -> bool {
    match rd.integral_part(a - b) {
        Some(n) => n.rem_euclid(2) == 0,
        None => false,
    }
}

#[derive(Clone, Debug)]
pub struct ModuleRealization {
    pub label: Option<ColorLabel>,
    pub dim: usize,
    pub weights: Vec<C64>,
    pub e: CMat,
    pub f: CMat,
}

impl ModuleRealization {
    pub fn k_diag(&self, rd: &RootData, power: f64) -> Vec<C64> {
        self.weights.iter().map(|w| rd.qpow(w * power)).collect()
    }

    pub fn k_matrix(&self, rd: &RootData) -> CMat {
        linalg::diag(&self.k_diag(rd, 1.0))
    }

    pub fn h_matrix(&self) -> CMat {
        linalg::diag(&self.weights)
    }

    /// Eigenvalues of the pivotal element K^{1−r}.
    pub fn pivot_diag(&self, rd: &RootData) -> Vec<C64> {
        self.k_diag(rd, 1.0 - rd.rf())
    }

    /// Dual module with action ρ*(a) = ρ(S(a))ᵀ in the dual basis.
    pub fn dual(&self, rd: &RootData) -> ModuleRealization {
        let k = self.k_matrix(rd);
        let kinv = linalg::diag(&self.k_diag(rd, -1.0));
        let e = -(&self.e * &kinv).transpose();
        let f = -(&k * &self.f).transpose();
        ModuleRealization {
            label: None,
            dim: self.dim,
            weights: self.weights.iter().map(|w| -w).collect(),
            e,
            f,
        }
    }

    /// X ⊗ Y with the coproduct action.
    pub fn tensor(&self, rd: &RootData, other: &ModuleRealization) -> ModuleRealization {
        let i1 = linalg::eye(self.dim);
        let i2 = linalg::eye(other.dim);
        let e = linalg::kron(&i1, &other.e) + linalg::kron(&self.e, &other.k_matrix(rd));
        let f = linalg::kron(&linalg::diag(&self.k_diag(rd, -1.0)), &other.f) + linalg::kron(&self.f, &i2);
        let mut weights = Vec::with_capacity(self.dim * other.dim);
        for a in &self.weights {
            for b in &other.weights {
                weights.push(a + b);
            }
        }
        ModuleRealization { label: None, dim: self.dim * other.dim, weights, e, f }
    }

    /// Casimir FE + (qK + q⁻¹K⁻¹)/{1}².
    pub fn casimir(&self, rd: &RootData) -> CMat {
        let b1 = rd.qbracket_re(1.0);
        let mut c = &self.f * &self.e;
        for i in 0..self.dim {
            let w = self.weights[i];
            c[(i, i)] += (rd.qpow(w + 1.0) + rd.qpow(-w - 1.0)) / (b1 * b1);
        }
        c
    }

    /// Largest violation among K = q^H, KEK⁻¹ = q²E, KFK⁻¹ = q⁻²F,
    /// [E,F] = (K−K⁻¹)/(q−q⁻¹), E^r = F^r = 0. Each term is relative to the
    /// size of the operators involved.
    pub fn relation_residual(&self, rd: &RootData) -> f64 {
        let k = self.k_matrix(rd);
        let kinv = linalg::diag(&self.k_diag(rd, -1.0));
        let q2 = rd.qpow_re(2.0);
        let scale_e = linalg::max_abs(&self.e).max(1.0);
        let scale_f = linalg::max_abs(&self.f).max(1.0);
        let mut worst: f64 = 0.0;
        let r1 = &k * &self.e * &kinv - &self.e * q2;
        worst = worst.max(linalg::max_abs(&r1) / scale_e);
        let r2 = &k * &self.f * &kinv - &self.f / q2;
        worst = worst.max(linalg::max_abs(&r2) / scale_f);
        let comm = &self.e * &self.f - &self.f * &self.e;
        let want = (&k - &kinv) / rd.qbracket_re(1.0);
        worst = worst.max(linalg::max_abs(&(comm - want)) / (scale_e * scale_f));
        let er = linalg::matpow(&self.e, rd.r);
        let fr = linalg::matpow(&self.f, rd.r);
        worst = worst.max(linalg::max_abs(&er) / scale_e.powi(rd.r as i32));
        worst = worst.max(linalg::max_abs(&fr) / scale_f.powi(rd.r as i32));
        // weight-module condition: K is diagonal in the weight basis by construction,
        // so check that E and F shift weights by ±2
        for i in 0..self.dim {
            for j in 0..self.dim {
                let shift_e = self.weights[i] - self.weights[j] - 2.0;
                if self.e[(i, j)].norm() > 1e-14 * scale_e && shift_e.norm() > 1e-9 {
                    worst = worst.max(1.0);
                }
                let shift_f = self.weights[i] - self.weights[j] + 2.0;
                if self.f[(i, j)].norm() > 1e-14 * scale_f && shift_f.norm() > 1e-9 {
                    worst = worst.max(1.0);
                }
            }
        }
        worst
    }

    /// Highest and lowest weight by real part (weights of one module differ by even integers).
    pub fn weight_range(&self) -> (C64, C64) {
        let mut hi = self.weights[0];
        let mut lo = self.weights[0];
        for w in &self.weights {
            if w.re > hi.re {
                hi = *w;
            }
            if w.re < lo.re {
                lo = *w;
            }
        }
        (hi, lo)
    }

    /// Max violation of f ∘ ρ_src(a) = ρ_tgt(a) ∘ f for a ∈ {E, F, H}.
    pub fn intertwining_residual(src: &ModuleRealization, tgt: &ModuleRealization, f: &CMat) -> f64 {
        let scale = linalg::max_abs(f).max(1.0);
        let re_ = &tgt.e * f - f * &src.e;
        let rf_ = &tgt.f * f - f * &src.f;
        let rh = tgt.h_matrix() * f - f * src.h_matrix();
        linalg::max_abs(&re_).max(linalg::max_abs(&rf_)).max(linalg::max_abs(&rh)) / scale
    }
}

fn highest_weight_module(rd: &RootData, lam: C64, dim: usize) -> (Vec<C64>, CMat, CMat) {
    let weights: Vec<C64> = (0..dim).map(|i| lam - 2.0 * i as f64).collect();
    let mut e = linalg::zeros(dim, dim);
    let mut f = linalg::zeros(dim, dim);
    for i in 0..dim.saturating_sub(1) {
        f[(i + 1, i)] = re(1.0);
    }
    for i in 1..dim {
        e[(i - 1, i)] = rd.qint(re(i as f64)) * rd.qint(lam - i as f64 + 1.0);
    }
    (weights, e, f)
}

fn one_dim(weight: f64) -> (Vec<C64>, CMat, CMat) {
    (vec![re(weight)], linalg::zeros(1, 1), linalg::zeros(1, 1))
}

fn p_cache() -> &'static Mutex<HashMap<(usize, usize), Arc<ModuleRealization>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<ModuleRealization>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn realize(rd: &RootData, label: ColorLabel) -> Result<Arc<ModuleRealization>> {
    let label = label.canonical(rd)?;
    let r = rd.r;
    let (weights, e, f) = match label {
        ColorLabel::Valpha(a) => highest_weight_module(rd, a + (r as f64 - 1.0), r),
        ColorLabel::Si(i) => highest_weight_module(rd, re(i as f64), i + 1),
        ColorLabel::CH(k) => one_dim(k as f64 * r as f64),
        ColorLabel::SigmaPow(n) => one_dim(2.0 * n as f64 * rd.r_prime as f64),
        ColorLabel::Trivial => one_dim(0.0),
        ColorLabel::Pj(j) => {
            if let Some(m) = p_cache().lock().unwrap().get(&(r, j)) {
                return Ok(m.clone());
            }
            let m = Arc::new(if r == 2 { p0_r2() } else { extract_p(rd, j)? });
            p_cache().lock().unwrap().insert((r, j), m.clone());
            return Ok(m);
        }
    };
    Ok(Arc::new(ModuleRealization { label: Some(label), dim: weights.len(), weights, e, f }))
}

/// Basis v_0^L, v_2^U, v_0^R, v_{−2}^D of P_0 at r = 2.
fn p0_r2() -> ModuleRealization {
    let mut e = linalg::zeros(4, 4);
    let mut f = linalg::zeros(4, 4);
    e[(1, 0)] = re(1.0); // E v0L = v2U
    e[(2, 3)] = re(1.0); // E v-2D = v0R
    f[(3, 0)] = re(1.0); // F v0L = v-2D
    f[(2, 1)] = re(1.0); // F v2U = v0R
    ModuleRealization {
        label: Some(ColorLabel::Pj(0)),
        dim: 4,
        weights: vec![re(0.0), re(2.0), re(0.0), re(-2.0)],
        e,
        f,
    }
}

/// P_j as the summand of V_0 ⊗ S_{r−1−j} on which the Casimir has central
/// character (q^{j+1}+q^{−j−1})/{1}². The other summands are P_i for
/// i ≡ j mod 2, i > j (with P_{r−1} = V_0), all with distinct central characters;
/// their generalized eigenspaces are killed by Π (C − c_i)², and g(2−g)
/// removes the nilpotent part on P_j.
fn extract_p(rd: &RootData, j: usize) -> Result<ModuleRealization> {
    let r = rd.r;
    let m = r - 1 - j;
    let v0 = realize(rd, ColorLabel::Valpha(re(0.0)))?;
    let (sw, se, sf) = highest_weight_module(rd, re(m as f64), m + 1);
    let s = ModuleRealization { label: None, dim: m + 1, weights: sw, e: se, f: sf };
    let w = v0.tensor(rd, &s);
    let cas = w.casimir(rd);
    let b1 = rd.qbracket_re(1.0);
    let chi = |i: usize| (rd.qpow_re(i as f64 + 1.0) + rd.qpow_re(-(i as f64) - 1.0)) / (b1 * b1);
    let n = w.dim;
    let id = linalg::eye(n);
    let mut poly = id.clone();
    let mut at_cj = re(1.0);
    for i in 0..r {
        if i == j {
            continue;
        }
        let shifted = &cas - &id * chi(i);
        poly = &poly * &shifted * &shifted;
        at_cj *= (chi(j) - chi(i)) * (chi(j) - chi(i));
    }
    let g = poly / at_cj;
    let idem = &g * (&id * re(2.0) - &g);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w.weights[b].re.partial_cmp(&w.weights[a].re).unwrap());
    let mut groups: Vec<(i64, Vec<usize>)> = Vec::new();
    for idx in order {
        let key = w.weights[idx].re.round() as i64;
        match groups.last_mut() {
            Some((k, v)) if *k == key => v.push(idx),
            _ => groups.push((key, vec![idx])),
        }
    }
    let mut basis: Vec<DVector<C64>> = Vec::new();
    let mut weights = Vec::new();
    for (key, idxs) in groups {
        let imgs: Vec<DVector<C64>> = idxs.iter().map(|&i| idem.column(i).into_owned()).collect();
        for v in linalg::orthonormalize(&imgs, 1e-8) {
            basis.push(v);
            weights.push(re(key as f64));
        }
    }
    if basis.len() != 2 * r {
        return Err(Error::RealizationFailed(format!(
            "P_{j}: summand has dimension {} instead of {}",
            basis.len(),
            2 * r
        )));
    }
    let bmat = CMat::from_columns(&basis);
    let badj = bmat.adjoint();
    let e = &badj * &w.e * &bmat;
    let f = &badj * &w.f * &bmat;
    let inv = linalg::max_abs(&(&w.e * &bmat - &bmat * &e)).max(linalg::max_abs(&(&w.f * &bmat - &bmat * &f)));
    if inv > 1e-9 * linalg::max_abs(&w.e).max(1.0) {
        return Err(Error::RealizationFailed(format!("P_{j}: extracted subspace not invariant ({inv:e})")));
    }
    Ok(ModuleRealization { label: Some(ColorLabel::Pj(j)), dim: 2 * r, weights, e, f })
}

/// The four duality morphisms, as matrices in the product bases:
/// ev: V*⊗V → 1, coev: 1 → V⊗V*, ẽv: V⊗V* → 1, c̃oev: 1 → V*⊗V.
#[derive(Clone, Debug)]
pub struct DualData {
    pub ev: CMat,
    pub coev: CMat,
    pub ev_tilde: CMat,
    pub coev_tilde: CMat,
}

pub fn dual_data(rd: &RootData, m: &ModuleRealization) -> DualData {
    let d = m.dim;
    let g = m.pivot_diag(rd);
    let mut ev = linalg::zeros(1, d * d);
    let mut coev = linalg::zeros(d * d, 1);
    let mut ev_t = linalg::zeros(1, d * d);
    let mut coev_t = linalg::zeros(d * d, 1);
    for i in 0..d {
        ev[(0, i * d + i)] = re(1.0);
        coev[(i * d + i, 0)] = re(1.0);
        ev_t[(0, i * d + i)] = g[i];
        coev_t[(i * d + i, 0)] = re(1.0) / g[i];
    }
    DualData { ev, coev, ev_tilde: ev_t, coev_tilde: coev_t }
}

/// Basis of Hom_𝒞(src, tgt): weight-preserving matrices commuting with E and F.
pub fn intertwiners(rd: &RootData, src: &ModuleRealization, tgt: &ModuleRealization) -> Vec<CMat> {
    let mut slots = Vec::new();
    for a in 0..tgt.dim {
        for b in 0..src.dim {
            if (tgt.weights[a] - src.weights[b]).norm() < rd.int_guard {
                slots.push((a, b));
            }
        }
    }
    if slots.is_empty() {
        return Vec::new();
    }
    let rows = 2 * tgt.dim * src.dim;
    let mut sys = linalg::zeros(rows, slots.len());
    for (col, &(a, b)) in slots.iter().enumerate() {
        // unit matrix U_ab; constraint  X U − U Y  for (X,Y) = (tgt.E, src.E) and (tgt.F, src.F)
        for (blk, (x, y)) in [(&tgt.e, &src.e), (&tgt.f, &src.f)].into_iter().enumerate() {
            let off = blk * tgt.dim * src.dim;
            for i in 0..tgt.dim {
                sys[(off + i * src.dim + b, col)] += x[(i, a)];
            }
            for l in 0..src.dim {
                sys[(off + a * src.dim + l, col)] -= y[(b, l)];
            }
        }
    }
    linalg::nullspace(&sys, 1e-10)
        .into_iter()
        .map(|v| {
            let mut m = linalg::zeros(tgt.dim, src.dim);
            for (col, &(a, b)) in slots.iter().enumerate() {
                m[(a, b)] = v[col];
            }
            m
        })
        .collect()
}

/// Realization of a word of (label, ±1); −1 means the dual module.
pub fn realize_word(rd: &RootData, word: &[(ColorLabel, i8)]) -> Result<ModuleRealization> {
    let mut acc = ModuleRealization {
        label: Some(ColorLabel::Trivial),
        dim: 1,
        weights: vec![re(0.0)],
        e: linalg::zeros(1, 1),
        f: linalg::zeros(1, 1),
    };
    for (lab, s) in word {
        let m = realize(rd, *lab)?;
        let m = if *s < 0 { m.dual(rd) } else { (*m).clone() };
        acc = acc.tensor(rd, &m);
    }
    Ok(acc)
}

/// dim Hom(𝕀, word) computed directly as the space of invariant vectors.
pub fn hom_dimension_numeric(rd: &RootData, word: &[(ColorLabel, i8)]) -> Result<usize> {
    let w = realize_word(rd, word)?;
    let unit = realize(rd, ColorLabel::Trivial)?;
    Ok(intertwiners(rd, &unit, &w).len())
}

/// dim Hom(𝕀, word) for the three sphere cases with closed-form answers.
pub fn hom_dimension(rd: &RootData, word: &[(ColorLabel, i8)]) -> Result<usize> {
    let unsupported = || Error::UnsupportedWord(word.iter().map(|(l, s)| format!("{l}{}", if *s < 0 { "*" } else { "" })).collect::<Vec<_>>().join(","));
    let canon: Vec<(ColorLabel, i8)> = word
        .iter()
        .map(|(l, s)| l.canonical(rd).map(|c| (c, *s)))
        .collect::<Result<_>>()?;
    let signed_alpha = |l: &ColorLabel, s: i8| match l {
        ColorLabel::Valpha(a) => Some(if s < 0 { -a } else { *a }),
        _ => None,
    };
    let signed_sigma = |l: &ColorLabel, s: i8| match l {
        ColorLabel::SigmaPow(n) => Some(if s < 0 { -n } else { *n }),
        ColorLabel::Trivial => Some(0),
        _ => None,
    };
    match canon.as_slice() {
        [(a, sa), (b, sb), (c, sc), (sg, ss)] => {
            let (a, b, c) = (
                signed_alpha(a, *sa).ok_or_else(unsupported)?,
                signed_alpha(b, *sb).ok_or_else(unsupported)?,
                signed_alpha(c, *sc).ok_or_else(unsupported)?,
            );
            let n = signed_sigma(sg, *ss).ok_or_else(unsupported)?;
            let total = a + b + c + re(2.0 * (n * rd.r_prime as i64) as f64);
            Ok(match rd.integral_part(total) {
                Some(t) if rd.h_r().contains(&t) => 1,
                _ => 0,
            })
        }
        [(x, sx), (ColorLabel::Si(i), _), (sg, ss)] => {
            let n = signed_sigma(sg, *ss).ok_or_else(unsupported)?;
            match x {
                ColorLabel::Valpha(a) if rd.integral_part(*a) == Some(0) => Ok(0),
                ColorLabel::Pj(j) if *sx != 0 => Ok(((i == j) && n == 0) as usize),
                _ => Err(unsupported()),
            }
        }
        _ => Err(unsupported()),
    }
}

#[derive(Clone, Debug)]
pub enum TwistValue {
    Scalar(C64),
    Matrix(CMat),
}

pub fn twist_scalar(rd: &RootData, label: ColorLabel) -> Result<TwistValue> {
    match label.canonical(rd)? {
        ColorLabel::Valpha(mu) => {
            let r1 = rd.rf() - 1.0;
            Ok(TwistValue::Scalar(rd.qpow((mu * mu - r1 * r1) / 2.0)))
        }
        ColorLabel::Pj(j) => {
            let (a, b) = twist_coefficients_p(rd, j);
            let x = nilpotent_x(rd, j)?;
            let n = x.nrows();
            Ok(TwistValue::Matrix(linalg::eye(n) * a + x * b))
        }
        other => Err(Error::InvalidLabel(format!("no closed-form twist for {other}"))),
    }
}

/// θ_{P_j} = a·Id + b·x_j with a = (−1)^j q^{(j²+2j)/2}, b = −a(r−j−1){j+1}.
pub fn twist_coefficients_p(rd: &RootData, j: usize) -> (C64, C64) {
    let jf = j as f64;
    let a = rd.qpow_re((jf * jf + 2.0 * jf) / 2.0) * rd.sign(j as i64);
    let b = -a * (rd.rf() - jf - 1.0) * rd.qbracket_re(jf + 1.0);
    (a, b)
}

/// Modified trace values t(Id_{P_j}) and t(x_j).
pub fn trace_values_p(rd: &RootData, j: usize) -> (C64, C64) {
    let jf = j as f64 + 1.0;
    let s = rd.sign(j as i64 + 1);
    ((rd.qpow_re(jf) + rd.qpow_re(-jf)) * s, re(s))
}

/// Write f = a·Id + b·x_j.
pub fn decompose_p(rd: &RootData, j: usize, f: &CMat) -> Result<(C64, C64)> {
    let x = nilpotent_x(rd, j)?;
    let id = linalg::eye(x.nrows());
    let (coef, res) = linalg::decompose(f, &[&id, &x]);
    if res > rd.tol.max(1e-9) {
        return Err(Error::DecompositionFailed(res));
    }
    Ok((coef[0], coef[1]))
}

/// Scalar s with f = s·Id, checked relative to the size of f.
pub fn scalar_part(rd: &RootData, f: &CMat) -> Result<C64> {
    let n = f.nrows();
    let s = (0..n).map(|i| f[(i, i)]).sum::<C64>() / n as f64;
    let dev = linalg::max_abs(&(f - linalg::eye(n) * s)) / linalg::max_abs(f).max(1.0);
    if dev > rd.tol {
        return Err(Error::NotProportional(dev));
    }
    Ok(s)
}

pub fn modified_trace(rd: &RootData, label: ColorLabel, f: &CMat) -> Result<C64> {
    match label.canonical(rd)? {
        ColorLabel::Valpha(a) => Ok(rd.modified_dim(a)? * scalar_part(rd, f)?),
        ColorLabel::Pj(j) => {
            let (a, b) = decompose_p(rd, j, f)?;
            let (ti, tx) = trace_values_p(rd, j);
            Ok(a * ti + b * tx)
        }
        other => Err(Error::InvalidLabel(format!("{other} is not projective"))),
    }
}

fn x_cache() -> &'static Mutex<HashMap<(usize, usize), CMat>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), CMat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// x_j := Φ_{V_0,P_j} / ((−1)^{r+j}·2r), with Φ evaluated by the tangle engine.
pub fn nilpotent_x(rd: &RootData, j: usize) -> Result<CMat> {
    if j + 2 > rd.r {
        return Err(Error::InvalidLabel(format!("x_{j} needs j ≤ r−2")));
    }
    if let Some(x) = x_cache().lock().unwrap().get(&(rd.r, j)) {
        return Ok(x.clone());
    }
    let phi = hopf_engine(rd, ColorLabel::Valpha(re(0.0)), ColorLabel::Pj(j))?;
    let x = phi / re(rd.sign((rd.r + j) as i64) * 2.0 * rd.rf());
    x_cache().lock().unwrap().insert((rd.r, j), x.clone());
    Ok(x)
}

/// Φ_{V,W} from the open Hopf diagram: a loop colored `circling` around an
/// upward `strand`, linking number +1.
pub fn hopf_engine(rd: &RootData, circling: ColorLabel, strand: ColorLabel) -> Result<CMat> {
    let d = crate::tangle::library::open_hopf(circling, strand);
    crate::tangle::evaluate_f(rd, &d)
}

/// Closed forms for Φ_{V,W} where one is known.
pub fn hopf_closed_form(rd: &RootData, circling: ColorLabel, strand: ColorLabel) -> Result<Option<CMat>> {
    let v = circling.canonical(rd)?;
    let w = strand.canonical(rd)?;
    let r = rd.rf();
    let sr1 = rd.sign(rd.r as i64 - 1);
    let dim = realize(rd, w)?.dim;
    let id = linalg::eye(dim);
    let out = match (v, w) {
        (ColorLabel::Trivial, _) => Some(id),
        (ColorLabel::SigmaPow(n), w) => {
            let deg = w.degree(rd);
            let s = rd.qpow(deg * (2.0 * (n * rd.r_prime as i64) as f64)) * rd.sign(n * (rd.r as i64 - 1));
            Some(id * s)
        }
        (ColorLabel::Valpha(b), ColorLabel::Valpha(a)) => Some(id * (rd.qpow(a * b) * sr1 * r / rd.modified_dim(a)?)),
        (ColorLabel::Si(i), ColorLabel::Si(j)) => {
            let (i, j) = (i as f64, j as f64);
            Some(id * (rd.qbracket_re((i + 1.0) * (j + 1.0)) / rd.qbracket_re(j + 1.0) * rd.sign(i as i64)))
        }
        (ColorLabel::Si(i), ColorLabel::Valpha(a)) => {
            Some(id * (rd.qbracket(a * (i as f64 + 1.0)) / rd.qbracket(a)))
        }
        (ColorLabel::Pj(i), ColorLabel::Valpha(a)) => {
            let m = r - 1.0 - i as f64;
            Some(id * ((rd.qpow(a * m) + rd.qpow(-a * m)) * sr1 * r / rd.modified_dim(a)?))
        }
        (ColorLabel::Si(i), ColorLabel::Pj(j)) => {
            let x = nilpotent_x(rd, j)?;
            let (fi, fj) = (i as f64, j as f64 + 1.0);
            let s = rd.sign(i as i64);
            let bj = rd.qbracket_re(fj);
            let a = rd.qbracket_re((fi + 1.0) * fj) / bj * s;
            let b = (rd.qbracket_re((fi + 2.0) * fj) * fi - rd.qbracket_re(fi * fj) * (fi + 2.0)) / bj * s;
            Some(id * a + x * b)
        }
        (ColorLabel::Valpha(a), ColorLabel::Pj(j)) if rd.integral_part(a) == Some(0) => {
            let x = nilpotent_x(rd, j)?;
            Some(x * re(rd.sign((rd.r + j) as i64) * 2.0 * r))
        }
        (ColorLabel::Pj(i), ColorLabel::Pj(j)) => {
            let x = nilpotent_x(rd, j)?;
            let e = ((i + 1) * (j + 1)) as f64;
            Some(x * ((rd.qpow_re(e) + rd.qpow_re(-e)) * rd.sign(i as i64) * 2.0 * r))
        }
        _ => None,
    };
    Ok(out)
}

pub fn hopf_coefficient(rd: &RootData, circling: ColorLabel, strand: ColorLabel) -> Result<CMat> {
    match hopf_closed_form(rd, circling, strand)? {
        Some(m) => Ok(m),
        None => hopf_engine(rd, circling, strand),
    }
}

/// A Kirby-colored loop of degree β around V_{α+2k} ⊗ V_α*: zero unless
/// k = r′n, and then r³ q^{2r′nβ} d(α)⁻¹ times id_{σⁿ} ⊗ (coev ∘ ẽv), read
/// through V_{α+2r′n} ≅ σⁿ ⊗ V_α, v_i ↦ q^{−2r′n i} s ⊗ v_i.
pub fn encircling_closed_form(rd: &RootData, alpha: C64, k: i64, beta: C64) -> Result<CMat> {
    let r = rd.r;
    let rp = rd.r_prime as i64;
    if k.rem_euclid(rp) != 0 {
        return Ok(linalg::zeros(r * r, r * r));
    }
    let n = (k / rp) as f64;
    let g = realize(rd, ColorLabel::Valpha(alpha))?.pivot_diag(rd);
    let phase = |i: usize| rd.qpow_re(-2.0 * rp as f64 * n * i as f64);
    let scale = rd.qpow(beta * (2.0 * rp as f64 * n)) * (r * r * r) as f64 / rd.modified_dim(alpha)?;
    let mut e = linalg::zeros(r * r, r * r);
    for a in 0..r {
        for c in 0..r {
            e[(a * r + a, c * r + c)] = g[c] * phase(c) / phase(a) * scale;
        }
    }
    Ok(e)
}
