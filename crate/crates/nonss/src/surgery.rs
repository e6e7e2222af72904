//! Z(M, T, ω) from surgery presentations: Z = η λ^m δ^{n−σ} F′(L ∪ T).

use crate::error::{Error, Result};
use crate::qcore::{fmt_c, re, RootData, C64};
use crate::repcat::{congruent_mod2, ColorLabel};
use crate::tangle::library::{self, Thread};
use crate::tangle::{self, Diagram, Orientation, StrandColor};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq)]
pub struct SurgeryPresentation {
    /// Surgery components carry `StrandColor::Kirby(g_ω(L_i))`, graph components carry colors.
    pub diagram: Diagram,
    pub signature_defect: i64,
    pub connected: bool,
}

impl SurgeryPresentation {
    pub fn new(diagram: Diagram) -> Self {
        SurgeryPresentation { diagram, signature_defect: 0, connected: true }
    }

    pub fn with_defect(mut self, n: i64) -> Self {
        self.signature_defect = n;
        self
    }

    /// Kirby degrees g_ω(L_i) of the surgery components, in component order.
    pub fn surgery_degrees(&self) -> Vec<(usize, C64)> {
        self.diagram
            .components
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c.color {
                StrandColor::Kirby(g) => Some((i, g)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentCheck {
    pub name: String,
    pub degree: C64,
    pub integral: bool,
    /// Σ_j lk_ij g_j + Σ_e lk_ie deg(e) ∈ 2ℤ
    pub compatible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub components: Vec<ComponentCheck>,
    pub projective_edge: bool,
    pub compatible: bool,
    pub computable: bool,
    pub admissible: bool,
    pub messages: Vec<String>,
}

pub fn check_admissible(rd: &RootData, sp: &SurgeryPresentation) -> Result<AdmissibilityReport> {
    let d = &sp.diagram;
    let used = d.used_components()?;
    let lk = tangle::linking_matrix_all(d)?;
    let mut messages = Vec::new();
    let mut graph_degree = vec![None; d.components.len()];
    let mut projective_edge = false;
    for (i, c) in d.components.iter().enumerate() {
        if let StrandColor::Color(l) = c.color {
            let l = l.canonical(rd)?;
            graph_degree[i] = Some(l.degree(rd));
            if used[i] && l.is_projective(rd) {
                projective_edge = true;
            }
        }
    }
    let mut comps = Vec::new();
    for (i, g) in sp.surgery_degrees() {
        let mut total = re(0.0);
        for (j, row) in lk[i].iter().enumerate() {
            if *row == 0 {
                continue;
            }
            let deg = match d.components[j].color {
                StrandColor::Kirby(gj) => gj,
                StrandColor::Color(_) => graph_degree[j].unwrap(),
            };
            total += deg * *row as f64;
        }
        let compatible = congruent_mod2(rd, total, re(0.0));
        let integral = rd.integral_part(g).is_some();
        let name = d.components[i].name.clone();
        if !compatible {
            messages.push(format!("{name}: framed longitude has ω = {} ∉ 2ℤ", fmt_c(total)));
        }
        if integral {
            messages.push(format!("{name}: degree {} is integral", fmt_c(g)));
        }
        comps.push(ComponentCheck { name, degree: g, integral, compatible });
    }
    let compatible = comps.iter().all(|c| c.compatible);
    let all_nonintegral = comps.iter().all(|c| !c.integral);
    let computable = if comps.is_empty() { projective_edge } else { all_nonintegral };
    if comps.is_empty() && !projective_edge {
        messages.push("empty surgery link and no projective edge".into());
    }
    let admissible = compatible && (projective_edge || (!comps.is_empty() && all_nonintegral));
    Ok(AdmissibilityReport { components: comps, projective_edge, compatible, computable, admissible, messages })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationTrace {
    pub m: usize,
    pub signature: tangle::Signature,
    pub n: i64,
    pub eta: C64,
    pub lambda: C64,
    pub delta: C64,
    pub fprime: C64,
    pub kirby_terms: usize,
    pub reduced_kirby: bool,
}

impl NormalizationTrace {
    /// η λ^m δ^{n−σ}
    pub fn factor(&self) -> C64 {
        self.eta * self.lambda.powi(self.m as i32) * self.delta.powi((self.n - self.signature.sigma()) as i32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantValue {
    pub value: C64,
    pub r: usize,
    pub trace: Vec<NormalizationTrace>,
    /// Name of the cut component and the color it carried.
    pub cut_edge: Option<(String, ColorLabel)>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub reduced_kirby: bool,
    /// When false, an incompatible ω only produces a warning and the surgery
    /// formula is evaluated as written.
    pub enforce_compatibility: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { reduced_kirby: false, enforce_compatibility: true }
    }
}

pub fn eval_z(rd: &RootData, sp: &SurgeryPresentation, reduced_kirby: bool) -> Result<InvariantValue> {
    eval_z_with(rd, sp, EvalOptions { reduced_kirby, ..Default::default() })
}

pub fn eval_z_with(rd: &RootData, sp: &SurgeryPresentation, opts: EvalOptions) -> Result<InvariantValue> {
    let reduced_kirby = opts.reduced_kirby;
    if !sp.connected {
        return Err(Error::NotComputable("presentation is marked disconnected; evaluate its parts with eval_z_disjoint".into()));
    }
    let rep = check_admissible(rd, sp)?;
    let mut warnings = Vec::new();
    if !rep.compatible {
        if opts.enforce_compatibility {
            return Err(Error::NotAdmissible(rep.messages.join("; ")));
        }
        warnings.push(format!("compatibility not enforced: {}", rep.messages.join("; ")));
    }
    if !rep.computable {
        return Err(Error::NotComputable(rep.messages.join("; ")));
    }
    let d = &sp.diagram;
    let lk = tangle::linking_matrix(d)?;
    let signature = tangle::signature(&lk)?;
    let terms = tangle::expand_kirby(rd, d, reduced_kirby)?;
    let vals: Vec<Result<tangle::FPrimeResult>> = terms.par_iter().map(|(_, dd)| tangle::evaluate_fprime(rd, dd)).collect();
    let mut fprime = re(0.0);
    let mut cut = None;
    for ((w, _), v) in terms.iter().zip(vals) {
        let v = v?;
        if cut.is_none() {
            cut = Some((d.components[v.cut_component].name.clone(), v.cut_color));
        }
        fprime += w * v.value;
    }
    let nc = rd.normalization_constants();
    let trace = NormalizationTrace {
        m: lk.len(),
        signature,
        n: sp.signature_defect,
        eta: nc.eta,
        lambda: nc.lambda,
        delta: nc.delta,
        fprime,
        kirby_terms: terms.len(),
        reduced_kirby,
    };
    let value = trace.factor() * fprime;
    if signature.nullity > 0 {
        warnings.push(format!("linking matrix is degenerate (nullity {})", signature.nullity));
    }
    if !value.is_finite() {
        return Err(Error::Numeric("non-finite invariant".into()));
    }
    Ok(InvariantValue { value, r: rd.r, trace: vec![trace], cut_edge: cut, warnings })
}

/// Z of a disjoint union: the product over the parts; the empty manifold gives 1.
pub fn eval_z_disjoint(rd: &RootData, parts: &[SurgeryPresentation], reduced_kirby: bool) -> Result<InvariantValue> {
    let mut out = InvariantValue { value: re(1.0), r: rd.r, trace: vec![], cut_edge: None, warnings: vec![] };
    for p in parts {
        let v = eval_z(rd, p, reduced_kirby)?;
        out.value *= v.value;
        out.trace.extend(v.trace);
        out.warnings.extend(v.warnings);
        if out.cut_edge.is_none() {
            out.cut_edge = v.cut_edge;
        }
    }
    Ok(out)
}

/// η F′(T) for a link in S³ with every component colored V_0, r odd.
pub fn kashaev_invariant(rd: &RootData, link: &Diagram) -> Result<C64> {
    if rd.is_even() {
        return Err(Error::EvenR);
    }
    for c in &link.components {
        match c.color {
            StrandColor::Color(l) if l.canonical(rd)? == ColorLabel::Valpha(re(0.0)) => {}
            _ => return Err(Error::NotAdmissible(format!("component {} is not colored V_0", c.name))),
        }
    }
    Ok(eval_z(rd, &SurgeryPresentation::new(link.clone()), false)?.value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KirbyReport {
    pub values: Vec<C64>,
    pub max_deviation: f64,
    pub pass: bool,
}

pub fn verify_kirby_invariance(rd: &RootData, presentations: &[SurgeryPresentation], reduced_kirby: bool) -> Result<KirbyReport> {
    let values: Vec<C64> = presentations
        .iter()
        .map(|p| eval_z(rd, p, reduced_kirby).map(|v| v.value))
        .collect::<Result<_>>()?;
    let mut max_deviation: f64 = 0.0;
    for a in &values {
        for b in &values {
            let scale = 1.0f64.max(a.norm()).max(b.norm());
            max_deviation = max_deviation.max((a - b).norm() / scale);
        }
    }
    Ok(KirbyReport { pass: max_deviation <= rd.tol, values, max_deviation })
}

/// Ready-made presentations.
pub mod presets {
    use super::*;

    fn v(alpha: C64) -> StrandColor {
        StrandColor::Color(ColorLabel::Valpha(alpha))
    }

    fn deg(rd: &RootData, alpha: C64) -> C64 {
        ColorLabel::Valpha(alpha).degree(rd)
    }

    /// S³ containing a V_α unknot with the given framing.
    pub fn s3_unknot(alpha: C64, framing: i64) -> SurgeryPresentation {
        SurgeryPresentation::new(library::unknot(v(alpha), framing))
    }

    /// S³ again, with a (+1)-framed Kirby unknot linking the V_α unknot once;
    /// blowing it down untwists T by one, so T carries framing `framing + 1`.
    pub fn s3_unknot_blown_up(rd: &RootData, alpha: C64, framing: i64) -> SurgeryPresentation {
        let g = -deg(rd, alpha);
        SurgeryPresentation::new(library::hopf_link(v(alpha), framing + 1, StrandColor::Kirby(g), 1))
    }

    /// S³ again, with two parallel meridians of T framed +1 and −1.
    pub fn s3_unknot_cancelling_pair(rd: &RootData, alpha: C64, framing: i64) -> SurgeryPresentation {
        let a = deg(rd, alpha);
        SurgeryPresentation::new(library::stacked_meridians(
            v(alpha),
            framing,
            &[(StrandColor::Kirby(-a), 1), (StrandColor::Kirby(a), -1)],
        ))
    }

    /// S²×S¹ as 0-surgery on an unknot of degree β, with T = {pt}×S¹ colored `t`.
    pub fn s2xs1_core(beta: C64, t: ColorLabel) -> SurgeryPresentation {
        SurgeryPresentation::new(library::hopf_link(StrandColor::Kirby(beta), 0, StrandColor::Color(t), 0))
    }

    /// Ŝ_k × S¹: parallel V_0, σ^k, V_0 circles through a 0-framed Kirby loop of degree β.
    pub fn shat_times_circle(k: i64, beta: C64) -> SurgeryPresentation {
        let v0 = StrandColor::Color(ColorLabel::Valpha(re(0.0)));
        let threads = [
            Thread { color: v0, framing: 0, orientation: Orientation::Down },
            Thread { color: StrandColor::Color(ColorLabel::SigmaPow(k)), framing: 0, orientation: Orientation::Down },
            Thread { color: v0, framing: 0, orientation: Orientation::Up },
        ];
        SurgeryPresentation::new(library::threads_through_loop(&threads, StrandColor::Kirby(beta), 0, true))
    }

    /// A V_α knot given as a braid closure, with an optional `a`-framed Kirby
    /// meridian around its first strand (degree fixed by compatibility).
    pub fn braid_knot_with_meridian(rd: &RootData, alpha: C64, n: usize, word: &[i32], meridian_framing: Option<i64>) -> Result<SurgeryPresentation> {
        let mut meridians = vec![];
        if let Some(a) = meridian_framing {
            if a == 0 {
                return Err(Error::NotAdmissible("a 0-framed meridian forces an integral degree here".into()));
            }
            meridians.push((0, StrandColor::Kirby(-deg(rd, alpha) / a as f64), a));
        }
        Ok(SurgeryPresentation::new(library::braid_closure(n, word, &[v(alpha)], &meridians)))
    }

    /// `base` with a σ^n-colored loop around its first strand (a braid-closure knot).
    pub fn with_sigma_loop(alpha: C64, n: usize, word: &[i32], kirby: Option<(C64, i64)>, sigma_power: i64) -> SurgeryPresentation {
        let mut meridians = vec![];
        if let Some((g, a)) = kirby {
            meridians.push((0, StrandColor::Kirby(g), a));
        }
        meridians.push((0, StrandColor::Color(ColorLabel::SigmaPow(sigma_power)), 0));
        SurgeryPresentation::new(library::braid_closure(n, word, &[v(alpha)], &meridians))
    }
}

#[cfg(test)]
mod tests {
    use super::presets::*;
    use super::*;
    use crate::qcore::c;

    #[test]
    fn admissibility_reports() {
        let rd = RootData::new(3).unwrap();
        let rep = check_admissible(&rd, &s3_unknot(re(0.3), 0)).unwrap();
        assert!(rep.admissible && rep.computable);
        let bad = SurgeryPresentation::new(library::unknot(StrandColor::Kirby(re(1.0)), 0));
        let rep = check_admissible(&rd, &bad).unwrap();
        assert!(!rep.computable);
        let ok = SurgeryPresentation::new(library::unknot(StrandColor::Kirby(re(0.37)), 0));
        assert!(check_admissible(&rd, &ok).unwrap().computable);
    }

    #[test]
    fn s3_unknot_value() {
        let rd = RootData::new(2).unwrap();
        let z = eval_z(&rd, &s3_unknot(re(0.5), 0), false).unwrap();
        assert!((z.value - re(-0.5f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn anomaly_and_disjoint() {
        let rd = RootData::new(3).unwrap();
        let a = c(0.3, 0.1);
        let p = s3_unknot_blown_up(&rd, a, 0);
        let z0 = eval_z(&rd, &p, false).unwrap().value;
        let z1 = eval_z(&rd, &p.clone().with_defect(1), false).unwrap().value;
        assert!(rd.close(z1, z0 * rd.normalization_constants().delta));
        let u = s3_unknot(a, 0);
        let zu = eval_z(&rd, &u, false).unwrap().value;
        let two = eval_z_disjoint(&rd, &[u.clone(), u], false).unwrap().value;
        assert!(rd.close(two, zu * zu));
        assert_eq!(eval_z_disjoint(&rd, &[], false).unwrap().value, re(1.0));
    }

    #[test]
    fn kashaev_examples() {
        let rd = RootData::new(3).unwrap();
        let eta = rd.normalization_constants().eta;
        let v0 = StrandColor::Color(ColorLabel::Valpha(re(0.0)));
        assert!(rd.close(kashaev_invariant(&rd, &library::unknot(v0, 0)).unwrap(), eta));
        let unlink = library::disjoint_union(&library::unknot(v0, 0), &library::unknot(v0, 0));
        assert!(kashaev_invariant(&rd, &unlink).unwrap().norm() < 1e-12);
        let curl = kashaev_invariant(&rd, &library::unknot(v0, 1)).unwrap();
        assert!(rd.close(curl, eta * rd.qpow_re(-2.0)));
        assert_eq!(kashaev_invariant(&RootData::new(2).unwrap(), &library::unknot(v0, 0)), Err(Error::EvenR));
    }
}
