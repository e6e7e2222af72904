use super::{Diagram, Event, Orientation, StrandColor, StrandRef};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qcore::{re, RootData, C64};
use crate::repcat::{self, ColorLabel, ModuleRealization};
use std::collections::HashMap;
use std::sync::Arc;

/// A strand object: the module (or its dual) seen by the state vector.
struct Obj {
    m: ModuleRealization,
    label: ColorLabel,
    piv: Vec<C64>,
    base_piv: Vec<C64>,
    epow: Vec<CMat>,
    fpow: Vec<CMat>,
}

/// Sparse linear map between tensor words of strand objects.
struct LocalOp {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    in_dim: usize,
    out_dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl LocalOp {
    fn from_dense(m: &CMat, in_dims: Vec<usize>, out_dims: Vec<usize>, drop: f64) -> Self {
        let mut entries = Vec::new();
        for o in 0..m.nrows() {
            for i in 0..m.ncols() {
                let v = m[(o, i)];
                if v.norm() > drop {
                    entries.push((o, i, v));
                }
            }
        }
        LocalOp { in_dim: in_dims.iter().product(), out_dim: out_dims.iter().product(), in_dims, out_dims, entries }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum OpKey {
    Cross(StrandRef, StrandRef, bool),
    Cup(usize, Orientation),
    Cap(StrandRef, StrandRef),
}

struct State {
    lead: usize,
    dims: Vec<usize>,
    data: Vec<C64>,
}

impl State {
    fn apply(&mut self, pos: usize, op: &LocalOp, forward: bool) {
        let (from_dims, to_dims, from_dim, to_dim) = if forward {
            (&op.in_dims, &op.out_dims, op.in_dim, op.out_dim)
        } else {
            (&op.out_dims, &op.in_dims, op.out_dim, op.in_dim)
        };
        debug_assert_eq!(&self.dims[pos..pos + from_dims.len()], from_dims.as_slice());
        let left: usize = self.lead * self.dims[..pos].iter().product::<usize>();
        let right: usize = self.dims[pos + from_dims.len()..].iter().product();
        let mut out = vec![C64::new(0.0, 0.0); left * to_dim * right];
        for l in 0..left {
            let src_base = l * from_dim * right;
            let dst_base = l * to_dim * right;
            for &(o, i, v) in &op.entries {
                let (src, dst) = if forward { (i, o) } else { (o, i) };
                let s = &self.data[src_base + src * right..src_base + (src + 1) * right];
                let d = &mut out[dst_base + dst * right..dst_base + (dst + 1) * right];
                for (dd, ss) in d.iter_mut().zip(s) {
                    *dd += v * ss;
                }
            }
        }
        self.dims.splice(pos..pos + from_dims.len(), to_dims.iter().cloned());
        self.data = out;
    }
}

struct Ctx<'a> {
    rd: &'a RootData,
    d: &'a Diagram,
    objs: HashMap<(usize, Orientation), Arc<Obj>>,
    ops: HashMap<OpKey, Arc<LocalOp>>,
}

impl<'a> Ctx<'a> {
    fn new(rd: &'a RootData, d: &'a Diagram) -> Self {
        Ctx { rd, d, objs: HashMap::new(), ops: HashMap::new() }
    }

    fn obj(&mut self, s: StrandRef) -> Result<Arc<Obj>> {
        let key = (s.component, s.orientation);
        if let Some(o) = self.objs.get(&key) {
            return Ok(o.clone());
        }
        let comp = &self.d.components[s.component];
        let label = match comp.color {
            StrandColor::Color(l) => l.canonical(self.rd)?,
            StrandColor::Kirby(_) => {
                return Err(Error::MalformedDiagram(format!(
                    "component {} still carries a Kirby color; expand it first",
                    comp.name
                )))
            }
        };
        let base = repcat::realize(self.rd, label)?;
        let m = match s.orientation {
            Orientation::Up => (*base).clone(),
            Orientation::Down => base.dual(self.rd),
        };
        let r = self.rd.r;
        let mut epow = vec![linalg::eye(m.dim)];
        let mut fpow = vec![linalg::eye(m.dim)];
        for n in 1..r {
            let e = &epow[n - 1] * &m.e;
            let f = &fpow[n - 1] * &m.f;
            epow.push(e);
            fpow.push(f);
        }
        let obj = Arc::new(Obj {
            piv: m.pivot_diag(self.rd),
            base_piv: base.pivot_diag(self.rd),
            label,
            m,
            epow,
            fpow,
        });
        self.objs.insert(key, obj.clone());
        Ok(obj)
    }

    /// c_{X,Y} = τ∘R : X⊗Y → Y⊗X, R = q^{H⊗H/2} Σ_n {1}^{2n} q^{n(n−1)/2}/{n}! Eⁿ⊗Fⁿ.
    fn braiding_dense(&self, x: &Obj, y: &Obj) -> CMat {
        let rd = self.rd;
        let (dx, dy) = (x.m.dim, y.m.dim);
        let b1 = rd.qbracket_re(1.0);
        let mut coef = Vec::with_capacity(rd.r);
        let mut fact = re(1.0);
        for n in 0..rd.r {
            if n > 0 {
                fact *= rd.qbracket_re(n as f64);
            }
            let nf = n as f64;
            coef.push(b1.powi(2 * n as i32) * rd.qpow_re(nf * (nf - 1.0) / 2.0) / fact);
        }
        let mut m = linalg::zeros(dy * dx, dx * dy);
        for a in 0..dx {
            for b in 0..dy {
                for (n, cn) in coef.iter().enumerate() {
                    let en = &x.epow[n];
                    let fnn = &y.fpow[n];
                    for a2 in 0..dx {
                        let ea = en[(a2, a)];
                        if ea.norm() == 0.0 {
                            continue;
                        }
                        for b2 in 0..dy {
                            let fb = fnn[(b2, b)];
                            if fb.norm() == 0.0 {
                                continue;
                            }
                            let h = rd.qpow(x.m.weights[a2] * y.m.weights[b2] / 2.0);
                            m[(b2 * dx + a2, a * dy + b)] += cn * ea * fb * h;
                        }
                    }
                }
            }
        }
        m
    }

    fn cross_op(&mut self, l: StrandRef, r: StrandRef, over: bool) -> Result<Arc<LocalOp>> {
        let key = OpKey::Cross(l, r, over);
        if let Some(op) = self.ops.get(&key) {
            return Ok(op.clone());
        }
        let x = self.obj(l)?;
        let y = self.obj(r)?;
        let (dx, dy) = (x.m.dim, y.m.dim);
        let op = if over {
            LocalOp::from_dense(&self.braiding_dense(&x, &y), vec![dx, dy], vec![dy, dx], 0.0)
        } else {
            let c_yx = self.braiding_dense(&y, &x);
            let inv = c_yx
                .try_inverse()
                .ok_or_else(|| Error::Numeric("braiding is not invertible".into()))?;
            let drop = 1e-15 * linalg::max_abs(&inv);
            LocalOp::from_dense(&inv, vec![dx, dy], vec![dy, dx], drop)
        };
        let op = Arc::new(op);
        self.ops.insert(key, op.clone());
        Ok(op)
    }

    fn cup_op(&mut self, component: usize, left: Orientation) -> Result<Arc<LocalOp>> {
        let key = OpKey::Cup(component, left);
        if let Some(op) = self.ops.get(&key) {
            return Ok(op.clone());
        }
        let o = self.obj(StrandRef::new(component, Orientation::Up))?;
        let d = o.m.dim;
        let mut entries = Vec::with_capacity(d);
        for i in 0..d {
            // coev: Σ e_i ⊗ e^i ; c̃oev: Σ e^i ⊗ g⁻¹e_i
            let v = match left {
                Orientation::Up => re(1.0),
                Orientation::Down => re(1.0) / o.base_piv[i],
            };
            entries.push((i * d + i, 0, v));
        }
        let op = Arc::new(LocalOp { in_dims: vec![], out_dims: vec![d, d], in_dim: 1, out_dim: d * d, entries });
        self.ops.insert(key, op.clone());
        Ok(op)
    }

    fn cap_op(&mut self, a: StrandRef, b: StrandRef) -> Result<Arc<LocalOp>> {
        let key = OpKey::Cap(a, b);
        if let Some(op) = self.ops.get(&key) {
            return Ok(op.clone());
        }
        let up = if a.orientation == Orientation::Up { a } else { b };
        let o = self.obj(up)?;
        let d = o.m.dim;
        let mut entries = Vec::with_capacity(d);
        for i in 0..d {
            // ẽv(e_i ⊗ e^i) = g_i ; ev(e^i ⊗ e_i) = 1
            let v = match a.orientation {
                Orientation::Up => o.base_piv[i],
                Orientation::Down => re(1.0),
            };
            entries.push((0, i * d + i, v));
        }
        let op = Arc::new(LocalOp { in_dims: vec![d, d], out_dims: vec![], in_dim: d * d, out_dim: 1, entries });
        self.ops.insert(key, op.clone());
        Ok(op)
    }

    fn word_module(&mut self, word: &[StrandRef]) -> Result<ModuleRealization> {
        let mut acc = ModuleRealization {
            label: None,
            dim: 1,
            weights: vec![re(0.0)],
            e: linalg::zeros(1, 1),
            f: linalg::zeros(1, 1),
        };
        for s in word {
            let o = self.obj(*s)?;
            acc = acc.tensor(self.rd, &o.m);
        }
        Ok(acc)
    }

    fn coupon_op(&mut self, name: &str, ins: &[StrandRef], outs: &[StrandRef]) -> Result<LocalOp> {
        let in_objs: Vec<Arc<Obj>> = ins.iter().map(|s| self.obj(*s)).collect::<Result<_>>()?;
        let out_objs: Vec<Arc<Obj>> = outs.iter().map(|s| self.obj(*s)).collect::<Result<_>>()?;
        let in_dims: Vec<usize> = in_objs.iter().map(|o| o.m.dim).collect();
        let out_dims: Vec<usize> = out_objs.iter().map(|o| o.m.dim).collect();
        let single = ins.len() == 1 && outs.len() == 1;
        let builtin_x = name == "x" || name.strip_prefix("x_").is_some();
        let dense = if single && builtin_x {
            let j = match in_objs[0].label {
                ColorLabel::Pj(j) => j,
                other => return Err(Error::MalformedDiagram(format!("coupon {name} on a strand colored {other}"))),
            };
            if let Some(js) = name.strip_prefix("x_") {
                if js.parse::<usize>().ok() != Some(j) {
                    return Err(Error::MalformedDiagram(format!("coupon {name} on a strand colored P{j}")));
                }
            }
            let x = repcat::nilpotent_x(self.rd, j)?;
            match ins[0].orientation {
                Orientation::Up => x,
                Orientation::Down => x.transpose(),
            }
        } else if single && name == "pivot" {
            linalg::diag(&in_objs[0].piv)
        } else if single && (name == "sigma_dual_iso" || name.starts_with("sigma_dual_iso(")) {
            let (wi, wo) = (in_objs[0].m.weights[0], out_objs[0].m.weights[0]);
            if in_dims[0] != 1 || out_dims[0] != 1 || (wi - wo).norm() > self.rd.int_guard {
                return Err(Error::MalformedDiagram(format!("{name} needs matching one-dimensional ends")));
            }
            linalg::eye(1)
        } else if let Some(raw) = self.d.coupons.get(name) {
            let m = raw.matrix.clone();
            let (ind, outd) = (in_dims.iter().product::<usize>(), out_dims.iter().product::<usize>());
            if m.shape() != (outd, ind) {
                return Err(Error::MalformedDiagram(format!(
                    "coupon {name}: matrix is {:?}, words need {:?}",
                    m.shape(),
                    (outd, ind)
                )));
            }
            let src = self.word_module(ins)?;
            let tgt = self.word_module(outs)?;
            let res = ModuleRealization::intertwining_residual(&src, &tgt, &m);
            if res > 1e-8 {
                return Err(Error::MalformedDiagram(format!("coupon {name} is not a morphism (residual {res:e})")));
            }
            m
        } else {
            return Err(Error::UnknownCoupon(name.to_string()));
        };
        Ok(LocalOp::from_dense(&dense, in_dims, out_dims, 0.0))
    }

    fn dims(&mut self, word: &[StrandRef]) -> Result<Vec<usize>> {
        word.iter().map(|s| Ok(self.obj(*s)?.m.dim)).collect()
    }

    /// Pushes `st` through slice `si`, whose input word is `word_in`.
    fn slice(&mut self, st: &mut State, si: usize, word_in: &[StrandRef], word_out: &[StrandRef], forward: bool) -> Result<()> {
        let slice = &self.d.slices[si];
        let mut idx_in = 0;
        let mut idx_out = 0;
        let mut pos = 0;
        for ev in slice {
            let (nin, _) = ev.arity();
            let ins = &word_in[idx_in..idx_in + nin];
            let nout;
            let op: Arc<LocalOp> = match ev {
                Event::Id => {
                    idx_in += 1;
                    idx_out += 1;
                    pos += 1;
                    continue;
                }
                Event::Over => {
                    nout = 2;
                    self.cross_op(ins[0], ins[1], true)?
                }
                Event::Under => {
                    nout = 2;
                    self.cross_op(ins[0], ins[1], false)?
                }
                Event::Cup { component, left } => {
                    nout = 2;
                    self.cup_op(*component, *left)?
                }
                Event::Cap => {
                    nout = 0;
                    self.cap_op(ins[0], ins[1])?
                }
                Event::Coupon { name, outputs, .. } => {
                    nout = if outputs.is_empty() { nin } else { outputs.len() };
                    let outs = word_out[idx_out..idx_out + nout].to_vec();
                    Arc::new(self.coupon_op(name, ins, &outs)?)
                }
            };
            st.apply(pos, &op, forward);
            pos += if forward { nout } else { nin };
            idx_in += nin;
            idx_out += nout;
        }
        Ok(())
    }
}

fn check_no_kirby(d: &Diagram) -> Result<()> {
    let used = d.used_components()?;
    for (i, c) in d.components.iter().enumerate() {
        if used[i] && c.color.is_kirby() {
            return Err(Error::MalformedDiagram(format!(
                "component {} carries a Kirby color; use the expanded evaluators",
                c.name
            )));
        }
    }
    Ok(())
}

/// F(d) as a matrix from the bottom word to the top word.
pub fn evaluate_f(rd: &RootData, d: &Diagram) -> Result<CMat> {
    evaluate_f_with_limit(rd, d, d.max_width)
}

pub fn evaluate_f_with_limit(rd: &RootData, d: &Diagram, max_width: usize) -> Result<CMat> {
    let mut d2;
    let d = if max_width != d.max_width {
        d2 = d.clone();
        d2.max_width = max_width;
        &d2
    } else {
        d
    };
    let levels = d.levels()?;
    check_no_kirby(d)?;
    let mut ctx = Ctx::new(rd, d);
    let dims = ctx.dims(&levels[0])?;
    let lead: usize = dims.iter().product();
    let mut data = vec![C64::new(0.0, 0.0); lead * lead];
    for i in 0..lead {
        data[i * lead + i] = re(1.0);
    }
    let mut st = State { lead, dims, data };
    for si in 0..d.slices.len() {
        ctx.slice(&mut st, si, &levels[si], &levels[si + 1], true)?;
    }
    let out: usize = st.dims.iter().product();
    let mut m = linalg::zeros(out, lead);
    for l in 0..lead {
        for o in 0..out {
            m[(o, l)] = st.data[l * out + o];
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutPoint {
    /// Number of slices below the cut.
    pub level: usize,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct FPrimeResult {
    pub value: C64,
    pub cut: CutPoint,
    pub cut_component: usize,
    pub cut_color: ColorLabel,
    /// F of the cut (1,1)-tangle, as an endomorphism of the upward module.
    pub endomorphism: CMat,
}

/// First projective strand, preferring V_α colors (scalar endomorphisms) and low levels.
fn default_cut(rd: &RootData, d: &Diagram, levels: &[Vec<StrandRef>]) -> Result<CutPoint> {
    let color = |s: &StrandRef| d.components[s.component].color.label().and_then(|l| l.canonical(rd).ok());
    for want_v in [true, false] {
        for (lv, word) in levels.iter().enumerate() {
            for (p, s) in word.iter().enumerate() {
                match color(s) {
                    Some(ColorLabel::Valpha(_)) if want_v => return Ok(CutPoint { level: lv, position: p }),
                    Some(ColorLabel::Pj(_)) if !want_v => return Ok(CutPoint { level: lv, position: p }),
                    _ => {}
                }
            }
        }
    }
    Err(Error::NoProjectiveEdge)
}

pub fn evaluate_fprime(rd: &RootData, d: &Diagram) -> Result<FPrimeResult> {
    let levels = d.levels()?;
    let cut = default_cut(rd, d, &levels)?;
    evaluate_fprime_at(rd, d, cut)
}

/// F′ by cutting the strand at `cut`. The bottom part is pushed up as a vector,
/// the top part pulled down as a covector; the (1,1)-tangle is recovered by the
/// left pivotal partial trace over the strands left of the cut and the right one
/// over the strands to its right.
pub fn evaluate_fprime_at(rd: &RootData, d: &Diagram, cut: CutPoint) -> Result<FPrimeResult> {
    let levels = d.levels()?;
    check_no_kirby(d)?;
    if !d.bottom.is_empty() || !levels.last().unwrap().is_empty() {
        return Err(Error::MalformedDiagram("F′ needs a closed diagram".into()));
    }
    if cut.level >= levels.len() || cut.position >= levels[cut.level].len() {
        return Err(Error::MalformedDiagram(format!("cut {cut:?} is outside the diagram")));
    }
    let sref = levels[cut.level][cut.position];
    let label = d.components[sref.component]
        .color
        .label()
        .ok_or(Error::NoProjectiveEdge)?
        .canonical(rd)?;
    if !label.is_projective(rd) {
        return Err(Error::NoProjectiveEdge);
    }
    let mut ctx = Ctx::new(rd, d);
    let mut below = State { lead: 1, dims: vec![], data: vec![re(1.0)] };
    for si in 0..cut.level {
        ctx.slice(&mut below, si, &levels[si], &levels[si + 1], true)?;
    }
    let mut above = State { lead: 1, dims: vec![], data: vec![re(1.0)] };
    for si in (cut.level..d.slices.len()).rev() {
        ctx.slice(&mut above, si, &levels[si], &levels[si + 1], false)?;
    }
    let word = &levels[cut.level];
    let p = cut.position;
    let objs: Vec<Arc<Obj>> = word.iter().map(|s| ctx.obj(*s)).collect::<Result<_>>()?;
    let dims: Vec<usize> = objs.iter().map(|o| o.m.dim).collect();
    let weight_block = |range: std::ops::Range<usize>, inverse: bool| -> Vec<C64> {
        let mut w = vec![re(1.0)];
        for i in range {
            let mut next = Vec::with_capacity(w.len() * dims[i]);
            for x in &w {
                for g in &objs[i].piv {
                    next.push(if inverse { x / g } else { x * g });
                }
            }
            w = next;
        }
        w
    };
    let wa = weight_block(0..p, true);
    let wc = weight_block(p + 1..word.len(), false);
    let dp = dims[p];
    let nc = wc.len();
    let mut fcut = linalg::zeros(dp, dp);
    for (x, gx) in wa.iter().enumerate() {
        for a in 0..dp {
            for b in 0..dp {
                let mut acc = C64::new(0.0, 0.0);
                let ib = (x * dp + a) * nc;
                let it = (x * dp + b) * nc;
                for (y, gy) in wc.iter().enumerate() {
                    acc += gy * below.data[ib + y] * above.data[it + y];
                }
                fcut[(a, b)] += gx * acc;
            }
        }
    }
    let endo = match sref.orientation {
        Orientation::Up => fcut,
        Orientation::Down => fcut.transpose(),
    };
    let value = repcat::modified_trace(rd, label, &endo)?;
    Ok(FPrimeResult { value, cut, cut_component: sref.component, cut_color: label, endomorphism: endo })
}
