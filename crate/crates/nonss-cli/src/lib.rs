//! Command-line front end: job dispatch, JSON results and exit codes.

pub mod schema;

use clap::{Args, Parser, Subcommand};
use nonss::closedforms;
use nonss::error::ErrorClass;
use nonss::linalg::CMat;
use nonss::surgery::{eval_z_with, EvalOptions, NormalizationTrace};
use nonss::tangle::{self, CutPoint};
use nonss::{mcg, selfcheck, RootData, C64};
use schema::SchemaError;
use serde_json::{json, Value};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "nonss", version, about = "Non-semisimple quantum sl(2) invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Order of the root of unity: odd, or twice an odd number.
    #[arg(long, default_value_t = 3)]
    pub r: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// F′ of a closed colored diagram.
    EvalLink {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        /// Cut point as LEVEL,POSITION; default is the first projective strand.
        #[arg(long)]
        cut: Option<String>,
    },
    /// Z of a surgery presentation.
    EvalManifold {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        /// Use the reduced Kirby color (r even).
        #[arg(long)]
        reduced: bool,
        /// Evaluate even when the degrees fail compatibility (a warning is emitted).
        #[arg(long)]
        no_compat: bool,
    },
    /// Z(Σ_g × S¹) from the Verlinde formula, its limit, or its graded form.
    Verlinde {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        genus: u32,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.37)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        beta_im: f64,
        /// Limit β → 0 (r odd) or β → 1 (r even): the dimension.
        #[arg(long)]
        limit: bool,
        /// Laurent coefficients in t = q^{−2r′β}.
        #[arg(long)]
        graded: bool,
    },
    /// Z₂ of the lens space L(p,q) with class k.
    Lens {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        k: i64,
        /// Also evaluate surgery on the chain link.
        #[arg(long)]
        engine: bool,
    },
    /// Torus data: the r = 2 SL(2,Z) matrices, or the generic pairing matrix.
    McgTorus {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.4)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        alpha_im: f64,
    },
    /// The Torelli scalar q^{(h−k)(α+(h+k)/2)} and its order.
    Torelli {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        alpha_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
    },
    /// The acceptance suite.
    Selfcheck {
        #[arg(long)]
        r: Option<usize>,
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u32>,
    },
}

/// What a run produced: the JSON result, a human summary and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub json: Value,
    pub summary: String,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    Schema(SchemaError),
    Lib(nonss::Error),
    Check(String),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Schema(e)
    }
}

impl From<nonss::Error> for Failure {
    fn from(e: nonss::Error) -> Self {
        Failure::Lib(e)
    }
}

fn cj(z: C64) -> Value {
    json!([z.re, z.im])
}

fn mj(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| cj(m[(i, j)])).collect())).collect())
}

fn trace_json(t: &NormalizationTrace) -> Value {
    json!({
        "m": t.m,
        "signature": {"positive": t.signature.positive, "negative": t.signature.negative, "nullity": t.signature.nullity},
        "n": t.n,
        "eta": cj(t.eta),
        "lambda": cj(t.lambda),
        "delta": cj(t.delta),
        "factor": cj(t.factor()),
        "fprime": cj(t.fprime),
        "kirby_terms": t.kirby_terms,
        "reduced_kirby": t.reduced_kirby,
    })
}

fn fmt_c(z: C64) -> String {
    nonss::qcore::fmt_c(z)
}

/// Global tolerance, overridden by NONSS_TOL.
pub fn tolerance() -> Option<f64> {
    std::env::var("NONSS_TOL").ok().and_then(|s| s.parse().ok())
}

fn root(r: usize) -> Result<RootData, Failure> {
    let rd = RootData::new(r)?;
    Ok(match tolerance() {
        Some(t) => rd.with_tol(t),
        None => rd,
    })
}

fn result(command: &str, r: usize, value: Value, trace: Value, warnings: Vec<String>) -> Value {
    json!({
        "command": command,
        "r": r,
        "tolerance": tolerance().unwrap_or(nonss::qcore::DEFAULT_TOL),
        "value": value,
        "normalization_trace": trace,
        "warnings": warnings,
    })
}

fn dispatch(cmd: &Command) -> Result<(Value, String, bool), Failure> {
    match cmd {
        Command::EvalLink { common, input, cut } => {
            let rd = root(common.r)?;
            let d = schema::parse_diagram_file(input, &rd)?;
            if !d.kirby_components().is_empty() {
                return Err(SchemaError::Validation {
                    invariant: "NoSurgery".into(),
                    message: "eval-link takes a diagram without Kirby components; use eval-manifold".into(),
                }
                .into());
            }
            let res = match cut {
                Some(s) => {
                    let parts: Vec<usize> = s.split(',').filter_map(|x| x.trim().parse().ok()).collect();
                    if parts.len() != 2 {
                        return Err(SchemaError::Parse { line: None, message: format!("--cut expects LEVEL,POSITION, got {s}") }.into());
                    }
                    tangle::evaluate_fprime_at(&rd, &d, CutPoint { level: parts[0], position: parts[1] })?
                }
                None => tangle::evaluate_fprime(&rd, &d)?,
            };
            let trace = json!({
                "cut": {"level": res.cut.level, "position": res.cut.position},
                "cut_component": d.components[res.cut_component].name,
                "cut_color": res.cut_color.to_string(),
            });
            let summary = format!(
                "F'(L) = {} (r = {}, cut on {} colored {})",
                fmt_c(res.value),
                rd.r,
                d.components[res.cut_component].name,
                res.cut_color
            );
            Ok((result("eval-link", rd.r, cj(res.value), trace, vec![]), summary, true))
        }
        Command::EvalManifold { common, input, reduced, no_compat } => {
            let rd = root(common.r)?;
            let sp = schema::parse_presentation_file(input, &rd, !no_compat)?;
            let v = eval_z_with(&rd, &sp, EvalOptions { reduced_kirby: *reduced, enforce_compatibility: !no_compat })?;
            let trace = Value::Array(v.trace.iter().map(trace_json).collect());
            let summary = format!("Z = {} (r = {}, {} surgery components)", fmt_c(v.value), rd.r, sp.surgery_degrees().len());
            Ok((result("eval-manifold", rd.r, cj(v.value), trace, v.warnings), summary, true))
        }
        Command::Verlinde { common, genus, beta, beta_im, limit, graded } => {
            let rd = root(common.r)?;
            if *graded {
                let g = closedforms::graded_dim_poly(&rd, *genus, &[])?;
                let signed: serde_json::Map<String, Value> = g.signed.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                let unsigned: serde_json::Map<String, Value> = g.unsigned.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                let summary = format!("graded dimension of genus {genus} at r = {}: {:?}", rd.r, g.signed);
                let v = json!({"signed": signed, "unsigned": unsigned});
                let trace = json!({"method": "dft", "rounding_error": g.rounding_error});
                return Ok((result("verlinde", rd.r, v, trace, vec![]), summary, true));
            }
            if *limit {
                let rep = closedforms::verlinde_limit(&rd, *genus, &[])?;
                let d = closedforms::dim_limit(&rd, *genus)?;
                let trace = json!({"method": "richardson", "limit_point": closedforms::limit_point(&rd), "stability": rep.stability, "closed": closedforms::dim_closed(&rd, *genus)});
                let summary = format!("dim V(Sigma_{genus}) = {d} at r = {}", rd.r);
                return Ok((result("verlinde", rd.r, json!(d), trace, vec![]), summary, true));
            }
            let b = C64::new(*beta, *beta_im);
            let v = closedforms::verlinde_value(&rd, *genus, b, &[])?;
            let summary = format!("Z(Sigma_{genus} x S1, beta = {}) = {} at r = {}", fmt_c(b), fmt_c(v), rd.r);
            Ok((result("verlinde", rd.r, cj(v), json!({"method": "verlinde", "beta": cj(b)}), vec![]), summary, true))
        }
        Command::Lens { r, p, q, k, engine } => {
            let rd = root(*r)?;
            let v = closedforms::lens_z2(&rd, *p, *q, *k)?;
            let mut trace = json!({"method": "closed_form"});
            let mut warnings = vec![];
            if *engine {
                let sp = closedforms::lens_chain_presentation(*p, *q, *k)?;
                let z = eval_z_with(&rd, &sp, EvalOptions::default())?;
                trace = json!({"method": "closed_form", "engine": cj(z.value), "surgery": z.trace.iter().map(trace_json).collect::<Vec<_>>()});
                if (z.value - v).norm() > rd.tol * v.norm().max(1.0) {
                    warnings.push(format!("engine value {} differs from the closed form", fmt_c(z.value)));
                }
            }
            let summary = format!("Z2(L({p},{q}), k = {k}) = {}", fmt_c(v));
            Ok((result("lens", rd.r, cj(v), trace, warnings), summary, true))
        }
        Command::McgTorus { common, alpha, alpha_im } => {
            let rd = root(common.r)?;
            if rd.r == 2 {
                let t = mcg::torus_rep_r2(&rd)?;
                let p = &t.pairings;
                let v = json!({"basis": ["T_xP0", "T_P0"], "T": mj(&t.t_mat), "S": mj(&t.s_mat)});
                let trace = json!({
                    "pairings": {
                        "empty_p0": cj(p.empty_p0), "empty_xp0": cj(p.empty_xp0),
                        "s_empty_p0": cj(p.s_empty_p0), "s_empty_xp0": cj(p.s_empty_xp0),
                    },
                    "gram": mj(&t.gram),
                });
                let summary = format!(
                    "r = 2 torus: T = [[{}, {}], [{}, {}]], S = [[{}, {}], [{}, {}]]",
                    fmt_c(t.t_mat[(0, 0)]), fmt_c(t.t_mat[(0, 1)]), fmt_c(t.t_mat[(1, 0)]), fmt_c(t.t_mat[(1, 1)]),
                    fmt_c(t.s_mat[(0, 0)]), fmt_c(t.s_mat[(0, 1)]), fmt_c(t.s_mat[(1, 0)]), fmt_c(t.s_mat[(1, 1)])
                );
                return Ok((result("mcg-torus", 2, v, trace, vec![]), summary, true));
            }
            let a = C64::new(*alpha, *alpha_im);
            let pm = mcg::pairing_matrix(&rd, a)?;
            let rank = nonss::linalg::rank(&pm.entries, 1e-9);
            let v = json!({"rows": pm.rows, "cols": pm.cols, "entries": mj(&pm.entries)});
            let summary = format!("pairing matrix at r = {}, alpha = {}: {}x{} of rank {rank}", rd.r, fmt_c(a), pm.rows.len(), pm.cols.len());
            let mut warnings = vec![];
            if rank != pm.rows.len() {
                warnings.push("pairing matrix is degenerate".into());
            }
            Ok((result("mcg-torus", rd.r, v, json!({"rank": rank}), warnings), summary, true))
        }
        Command::Torelli { common, alpha, alpha_im, h, k, n_max } => {
            let rd = root(common.r)?;
            let hr = rd.h_r();
            if !hr.contains(h) || !hr.contains(k) {
                return Err(Failure::Lib(nonss::Error::InvalidLabel(format!("h and k must lie in H_r = {hr:?}"))));
            }
            let a = C64::new(*alpha, *alpha_im);
            let t = mcg::torelli_scalar(&rd, a, *h, *k, *n_max);
            let order = match t.order {
                Some(n) => json!(n),
                None => Value::Null,
            };
            let summary = match t.order {
                Some(n) => format!("Torelli scalar {} of order {n}", fmt_c(t.value)),
                None => format!("Torelli scalar {} has no order <= {n_max}", fmt_c(t.value)),
            };
            Ok((result("torelli", rd.r, cj(t.value), json!({"order": order, "n_max": n_max}), vec![]), summary, true))
        }
        Command::Selfcheck { r, only } => {
            if let Some(r) = r {
                root(*r)?;
            }
            let results = match only {
                Some(id) => selfcheck::run_one(*id).into_iter().collect(),
                None => selfcheck::run_all(),
            };
            if results.is_empty() {
                return Err(Failure::Check(format!("no criterion {}", only.unwrap_or(0))));
            }
            let pass = results.iter().all(|c| c.pass);
            let lines: Vec<String> = results.iter().map(|c| c.to_string()).collect();
            let v = Value::Array(
                results
                    .iter()
                    .map(|c| json!({"id": c.id, "name": c.name, "pass": c.pass, "detail": c.detail}))
                    .collect(),
            );
            let summary = format!("{}\n{} of {} criteria pass", lines.join("\n"), results.iter().filter(|c| c.pass).count(), results.len());
            Ok((result("selfcheck", r.unwrap_or(0), v, Value::Null, vec![]), summary, pass))
        }
    }
}

fn error_json(code: i32, kind: &str, message: &str, extra: Value) -> Value {
    json!({"error": {"kind": kind, "exit_code": code, "message": message, "detail": extra}})
}

pub fn run(cmd: &Command) -> Outcome {
    match dispatch(cmd) {
        Ok((json, summary, true)) => Outcome { json, summary, code: EXIT_OK },
        Ok((json, summary, false)) => Outcome { json, summary, code: EXIT_NUMERIC },
        Err(Failure::Schema(e)) => {
            let (code, kind, extra) = match &e {
                SchemaError::Parse { line, .. } => (EXIT_PARSE, "ParseError", json!({"line": line})),
                SchemaError::Validation { invariant, .. } => (EXIT_VALIDATION, "ValidationError", json!({"invariant": invariant})),
            };
            Outcome { json: error_json(code, kind, &e.to_string(), extra), summary: e.to_string(), code }
        }
        Err(Failure::Lib(e)) => {
            let (code, kind) = match e.class() {
                ErrorClass::Validation => (EXIT_VALIDATION, "ValidationError"),
                ErrorClass::Numeric => (EXIT_NUMERIC, "NumericError"),
            };
            let msg = e.to_string();
            Outcome { json: error_json(code, kind, &msg, Value::Null), summary: msg, code }
        }
        Err(Failure::Check(msg)) => Outcome { json: error_json(EXIT_NUMERIC, "CheckFailed", &msg, Value::Null), summary: msg, code: EXIT_NUMERIC },
    }
}
