//! JSON file format for diagrams and surgery presentations.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "colors": { "a": {"Valpha": [0.3, 0.0]}, "w": {"Kirby": [0.37, 0.1]} },
//!   "components": { "K": "a", "U": "w" },
//!   "strands": [],
//!   "slices": [ [{"cup": ["K", "up"]}], ["id", "id"], ["cap"] ],
//!   "signature_defect": 0
//! }
//! ```
//!
//! Events are `"id"`, `"over"`, `"under"`, `"cap"`, `{"cup": [component, orientation]}`
//! and `{"coupon": {"name": .., "inputs": n, "outputs": [[component, orientation], ..]}}`.
//! Raw coupon matrices go under `"coupons"` as `{"rows", "cols", "entries"}` with
//! row-major `[re, im]` entries.

use indexmap::IndexMap;
use nonss::linalg::CMat;
use nonss::surgery::{check_admissible, SurgeryPresentation};
use nonss::tangle::{Component, Diagram, Event, Orientation, RawCoupon, StrandColor, StrandRef, DEFAULT_MAX_WIDTH};
use nonss::{ColorLabel, RootData, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ColorSpec {
    Valpha([f64; 2]),
    Pj(usize),
    Sigma(i64),
    Kirby([f64; 2]),
    Si(usize),
    CH(i64),
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientSpec {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouponEvent {
    pub name: String,
    pub inputs: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<(String, OrientSpec)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventSpec {
    Id,
    Over,
    Under,
    Cap,
    Cup(String, OrientSpec),
    Coupon(CouponEvent),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub schema_version: u32,
    pub colors: IndexMap<String, ColorSpec>,
    pub components: IndexMap<String, String>,
    #[serde(default)]
    pub strands: Vec<(String, OrientSpec)>,
    pub slices: Vec<Vec<EventSpec>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coupons: BTreeMap<String, MatrixSpec>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub signature_defect: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_width: Option<usize>,
}

fn is_zero(n: &i64) -> bool {
    *n == 0
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchemaError {
    /// Malformed file; `line` is 1-based when known.
    Parse { line: Option<usize>, message: String },
    /// Well-formed file violating a named invariant.
    Validation { invariant: String, message: String },
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaError::Parse { line: Some(l), message } => write!(f, "parse error at line {l}: {message}"),
            SchemaError::Parse { line: None, message } => write!(f, "parse error: {message}"),
            SchemaError::Validation { invariant, message } => write!(f, "validation error [{invariant}]: {message}"),
        }
    }
}

impl std::error::Error for SchemaError {}

fn c64(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn orient(o: OrientSpec) -> Orientation {
    match o {
        OrientSpec::Up => Orientation::Up,
        OrientSpec::Down => Orientation::Down,
    }
}

fn orient_spec(o: Orientation) -> OrientSpec {
    match o {
        Orientation::Up => OrientSpec::Up,
        Orientation::Down => OrientSpec::Down,
    }
}

impl ColorSpec {
    fn to_strand(self) -> StrandColor {
        match self {
            ColorSpec::Valpha(a) => StrandColor::Color(ColorLabel::Valpha(c64(a))),
            ColorSpec::Pj(j) => StrandColor::Color(ColorLabel::Pj(j)),
            ColorSpec::Sigma(n) => StrandColor::Color(ColorLabel::SigmaPow(n)),
            ColorSpec::Si(i) => StrandColor::Color(ColorLabel::Si(i)),
            ColorSpec::CH(k) => StrandColor::Color(ColorLabel::CH(k)),
            ColorSpec::Trivial => StrandColor::Color(ColorLabel::Trivial),
            ColorSpec::Kirby(g) => StrandColor::Kirby(c64(g)),
        }
    }

    fn from_strand(c: StrandColor) -> Self {
        match c {
            StrandColor::Kirby(g) => ColorSpec::Kirby(pair(g)),
            StrandColor::Color(l) => match l {
                ColorLabel::Valpha(a) => ColorSpec::Valpha(pair(a)),
                ColorLabel::Pj(j) => ColorSpec::Pj(j),
                ColorLabel::SigmaPow(n) => ColorSpec::Sigma(n),
                ColorLabel::Si(i) => ColorSpec::Si(i),
                ColorLabel::CH(k) => ColorSpec::CH(k),
                ColorLabel::Trivial => ColorSpec::Trivial,
            },
        }
    }
}

/// 1-based line of the start of each element of the top-level "slices" array.
fn slice_lines(text: &str) -> Vec<usize> {
    let Some(start) = text.find("\"slices\"") else { return vec![] };
    let mut line = 1 + text[..start].matches('\n').count();
    let mut depth = 0i32;
    let mut in_str = false;
    let mut escaped = false;
    let mut out = Vec::new();
    for ch in text[start + 8..].chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_str {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_str = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_str = true,
            '[' => {
                depth += 1;
                if depth == 2 {
                    out.push(line);
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    out
}

/// 1-based line of the first occurrence of `needle`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.find(needle).map(|i| 1 + text[..i].matches('\n').count())
}

/// Parsed diagram plus the line of every slice, for error messages.
pub struct Parsed {
    pub file: DiagramFile,
    pub diagram: Diagram,
    pub signature_defect: i64,
}

pub fn parse_text(text: &str) -> Result<Parsed, SchemaError> {
    let file: DiagramFile = serde_json::from_str(text).map_err(|e| SchemaError::Parse {
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    let diagram = to_diagram(&file, text)?;
    Ok(Parsed { signature_defect: file.signature_defect, file, diagram })
}

fn to_diagram(file: &DiagramFile, text: &str) -> Result<Diagram, SchemaError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(SchemaError::Parse {
            line: line_of(text, "\"schema_version\""),
            message: format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", file.schema_version),
        });
    }
    let lines = slice_lines(text);
    let slice_line = |i: usize| lines.get(i).copied();
    let mut d = Diagram::default();
    if let Some(w) = file.max_width {
        d.max_width = w;
    }
    let mut index = IndexMap::new();
    for (name, cname) in &file.components {
        let col = file.colors.get(cname).ok_or_else(|| SchemaError::Parse {
            line: line_of(text, &format!("\"{name}\"")),
            message: format!("component {name} uses undefined color {cname}"),
        })?;
        index.insert(name.clone(), d.components.len());
        d.components.push(Component { name: name.clone(), color: col.to_strand() });
    }
    let comp = |name: &str, line: Option<usize>| {
        index.get(name).copied().ok_or_else(|| SchemaError::Parse {
            line,
            message: format!("unknown component {name}"),
        })
    };
    for (name, o) in &file.strands {
        d.bottom.push(StrandRef::new(comp(name, line_of(text, "\"strands\""))?, orient(*o)));
    }
    for (si, slice) in file.slices.iter().enumerate() {
        let mut out = Vec::with_capacity(slice.len());
        for ev in slice {
            out.push(match ev {
                EventSpec::Id => Event::Id,
                EventSpec::Over => Event::Over,
                EventSpec::Under => Event::Under,
                EventSpec::Cap => Event::Cap,
                EventSpec::Cup(name, o) => Event::Cup { component: comp(name, slice_line(si))?, left: orient(*o) },
                EventSpec::Coupon(c) => Event::Coupon {
                    name: c.name.clone(),
                    inputs: c.inputs,
                    outputs: c
                        .outputs
                        .iter()
                        .map(|(n, o)| Ok(StrandRef::new(comp(n, slice_line(si))?, orient(*o))))
                        .collect::<Result<_, SchemaError>>()?,
                },
            });
        }
        d.slices.push(out);
    }
    for (name, m) in &file.coupons {
        if m.entries.len() != m.rows * m.cols {
            return Err(SchemaError::Parse {
                line: line_of(text, &format!("\"{name}\"")),
                message: format!("coupon {name}: {} entries for a {}x{} matrix", m.entries.len(), m.rows, m.cols),
            });
        }
        let matrix = CMat::from_fn(m.rows, m.cols, |i, j| c64(m.entries[i * m.cols + j]));
        d.coupons.insert(name.clone(), RawCoupon { matrix });
    }
    d.levels().map_err(|e| {
        let line = e
            .to_string()
            .split("slice ")
            .nth(1)
            .and_then(|s| s.split(':').next())
            .and_then(|s| s.trim().parse::<usize>().ok())
            .and_then(slice_line);
        SchemaError::Parse { line, message: e.to_string() }
    })?;
    Ok(d)
}

fn invariant_name(e: &nonss::Error) -> &'static str {
    use nonss::Error::*;
    match e {
        NotAdmissibleColor(_) => "NotAdmissibleColor",
        InvalidLabel(_) => "InvalidLabel",
        NotComputable(_) => "NotComputable",
        NotAdmissible(_) => "NotAdmissible",
        NonIntegralLinking(..) => "NonIntegralLinking",
        _ => "Validation",
    }
}

pub fn validation(e: nonss::Error) -> SchemaError {
    SchemaError::Validation { invariant: invariant_name(&e).to_string(), message: e.to_string() }
}

/// Colors must be admissible for this r.
pub fn validate_colors(rd: &RootData, d: &Diagram) -> Result<(), SchemaError> {
    for c in &d.components {
        match c.color {
            StrandColor::Color(l) => {
                l.canonical(rd).map_err(validation)?;
            }
            StrandColor::Kirby(g) => {
                if rd.integral_part(g).is_some() {
                    return Err(SchemaError::Validation {
                        invariant: "NotComputable".into(),
                        message: format!("surgery component {} has integral degree", c.name),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn parse_diagram_file(path: &std::path::Path, rd: &RootData) -> Result<Diagram, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError::Parse { line: None, message: format!("{}: {e}", path.display()) })?;
    let p = parse_text(&text)?;
    validate_colors(rd, &p.diagram)?;
    Ok(p.diagram)
}

/// Parses and runs the compatibility and computability checks; with
/// `enforce_compatibility` off an incompatible ω is let through.
pub fn parse_presentation_text(text: &str, rd: &RootData, enforce_compatibility: bool) -> Result<SurgeryPresentation, SchemaError> {
    let p = parse_text(text)?;
    validate_colors(rd, &p.diagram)?;
    let sp = SurgeryPresentation::new(p.diagram).with_defect(p.signature_defect);
    let rep = check_admissible(rd, &sp).map_err(validation)?;
    if !rep.computable {
        return Err(SchemaError::Validation { invariant: "NotComputable".into(), message: rep.messages.join("; ") });
    }
    if enforce_compatibility && !rep.compatible {
        let bad: Vec<&str> = rep.components.iter().filter(|c| !c.compatible).map(|c| c.name.as_str()).collect();
        return Err(SchemaError::Validation {
            invariant: "Compatibility".into(),
            message: format!("degrees fail the mod-2 linking condition on {}", bad.join(", ")),
        });
    }
    Ok(sp)
}

pub fn parse_presentation_file(path: &std::path::Path, rd: &RootData, enforce_compatibility: bool) -> Result<SurgeryPresentation, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError::Parse { line: None, message: format!("{}: {e}", path.display()) })?;
    parse_presentation_text(&text, rd, enforce_compatibility)
}

/// The file form of a diagram; colors are named c0, c1, … in order of first use.
pub fn to_file(d: &Diagram, signature_defect: i64) -> DiagramFile {
    let mut colors: IndexMap<String, ColorSpec> = IndexMap::new();
    let mut components = IndexMap::new();
    for c in &d.components {
        let spec = ColorSpec::from_strand(c.color);
        let name = match colors.iter().find(|(_, v)| **v == spec) {
            Some((k, _)) => k.clone(),
            None => {
                let k = format!("c{}", colors.len());
                colors.insert(k.clone(), spec);
                k
            }
        };
        components.insert(c.name.clone(), name);
    }
    let cname = |i: usize| d.components[i].name.clone();
    let slices = d
        .slices
        .iter()
        .map(|s| {
            s.iter()
                .map(|ev| match ev {
                    Event::Id => EventSpec::Id,
                    Event::Over => EventSpec::Over,
                    Event::Under => EventSpec::Under,
                    Event::Cap => EventSpec::Cap,
                    Event::Cup { component, left } => EventSpec::Cup(cname(*component), orient_spec(*left)),
                    Event::Coupon { name, inputs, outputs } => EventSpec::Coupon(CouponEvent {
                        name: name.clone(),
                        inputs: *inputs,
                        outputs: outputs.iter().map(|s| (cname(s.component), orient_spec(s.orientation))).collect(),
                    }),
                })
                .collect()
        })
        .collect();
    let coupons = d
        .coupons
        .iter()
        .map(|(k, c)| {
            let m = &c.matrix;
            let entries = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| pair(m[(i, j)]))).collect();
            (k.clone(), MatrixSpec { rows: m.nrows(), cols: m.ncols(), entries })
        })
        .collect();
    DiagramFile {
        schema_version: SCHEMA_VERSION,
        colors,
        components,
        strands: d.bottom.iter().map(|s| (cname(s.component), orient_spec(s.orientation))).collect(),
        slices,
        coupons,
        signature_defect,
        max_width: (d.max_width != DEFAULT_MAX_WIDTH).then_some(d.max_width),
    }
}

/// One field per line, one slice per line.
pub fn to_json(file: &DiagramFile) -> String {
    let v = serde_json::to_value(file).expect("diagram files serialize");
    let fields: Vec<String> = v
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, val)| match (k.as_str(), val.as_array()) {
            ("slices", Some(rows)) if !rows.is_empty() => {
                let body: Vec<String> = rows.iter().map(|s| format!("    {s}")).collect();
                format!("  \"slices\": [\n{}\n  ]", body.join(",\n"))
            }
            _ => format!("  {}: {val}", Value::String(k.clone())),
        })
        .collect();
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}
