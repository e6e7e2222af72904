//! Sliced planar ribbon diagrams and the functors F and F′ on them.
//!
//! A diagram is read bottom to top. Each slice is a left-to-right list of
//! events consuming the current strand word. `Over` is the braiding
//! c = τ∘R (the strand entering bottom-left passes over); `Under` is c⁻¹
//! (the strand entering bottom-right passes over). With both strands pointing
//! the same way, `Over` is a positive crossing. An upward strand colored V is
//! the object V, a downward one is V*. Framing is blackboard.

pub mod builder;
pub mod eval;
pub mod kirby;
pub mod library;
pub mod linking;

pub use builder::DiagramBuilder;
pub use eval::{evaluate_f, evaluate_f_with_limit, evaluate_fprime, evaluate_fprime_at, CutPoint, FPrimeResult};
pub use kirby::{evaluate_f_expanded, expand_kirby};
pub use linking::{crossing_signs, linking_matrix, linking_matrix_all, signature, Signature};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::qcore::C64;
use crate::repcat::ColorLabel;
use std::collections::BTreeMap;

pub const DEFAULT_MAX_WIDTH: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Up => 1,
            Orientation::Down => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StrandColor {
    Color(ColorLabel),
    /// Surgery component carrying the Kirby color of the given degree.
    Kirby(C64),
}

impl StrandColor {
    pub fn label(&self) -> Option<ColorLabel> {
        match self {
            StrandColor::Color(c) => Some(*c),
            StrandColor::Kirby(_) => None,
        }
    }

    pub fn is_kirby(&self) -> bool {
        matches!(self, StrandColor::Kirby(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub name: String,
    pub color: StrandColor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StrandRef {
    pub component: usize,
    pub orientation: Orientation,
}

impl StrandRef {
    pub fn new(component: usize, orientation: Orientation) -> Self {
        StrandRef { component, orientation }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Id,
    Over,
    Under,
    /// Creates two strands of `component`; `left` is the orientation of the left one.
    Cup { component: usize, left: Orientation },
    Cap,
    /// `outputs` empty means the coupon is an endomorphism of its inputs.
    Coupon { name: String, inputs: usize, outputs: Vec<StrandRef> },
}

impl Event {
    pub fn arity(&self) -> (usize, Option<usize>) {
        match self {
            Event::Id => (1, Some(1)),
            Event::Over | Event::Under => (2, Some(2)),
            Event::Cup { .. } => (0, Some(2)),
            Event::Cap => (2, Some(0)),
            Event::Coupon { inputs, outputs, .. } => {
                (*inputs, if outputs.is_empty() { None } else { Some(outputs.len()) })
            }
        }
    }
}

pub type Slice = Vec<Event>;

/// Raw coupon supplied with a diagram: a matrix from the input word to the output word.
#[derive(Clone, Debug, PartialEq)]
pub struct RawCoupon {
    pub matrix: CMat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    pub components: Vec<Component>,
    pub bottom: Vec<StrandRef>,
    pub slices: Vec<Slice>,
    pub coupons: BTreeMap<String, RawCoupon>,
    pub max_width: usize,
}

impl Default for Diagram {
    fn default() -> Self {
        Diagram {
            components: Vec::new(),
            bottom: Vec::new(),
            slices: Vec::new(),
            coupons: BTreeMap::new(),
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

impl Diagram {
    /// Strand words at every level: level 0 is the bottom, level s+1 follows slice s.
    /// Validates that every slice consumes its input word exactly and that
    /// caps, cups and coupons are consistent.
    pub fn levels(&self) -> Result<Vec<Vec<StrandRef>>> {
        let ncomp = self.components.len();
        let check = |s: &StrandRef| {
            if s.component >= ncomp {
                Err(Error::MalformedDiagram(format!("unknown component {}", s.component)))
            } else {
                Ok(())
            }
        };
        for s in &self.bottom {
            check(s)?;
        }
        let mut out = vec![self.bottom.clone()];
        for (si, slice) in self.slices.iter().enumerate() {
            let cur = out.last().unwrap();
            let mut next = Vec::new();
            let mut idx = 0;
            for ev in slice {
                let (nin, _) = ev.arity();
                if idx + nin > cur.len() {
                    return Err(Error::MalformedDiagram(format!(
                        "slice {si}: events need more strands than the {} present",
                        cur.len()
                    )));
                }
                let ins = &cur[idx..idx + nin];
                match ev {
                    Event::Id => next.push(ins[0]),
                    Event::Over | Event::Under => {
                        next.push(ins[1]);
                        next.push(ins[0]);
                    }
                    Event::Cup { component, left } => {
                        let s = StrandRef::new(*component, *left);
                        check(&s)?;
                        next.push(s);
                        next.push(StrandRef::new(*component, left.flip()));
                    }
                    Event::Cap => {
                        let (a, b) = (ins[0], ins[1]);
                        if a.orientation == b.orientation {
                            return Err(Error::MalformedDiagram(format!(
                                "slice {si}: cap joins two strands with the same orientation"
                            )));
                        }
                        if a.component != b.component {
                            let ca = &self.components[a.component].color;
                            let cb = &self.components[b.component].color;
                            if ca.is_kirby() || cb.is_kirby() || ca != cb {
                                return Err(Error::MalformedDiagram(format!(
                                    "slice {si}: cap joins components {} and {} of different colors",
                                    a.component, b.component
                                )));
                            }
                        }
                    }
                    Event::Coupon { outputs, name, .. } => {
                        for s in ins {
                            if self.components[s.component].color.is_kirby() {
                                return Err(Error::MalformedDiagram(format!(
                                    "slice {si}: coupon {name} sits on a Kirby-colored component"
                                )));
                            }
                        }
                        if outputs.is_empty() {
                            next.extend_from_slice(ins);
                        } else {
                            for s in outputs {
                                check(s)?;
                                next.push(*s);
                            }
                        }
                    }
                }
                idx += nin;
            }
            if idx != cur.len() {
                return Err(Error::MalformedDiagram(format!(
                    "slice {si}: events consume {idx} of {} strands",
                    cur.len()
                )));
            }
            if next.len() > self.max_width {
                return Err(Error::TooWide { width: next.len(), limit: self.max_width });
            }
            out.push(next);
        }
        Ok(out)
    }

    pub fn top(&self) -> Result<Vec<StrandRef>> {
        Ok(self.levels()?.pop().unwrap())
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.bottom.is_empty() && self.top()?.is_empty())
    }

    pub fn kirby_components(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| self.components[i].color.is_kirby()).collect()
    }

    pub fn graph_components(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&i| !self.components[i].color.is_kirby()).collect()
    }

    /// Components that actually occur in the diagram.
    pub fn used_components(&self) -> Result<Vec<bool>> {
        let mut used = vec![false; self.components.len()];
        for lvl in self.levels()? {
            for s in lvl {
                used[s.component] = true;
            }
        }
        Ok(used)
    }

    pub fn with_max_width(mut self, w: usize) -> Self {
        self.max_width = w;
        self
    }
}
