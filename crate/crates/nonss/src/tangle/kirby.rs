use super::{Diagram, StrandColor};
use crate::error::Result;
use crate::linalg::CMat;
use crate::qcore::{re, RootData, C64};
use crate::repcat::ColorLabel;
use rayon::prelude::*;

/// Replaces every Kirby-colored component by the terms of its Kirby color,
/// taking the Cartesian product over components. Terms are listed with the
/// first Kirby component varying slowest.
pub fn expand_kirby(rd: &RootData, d: &Diagram, reduced: bool) -> Result<Vec<(C64, Diagram)>> {
    let mut out = vec![(re(1.0), d.clone())];
    for ci in d.kirby_components() {
        let alpha = match d.components[ci].color {
            StrandColor::Kirby(a) => a,
            _ => unreachable!(),
        };
        let terms = rd.kirby_color(alpha, reduced)?;
        let mut next = Vec::with_capacity(out.len() * terms.len());
        for (w, dd) in &out {
            for (c, col) in &terms {
                let mut d2 = dd.clone();
                d2.components[ci].color = StrandColor::Color(ColorLabel::Valpha(*col));
                next.push((w * c, d2));
            }
        }
        out = next;
    }
    Ok(out)
}

/// F of a diagram with Kirby-colored components, as the weighted sum over the expansion.
pub fn evaluate_f_expanded(rd: &RootData, d: &Diagram, reduced: bool) -> Result<CMat> {
    let terms = expand_kirby(rd, d, reduced)?;
    let mats: Vec<Result<CMat>> = terms.par_iter().map(|(_, dd)| super::evaluate_f(rd, dd)).collect();
    let mut acc: Option<CMat> = None;
    for ((w, _), m) in terms.iter().zip(mats) {
        let m = m? * *w;
        acc = Some(match acc {
            None => m,
            Some(a) => a + m,
        });
    }
    Ok(acc.expect("expansion is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{DiagramBuilder, Orientation};

    fn kirby_loops(n: usize) -> Diagram {
        let mut b = DiagramBuilder::new();
        for i in 0..n {
            let k = b.component(&format!("K{i}"), StrandColor::Kirby(re(0.5)));
            b.cup(0, k, Orientation::Up).cap(0);
        }
        b.finish()
    }

    #[test]
    fn expansion_sizes() {
        let rd3 = RootData::new(3).unwrap();
        assert_eq!(expand_kirby(&rd3, &kirby_loops(0), false).unwrap().len(), 1);
        assert_eq!(expand_kirby(&rd3, &kirby_loops(1), false).unwrap().len(), 3);
        let rd2 = RootData::new(2).unwrap();
        assert_eq!(expand_kirby(&rd2, &kirby_loops(2), true).unwrap().len(), 1);
        assert_eq!(expand_kirby(&rd2, &kirby_loops(2), false).unwrap().len(), 4);
    }
}
