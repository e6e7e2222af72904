//! Generators for the diagrams used by the tests, the surgery presets and the CLI.

use super::{Diagram, DiagramBuilder, Event, Orientation, StrandColor, StrandRef};
use crate::qcore::C64;
use crate::repcat::ColorLabel;

fn col(l: ColorLabel) -> StrandColor {
    StrandColor::Color(l)
}

/// Unknot with `framing` curls.
pub fn unknot(color: StrandColor, framing: i64) -> Diagram {
    let mut b = DiagramBuilder::new();
    let k = b.component("K", color);
    b.cup(0, k, Orientation::Up).kinks(0, framing).cap(0);
    b.finish()
}

/// Upward `strand` with a loop colored `circling` around it, linking number +1.
pub fn open_hopf(circling: ColorLabel, strand: ColorLabel) -> Diagram {
    let mut b = DiagramBuilder::new();
    let w = b.component("W", col(strand));
    let v = b.component("V", col(circling));
    b.boundary(w, Orientation::Up).encircle(0, 1, v, true, 0);
    b.finish()
}

/// Positive Hopf link; `inner` is an unknot and `outer` a loop around one of its legs.
pub fn hopf_link(inner: StrandColor, inner_framing: i64, outer: StrandColor, outer_framing: i64) -> Diagram {
    let mut b = DiagramBuilder::new();
    let t = b.component("T", inner);
    let u = b.component("U", outer);
    b.cup(0, t, Orientation::Up).kinks(0, inner_framing);
    b.encircle(0, 1, u, true, outer_framing).cap(0);
    b.finish()
}

/// A closed component passing once through a loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thread {
    pub color: StrandColor,
    pub framing: i64,
    /// Orientation of the strand where it crosses the loop's disk.
    pub orientation: Orientation,
}

/// Unknotted closed components, parallel where they pass through a single
/// loop; with `positive`, the loop links every upward thread +1 and every
/// downward one −1.
pub fn threads_through_loop(threads: &[Thread], loop_color: StrandColor, loop_framing: i64, positive: bool) -> Diagram {
    let mut b = DiagramBuilder::new();
    let ids: Vec<usize> = threads
        .iter()
        .enumerate()
        .map(|(i, t)| b.component(&format!("T{i}"), t.color))
        .collect();
    let u = b.component("U", loop_color);
    for (i, t) in threads.iter().enumerate() {
        b.cup(i, ids[i], t.orientation).kinks(i, t.framing);
    }
    b.encircle(0, threads.len(), u, positive, loop_framing);
    for i in (0..threads.len()).rev() {
        b.cap(i);
    }
    b.finish()
}

/// A loop with further loops stacked around one upward strand of an unknot `t`.
pub fn stacked_meridians(t: StrandColor, t_framing: i64, loops: &[(StrandColor, i64)]) -> Diagram {
    let mut b = DiagramBuilder::new();
    let tc = b.component("T", t);
    b.cup(0, tc, Orientation::Up).kinks(0, t_framing);
    for (i, (c, f)) in loops.iter().enumerate() {
        let u = b.component(&format!("K{i}"), *c);
        b.encircle(0, 1, u, true, *f);
    }
    b.cap(0);
    b.finish()
}

/// Closure of a braid on `n` strands. `word` holds generators ±i (1-based);
/// +i is a positive crossing of strands i, i+1. Components are the cycles of
/// the braid permutation, ordered by their smallest strand; `colors` gives one
/// color per component. `meridians` puts loops (color, framing) around bottom
/// strands, linking them +1, before the braid starts.
pub fn braid_closure(n: usize, word: &[i32], colors: &[StrandColor], meridians: &[(usize, StrandColor, i64)]) -> Diagram {
    let mut perm: Vec<usize> = (0..n).collect();
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        assert!(i + 1 < n, "generator {g} out of range");
        perm.swap(i, i + 1);
    }
    // perm[p] = bottom strand that ends at top position p
    let mut comp_of = vec![usize::MAX; n];
    let mut ncomp = 0;
    for s in 0..n {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let mut x = s;
        while comp_of[x] == usize::MAX {
            comp_of[x] = ncomp;
            x = perm[x];
        }
        ncomp += 1;
    }
    assert_eq!(colors.len(), ncomp, "need one color per closure component");
    let mut b = DiagramBuilder::new();
    let ids: Vec<usize> = colors.iter().enumerate().map(|(i, c)| b.component(&format!("K{i}"), *c)).collect();
    for i in 0..n {
        b.cup(i, ids[comp_of[i]], Orientation::Up);
    }
    for (mi, (p, c, f)) in meridians.iter().enumerate() {
        let u = b.component(&format!("M{mi}"), *c);
        b.encircle(*p, 1, u, true, *f);
    }
    for &g in word {
        b.cross(g.unsigned_abs() as usize - 1, g > 0);
    }
    for i in (0..n).rev() {
        b.cap(i);
    }
    b.finish()
}

pub fn trefoil(color: StrandColor) -> Diagram {
    braid_closure(2, &[1, 1, 1], &[color], &[])
}

pub fn figure_eight(color: StrandColor) -> Diagram {
    braid_closure(3, &[1, -2, 1, -2], &[color], &[])
}

/// Linear chain of unknots, consecutive ones linked +1.
pub fn chain_link(links: &[(StrandColor, i64)]) -> Diagram {
    let mut b = DiagramBuilder::new();
    let ids: Vec<usize> = links.iter().enumerate().map(|(i, (c, _))| b.component(&format!("L{i}"), *c)).collect();
    if ids.is_empty() {
        return b.finish();
    }
    b.cup(0, ids[0], Orientation::Up).kinks(0, links[0].1);
    for i in 1..ids.len() {
        // word is [prev↑, prev↓]
        b.cup(2, ids[i], Orientation::Up).kinks(2, links[i].1);
        // prev↓ against this↑: two negative-looking events make a +1 clasp
        b.under(1).under(1);
        b.cap(0);
    }
    b.cap(0);
    b.finish()
}

/// Two closed diagrams side by side (the second stacked above the first).
pub fn disjoint_union(a: &Diagram, b: &Diagram) -> Diagram {
    assert!(a.bottom.is_empty() && b.bottom.is_empty(), "disjoint_union takes closed diagrams");
    let off = a.components.len();
    let mut d = a.clone();
    d.components.extend(b.components.iter().cloned());
    for slice in &b.slices {
        d.slices.push(
            slice
                .iter()
                .map(|ev| match ev {
                    Event::Cup { component, left } => Event::Cup { component: component + off, left: *left },
                    Event::Coupon { name, inputs, outputs } => Event::Coupon {
                        name: name.clone(),
                        inputs: *inputs,
                        outputs: outputs.iter().map(|s| StrandRef::new(s.component + off, s.orientation)).collect(),
                    },
                    e => e.clone(),
                })
                .collect(),
        );
    }
    for (k, v) in &b.coupons {
        d.coupons.insert(k.clone(), v.clone());
    }
    d.max_width = a.max_width.max(b.max_width);
    d
}

/// The same diagram with every component's orientation reversed.
/// Coupons are not supported.
pub fn reversed(d: &Diagram) -> Diagram {
    let mut out = d.clone();
    for s in &mut out.bottom {
        s.orientation = s.orientation.flip();
    }
    for slice in &mut out.slices {
        for ev in slice {
            match ev {
                Event::Cup { left, .. } => *left = left.flip(),
                Event::Coupon { .. } => panic!("reversed() does not handle coupons"),
                _ => {}
            }
        }
    }
    out
}

/// The strands V_{α+2k} (up) and V_α (down, i.e. V_{−α}) with a loop of
/// Kirby degree β around both.
pub fn encircled_pair(alpha: C64, k: i64, beta: C64) -> Diagram {
    let mut b = DiagramBuilder::new();
    let a = b.component("A", col(ColorLabel::Valpha(alpha + 2.0 * k as f64)));
    let bb = b.component("B", col(ColorLabel::Valpha(alpha)));
    let u = b.component("U", StrandColor::Kirby(beta));
    b.boundary(a, Orientation::Up).boundary(bb, Orientation::Down);
    b.encircle(0, 2, u, true, 0);
    b.finish()
}

/// σ ⊗ V with the double braiding c_{V,σ} c_{σ,V}.
pub fn sigma_double_crossing(sigma_power: i64, v: ColorLabel) -> Diagram {
    let mut b = DiagramBuilder::new();
    let s = b.component("S", col(ColorLabel::SigmaPow(sigma_power)));
    let w = b.component("W", col(v));
    b.boundary(s, Orientation::Up).boundary(w, Orientation::Up);
    b.over(0).over(0);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::re;
    use crate::tangle::linking_matrix_all;

    fn va(x: f64) -> StrandColor {
        col(ColorLabel::Valpha(re(x)))
    }

    #[test]
    fn linking_of_generators() {
        assert_eq!(linking_matrix_all(&unknot(va(0.3), 2)).unwrap(), vec![vec![2]]);
        assert_eq!(linking_matrix_all(&hopf_link(va(0.3), 0, va(0.2), 0)).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(linking_matrix_all(&trefoil(va(0.3))).unwrap(), vec![vec![3]]);
        assert_eq!(linking_matrix_all(&figure_eight(va(0.3))).unwrap(), vec![vec![0]]);
        let ch = chain_link(&[(va(0.1), -2), (va(0.2), 3), (va(0.3), 0)]);
        assert_eq!(
            linking_matrix_all(&ch).unwrap(),
            vec![vec![-2, 1, 0], vec![1, 3, 1], vec![0, 1, 0]]
        );
        let th = threads_through_loop(
            &[
                Thread { color: va(0.1), framing: 0, orientation: Orientation::Down },
                Thread { color: va(0.2), framing: 1, orientation: Orientation::Up },
            ],
            va(0.4),
            -1,
            true,
        );
        assert_eq!(
            linking_matrix_all(&th).unwrap(),
            vec![vec![0, 0, -1], vec![0, 1, 1], vec![-1, 1, -1]]
        );
        let bc = braid_closure(2, &[1, 1], &[va(0.1), va(0.2)], &[(0, va(0.5), 2)]);
        assert_eq!(
            linking_matrix_all(&bc).unwrap(),
            vec![vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 2]]
        );
    }

    #[test]
    fn union_is_closed() {
        let d = disjoint_union(&unknot(va(0.3), 1), &trefoil(va(0.2)));
        assert!(d.is_closed().unwrap());
        assert_eq!(d.components.len(), 2);
    }
}
