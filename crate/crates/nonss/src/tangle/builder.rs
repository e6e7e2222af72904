use super::{Component, Diagram, Event, Orientation, RawCoupon, StrandColor, StrandRef};

/// Builds a diagram one slice at a time, padding each slice with identities.
#[derive(Clone, Debug, Default)]
pub struct DiagramBuilder {
    d: Diagram,
    word: Vec<StrandRef>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn component(&mut self, name: &str, color: StrandColor) -> usize {
        self.d.components.push(Component { name: name.to_string(), color });
        self.d.components.len() - 1
    }

    /// Adds an upward (or downward) boundary strand at the bottom.
    pub fn boundary(&mut self, component: usize, orientation: Orientation) -> &mut Self {
        let s = StrandRef::new(component, orientation);
        self.d.bottom.push(s);
        self.word.push(s);
        self
    }

    pub fn raw_coupon(&mut self, name: &str, c: RawCoupon) -> &mut Self {
        self.d.coupons.insert(name.to_string(), c);
        self
    }

    pub fn word(&self) -> &[StrandRef] {
        &self.word
    }

    pub fn width(&self) -> usize {
        self.word.len()
    }

    fn push(&mut self, pos: usize, consumed: usize, ev: Event, produced: Vec<StrandRef>) {
        let n = self.word.len();
        assert!(pos + consumed <= n, "event at {pos} consumes past the word end");
        let mut slice = Vec::with_capacity(n);
        slice.extend(std::iter::repeat_n(Event::Id, pos));
        slice.push(ev);
        slice.extend(std::iter::repeat_n(Event::Id, n - pos - consumed));
        self.d.slices.push(slice);
        self.word.splice(pos..pos + consumed, produced);
    }

    pub fn cup(&mut self, pos: usize, component: usize, left: Orientation) -> &mut Self {
        let out = vec![StrandRef::new(component, left), StrandRef::new(component, left.flip())];
        self.push(pos, 0, Event::Cup { component, left }, out);
        self
    }

    pub fn cap(&mut self, pos: usize) -> &mut Self {
        self.push(pos, 2, Event::Cap, vec![]);
        self
    }

    pub fn over(&mut self, pos: usize) -> &mut Self {
        let out = vec![self.word[pos + 1], self.word[pos]];
        self.push(pos, 2, Event::Over, out);
        self
    }

    pub fn under(&mut self, pos: usize) -> &mut Self {
        let out = vec![self.word[pos + 1], self.word[pos]];
        self.push(pos, 2, Event::Under, out);
        self
    }

    pub fn cross(&mut self, pos: usize, over: bool) -> &mut Self {
        if over {
            self.over(pos)
        } else {
            self.under(pos)
        }
    }

    /// Endomorphism coupon on a single strand.
    pub fn coupon(&mut self, pos: usize, name: &str) -> &mut Self {
        let s = self.word[pos];
        self.push(pos, 1, Event::Coupon { name: name.to_string(), inputs: 1, outputs: vec![] }, vec![s]);
        self
    }

    pub fn coupon_general(&mut self, pos: usize, name: &str, inputs: usize, outputs: Vec<StrandRef>) -> &mut Self {
        self.push(
            pos,
            inputs,
            Event::Coupon { name: name.to_string(), inputs, outputs: outputs.clone() },
            outputs,
        );
        self
    }

    /// A Reidemeister-I curl on the strand at `pos`; `positive` adds +1 to its writhe.
    pub fn kink(&mut self, pos: usize, positive: bool) -> &mut Self {
        let s = self.word[pos];
        self.cup(pos + 1, s.component, s.orientation);
        self.cross(pos, positive);
        self.cap(pos + 1);
        self
    }

    pub fn kinks(&mut self, pos: usize, framing: i64) -> &mut Self {
        for _ in 0..framing.unsigned_abs() {
            self.kink(pos, framing > 0);
        }
        self
    }

    /// A closed loop of `component` around the strands at pos..pos+count, passing
    /// over them to the right and back under them. With `positive`, the loop has
    /// linking number +1 with every upward strand in the bundle. `framing` curls
    /// are put on the loop.
    pub fn encircle(&mut self, pos: usize, count: usize, component: usize, positive: bool, framing: i64) -> &mut Self {
        let left = if positive { Orientation::Down } else { Orientation::Up };
        self.cup(pos, component, left);
        self.kinks(pos, framing);
        for i in 0..count {
            self.over(pos + 1 + i);
        }
        for i in (0..count).rev() {
            self.over(pos + 1 + i);
        }
        self.cap(pos);
        self
    }

    pub fn finish(self) -> Diagram {
        self.d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::re;
    use crate::repcat::ColorLabel;

    #[test]
    fn unknot_with_kinks_is_closed() {
        let mut b = DiagramBuilder::new();
        let k = b.component("K", StrandColor::Color(ColorLabel::Valpha(re(0.3))));
        b.cup(0, k, Orientation::Up).kinks(0, 2).cap(0);
        let d = b.finish();
        assert!(d.is_closed().unwrap());
        assert_eq!(d.levels().unwrap().iter().map(|l| l.len()).max(), Some(4));
    }

    #[test]
    fn encircle_keeps_bundle() {
        let mut b = DiagramBuilder::new();
        let w = b.component("W", StrandColor::Color(ColorLabel::Valpha(re(0.3))));
        let u = b.component("U", StrandColor::Color(ColorLabel::Valpha(re(0.4))));
        b.boundary(w, Orientation::Up).boundary(w, Orientation::Down);
        b.encircle(0, 2, u, true, 0);
        let d = b.finish();
        assert_eq!(d.top().unwrap(), d.bottom);
    }
}
