//! Piecewise-affine functions on a bounded, left-closed right-open domain.
//!
//! A [`Sequence`] is an ordered list of elements whose supports partition
//! `[a, b[` exactly: it starts with the point at `a`, alternates points and
//! segments (a point at every boundary between adjacent segments), and ends
//! with a segment reaching `b`.

use crate::element::{Element, Point, Segment};
use crate::error::{Error, Result};
use crate::rational::{ExtendedRational, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sequence {
    elements: Vec<Element>,
}

impl Sequence {
    /// Builds a sequence after checking the structural invariants.
    pub fn new(elements: Vec<Element>) -> Result<Self> {
        let seq = Sequence { elements };
        seq.validate()?;
        Ok(seq)
    }

    fn validate(&self) -> Result<()> {
        if self.elements.len() < 2 {
            return Err(Error::InvalidRepresentation(
                "sequence needs at least a point and a segment".into(),
            ));
        }
        for (i, el) in self.elements.iter().enumerate() {
            let expect_point = i % 2 == 0;
            if el.is_point() != expect_point {
                return Err(Error::InvalidRepresentation(format!(
                    "element {i} breaks point/segment alternation"
                )));
            }
            if let Element::Segment(s) = el {
                s.validate()?;
            }
        }
        if self.elements.len() % 2 != 0 {
            return Err(Error::InvalidRepresentation(
                "sequence must end with a segment".into(),
            ));
        }
        for pair in self.elements.windows(2) {
            if pair[0].end() != pair[1].start() {
                return Err(Error::InvalidRepresentation(format!(
                    "gap between {} and {}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Element> {
        self.elements
    }

    pub fn defined_from(&self) -> &Rational {
        self.elements[0].start()
    }

    pub fn defined_until(&self) -> &Rational {
        self.elements[self.elements.len() - 1].end()
    }

    fn domain_str(&self) -> String {
        format!("[{}, {}[", self.defined_from(), self.defined_until())
    }

    /// Exact value at `t` in `[a, b[`.
    pub fn value_at(&self, t: &Rational) -> Result<ExtendedRational> {
        if t < self.defined_from() || t >= self.defined_until() {
            return Err(Error::out_of_domain(t, self.domain_str()));
        }
        for el in &self.elements {
            if el.defined_at(t) {
                return Ok(el.value_at(t));
            }
        }
        Err(Error::Internal(format!("no element covers {t}")))
    }

    /// Limit from the left at `t` in `]a, b]`.
    pub fn left_limit_at(&self, t: &Rational) -> Result<ExtendedRational> {
        if t <= self.defined_from() || t > self.defined_until() {
            return Err(Error::out_of_domain(t, self.domain_str()));
        }
        for el in &self.elements {
            if let Element::Segment(s) = el {
                if *t > s.start && *t <= s.end {
                    return Ok(s.limit_at(t));
                }
            }
        }
        Err(Error::Internal(format!("no segment left of {t}")))
    }

    /// Limit from the right at `t` in `[a, b[`.
    pub fn right_limit_at(&self, t: &Rational) -> Result<ExtendedRational> {
        if t < self.defined_from() || t >= self.defined_until() {
            return Err(Error::out_of_domain(t, self.domain_str()));
        }
        for el in &self.elements {
            if let Element::Segment(s) = el {
                if *t >= s.start && *t < s.end {
                    return Ok(s.limit_at(t));
                }
            }
        }
        Err(Error::Internal(format!("no segment right of {t}")))
    }

    /// Times of the interior points (domain endpoints excluded).
    pub fn interior_point_times(&self) -> Vec<Rational> {
        self.elements
            .iter()
            .skip(2)
            .step_by(2)
            .map(|el| el.start().clone())
            .collect()
    }

    /// All point times, including the domain start.
    pub fn point_times(&self) -> Vec<Rational> {
        self.elements
            .iter()
            .step_by(2)
            .map(|el| el.start().clone())
            .collect()
    }

    pub fn shifted(&self, dt: &Rational, dv: &Rational) -> Sequence {
        Sequence {
            elements: self.elements.iter().map(|el| el.shifted(dt, dv)).collect(),
        }
    }

    pub fn negated(&self) -> Sequence {
        Sequence {
            elements: self.elements.iter().map(Element::negated).collect(),
        }
    }

    /// Restriction to `[a, b[`.
    pub fn cut(&self, a: &Rational, b: &Rational) -> Result<Sequence> {
        if a >= b {
            return Err(Error::InvalidArgument(format!(
                "cut needs a < b, got [{a}, {b}["
            )));
        }
        if a < self.defined_from() || b > self.defined_until() {
            return Err(Error::out_of_domain(
                format!("[{a}, {b}["),
                self.domain_str(),
            ));
        }
        let mut out: Vec<Element> = Vec::new();
        out.push(Element::Point(Point {
            time: a.clone(),
            value: self.value_at(a)?,
        }));
        for el in &self.elements {
            match el {
                Element::Point(p) => {
                    if p.time > *a && p.time < *b {
                        out.push(el.clone());
                    }
                }
                Element::Segment(s) => {
                    let lo = if s.start < *a { a } else { &s.start };
                    let hi = if s.end > *b { b } else { &s.end };
                    if lo < hi {
                        out.push(Element::Segment(s.restrict(lo, hi)));
                    }
                }
            }
        }
        Sequence::new(out).map(|s| s.canonicalized())
    }

    /// Merges colinear neighbours; the result is the unique pointwise-equal
    /// sequence with the fewest elements on the same domain.
    pub fn canonicalized(&self) -> Sequence {
        let mut out: Vec<Element> = Vec::with_capacity(self.elements.len());
        for el in &self.elements {
            if let Element::Segment(s2) = el {
                let n = out.len();
                if n >= 2 {
                    let mergeable = {
                        let (p, s1) = match (&out[n - 1], &out[n - 2]) {
                            (Element::Point(p), Element::Segment(s1)) => (p, s1),
                            _ => {
                                out.push(el.clone());
                                continue;
                            }
                        };
                        let joins = s1.left_limit_at_end() == p.value
                            && p.value == s2.right_limit;
                        let colinear = if s2.right_limit.is_infinite() {
                            true // both flat at the same infinity
                        } else {
                            s1.slope == s2.slope
                        };
                        joins && colinear
                    };
                    if mergeable {
                        out.pop();
                        let s1 = match out.pop() {
                            Some(Element::Segment(s)) => s,
                            _ => unreachable!(),
                        };
                        out.push(Element::Segment(Segment {
                            start: s1.start,
                            end: s2.end.clone(),
                            right_limit: s1.right_limit,
                            slope: s1.slope,
                        }));
                        continue;
                    }
                }
            }
            out.push(el.clone());
        }
        Sequence { elements: out }
    }

    /// Pointwise equality on a shared domain (via canonical forms).
    pub fn equals_pointwise(&self, other: &Sequence) -> bool {
        self.canonicalized() == other.canonicalized()
    }

    /// Supremum of the sequence values, one-sided limits included.
    pub fn sup(&self) -> ExtendedRational {
        let mut best = ExtendedRational::MinusInfinity;
        for el in &self.elements {
            let candidate = match el {
                Element::Point(p) => p.value.clone(),
                Element::Segment(s) => s.right_limit.clone().max(s.left_limit_at_end()),
            };
            best = best.max(candidate);
        }
        best
    }

    /// Infimum of the sequence values, one-sided limits included.
    pub fn inf(&self) -> ExtendedRational {
        let mut best = ExtendedRational::PlusInfinity;
        for el in &self.elements {
            let candidate = match el {
                Element::Point(p) => p.value.clone(),
                Element::Segment(s) => s.right_limit.clone().min(s.left_limit_at_end()),
            };
            best = best.min(candidate);
        }
        best
    }

    /// Scan for monotonicity: every step (jump or slope) is non-decreasing.
    pub fn is_non_decreasing(&self) -> bool {
        for pair in self.elements.windows(2) {
            let ok = match (&pair[0], &pair[1]) {
                (Element::Point(p), Element::Segment(s)) => {
                    p.value <= s.right_limit && (s.right_limit.is_infinite() || !s.slope.is_negative())
                }
                (Element::Segment(s), Element::Point(p)) => s.left_limit_at_end() <= p.value,
                _ => unreachable!("alternation"),
            };
            if !ok {
                return false;
            }
        }
        if let Element::Segment(s) = &self.elements[self.elements.len() - 1] {
            if s.right_limit.is_finite() && s.slope.is_negative() {
                return false;
            }
        }
        true
    }

    pub fn has_plus_infinite_values(&self) -> bool {
        self.elements.iter().any(|el| match el {
            Element::Point(p) => p.value.is_plus_infinity(),
            Element::Segment(s) => s.right_limit.is_plus_infinity(),
        })
    }

    pub fn has_minus_infinite_values(&self) -> bool {
        self.elements.iter().any(|el| match el {
            Element::Point(p) => p.value.is_minus_infinity(),
            Element::Segment(s) => s.right_limit.is_minus_infinity(),
        })
    }

    /// Pointwise combination helpers.
    pub fn pointwise_add(&self, other: &Sequence) -> Result<Sequence> {
        zip_pointwise(self, other, &mut |piece| piece.add())
    }

    pub fn pointwise_min(&self, other: &Sequence) -> Result<Sequence> {
        zip_pointwise(self, other, &mut |piece| Ok(piece.min_max(true)))
    }

    pub fn pointwise_max(&self, other: &Sequence) -> Result<Sequence> {
        zip_pointwise(self, other, &mut |piece| Ok(piece.min_max(false)))
    }

    /// `self <= other` pointwise over the shared domain.
    pub fn le_pointwise(&self, other: &Sequence) -> Result<bool> {
        let min = self.pointwise_min(other)?;
        Ok(min.equals_pointwise(&self.canonicalized()))
    }
}

/// One aligned strip of two sequences over the same sub-support.
struct AlignedPiece<'a> {
    at: AlignedAt<'a>,
}

enum AlignedAt<'a> {
    Point(Rational, ExtendedRational, ExtendedRational),
    Span(Rational, Rational, &'a Segment, &'a Segment),
}

impl AlignedPiece<'_> {
    fn add(&self) -> Result<Vec<Element>> {
        match &self.at {
            AlignedAt::Point(t, va, vb) => Ok(vec![Element::Point(Point {
                time: t.clone(),
                value: va.checked_add(vb)?,
            })]),
            AlignedAt::Span(lo, hi, sa, sb) => {
                let ra = sa.limit_at(lo);
                let rb = sb.limit_at(lo);
                let rl = ra.checked_add(&rb)?;
                let slope = if rl.is_infinite() {
                    Rational::zero()
                } else {
                    &sa.slope + &sb.slope
                };
                Ok(vec![Element::Segment(Segment {
                    start: lo.clone(),
                    end: hi.clone(),
                    right_limit: rl,
                    slope,
                })])
            }
        }
    }

    fn min_max(&self, take_min: bool) -> Vec<Element> {
        match &self.at {
            AlignedAt::Point(t, va, vb) => {
                let v = if take_min {
                    va.clone().min(vb.clone())
                } else {
                    va.clone().max(vb.clone())
                };
                vec![Element::Point(Point {
                    time: t.clone(),
                    value: v,
                })]
            }
            AlignedAt::Span(lo, hi, sa, sb) => {
                let a = sa.restrict(lo, hi);
                let b = sb.restrict(lo, hi);
                envelope_of_two(&a, &b, take_min)
            }
        }
    }
}

/// Lower (or upper) envelope of two segments on the same open interval.
fn envelope_of_two(a: &Segment, b: &Segment, take_min: bool) -> Vec<Element> {
    let pick =
        |x: &Segment, y: &Segment, x_lower: bool| if x_lower == take_min { x.clone() } else { y.clone() };
    match (&a.right_limit, &b.right_limit) {
        (ExtendedRational::Finite(va), ExtendedRational::Finite(vb)) => {
            let d0 = va.clone() - vb.clone();
            let dslope = &a.slope - &b.slope;
            if d0.is_zero() && dslope.is_zero() {
                return vec![Element::Segment(a.clone())];
            }
            // a - b = d0 + dslope * (t - start): find an interior root.
            let crossing = if dslope.is_zero() {
                None
            } else {
                let x = &a.start + &(&(-&d0) / &dslope);
                if x > a.start && x < a.end {
                    Some(x)
                } else {
                    None
                }
            };
            match crossing {
                None => {
                    // No interior sign change: order decided at the midpoint.
                    let mid = (&a.start + &a.end) * Rational::new(1, 2);
                    let a_lower = a.limit_at(&mid) <= b.limit_at(&mid);
                    vec![Element::Segment(pick(a, b, a_lower))]
                }
                Some(x) => {
                    let a_lower_first = if d0.is_zero() {
                        // Same start limit: smaller slope is below just after.
                        a.slope < b.slope
                    } else {
                        d0.is_negative()
                    };
                    let first = pick(a, b, a_lower_first);
                    let second = pick(a, b, !a_lower_first);
                    let meet = first.limit_at(&x);
                    vec![
                        Element::Segment(first.restrict(&first.start.clone(), &x)),
                        Element::Point(Point {
                            time: x.clone(),
                            value: meet,
                        }),
                        Element::Segment(second.restrict(&x, &second.end.clone())),
                    ]
                }
            }
        }
        (va, vb) => {
            // At least one infinite flat: no crossing possible.
            let a_lower = va <= vb;
            vec![Element::Segment(pick(a, b, a_lower))]
        }
    }
}

/// Walks two sequences over their common domain and maps aligned pieces.
fn zip_pointwise(
    a: &Sequence,
    b: &Sequence,
    f: &mut dyn FnMut(&AlignedPiece) -> Result<Vec<Element>>,
) -> Result<Sequence> {
    if a.defined_from() != b.defined_from() || a.defined_until() != b.defined_until() {
        return Err(Error::InvalidArgument(format!(
            "domain mismatch: {} vs {}",
            a.domain_str(),
            b.domain_str()
        )));
    }
    // Merged boundary times.
    let mut times: Vec<Rational> = a.point_times();
    times.extend(b.point_times());
    times.push(a.defined_until().clone());
    times.sort();
    times.dedup();

    let mut out: Vec<Element> = Vec::new();
    for w in times.windows(2) {
        let (t0, t1) = (&w[0], &w[1]);
        let va = a.value_at(t0)?;
        let vb = b.value_at(t0)?;
        out.extend(f(&AlignedPiece {
            at: AlignedAt::Point(t0.clone(), va, vb),
        })?);
        let sa = segment_over(a, t0, t1)?;
        let sb = segment_over(b, t0, t1)?;
        out.extend(f(&AlignedPiece {
            at: AlignedAt::Span(t0.clone(), t1.clone(), sa, sb),
        })?);
    }
    Ok(Sequence::new(out)?.canonicalized())
}

/// The unique segment of `s` spanning `]t0, t1[` (boundaries are merged
/// point times, so one segment covers the strip).
fn segment_over<'a>(s: &'a Sequence, t0: &Rational, t1: &Rational) -> Result<&'a Segment> {
    for el in s.elements() {
        if let Element::Segment(seg) = el {
            if seg.start <= *t0 && seg.end >= *t1 {
                return Ok(seg);
            }
        }
    }
    Err(Error::Internal(format!("no segment over ]{t0}, {t1}[")))
}

/// Convenience constructor used throughout the crate and in tests: a
/// sequence made of a flat-or-sloped run of (point, segment) pairs.
pub fn constant_sequence(
    from: &Rational,
    until: &Rational,
    value: &ExtendedRational,
) -> Sequence {
    Sequence::new(vec![
        Element::Point(Point {
            time: from.clone(),
            value: value.clone(),
        }),
        Element::Segment(Segment {
            start: from.clone(),
            end: until.clone(),
            right_limit: value.clone(),
            slope: Rational::zero(),
        }),
    ])
    .expect("constant sequence is structurally valid")
}

impl std::fmt::Display for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, el) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{el}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn listing_one_base() -> Sequence {
        Sequence::new(vec![
            Element::point(0, 0),
            Element::segment(0, 2, 0, 1),
            Element::point(2, 2),
            Element::segment(2, 3, 2, 0),
            Element::point(3, 2),
            Element::segment(3, 4, 2, 1),
        ])
        .unwrap()
    }

    #[test]
    fn validates_alternation() {
        assert!(Sequence::new(vec![
            Element::segment(0, 1, 0, 0),
            Element::point(1, 0)
        ])
        .is_err());
        assert!(Sequence::new(vec![
            Element::point(0, 0),
            Element::segment(0, 1, 0, 0),
            Element::segment(1, 2, 0, 0),
        ])
        .is_err());
        assert!(Sequence::new(vec![
            Element::point(0, 0),
            Element::segment(1, 2, 0, 0),
        ])
        .is_err());
    }

    #[test]
    fn values_and_limits() {
        let s = listing_one_base();
        assert_eq!(s.value_at(&q(7, 2)).unwrap(), ExtendedRational::finite(5, 2));
        assert_eq!(s.left_limit_at(&q(2, 1)).unwrap(), ExtendedRational::integer(2));
        assert_eq!(s.right_limit_at(&q(2, 1)).unwrap(), ExtendedRational::integer(2));
        assert!(s.value_at(&q(4, 1)).is_err());
        assert!(s.value_at(&q(-1, 1)).is_err());
    }

    #[test]
    fn colinear_merge() {
        let s = Sequence::new(vec![
            Element::point(0, 0),
            Element::segment(0, 1, 0, 1),
            Element::point(1, 1),
            Element::segment(1, 2, 1, 1),
        ])
        .unwrap();
        let c = s.canonicalized();
        assert_eq!(
            c.elements(),
            &[Element::point(0, 0), Element::segment(0, 2, 0, 1)]
        );
        // A genuine breakpoint stays.
        let s2 = listing_one_base().canonicalized();
        assert_eq!(s2.elements().len(), 6);
    }

    #[test]
    fn cut_splits_segments() {
        let s = listing_one_base();
        let c = s.cut(&q(1, 1), &q(5, 2)).unwrap();
        assert_eq!(c.defined_from(), &q(1, 1));
        assert_eq!(c.defined_until(), &q(5, 2));
        assert_eq!(c.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(1));
        assert_eq!(c.value_at(&q(2, 1)).unwrap(), ExtendedRational::integer(2));
    }

    #[test]
    fn pointwise_min_finds_crossings() {
        // f = t on ]0,4[, g = 4 - t on ]0,4[ -> min crosses at t = 2.
        let f = Sequence::new(vec![Element::point(0, 0), Element::segment(0, 4, 0, 1)]).unwrap();
        let g = Sequence::new(vec![Element::point(0, 4), Element::segment(0, 4, 4, -1)]).unwrap();
        let min = f.pointwise_min(&g).unwrap();
        assert_eq!(min.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(1));
        assert_eq!(min.value_at(&q(2, 1)).unwrap(), ExtendedRational::integer(2));
        assert_eq!(min.value_at(&q(3, 1)).unwrap(), ExtendedRational::integer(1));
        let max = f.pointwise_max(&g).unwrap();
        assert_eq!(max.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(3));
        assert_eq!(max.value_at(&q(3, 1)).unwrap(), ExtendedRational::integer(3));
    }

    #[test]
    fn pointwise_add_handles_infinities() {
        let f = constant_sequence(&q(0, 1), &q(2, 1), &ExtendedRational::PlusInfinity);
        let g = constant_sequence(&q(0, 1), &q(2, 1), &ExtendedRational::integer(3));
        let sum = f.pointwise_add(&g).unwrap();
        assert_eq!(sum.value_at(&q(1, 1)).unwrap(), ExtendedRational::PlusInfinity);
        let h = constant_sequence(&q(0, 1), &q(2, 1), &ExtendedRational::MinusInfinity);
        assert!(f.pointwise_add(&h).is_err());
    }

    #[test]
    fn sup_inf_take_limits() {
        let s = listing_one_base();
        assert_eq!(s.sup(), ExtendedRational::integer(3)); // left limit at 4
        assert_eq!(s.inf(), ExtendedRational::integer(0));
    }

    #[test]
    fn monotonicity_scan() {
        assert!(listing_one_base().is_non_decreasing());
        let dip = Sequence::new(vec![Element::point(0, 0), Element::segment(0, 1, 0, -1)]).unwrap();
        assert!(!dip.is_non_decreasing());
        let jump_down = Sequence::new(vec![
            Element::point(0, 5),
            Element::segment(0, 1, 1, 0),
        ])
        .unwrap();
        assert!(!jump_down.is_non_decreasing());
    }
}
