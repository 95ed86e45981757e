//! Atomic pieces of piecewise-affine functions.
//!
//! An [`Element`] is either a [`Point`] (a single time-value pair) or a
//! [`Segment`] (an affine piece on an *open* interval). Sequences alternate
//! the two so that jump discontinuities and isolated values are exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{ExtendedRational, Rational};

/// A single time-value pair. The time is always finite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Point {
    pub time: Rational,
    pub value: ExtendedRational,
}

impl Point {
    pub fn new(time: impl Into<Rational>, value: impl Into<ExtendedRational>) -> Self {
        Point {
            time: time.into(),
            value: value.into(),
        }
    }
}

/// An affine piece on the open interval `]start, end[`.
///
/// The value at interior `t` is `right_limit + slope * (t - start)`. If
/// `right_limit` is infinite the segment is flat at that infinity and the
/// slope must be zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Segment {
    pub start: Rational,
    pub end: Rational,
    pub right_limit: ExtendedRational,
    pub slope: Rational,
}

impl Segment {
    pub fn new(
        start: impl Into<Rational>,
        end: impl Into<Rational>,
        right_limit: impl Into<ExtendedRational>,
        slope: impl Into<Rational>,
    ) -> Self {
        let seg = Segment {
            start: start.into(),
            end: end.into(),
            right_limit: right_limit.into(),
            slope: slope.into(),
        };
        debug_assert!(seg.start < seg.end, "empty segment support");
        debug_assert!(
            seg.right_limit.is_finite() || seg.slope.is_zero(),
            "infinite segment must be flat"
        );
        seg
    }

    pub fn validate(&self) -> Result<()> {
        if self.start >= self.end {
            return Err(Error::InvalidRepresentation(format!(
                "segment ]{}, {}[ has empty support",
                self.start, self.end
            )));
        }
        if self.right_limit.is_infinite() && !self.slope.is_zero() {
            return Err(Error::InvalidRepresentation(
                "segment with infinite value must have zero slope".into(),
            ));
        }
        Ok(())
    }

    /// Value at interior time `t` (callers guarantee `start < t < end`).
    pub fn value_at(&self, t: &Rational) -> ExtendedRational {
        debug_assert!(*t > self.start && *t < self.end);
        match &self.right_limit {
            ExtendedRational::Finite(v) => {
                ExtendedRational::Finite(v + &(&self.slope * &(t - &self.start)))
            }
            inf => inf.clone(),
        }
    }

    /// Limit of the segment value as `t` approaches `end` from the left.
    pub fn left_limit_at_end(&self) -> ExtendedRational {
        match &self.right_limit {
            ExtendedRational::Finite(v) => {
                ExtendedRational::Finite(v + &(&self.slope * &(&self.end - &self.start)))
            }
            inf => inf.clone(),
        }
    }

    /// Limit toward an arbitrary interior-or-boundary time.
    pub fn limit_at(&self, t: &Rational) -> ExtendedRational {
        match &self.right_limit {
            ExtendedRational::Finite(v) => {
                ExtendedRational::Finite(v + &(&self.slope * &(t - &self.start)))
            }
            inf => inf.clone(),
        }
    }

    /// Restriction to `]a, b[`, keeping the affine law.
    pub fn restrict(&self, a: &Rational, b: &Rational) -> Segment {
        debug_assert!(*a >= self.start && *b <= self.end && a < b);
        Segment {
            start: a.clone(),
            end: b.clone(),
            right_limit: self.limit_at(a),
            slope: self.slope.clone(),
        }
    }

    /// Shifts the support by `dt` and the values by `dv`.
    pub fn shifted(&self, dt: &Rational, dv: &Rational) -> Segment {
        Segment {
            start: &self.start + dt,
            end: &self.end + dt,
            right_limit: shift_value(&self.right_limit, dv),
            slope: self.slope.clone(),
        }
    }
}

/// Adds a finite offset to an extended value (infinities absorb).
pub(crate) fn shift_value(v: &ExtendedRational, dv: &Rational) -> ExtendedRational {
    match v {
        ExtendedRational::Finite(x) => ExtendedRational::Finite(x + dv),
        inf => inf.clone(),
    }
}

/// A point or a segment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Element {
    Point(Point),
    Segment(Segment),
}

impl Element {
    pub fn point(time: impl Into<Rational>, value: impl Into<ExtendedRational>) -> Self {
        Element::Point(Point::new(time, value))
    }

    pub fn segment(
        start: impl Into<Rational>,
        end: impl Into<Rational>,
        right_limit: impl Into<ExtendedRational>,
        slope: impl Into<Rational>,
    ) -> Self {
        Element::Segment(Segment::new(start, end, right_limit, slope))
    }

    /// Left end of the support (the time itself for a point).
    pub fn start(&self) -> &Rational {
        match self {
            Element::Point(p) => &p.time,
            Element::Segment(s) => &s.start,
        }
    }

    /// Right end of the support (the time itself for a point).
    pub fn end(&self) -> &Rational {
        match self {
            Element::Point(p) => &p.time,
            Element::Segment(s) => &s.end,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Element::Point(_))
    }

    pub fn as_segment(&self) -> Option<&Segment> {
        match self {
            Element::Segment(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<&Point> {
        match self {
            Element::Point(p) => Some(p),
            _ => None,
        }
    }

    /// Whether the support contains `t` (closed for points, open for
    /// segments).
    pub fn defined_at(&self, t: &Rational) -> bool {
        match self {
            Element::Point(p) => p.time == *t,
            Element::Segment(s) => *t > s.start && *t < s.end,
        }
    }

    pub fn value_at(&self, t: &Rational) -> ExtendedRational {
        match self {
            Element::Point(p) => p.value.clone(),
            Element::Segment(s) => s.value_at(t),
        }
    }

    pub fn shifted(&self, dt: &Rational, dv: &Rational) -> Element {
        match self {
            Element::Point(p) => Element::Point(Point {
                time: &p.time + dt,
                value: shift_value(&p.value, dv),
            }),
            Element::Segment(s) => Element::Segment(s.shifted(dt, dv)),
        }
    }

    /// Pointwise negation.
    pub fn negated(&self) -> Element {
        match self {
            Element::Point(p) => Element::Point(Point {
                time: p.time.clone(),
                value: p.value.checked_neg(),
            }),
            Element::Segment(s) => Element::Segment(Segment {
                start: s.start.clone(),
                end: s.end.clone(),
                right_limit: s.right_limit.checked_neg(),
                slope: -&s.slope,
            }),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(p) => write!(f, "({}, {})", p.time, p.value),
            Element::Segment(s) => write!(
                f,
                "]{}, {}[ from {} slope {}",
                s.start, s.end, s.right_limit, s.slope
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn segment_evaluation() {
        let s = Segment::new(3, 4, 2, 1);
        assert_eq!(s.value_at(&q(7, 2)), ExtendedRational::finite(5, 2));
        assert_eq!(s.left_limit_at_end(), ExtendedRational::integer(3));
    }

    #[test]
    fn infinite_segment_is_flat() {
        let s = Segment::new(4, 5, ExtendedRational::PlusInfinity, 0);
        assert_eq!(s.value_at(&q(9, 2)), ExtendedRational::PlusInfinity);
        assert!(Segment {
            start: q(0, 1),
            end: q(1, 1),
            right_limit: ExtendedRational::PlusInfinity,
            slope: q(1, 1),
        }
        .validate()
        .is_err());
    }

    #[test]
    fn shift_moves_support_and_values() {
        let e = Element::segment(0, 2, 0, 1);
        let shifted = e.shifted(&q(2, 1), &q(1, 1));
        assert_eq!(shifted, Element::segment(2, 4, 1, 1));
    }
}
