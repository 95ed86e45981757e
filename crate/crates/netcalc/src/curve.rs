//! Ultimately pseudo-periodic curves.
//!
//! A [`Curve`] represents a total function on `[0, +inf[` as a base
//! sequence on `[0, T+d[` plus the pseudo-period start `T`, length `d` and
//! height `c`: beyond the base, `f(t + k*d) = f(t) + k*c` for `t >= T`.
//!
//! Ultimately infinite functions (the pure delay `delta_theta` needs them)
//! are encoded with a flat infinite period and `c = 0`, which keeps the
//! pseudo-periodic law exact. The period height itself is always finite.

use num_bigint::BigInt;

use crate::element::{shift_value, Element, Point, Segment};
use crate::error::{Error, Result};
use crate::rational::{rational_lcm, ExtendedRational, Rational};
use crate::sequence::Sequence;

/// Classification tag driving fast-path dispatch and compact serialization.
///
/// Tags are dropped conservatively: an operation keeps a family tag only
/// when it provably preserves the family.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub enum CurveFamily {
    #[default]
    Generic,
    RateLatency {
        rate: Rational,
        latency: Rational,
    },
    SigmaRho {
        sigma: Rational,
        rho: Rational,
    },
    Delay {
        theta: Rational,
    },
    Stair {
        height: Rational,
        width: Rational,
    },
    Constant {
        level: ExtendedRational,
    },
    FlowControl {
        rate: Rational,
        latency: Rational,
        window: Rational,
    },
}

/// Whether the pseudo-periodic part is finite or pinned at an infinity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TailKind {
    Finite,
    PlusInfinite,
    MinusInfinite,
}

/// Exact property flags over the whole domain `[0, +inf[`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PropertyFlags {
    pub is_continuous: bool,
    pub is_left_continuous: bool,
    pub is_right_continuous: bool,
    pub is_non_decreasing: bool,
    pub is_non_negative: bool,
    pub is_concave: bool,
    pub is_convex: bool,
    pub is_sub_additive: bool,
    pub is_super_additive: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve {
    base: Sequence,
    period_start: Rational,
    period_length: Rational,
    period_height: Rational,
    family: CurveFamily,
}

impl Curve {
    /// Builds a curve and checks every representation invariant.
    pub fn new(
        base: Sequence,
        period_start: impl Into<Rational>,
        period_length: impl Into<Rational>,
        period_height: impl Into<Rational>,
    ) -> Result<Self> {
        Curve::with_family(
            base,
            period_start.into(),
            period_length.into(),
            period_height.into(),
            CurveFamily::Generic,
        )
    }

    pub fn with_family(
        base: Sequence,
        period_start: Rational,
        period_length: Rational,
        period_height: Rational,
        family: CurveFamily,
    ) -> Result<Self> {
        if period_start.is_negative() {
            return Err(Error::InvalidRepresentation(format!(
                "pseudo-period start {period_start} is negative"
            )));
        }
        if !period_length.is_positive() {
            return Err(Error::InvalidRepresentation(format!(
                "pseudo-period length {period_length} must be positive"
            )));
        }
        if !base.defined_from().is_zero() {
            return Err(Error::InvalidRepresentation(
                "base sequence must start at 0".into(),
            ));
        }
        let expected_end = &period_start + &period_length;
        if *base.defined_until() != expected_end {
            return Err(Error::InvalidRepresentation(format!(
                "base sequence ends at {} instead of T + d = {}",
                base.defined_until(),
                expected_end
            )));
        }
        let curve = Curve {
            base,
            period_start,
            period_length,
            period_height,
            family,
        };
        curve.check_period_infinities()?;
        Ok(curve)
    }

    /// The period window may either be finite everywhere or pinned at one
    /// infinity everywhere (with zero height), so the pseudo-periodic law
    /// stays exact.
    fn check_period_infinities(&self) -> Result<()> {
        let end = base_end_owned(&self.period_start, &self.period_length);
        let window = self.base.cut(&self.period_start, &end)?;
        let has_plus = window.has_plus_infinite_values();
        let has_minus = window.has_minus_infinite_values();
        if has_plus && has_minus {
            return Err(Error::InvalidRepresentation(
                "pseudo-period mixes +inf and -inf values".into(),
            ));
        }
        if has_plus || has_minus {
            let uniform = window.elements().iter().all(|el| match el {
                Element::Point(p) => p.value.is_infinite(),
                Element::Segment(s) => s.right_limit.is_infinite(),
            });
            if !uniform {
                return Err(Error::InvalidRepresentation(
                    "pseudo-period with an infinite value must be infinite everywhere".into(),
                ));
            }
            if !self.period_height.is_zero() {
                return Err(Error::InvalidRepresentation(
                    "infinite pseudo-period requires height 0".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn base_sequence(&self) -> &Sequence {
        &self.base
    }

    pub fn period_start(&self) -> &Rational {
        &self.period_start
    }

    pub fn period_length(&self) -> &Rational {
        &self.period_length
    }

    pub fn period_height(&self) -> &Rational {
        &self.period_height
    }

    pub fn family(&self) -> &CurveFamily {
        &self.family
    }

    pub fn with_family_tag(mut self, family: CurveFamily) -> Curve {
        self.family = family;
        self
    }

    /// Drops the family tag (used by operations that do not preserve it).
    pub fn untagged(mut self) -> Curve {
        self.family = CurveFamily::Generic;
        self
    }

    pub fn tail_kind(&self) -> TailKind {
        // The period window is uniform by invariant; its first value decides.
        match self.base.value_at(&self.period_start) {
            Ok(ExtendedRational::PlusInfinity) => TailKind::PlusInfinite,
            Ok(ExtendedRational::MinusInfinity) => TailKind::MinusInfinite,
            _ => TailKind::Finite,
        }
    }

    pub fn has_plus_infinite_values(&self) -> bool {
        self.base.has_plus_infinite_values()
    }

    pub fn has_minus_infinite_values(&self) -> bool {
        self.base.has_minus_infinite_values()
    }

    /// Asymptotic growth rate `c / d`; by convention `+inf` for ultimately
    /// plus-infinite curves and `-inf` for ultimately minus-infinite ones.
    pub fn asymptotic_rate(&self) -> ExtendedRational {
        match self.tail_kind() {
            TailKind::PlusInfinite => ExtendedRational::PlusInfinity,
            TailKind::MinusInfinite => ExtendedRational::MinusInfinity,
            TailKind::Finite => {
                ExtendedRational::Finite(&self.period_height / &self.period_length)
            }
        }
    }

    /// Exact value at any `t >= 0`.
    pub fn value_at(&self, t: &Rational) -> Result<ExtendedRational> {
        if t.is_negative() {
            return Err(Error::out_of_domain(t, "[0, +inf["));
        }
        let end = base_end_owned(&self.period_start, &self.period_length);
        if *t < end {
            return self.base.value_at(t);
        }
        let k = (&(t - &self.period_start)).floor_div(&self.period_length);
        let offset = &self.period_length * &big_to_rational(&k);
        let reduced = t - &offset;
        let bump = &self.period_height * &big_to_rational(&k);
        Ok(shift_value(&self.base.value_at(&reduced)?, &bump))
    }

    /// Limit from the left at `t > 0`.
    pub fn left_limit_at(&self, t: &Rational) -> Result<ExtendedRational> {
        if !t.is_positive() {
            return Err(Error::out_of_domain(t, "]0, +inf["));
        }
        let end = base_end_owned(&self.period_start, &self.period_length);
        if *t <= end {
            return self.base.left_limit_at(t);
        }
        // Reduce into ]T, T+d] so the base still holds the left limit.
        let steps = (t - &self.period_start).checked_div(&self.period_length)?;
        let mut k = steps.floor_div(&Rational::one());
        if steps.is_integer() {
            k -= 1;
        }
        let offset = &self.period_length * &big_to_rational(&k);
        let reduced = t - &offset;
        let bump = &self.period_height * &big_to_rational(&k);
        Ok(shift_value(&self.base.left_limit_at(&reduced)?, &bump))
    }

    /// Limit from the right at `t >= 0`.
    pub fn right_limit_at(&self, t: &Rational) -> Result<ExtendedRational> {
        if t.is_negative() {
            return Err(Error::out_of_domain(t, "[0, +inf["));
        }
        let end = base_end_owned(&self.period_start, &self.period_length);
        if *t < end {
            return self.base.right_limit_at(t);
        }
        let k = (&(t - &self.period_start)).floor_div(&self.period_length);
        let offset = &self.period_length * &big_to_rational(&k);
        let reduced = t - &offset;
        let bump = &self.period_height * &big_to_rational(&k);
        Ok(shift_value(&self.base.right_limit_at(&reduced)?, &bump))
    }

    /// Mechanical unrolling of the pseudo-period into `[0, horizon[`.
    pub fn extend_to(&self, horizon: &Rational) -> Result<Sequence> {
        if !horizon.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "extension horizon {horizon} must be positive"
            )));
        }
        let end = base_end_owned(&self.period_start, &self.period_length);
        if *horizon <= end {
            return self.base.cut(&Rational::zero(), horizon);
        }
        let window = self.base.cut(&self.period_start, &end)?;
        let mut elements: Vec<Element> = self.base.elements().to_vec();
        let mut k: i64 = 1;
        loop {
            let dt = &self.period_length * &Rational::integer(k);
            let dv = &self.period_height * &Rational::integer(k);
            let copy_start = &self.period_start + &dt;
            if copy_start >= *horizon {
                break;
            }
            for el in window.elements() {
                elements.push(el.shifted(&dt, &dv));
            }
            k += 1;
        }
        Sequence::new(elements)?.cut(&Rational::zero(), horizon)
    }

    /// Restriction of the curve to `[a, b[`.
    pub fn cut(&self, a: &Rational, b: &Rational) -> Result<Sequence> {
        if a.is_negative() {
            return Err(Error::InvalidArgument(format!("cut start {a} is negative")));
        }
        if a >= b {
            return Err(Error::InvalidArgument(format!(
                "cut needs a < b, got [{a}, {b}["
            )));
        }
        self.extend_to(b)?.cut(a, b)
    }

    /// `g(t) = f(t - theta)` with `g = 0` on `[0, theta[`.
    pub fn delay_by(&self, theta: &Rational) -> Result<Curve> {
        if theta.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "delay {theta} must be non-negative"
            )));
        }
        if theta.is_zero() {
            return Ok(self.clone());
        }
        let mut elements = vec![
            Element::Point(Point {
                time: Rational::zero(),
                value: ExtendedRational::zero(),
            }),
            Element::Segment(Segment {
                start: Rational::zero(),
                end: theta.clone(),
                right_limit: ExtendedRational::zero(),
                slope: Rational::zero(),
            }),
        ];
        elements.extend(
            self.base
                .shifted(theta, &Rational::zero())
                .into_elements(),
        );
        Curve::new(
            Sequence::new(elements)?.canonicalized(),
            &self.period_start + theta,
            self.period_length.clone(),
            self.period_height.clone(),
        )
    }

    /// `g(t) = f(t + theta)`.
    pub fn anticipate_by(&self, theta: &Rational) -> Result<Curve> {
        if theta.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "anticipation {theta} must be non-negative"
            )));
        }
        if theta.is_zero() {
            return Ok(self.clone());
        }
        let new_start = (&self.period_start - theta).max(Rational::zero());
        let new_end = &new_start + &self.period_length;
        let window = self.cut(theta, &(&new_end + theta))?;
        let base = window.shifted(&-theta, &Rational::zero());
        Curve::new(
            base,
            new_start,
            self.period_length.clone(),
            self.period_height.clone(),
        )
    }

    /// `g(t) = f(t) + v`.
    pub fn vertical_shift(&self, v: &Rational) -> Curve {
        let base = self.base.shifted(&Rational::zero(), v);
        Curve {
            base,
            period_start: self.period_start.clone(),
            period_length: self.period_length.clone(),
            period_height: self.period_height.clone(),
            family: CurveFamily::Generic,
        }
    }

    /// True iff `self(t) = other(t)` for all `t >= 0`.
    pub fn equivalent(&self, other: &Curve) -> bool {
        if self.asymptotic_rate() != other.asymptotic_rate() {
            return false;
        }
        let ell = match rational_lcm(&self.period_length, &other.period_length) {
            Ok(l) => l,
            Err(_) => return false,
        };
        let t0 = self.period_start.clone().max(other.period_start.clone());
        let horizon = &t0 + &(&ell * &Rational::integer(2));
        let horizon = horizon.max(Rational::one());
        match (self.extend_to(&horizon), other.extend_to(&horizon)) {
            (Ok(a), Ok(b)) => a.equals_pointwise(&b),
            _ => false,
        }
    }

    /// Envelope bounds of `f(t) - rate * t` over one period window,
    /// one-sided limits included. Finite tails only.
    pub(crate) fn period_oscillation(&self) -> Result<(Rational, Rational)> {
        let rate = self
            .asymptotic_rate()
            .expect_finite("oscillation of an infinite tail")?;
        let end = base_end_owned(&self.period_start, &self.period_length);
        let window = self.base.cut(&self.period_start, &end)?;
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        let mut feed = |v: &ExtendedRational, t: &Rational| -> Result<()> {
            let v = v.expect_finite("finite tail value")?;
            let adjusted = &v - &(&rate * t);
            lo = Some(match lo.take() {
                Some(cur) => cur.min(adjusted.clone()),
                None => adjusted.clone(),
            });
            hi = Some(match hi.take() {
                Some(cur) => cur.max(adjusted),
                None => adjusted,
            });
            Ok(())
        };
        for el in window.elements() {
            match el {
                Element::Point(p) => feed(&p.value, &p.time)?,
                Element::Segment(s) => {
                    feed(&s.right_limit, &s.start)?;
                    feed(&s.left_limit_at_end(), &s.end)?;
                }
            }
        }
        Ok((lo.unwrap(), hi.unwrap()))
    }

    /// Representation minimization: minimal pseudo-period length, then
    /// minimal breakpoint-aligned period start, then a canonical base.
    pub fn minimize(&self) -> Curve {
        self.try_minimize()
            .expect("minimization of a valid curve cannot fail")
    }

    fn try_minimize(&self) -> Result<Curve> {
        match self.tail_kind() {
            TailKind::Finite => self.minimize_finite(),
            TailKind::PlusInfinite => self.minimize_infinite(true),
            TailKind::MinusInfinite => self.minimize_infinite(false),
        }
    }

    /// Canonical form for ultimately infinite curves: period length 1 and
    /// the period start one unit after the last finite element.
    fn minimize_infinite(&self, plus: bool) -> Result<Curve> {
        let base = self.base.canonicalized();
        let is_inf = |el: &Element| -> bool {
            let v = match el {
                Element::Point(p) => &p.value,
                Element::Segment(s) => &s.right_limit,
            };
            if plus {
                v.is_plus_infinity()
            } else {
                v.is_minus_infinity()
            }
        };
        // Maximal all-infinite suffix run of the base.
        let elements = base.elements();
        let mut run_start_idx = elements.len();
        while run_start_idx > 0 && is_inf(&elements[run_start_idx - 1]) {
            run_start_idx -= 1;
        }
        let new_start = if run_start_idx == 0 {
            Rational::zero()
        } else {
            let boundary = elements[run_start_idx].start().clone();
            if elements[run_start_idx].is_point() {
                // The run opens with an infinite point: T = boundary works.
                boundary
            } else {
                // The point at the boundary is finite; any T > boundary is
                // valid, none is minimal. Convention: one unit after.
                &boundary + &Rational::one()
            }
        };
        let new_end = &new_start + &Rational::one();
        let new_base = self.extend_to(&new_end)?;
        Curve::with_family(
            new_base.canonicalized(),
            new_start,
            Rational::one(),
            Rational::zero(),
            self.family.clone(),
        )
    }

    fn minimize_finite(&self) -> Result<Curve> {
        let t = &self.period_start;
        let d = &self.period_length;
        let c = &self.period_height;
        let three_d = d * &Rational::integer(3);
        let horizon = &(t + &three_d) + &Rational::one();
        let ext = self.extend_to(&horizon)?;

        // Genuine breakpoints of the canonical extension.
        let breakpoints = ext.interior_point_times();
        let first_genuine_in_tail = breakpoints.iter().find(|b| **b >= *t).cloned();

        let (d_star, c_star, anchor) = match first_genuine_in_tail {
            None => {
                // Breakpoint-free tail: the function is affine beyond T.
                let slope = tail_slope(&ext, t)?;
                (Rational::one(), slope, t.clone())
            }
            Some(b0) if &b0 <= &(t + d) => {
                let mut candidates: Vec<Rational> = breakpoints
                    .iter()
                    .filter(|b| **b > b0 && **b <= &b0 + d)
                    .map(|b| b - &b0)
                    .filter(|p| d.exact_int_ratio(p).is_some())
                    .collect();
                candidates.push(d.clone());
                candidates.sort();
                candidates.dedup();
                let mut chosen = (d.clone(), c.clone());
                for p in candidates {
                    let cp = &(c * &p) / d;
                    if period_holds(&ext, &b0, d, &p, &cp)? {
                        chosen = (p, cp);
                        break;
                    }
                }
                (chosen.0, chosen.1, t.clone())
            }
            Some(_) => {
                // Unreachable for valid curves: a genuine breakpoint beyond
                // T + d implies one inside [T, T+d] by periodicity.
                (d.clone(), c.clone(), t.clone())
            }
        };

        // Walk the period start left over breakpoints while the law holds.
        let mut t_star = anchor;
        let mut lefts: Vec<Rational> = ext
            .point_times()
            .into_iter()
            .filter(|b| *b < t_star)
            .collect();
        lefts.sort();
        while let Some(candidate) = lefts.pop() {
            if shift_law_holds(&ext, &candidate, &t_star, &d_star, &c_star)? {
                t_star = candidate;
            } else {
                break;
            }
        }

        let new_end = &t_star + &d_star;
        let new_base = if new_end <= *ext.defined_until() {
            ext.cut(&Rational::zero(), &new_end)?
        } else {
            self.extend_to(&new_end)?
        };
        Curve::with_family(
            new_base.canonicalized(),
            t_star,
            d_star,
            c_star,
            self.family.clone(),
        )
    }

    /// Structural property flags that need no convolution.
    pub fn is_non_decreasing(&self) -> bool {
        self.scan_window()
            .map(|w| w.is_non_decreasing())
            .unwrap_or(false)
    }

    pub fn is_non_negative(&self) -> bool {
        if self.tail_kind() == TailKind::MinusInfinite {
            return false;
        }
        if self.period_height.is_negative() {
            return false;
        }
        self.base.inf() >= ExtendedRational::zero()
    }

    pub fn is_left_continuous(&self) -> bool {
        self.continuity_scan().0
    }

    pub fn is_right_continuous(&self) -> bool {
        self.continuity_scan().1
    }

    pub fn is_continuous(&self) -> bool {
        let (l, r) = self.continuity_scan();
        l && r
    }

    /// Concave on `]0, +inf[` (the origin jump of arrival curves is
    /// allowed). Curves with infinite values are reported neither concave
    /// nor convex.
    pub fn is_concave(&self) -> bool {
        self.shape_scan(true)
    }

    pub fn is_convex(&self) -> bool {
        self.shape_scan(false)
    }

    fn scan_window(&self) -> Result<Sequence> {
        let horizon = &(&self.period_start + &(&self.period_length * &Rational::integer(2)))
            + &Rational::one();
        self.extend_to(&horizon)
    }

    fn continuity_scan(&self) -> (bool, bool) {
        let ext = match self.scan_window() {
            Ok(e) => e,
            Err(_) => return (false, false),
        };
        let elements = ext.elements();
        let mut left = true;
        let mut right = true;
        for (i, el) in elements.iter().enumerate() {
            if let Element::Point(p) = el {
                if i > 0 {
                    if let Element::Segment(s) = &elements[i - 1] {
                        left &= s.left_limit_at_end() == p.value;
                    }
                }
                if i + 1 < elements.len() {
                    if let Element::Segment(s) = &elements[i + 1] {
                        right &= s.right_limit == p.value;
                    }
                }
            }
        }
        (left, right)
    }

    fn shape_scan(&self, concave: bool) -> bool {
        if self.has_plus_infinite_values() || self.has_minus_infinite_values() {
            return false;
        }
        let horizon = &(&self.period_start + &(&self.period_length * &Rational::integer(3)))
            + &Rational::one();
        let ext = match self.extend_to(&horizon) {
            Ok(e) => e,
            Err(_) => return false,
        };
        let elements = ext.elements();
        // Continuity except possibly at 0.
        for (i, el) in elements.iter().enumerate() {
            if let Element::Point(p) = el {
                if !p.time.is_zero() {
                    if let Element::Segment(s) = &elements[i - 1] {
                        if s.left_limit_at_end() != p.value {
                            return false;
                        }
                    }
                }
                if i + 1 < elements.len() {
                    if let Element::Segment(s) = &elements[i + 1] {
                        if !p.time.is_zero() && s.right_limit != p.value {
                            return false;
                        }
                    }
                }
            }
        }
        let mut prev_slope: Option<Rational> = None;
        for el in elements {
            if let Element::Segment(s) = el {
                if let Some(prev) = &prev_slope {
                    let ok = if concave {
                        s.slope <= *prev
                    } else {
                        s.slope >= *prev
                    };
                    if !ok {
                        return false;
                    }
                }
                prev_slope = Some(s.slope.clone());
            }
        }
        true
    }

    /// All property flags; sub-/super-additivity dispatch through the
    /// algebra (see `ops`) and may use family knowledge.
    pub fn classify(&self) -> PropertyFlags {
        let (l, r) = self.continuity_scan();
        PropertyFlags {
            is_continuous: l && r,
            is_left_continuous: l,
            is_right_continuous: r,
            is_non_decreasing: self.is_non_decreasing(),
            is_non_negative: self.is_non_negative(),
            is_concave: self.is_concave(),
            is_convex: self.is_convex(),
            is_sub_additive: self.is_sub_additive(),
            is_super_additive: self.is_super_additive(),
        }
    }

    pub fn is_sub_additive(&self) -> bool {
        if let Some(known) = family_sub_additive(&self.family) {
            return known;
        }
        crate::ops::sub_additive_check(self)
    }

    pub fn is_super_additive(&self) -> bool {
        if let Some(known) = family_super_additive(&self.family) {
            return known;
        }
        crate::ops::super_additive_check(self)
    }
}

/// What family membership already decides about sub-additivity.
fn family_sub_additive(family: &CurveFamily) -> Option<bool> {
    match family {
        CurveFamily::SigmaRho { .. } => Some(true),
        CurveFamily::Stair { .. } => Some(true),
        CurveFamily::FlowControl { .. } => Some(true),
        CurveFamily::Constant { level } => Some(*level >= ExtendedRational::zero()),
        CurveFamily::Delay { theta } => Some(theta.is_zero()),
        CurveFamily::RateLatency { latency, .. } => {
            if latency.is_zero() {
                Some(true)
            } else {
                Some(false)
            }
        }
        CurveFamily::Generic => None,
    }
}

fn family_super_additive(family: &CurveFamily) -> Option<bool> {
    match family {
        CurveFamily::RateLatency { .. } => Some(true),
        CurveFamily::Delay { .. } => Some(true),
        CurveFamily::SigmaRho { sigma, .. } => Some(sigma.is_zero()),
        CurveFamily::Constant { level } => Some(*level <= ExtendedRational::zero()),
        _ => None,
    }
}

/// Slope of the (affine) tail right of `t`.
fn tail_slope(ext: &Sequence, t: &Rational) -> Result<Rational> {
    for el in ext.elements() {
        if let Element::Segment(s) = el {
            if s.start >= *t || (*t > s.start && *t < s.end) {
                return Ok(s.slope.clone());
            }
        }
    }
    Err(Error::Internal("no segment beyond period start".into()))
}

/// Does `f(x + p) = f(x) + cp` hold for all `x` in `[b0, b0 + d[`?
fn period_holds(
    ext: &Sequence,
    b0: &Rational,
    d: &Rational,
    p: &Rational,
    cp: &Rational,
) -> Result<bool> {
    let lo = ext.cut(b0, &(b0 + d))?;
    let hi = ext.cut(&(b0 + p), &(&(b0 + d) + p))?;
    Ok(lo.shifted(p, cp).equals_pointwise(&hi))
}

/// Does the `(d, c)` law hold on `[candidate, upto[`?
fn shift_law_holds(
    ext: &Sequence,
    candidate: &Rational,
    upto: &Rational,
    d: &Rational,
    c: &Rational,
) -> Result<bool> {
    let lo = ext.cut(candidate, upto)?;
    let hi = ext.cut(&(candidate + d), &(upto + d))?;
    Ok(lo.shifted(d, c).equals_pointwise(&hi))
}

pub(crate) fn base_end_owned(t: &Rational, d: &Rational) -> Rational {
    t + d
}

pub(crate) fn big_to_rational(k: &BigInt) -> Rational {
    Rational::from_big(k.clone(), BigInt::from(1)).expect("unit denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    pub(crate) fn listing_one() -> Curve {
        Curve::new(
            Sequence::new(vec![
                Element::point(0, 0),
                Element::segment(0, 2, 0, 1),
                Element::point(2, 2),
                Element::segment(2, 3, 2, 0),
                Element::point(3, 2),
                Element::segment(3, 4, 2, 1),
            ])
            .unwrap(),
            2,
            2,
            1,
        )
        .unwrap()
    }

    fn delta(theta: i64) -> Curve {
        let theta_q = Rational::integer(theta);
        let start = &theta_q + &Rational::one();
        let end = &start + &Rational::one();
        let mut elements = vec![Element::point(0, 0)];
        if theta > 0 {
            elements.push(Element::segment(0, theta, 0, 0));
            elements.push(Element::point(theta, 0));
        }
        elements.push(Element::Segment(Segment {
            start: theta_q.clone(),
            end: end.clone(),
            right_limit: ExtendedRational::PlusInfinity,
            slope: Rational::zero(),
        }));
        Curve::new(Sequence::new(elements).unwrap(), start, 1, 0).unwrap()
    }

    #[test]
    fn value_evaluation_follows_the_pseudo_periodic_law() {
        let c = listing_one();
        assert_eq!(c.value_at(&q(7, 2)).unwrap(), ExtendedRational::finite(5, 2));
        assert_eq!(c.value_at(&q(6, 1)).unwrap(), ExtendedRational::integer(4));
        assert_eq!(c.value_at(&q(0, 1)).unwrap(), ExtendedRational::integer(0));
        assert_eq!(c.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(1));
        assert_eq!(c.value_at(&q(4, 1)).unwrap(), ExtendedRational::integer(3));
        assert!(c.value_at(&q(-1, 1)).is_err());
    }

    #[test]
    fn limits_at_period_boundaries() {
        let c = listing_one();
        assert_eq!(c.left_limit_at(&q(2, 1)).unwrap(), ExtendedRational::integer(2));
        assert_eq!(c.left_limit_at(&q(4, 1)).unwrap(), ExtendedRational::integer(3));
        assert_eq!(c.left_limit_at(&q(6, 1)).unwrap(), ExtendedRational::integer(4));
        assert_eq!(c.right_limit_at(&q(4, 1)).unwrap(), ExtendedRational::integer(3));
        assert_eq!(c.right_limit_at(&q(8, 1)).unwrap(), ExtendedRational::integer(5));
    }

    #[test]
    fn extension_unrolls_periods() {
        let c = listing_one();
        let ext = c.extend_to(&q(8, 1)).unwrap();
        for (t, v) in [(4, 3), (5, 3), (6, 4), (7, 4)] {
            assert_eq!(
                ext.value_at(&q(t, 1)).unwrap(),
                ExtendedRational::integer(v),
                "value at {t}"
            );
        }
        let prefix = c.extend_to(&q(3, 1)).unwrap();
        assert_eq!(prefix.defined_until(), &q(3, 1));
    }

    #[test]
    fn cut_matches_values() {
        let c = listing_one();
        let piece = c.cut(&q(1, 1), &q(7, 1)).unwrap();
        for t in [1, 2, 3, 4, 5, 6] {
            assert_eq!(
                piece.value_at(&q(t, 1)).unwrap(),
                c.value_at(&q(t, 1)).unwrap()
            );
        }
    }

    #[test]
    fn shifts() {
        let c = listing_one();
        let delayed = c.delay_by(&q(3, 1)).unwrap();
        assert_eq!(delayed.value_at(&q(2, 1)).unwrap(), ExtendedRational::zero());
        assert_eq!(
            delayed.value_at(&q(5, 1)).unwrap(),
            c.value_at(&q(2, 1)).unwrap()
        );
        let back = delayed.anticipate_by(&q(3, 1)).unwrap();
        assert!(back.equivalent(&c));
        assert!(c.delay_by(&q(0, 1)).unwrap().equivalent(&c));
        assert!(c.delay_by(&q(-1, 1)).is_err());

        let up = c.vertical_shift(&q(3, 1));
        assert_eq!(up.value_at(&q(0, 1)).unwrap(), ExtendedRational::integer(3));
        assert_eq!(up.period_height(), c.period_height());
        assert!(c.vertical_shift(&q(0, 1)).equivalent(&c));
    }

    #[test]
    fn equivalence_detects_unrolled_periods() {
        let c = listing_one();
        // Same function, period written twice as (d=4, c=2).
        let unrolled = Curve::new(c.extend_to(&q(6, 1)).unwrap(), 2, 4, 2).unwrap();
        assert!(c.equivalent(&unrolled));
        let shifted = c.vertical_shift(&q(1, 1));
        assert!(!c.equivalent(&shifted));
    }

    #[test]
    fn minimization_shrinks_doubled_periods() {
        let c = listing_one();
        let unrolled = Curve::new(c.extend_to(&q(6, 1)).unwrap(), 2, 4, 2).unwrap();
        let min = unrolled.minimize();
        assert_eq!(min.period_length(), &q(2, 1));
        assert_eq!(min.period_height(), &q(1, 1));
        assert!(min.equivalent(&c));
        assert!(
            min.base_sequence().elements().len() <= unrolled.base_sequence().elements().len() / 2
                + 1
        );
        // Already-minimal curve is unchanged.
        let again = c.minimize();
        assert_eq!(again.period_start(), c.period_start());
        assert_eq!(again.period_length(), c.period_length());
        assert_eq!(again, again.minimize());
    }

    #[test]
    fn minimization_canonicalizes_delay_curves() {
        let d = delta(4);
        let m = d.minimize();
        assert_eq!(m.tail_kind(), TailKind::PlusInfinite);
        assert!(m.equivalent(&d));
        assert_eq!(m, m.minimize());
        assert_eq!(m.value_at(&q(4, 1)).unwrap(), ExtendedRational::zero());
        assert_eq!(
            m.value_at(&q(9, 2)).unwrap(),
            ExtendedRational::PlusInfinity
        );
    }

    #[test]
    fn asymptotic_rates() {
        assert_eq!(
            listing_one().asymptotic_rate(),
            ExtendedRational::finite(1, 2)
        );
        assert_eq!(delta(3).asymptotic_rate(), ExtendedRational::PlusInfinity);
    }

    #[test]
    fn structural_flags() {
        let c = listing_one();
        assert!(c.is_non_decreasing());
        assert!(c.is_non_negative());
        assert!(c.is_continuous());
        assert!(!c.is_concave());
        assert!(!c.is_convex());
        let d = delta(2);
        assert!(d.is_non_decreasing());
        assert!(!d.is_continuous());
        assert!(d.is_left_continuous());
    }

    #[test]
    fn upp_law_on_a_grid() {
        let c = listing_one();
        let d = q(2, 1);
        let height = q(1, 1);
        for num in 8..=32 {
            let t = q(num, 4); // grid over [2, 8]
            for k in 1..=3i64 {
                let t_shift = &t + &(&d * &q(k, 1));
                let expected = match c.value_at(&t).unwrap() {
                    ExtendedRational::Finite(v) => {
                        ExtendedRational::Finite(&v + &(&height * &q(k, 1)))
                    }
                    other => other,
                };
                assert_eq!(c.value_at(&t_shift).unwrap(), expected);
            }
        }
    }
}
