//! Deterministic, optionally parallel envelope computation.
//!
//! The binary algebra reduces to one primitive: the pointwise infimum (or
//! supremum) of a large set of points and open affine segments over a time
//! window. Pieces are grouped in time buckets delimited by the sorted
//! distinct endpoints of their supports; per-bucket envelopes are convex
//! chains of lines and are computed independently, then concatenated and
//! canonicalized.
//!
//! Results are bit-identical whether or not parallelism is used: every
//! combination step is an exact, associative pointwise min/max, so the
//! reduction shape cannot be observed in the output.

use rayon::prelude::*;

use crate::element::{Element, Point, Segment};
use crate::error::{Error, Result};
use crate::rational::{ExtendedRational, Rational};
use crate::sequence::Sequence;

/// Execution knobs. All fields are performance hints: results do not depend
/// on any of them.
#[derive(Clone, Debug)]
pub struct ComputationSettings {
    /// Use worker threads for large envelope and aggregate computations.
    pub use_parallelism: bool,
    /// Piece count below which work stays sequential.
    pub parallelism_threshold: usize,
    /// Worker count hint for pool construction (CLI startup uses it);
    /// `None` means the process default.
    pub worker_count: Option<usize>,
}

impl Default for ComputationSettings {
    fn default() -> Self {
        ComputationSettings {
            use_parallelism: true,
            parallelism_threshold: 256,
            worker_count: None,
        }
    }
}

impl ComputationSettings {
    pub fn sequential() -> Self {
        ComputationSettings {
            use_parallelism: false,
            ..Default::default()
        }
    }

    fn parallel_for(&self, pieces: usize) -> bool {
        self.use_parallelism && pieces >= self.parallelism_threshold
    }
}

/// Pairs per streamed block; bounds peak memory of pairwise operations.
const PAIR_BLOCK: usize = 4096;
/// Pieces handled by one direct sweep before chunked merging kicks in.
const SWEEP_CHUNK: usize = 4096;

/// Pointwise infimum of the pieces over `[from, until[`.
///
/// Where no piece is defined the envelope is `+inf` (the infimum over an
/// empty set), which is exactly the convention ultimately infinite curves
/// need.
pub fn lower_envelope(
    pieces: &[Element],
    from: &Rational,
    until: &Rational,
    settings: &ComputationSettings,
) -> Result<Sequence> {
    if pieces.is_empty() {
        return Err(Error::EmptyInput("lower envelope of no pieces"));
    }
    envelope_allow_empty(pieces.to_vec(), from, until, settings)
}

/// Pointwise supremum over `[from, until[`, `-inf` where undefined.
pub fn upper_envelope(
    pieces: &[Element],
    from: &Rational,
    until: &Rational,
    settings: &ComputationSettings,
) -> Result<Sequence> {
    if pieces.is_empty() {
        return Err(Error::EmptyInput("upper envelope of no pieces"));
    }
    let negated: Vec<Element> = pieces.iter().map(Element::negated).collect();
    Ok(envelope_allow_empty(negated, from, until, settings)?.negated())
}

/// Lower envelope that tolerates an empty piece set (pure `+inf` filler).
pub(crate) fn envelope_allow_empty(
    pieces: Vec<Element>,
    from: &Rational,
    until: &Rational,
    settings: &ComputationSettings,
) -> Result<Sequence> {
    if from >= until {
        return Err(Error::InvalidArgument(format!(
            "empty envelope domain [{from}, {until}["
        )));
    }
    let clipped = clip_pieces(&pieces, from, until);
    if clipped.is_empty() {
        return Ok(crate::sequence::constant_sequence(
            from,
            until,
            &ExtendedRational::PlusInfinity,
        ));
    }
    if clipped.len() <= SWEEP_CHUNK {
        return sweep(&clipped, from, until);
    }
    let chunks: Vec<&[Element]> = clipped.chunks(SWEEP_CHUNK).collect();
    let merged = if settings.parallel_for(clipped.len()) {
        chunks
            .into_par_iter()
            .map(|chunk| sweep(chunk, from, until))
            .try_reduce_with(|a, b| a.pointwise_min(&b))
            .transpose()?
    } else {
        let mut acc: Option<Sequence> = None;
        for chunk in chunks {
            let env = sweep(chunk, from, until)?;
            acc = Some(match acc {
                Some(prev) => prev.pointwise_min(&env)?,
                None => env,
            });
        }
        acc
    };
    merged.ok_or_else(|| Error::Internal("no chunks in envelope".into()))
}

/// Restricts pieces to the window, keeping point values for segments that
/// straddle the left boundary (the boundary instant is inside their open
/// support and still constrains the envelope there).
fn clip_pieces(pieces: &[Element], from: &Rational, until: &Rational) -> Vec<Element> {
    let mut out = Vec::with_capacity(pieces.len());
    for piece in pieces {
        match piece {
            Element::Point(p) => {
                if p.time >= *from && p.time < *until {
                    out.push(piece.clone());
                }
            }
            Element::Segment(s) => {
                if s.end <= *from || s.start >= *until {
                    continue;
                }
                if s.start < *from && s.end > *from {
                    out.push(Element::Point(Point {
                        time: from.clone(),
                        value: s.limit_at(from),
                    }));
                }
                let lo = if s.start < *from { from } else { &s.start };
                let hi = if s.end > *until { until } else { &s.end };
                if lo < hi {
                    out.push(Element::Segment(s.restrict(lo, hi)));
                }
            }
        }
    }
    out
}

/// Direct bucketed sweep over a bounded set of pieces.
fn sweep(pieces: &[Element], from: &Rational, until: &Rational) -> Result<Sequence> {
    let mut boundaries: Vec<Rational> = Vec::with_capacity(pieces.len() * 2 + 2);
    boundaries.push(from.clone());
    boundaries.push(until.clone());
    for piece in pieces {
        match piece {
            Element::Point(p) => boundaries.push(p.time.clone()),
            Element::Segment(s) => {
                boundaries.push(s.start.clone());
                boundaries.push(s.end.clone());
            }
        }
    }
    boundaries.retain(|b| b >= from && b <= until);
    boundaries.sort();
    boundaries.dedup();

    // Sort pieces by support start for incremental activation.
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&i, &j| pieces[i].start().cmp(pieces[j].start()));

    let mut out: Vec<Element> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut next = 0usize;

    for w in boundaries.windows(2) {
        let (b0, b1) = (&w[0], &w[1]);
        while next < order.len() && pieces[order[next]].start() <= b0 {
            active.push(order[next]);
            next += 1;
        }

        // Point value at the bucket's left boundary: points sitting at it
        // and segments straddling it.
        let mut at_boundary = ExtendedRational::PlusInfinity;
        for &i in &active {
            let v = match &pieces[i] {
                Element::Point(p) if p.time == *b0 => Some(p.value.clone()),
                Element::Segment(s) if s.start < *b0 && s.end > *b0 => Some(s.limit_at(b0)),
                _ => None,
            };
            if let Some(v) = v {
                at_boundary = at_boundary.min(v);
            }
        }
        out.push(Element::Point(Point {
            time: b0.clone(),
            value: at_boundary,
        }));

        // Only segments covering the whole bucket stay active.
        active.retain(|&i| !pieces[i].is_point() && pieces[i].end() >= b1);

        // Envelope of the active affine pieces over the open bucket.
        let mut lines: Vec<(Rational, Rational)> = Vec::new();
        let mut minus_inf = false;
        for &i in &active {
            if let Element::Segment(s) = &pieces[i] {
                match &s.right_limit {
                    ExtendedRational::PlusInfinity => {}
                    ExtendedRational::MinusInfinity => {
                        minus_inf = true;
                        break;
                    }
                    ExtendedRational::Finite(_) => {
                        if let ExtendedRational::Finite(v) = s.limit_at(b0) {
                            lines.push((v, s.slope.clone()));
                        }
                    }
                }
            }
        }
        if minus_inf {
            out.push(Element::Segment(Segment {
                start: b0.clone(),
                end: b1.clone(),
                right_limit: ExtendedRational::MinusInfinity,
                slope: Rational::zero(),
            }));
        } else if lines.is_empty() {
            out.push(Element::Segment(Segment {
                start: b0.clone(),
                end: b1.clone(),
                right_limit: ExtendedRational::PlusInfinity,
                slope: Rational::zero(),
            }));
        } else {
            out.extend(lines_lower_envelope(lines, b0, b1));
        }
    }

    Ok(Sequence::new(out)?.canonicalized())
}

/// Lower envelope of lines `value(t) = a + m * (t - b0)` over `]b0, b1[`.
///
/// The minimum of lines is concave, so pieces appear in decreasing slope
/// order; crossings are computed exactly.
fn lines_lower_envelope(
    mut lines: Vec<(Rational, Rational)>,
    b0: &Rational,
    b1: &Rational,
) -> Vec<Element> {
    // Sort by slope descending, then by offset ascending; for equal slopes
    // only the lowest offset can contribute.
    lines.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
    lines.dedup_by(|next, kept| next.1 == kept.1);

    let width = b1 - b0;
    // Stack of (a, m, from_x) with from_x the offset where the line starts
    // to be the minimum; offsets are relative to b0.
    let mut stack: Vec<(Rational, Rational, Rational)> = Vec::new();
    for (a, m) in lines {
        let mut from_x = Rational::zero();
        loop {
            let decision = match stack.last() {
                None => None,
                Some((ta, tm, tfrom)) => {
                    // Crossing with the stack top: ta + tm*x = a + m*x.
                    debug_assert!(*tm > m);
                    let x = (&a - ta) / (tm - &m);
                    Some((x.clone() <= *tfrom, x))
                }
            };
            match decision {
                None => break,
                Some((true, _)) => {
                    stack.pop();
                }
                Some((false, x)) => {
                    from_x = x;
                    break;
                }
            }
        }
        if from_x < width {
            stack.push((a, m, from_x));
        }
    }

    let mut out: Vec<Element> = Vec::new();
    for (idx, (a, m, from_x)) in stack.iter().enumerate() {
        let end_x = if idx + 1 < stack.len() {
            stack[idx + 1].2.clone()
        } else {
            width.clone()
        };
        if *from_x >= end_x {
            continue;
        }
        let start_t = b0 + from_x;
        let end_t = b0 + &end_x;
        let value_at_start = a + &(m * from_x);
        if !from_x.is_zero() {
            out.push(Element::Point(Point {
                time: start_t.clone(),
                value: ExtendedRational::Finite(value_at_start.clone()),
            }));
        }
        out.push(Element::Segment(Segment {
            start: start_t,
            end: end_t,
            right_limit: ExtendedRational::Finite(value_at_start),
            slope: m.clone(),
        }));
    }
    out
}

/// Balanced-tree fold of an associative curve operation.
///
/// The tree shape is fixed by the item order, so the result equals the
/// sequential left fold and is independent of the parallelism setting.
pub fn parallel_aggregate<F>(
    items: &[crate::curve::Curve],
    op: &F,
    settings: &ComputationSettings,
) -> Result<crate::curve::Curve>
where
    F: Fn(&crate::curve::Curve, &crate::curve::Curve) -> Result<crate::curve::Curve> + Sync,
{
    if items.is_empty() {
        return Err(Error::EmptyInput("aggregate of no curves"));
    }
    let total_elements: usize = items.iter().map(|c| c.base_sequence().elements().len()).sum();
    fold_tree(items, op, settings.parallel_for(total_elements))
}

fn fold_tree<F>(
    items: &[crate::curve::Curve],
    op: &F,
    parallel: bool,
) -> Result<crate::curve::Curve>
where
    F: Fn(&crate::curve::Curve, &crate::curve::Curve) -> Result<crate::curve::Curve> + Sync,
{
    match items.len() {
        1 => Ok(items[0].clone()),
        2 => op(&items[0], &items[1]),
        n => {
            let (left, right) = items.split_at(n / 2);
            let (a, b) = if parallel {
                rayon::join(|| fold_tree(left, op, true), || fold_tree(right, op, true))
            } else {
                (fold_tree(left, op, false), fold_tree(right, op, false))
            };
            op(&a?, &b?)
        }
    }
}

/// Streams all element pairs of two sequences through a piece generator and
/// folds the per-block envelopes. `lower` picks the infimum (min-plus) or
/// supremum (max-plus) side.
pub(crate) fn streamed_pair_envelope<G>(
    a: &[Element],
    b: &[Element],
    from: &Rational,
    until: &Rational,
    lower: bool,
    generate: &G,
    settings: &ComputationSettings,
) -> Result<Sequence>
where
    G: Fn(&Element, &Element, &mut Vec<Element>) -> Result<()> + Sync,
{
    let total_pairs = a.len().saturating_mul(b.len());
    let rows_per_block = (PAIR_BLOCK / b.len().max(1)).max(1);
    let blocks: Vec<&[Element]> = a.chunks(rows_per_block).collect();

    let run_block = |rows: &[Element]| -> Result<Sequence> {
        let mut pieces: Vec<Element> = Vec::with_capacity(rows.len() * b.len());
        for ea in rows {
            for eb in b {
                generate(ea, eb, &mut pieces)?;
            }
        }
        if !lower {
            pieces = pieces.iter().map(Element::negated).collect();
        }
        envelope_allow_empty(pieces, from, until, &ComputationSettings::sequential())
    };

    let merged: Option<Sequence> = if settings.parallel_for(total_pairs) {
        blocks
            .into_par_iter()
            .map(|rows| run_block(rows))
            .try_reduce_with(|x, y| x.pointwise_min(&y))
            .transpose()?
    } else {
        let mut acc: Option<Sequence> = None;
        for rows in blocks {
            let env = run_block(rows)?;
            acc = Some(match acc {
                Some(prev) => prev.pointwise_min(&env)?,
                None => env,
            });
        }
        acc
    };
    let merged = merged.ok_or_else(|| Error::Internal("no pair blocks".into()))?;
    Ok(if lower { merged } else { merged.negated() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn crossing_segments() {
        let pieces = vec![
            Element::segment(0, 4, 0, 1),
            Element::segment(0, 4, 4, -1),
        ];
        let env = lower_envelope(
            &pieces,
            &q(0, 1),
            &q(4, 1),
            &ComputationSettings::default(),
        )
        .unwrap();
        assert_eq!(env.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(1));
        assert_eq!(env.value_at(&q(2, 1)).unwrap(), ExtendedRational::integer(2));
        assert_eq!(env.value_at(&q(3, 1)).unwrap(), ExtendedRational::integer(1));
        // Open supports: nothing defines t = 0, so the infimum is +inf.
        assert_eq!(env.value_at(&q(0, 1)).unwrap(), ExtendedRational::PlusInfinity);

        let upper = upper_envelope(
            &pieces,
            &q(0, 1),
            &q(4, 1),
            &ComputationSettings::default(),
        )
        .unwrap();
        assert_eq!(upper.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(3));
        assert_eq!(upper.value_at(&q(3, 1)).unwrap(), ExtendedRational::integer(3));
    }

    #[test]
    fn single_element_is_its_own_envelope() {
        let pieces = vec![Element::segment(0, 2, 1, 0)];
        let env = lower_envelope(
            &pieces,
            &q(0, 1),
            &q(2, 1),
            &ComputationSettings::default(),
        )
        .unwrap();
        assert_eq!(env.value_at(&q(1, 1)).unwrap(), ExtendedRational::integer(1));
        assert!(lower_envelope(&[], &q(0, 1), &q(1, 1), &ComputationSettings::default()).is_err());
    }

    #[test]
    fn parallel_and_sequential_agree_on_large_inputs() {
        // A grid of short segments plus long shallow ones.
        let mut pieces = Vec::new();
        for i in 0..1200i64 {
            let s = i % 40;
            pieces.push(Element::segment(
                q(i, 7),
                q(i + 9, 7),
                q(s - 10, 3),
                q((i % 5) - 2, 1),
            ));
            if i % 3 == 0 {
                pieces.push(Element::point(q(i, 5), q(s - 8, 2)));
            }
        }
        let lo = q(0, 1);
        let hi = q(170, 1);
        let par = lower_envelope(&pieces, &lo, &hi, &ComputationSettings::default()).unwrap();
        let seq = lower_envelope(&pieces, &lo, &hi, &ComputationSettings::sequential()).unwrap();
        assert_eq!(par, seq);
        let up_par = upper_envelope(&pieces, &lo, &hi, &ComputationSettings::default()).unwrap();
        let up_seq = upper_envelope(&pieces, &lo, &hi, &ComputationSettings::sequential()).unwrap();
        assert_eq!(up_par, up_seq);
        // Duality against negation.
        let negated: Vec<Element> = pieces.iter().map(Element::negated).collect();
        let dual = lower_envelope(&negated, &lo, &hi, &ComputationSettings::default())
            .unwrap()
            .negated();
        assert_eq!(up_par, dual);
    }
}
