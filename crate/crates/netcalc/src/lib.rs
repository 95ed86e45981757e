//! Exact network calculus on ultimately pseudo-periodic piecewise-affine curves.
//!
//! A curve `f` is stored as a base sequence on `[0, T+d[` together with the
//! pseudo-period parameters `T` (period start), `d` (period length) and `c`
//! (period height), so that `f(t + k*d) = f(t) + k*c` for all `t >= T` and
//! natural `k`. All arithmetic is exact: times and values are arbitrary
//! precision rationals, extended with plus/minus infinity where the model
//! needs them (e.g. pure delay curves).
//!
//! The crate provides:
//!
//! * the curve model itself ([`Curve`], [`Sequence`], [`Element`]) with
//!   evaluation, cuts, shifts, canonicalization and representation
//!   minimization;
//! * the binary min-plus/max-plus algebra: minimum, maximum, addition,
//!   subtraction, (de)convolution in both algebras, and the vertical and
//!   horizontal deviation measures;
//! * unary operators: pseudo-inverses, sub-/super-additive closure and
//!   composition;
//! * named curve families (rate-latency, sigma-rho, delay, stair, constant,
//!   flow control) and a convolution dispatcher that reroutes to cheaper
//!   algorithms when operand properties allow it;
//! * a deterministic, optionally parallel envelope engine used by the
//!   algebra internally and usable directly for bulk operations;
//! * JSON serialization for curves and rationals.

pub mod curve;
pub mod element;
pub mod envelope;
pub mod error;
pub mod families;
pub mod ops;
pub mod rational;
pub mod sequence;
pub mod serialization;

pub use curve::{Curve, CurveFamily, PropertyFlags};
pub use element::{Element, Point, Segment};
pub use envelope::{lower_envelope, parallel_aggregate, upper_envelope, ComputationSettings};
pub use error::{Error, Result};
pub use ops::SubtractionMode;
pub use rational::{ExtendedRational, Rational};
pub use sequence::Sequence;
