//! Sign-exact orientation and in-circle tests.
//!
//! Thin wrappers over the adaptive-precision evaluation in the `robust` crate:
//! a floating-point fast path that falls back to exact expansion arithmetic
//! only when the error bound cannot certify the sign.

use std::cmp::Ordering;

use robust::Coord;

use super::Point2D;

#[inline]
fn coord(p: Point2D) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Positive if `a, b, c` turn counter-clockwise, negative if clockwise, zero if collinear.
#[inline]
pub fn orient2d(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

/// Positive if `d` lies strictly inside the circle through the
/// counter-clockwise triangle `a, b, c`; zero if cocircular.
#[inline]
pub fn incircle(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> f64 {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
}

/// Sign of [`orient2d`] as an ordering (`Greater` = counter-clockwise).
#[inline]
pub fn orientation(a: Point2D, b: Point2D, c: Point2D) -> Ordering {
    orient2d(a, b, c).partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// For `p` known to be collinear with `a` and `b`: whether it lies strictly
/// between them. Uses only coordinate comparisons, so it is exact.
pub fn strictly_between(a: Point2D, b: Point2D, p: Point2D) -> bool {
    if a.x != b.x {
        (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x)
    } else {
        (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y)
    }
}
