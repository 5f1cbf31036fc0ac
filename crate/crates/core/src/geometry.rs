//! Integer points, the exact orientation predicate and bounding-box
//! arithmetic.
//!
//! Orientation is counter-clockwise positive: `orientation(a, b, c)` is
//! [`Orientation::CounterClockwise`] when `c` lies strictly to the left of
//! the directed line `a -> b`. The predicate is exact for every `i64`
//! input; no floating point is involved anywhere in this crate's hull path.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A point on the integer grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    #[inline]
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// True when both coordinates are representable as signed `bits`-bit
    /// integers.
    pub fn fits_bits(&self, bits: u32) -> bool {
        fits_signed_bits(self.x as i128, bits) && fits_signed_bits(self.y as i128, bits)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub(crate) fn fits_signed_bits(value: i128, bits: u32) -> bool {
    if bits >= 128 {
        return true;
    }
    if bits == 0 {
        return false;
    }
    let half = 1i128 << (bits - 1);
    (-half..half).contains(&value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise = -1,
    Collinear = 0,
    CounterClockwise = 1,
}

impl Orientation {
    #[inline]
    pub fn sign(self) -> i8 {
        self as i8
    }

    #[inline]
    pub fn is_ccw(self) -> bool {
        self == Orientation::CounterClockwise
    }

    #[inline]
    fn from_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Greater => Orientation::CounterClockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Less => Orientation::Clockwise,
        }
    }
}

/// Sign of `cross(b - a, c - a)`.
///
/// The common case (coordinate differences that fit in `i64`) is a pair of
/// 128-bit products. Differences of extreme `i64` values take a slower
/// sign/magnitude comparison that is still exact.
#[inline]
pub fn orientation(a: Point, b: Point, c: Point) -> Orientation {
    if let (Some(abx), Some(aby), Some(acx), Some(acy)) = (
        b.x.checked_sub(a.x),
        b.y.checked_sub(a.y),
        c.x.checked_sub(a.x),
        c.y.checked_sub(a.y),
    ) {
        // |diff| < 2^63, so each product is below 2^126 and the
        // difference below 2^127.
        let det = abx as i128 * acy as i128 - aby as i128 * acx as i128;
        return Orientation::from_ordering(det.cmp(&0));
    }
    orientation_wide(a, b, c)
}

#[cold]
fn orientation_wide(a: Point, b: Point, c: Point) -> Orientation {
    let abx = b.x as i128 - a.x as i128;
    let aby = b.y as i128 - a.y as i128;
    let acx = c.x as i128 - a.x as i128;
    let acy = c.y as i128 - a.y as i128;
    Orientation::from_ordering(cmp_products(abx, acy, aby, acx))
}

/// Compares `p * q` with `r * s` where every operand has magnitude below
/// 2^64, so each product magnitude fits in a `u128`.
fn cmp_products(p: i128, q: i128, r: i128, s: i128) -> Ordering {
    let lhs_sign = p.signum() * q.signum();
    let rhs_sign = r.signum() * s.signum();
    if lhs_sign != rhs_sign {
        return lhs_sign.cmp(&rhs_sign);
    }
    let lhs = p.unsigned_abs() * q.unsigned_abs();
    let rhs = r.unsigned_abs() * s.unsigned_abs();
    match lhs_sign {
        0 => Ordering::Equal,
        1 => lhs.cmp(&rhs),
        _ => rhs.cmp(&lhs),
    }
}

/// Tightest axis-aligned box around a point set.
///
/// Side lengths count grid cells, so a single point has `m1 = m2 = 1`.
/// They are kept as `u128` because the span of two extreme `i64` values
/// does not fit in 64 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl BoundingBox {
    pub fn m1(&self) -> u128 {
        (self.x_max as i128 - self.x_min as i128 + 1) as u128
    }

    pub fn m2(&self) -> u128 {
        (self.y_max as i128 - self.y_min as i128 + 1) as u128
    }

    /// Number of grid cells in the box, saturating at `u128::MAX` (only
    /// reachable when both sides span the whole `i64` range).
    pub fn m(&self) -> u128 {
        self.m1().saturating_mul(self.m2())
    }

    pub fn contains(&self, p: Point) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.y_min..=self.y_max).contains(&p.y)
    }
}

pub fn bounding_box(points: &[Point]) -> Result<BoundingBox> {
    let (first, rest) = points.split_first().ok_or(Error::EmptyInput)?;
    let mut bb = BoundingBox {
        x_min: first.x,
        x_max: first.x,
        y_min: first.y,
        y_max: first.y,
    };
    for p in rest {
        bb.x_min = bb.x_min.min(p.x);
        bb.x_max = bb.x_max.max(p.x);
        bb.y_min = bb.y_min.min(p.y);
        bb.y_max = bb.y_max.max(p.y);
    }
    Ok(bb)
}

/// Translates points so the box's lower-left corner becomes `(1, 1)`.
pub fn normalize(points: &[Point], bbox: &BoundingBox) -> Result<Vec<Point>> {
    let dx = bbox.x_min as i128 - 1;
    let dy = bbox.y_min as i128 - 1;
    points
        .iter()
        .map(|&p| {
            if !bbox.contains(p) {
                return Err(Error::PointOutsideBox { point: p });
            }
            let x = p.x as i128 - dx;
            let y = p.y as i128 - dy;
            match (i64::try_from(x), i64::try_from(y)) {
                (Ok(x), Ok(y)) => Ok(Point::new(x, y)),
                (Err(_), _) => Err(Error::CoordinateOverflow { value: x, bits: 64 }),
                (_, Err(_)) => Err(Error::CoordinateOverflow { value: y, bits: 64 }),
            }
        })
        .collect()
}

/// Inverse of [`normalize`].
pub fn denormalize(points: &[Point], bbox: &BoundingBox) -> Vec<Point> {
    points.iter().map(|&p| denormalize_point(p, bbox)).collect()
}

#[inline]
pub(crate) fn denormalize_point(p: Point, bbox: &BoundingBox) -> Point {
    // wrapping arithmetic is exact here: the true result is an i64 whenever
    // `p` came out of `normalize` for the same box
    Point::new(
        p.x.wrapping_add(bbox.x_min).wrapping_sub(1),
        p.y.wrapping_add(bbox.y_min).wrapping_sub(1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_basic_turns() {
        assert_eq!(orientation(pt(0, 0), pt(1, 0), pt(0, 1)).sign(), 1);
        assert_eq!(orientation(pt(0, 0), pt(1, 1), pt(2, 2)).sign(), 0);
        assert_eq!(orientation(pt(0, 0), pt(0, 1), pt(1, 0)).sign(), -1);
    }

    #[test]
    fn isleft_g_form_is_clockwise_positive() {
        // g = (x0 - x1)(y2 - y1) - (x2 - x1)(y0 - y1) on a unit left turn
        let (v0, v1, v2) = (pt(0, 0), pt(1, 0), pt(0, 1));
        let g = (v0.x - v1.x) * (v2.y - v1.y) - (v2.x - v1.x) * (v0.y - v1.y);
        assert_eq!(g, -1);
        assert!(orientation(v0, v1, v2).is_ccw());
    }

    fn reference_sign(a: Point, b: Point, c: Point) -> i8 {
        let big = |v: i64| BigInt::from(v);
        let det = (big(b.x) - big(a.x)) * (big(c.y) - big(a.y))
            - (big(b.y) - big(a.y)) * (big(c.x) - big(a.x));
        match det.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Minus => -1,
        }
    }

    #[test]
    fn orientation_matches_bigint_on_31_bit_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let max = (1i64 << 31) - 1;
        for _ in 0..100_000 {
            let mut p = || pt(rng.random_range(-max..=max), rng.random_range(-max..=max));
            let (a, b, c) = (p(), p(), p());
            assert_eq!(orientation(a, b, c).sign(), reference_sign(a, b, c));
        }
    }

    #[test]
    fn orientation_exact_at_i64_extremes() {
        let lo = i64::MIN;
        let hi = i64::MAX;
        let cases = [
            (pt(lo, lo), pt(hi, hi), pt(hi, lo)),
            (pt(lo, lo), pt(hi, hi), pt(lo, hi)),
            (pt(lo, hi), pt(hi, lo), pt(lo, lo)),
            (pt(lo, lo), pt(hi, hi), pt(0, 0)),
            (pt(lo, 0), pt(hi, 0), pt(0, 1)),
            (pt(hi, hi), pt(lo, lo), pt(hi - 1, hi)),
        ];
        for (a, b, c) in cases {
            assert_eq!(orientation(a, b, c).sign(), reference_sign(a, b, c), "{a} {b} {c}");
        }
    }

    proptest! {
        #[test]
        fn orientation_matches_bigint_anywhere(
            ax in any::<i64>(), ay in any::<i64>(),
            bx in any::<i64>(), by in any::<i64>(),
            cx in any::<i64>(), cy in any::<i64>(),
        ) {
            let (a, b, c) = (pt(ax, ay), pt(bx, by), pt(cx, cy));
            prop_assert_eq!(orientation(a, b, c).sign(), reference_sign(a, b, c));
        }

        #[test]
        fn orientation_antisymmetric(
            ax in -1000i64..1000, ay in -1000i64..1000,
            bx in -1000i64..1000, by in -1000i64..1000,
            cx in -1000i64..1000, cy in -1000i64..1000,
        ) {
            let (a, b, c) = (pt(ax, ay), pt(bx, by), pt(cx, cy));
            prop_assert_eq!(orientation(a, b, c).sign(), -orientation(b, a, c).sign());
        }

        #[test]
        fn orientation_translation_invariant(
            ax in -1000i64..1000, ay in -1000i64..1000,
            bx in -1000i64..1000, by in -1000i64..1000,
            cx in -1000i64..1000, cy in -1000i64..1000,
            dx in -1_000_000i64..1_000_000, dy in -1_000_000i64..1_000_000,
        ) {
            let (a, b, c) = (pt(ax, ay), pt(bx, by), pt(cx, cy));
            let t = |p: Point| pt(p.x + dx, p.y + dy);
            prop_assert_eq!(orientation(a, b, c), orientation(t(a), t(b), t(c)));
        }

        #[test]
        fn bounding_box_is_tight(points in prop::collection::vec((-50i64..50, -50i64..50), 1..40)) {
            let points: Vec<Point> = points.into_iter().map(Point::from).collect();
            let bb = bounding_box(&points).unwrap();
            prop_assert!(points.iter().all(|&p| bb.contains(p)));
            let shrunk = [
                BoundingBox { x_min: bb.x_min + 1, ..bb },
                BoundingBox { x_max: bb.x_max - 1, ..bb },
                BoundingBox { y_min: bb.y_min + 1, ..bb },
                BoundingBox { y_max: bb.y_max - 1, ..bb },
            ];
            for s in shrunk {
                prop_assert!(points.iter().any(|&p| !s.contains(p)));
            }
        }

        #[test]
        fn normalize_round_trips(points in prop::collection::vec((any::<i32>(), any::<i32>()), 1..40)) {
            let points: Vec<Point> = points.into_iter().map(|(x, y)| pt(x as i64, y as i64)).collect();
            let bb = bounding_box(&points).unwrap();
            let norm = normalize(&points, &bb).unwrap();
            for p in &norm {
                prop_assert!(p.x >= 1 && p.x as u128 <= bb.m1());
                prop_assert!(p.y >= 1 && p.y as u128 <= bb.m2());
            }
            prop_assert_eq!(denormalize(&norm, &bb), points);
        }
    }

    #[test]
    fn bounding_box_examples() {
        let bb = bounding_box(&[pt(5, 7), pt(9, 7), pt(7, 9)]).unwrap();
        assert_eq!((bb.x_min, bb.x_max, bb.y_min, bb.y_max), (5, 9, 7, 9));
        assert_eq!((bb.m1(), bb.m2(), bb.m()), (5, 3, 15));

        let bb = bounding_box(&[pt(3, 3)]).unwrap();
        assert_eq!((bb.m1(), bb.m2(), bb.m()), (1, 1, 1));

        let bb = bounding_box(&[pt(0, 0), pt(639, 479)]).unwrap();
        assert_eq!((bb.m1(), bb.m2(), bb.m()), (640, 480, 307_200));

        assert!(matches!(bounding_box(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn bounding_box_of_full_i64_range() {
        let bb = bounding_box(&[pt(i64::MIN, i64::MIN), pt(i64::MAX, i64::MAX)]).unwrap();
        assert_eq!(bb.m1(), 1u128 << 64);
        assert_eq!(bb.m(), u128::MAX);
    }

    #[test]
    fn normalize_examples() {
        let pts = [pt(5, 7), pt(9, 7), pt(7, 9)];
        let bb = bounding_box(&pts).unwrap();
        assert_eq!(normalize(&pts, &bb).unwrap(), vec![pt(1, 1), pt(5, 1), pt(3, 3)]);

        let bb = BoundingBox { x_min: 1, x_max: 1, y_min: 1, y_max: 1 };
        assert_eq!(normalize(&[pt(1, 1)], &bb).unwrap(), vec![pt(1, 1)]);

        let pts = [pt(-2, -2), pt(0, 0)];
        let bb = bounding_box(&pts).unwrap();
        assert_eq!(normalize(&pts, &bb).unwrap(), vec![pt(1, 1), pt(3, 3)]);

        let err = normalize(&[pt(10, 0)], &bb).unwrap_err();
        assert!(matches!(err, Error::PointOutsideBox { point } if point == pt(10, 0)));
    }

    #[test]
    fn denormalize_examples() {
        let bb = BoundingBox { x_min: 5, x_max: 9, y_min: 7, y_max: 9 };
        assert_eq!(denormalize(&[pt(1, 1)], &bb), vec![pt(5, 7)]);
        let bb = BoundingBox { x_min: -2, x_max: 0, y_min: -2, y_max: 0 };
        assert_eq!(denormalize(&[pt(3, 3)], &bb), vec![pt(0, 0)]);
    }

    #[test]
    fn bit_width_check() {
        assert!(pt(127, -128).fits_bits(8));
        assert!(!pt(128, 0).fits_bits(8));
        assert!(!pt(0, -129).fits_bits(8));
        assert!(pt(i64::MIN, i64::MAX).fits_bits(64));
    }
}
