//! Convex hull construction and validation.
//!
//! [`melkman`] computes the hull of a simple polygonal chain in one pass
//! with a double-ended queue. [`hull_oracle`] is an independent
//! sort-based monotone-chain implementation used to check it; it shares no
//! code with the rank path, not even the orientation predicate.
//!
//! Hulls are strict: vertices lying on the interior of a hull edge are not
//! reported. Every [`HullPolygon`] is a counter-clockwise cycle starting at
//! its lexicographically smallest vertex, so two hulls of the same set
//! compare equal with `==`.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::geometry::{orientation, Orientation, Point};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HullPolygon {
    vertices: Vec<Point>,
    degenerate: bool,
}

impl HullPolygon {
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            degenerate: true,
        }
    }

    pub fn single(p: Point) -> Self {
        Self {
            vertices: vec![p],
            degenerate: true,
        }
    }

    /// Two distinct endpoints of a degenerate (collinear) hull.
    pub fn segment(a: Point, b: Point) -> Self {
        if a == b {
            return Self::single(a);
        }
        Self {
            vertices: vec![a.min(b), a.max(b)],
            degenerate: true,
        }
    }

    /// Canonicalizes a counter-clockwise vertex cycle by rotating it to
    /// start at its least vertex.
    pub fn from_ccw_cycle(mut vertices: Vec<Point>) -> Self {
        match vertices.len() {
            0 => return Self::empty(),
            1 => return Self::single(vertices[0]),
            2 => return Self::segment(vertices[0], vertices[1]),
            _ => {}
        }
        let start = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| **p)
            .map(|(i, _)| i)
            .unwrap_or(0);
        vertices.rotate_left(start);
        Self {
            vertices,
            degenerate: false,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True for hulls with fewer than three vertices.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Applies a translation-like map that preserves vertex order.
    pub(crate) fn map_vertices(self, f: impl Fn(Point) -> Point) -> Self {
        Self {
            vertices: self.vertices.into_iter().map(f).collect(),
            degenerate: self.degenerate,
        }
    }
}

/// Work counters for one [`melkman`] run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MelkmanStats {
    /// Orientation tests evaluated.
    pub isleft_evals: u64,
    /// Points placed on the deque. A point is inserted at both ends at
    /// once, which counts as one placement.
    pub placements: u64,
    /// Single-element pops from either end.
    pub removals: u64,
}

impl MelkmanStats {
    pub fn deque_ops(&self) -> u64 {
        self.placements + self.removals
    }
}

struct Tally(MelkmanStats);

impl Tally {
    #[inline]
    fn orient(&mut self, a: Point, b: Point, c: Point) -> Orientation {
        self.0.isleft_evals += 1;
        orientation(a, b, c)
    }
}

/// Whether `v`, already known to be collinear with `a` and `b`, lies on
/// the closed segment between them.
#[inline]
fn within(a: Point, b: Point, v: Point) -> bool {
    (a.x.min(b.x)..=a.x.max(b.x)).contains(&v.x) && (a.y.min(b.y)..=a.y.max(b.y)).contains(&v.y)
}

pub fn melkman(chain: &[Point]) -> HullPolygon {
    melkman_with_stats(chain).0
}

/// Hull of a simple polygonal chain of distinct points.
///
/// The deque holds the current hull as a counter-clockwise cycle whose
/// first and last entries are both the most recently added vertex. A new
/// point strictly inside (or on the boundary of) the hull is discarded
/// after two orientation tests; otherwise vertices are popped from the top
/// and removed from the bottom until the point makes a left turn with both
/// ends, and the point is placed at both ends.
pub fn melkman_with_stats(chain: &[Point]) -> (HullPolygon, MelkmanStats) {
    let mut tally = Tally(MelkmanStats::default());
    let Some((&first, rest)) = chain.split_first() else {
        return (HullPolygon::empty(), tally.0);
    };

    // the leading collinear run collapses to its two extremes
    let Some(second_at) = rest.iter().position(|&p| p != first) else {
        return (HullPolygon::single(first), tally.0);
    };
    let second = rest[second_at];
    let (mut lo, mut hi) = (first.min(second), first.max(second));
    let mut next = second_at + 2;
    while next < chain.len() && tally.orient(first, second, chain[next]) == Orientation::Collinear
    {
        lo = lo.min(chain[next]);
        hi = hi.max(chain[next]);
        next += 1;
    }
    if next == chain.len() {
        return (HullPolygon::segment(lo, hi), tally.0);
    }

    let apex = chain[next];
    let mut dq: VecDeque<Point> = VecDeque::with_capacity(chain.len().min(1024) + 1);
    if tally.orient(lo, hi, apex).is_ccw() {
        dq.extend([apex, lo, hi, apex]);
    } else {
        dq.extend([apex, hi, lo, apex]);
    }
    tally.0.placements += 3;

    for &v in &chain[next + 1..] {
        let len = dq.len();
        let (b0, b1) = (dq[0], dq[1]);
        let (t1, t0) = (dq[len - 2], dq[len - 1]);
        let bottom = tally.orient(b0, b1, v);
        let top = tally.orient(t1, t0, v);
        let inside_bottom = bottom.is_ccw()
            || (bottom == Orientation::Collinear && within(b0, b1, v));
        let inside_top =
            top.is_ccw() || (top == Orientation::Collinear && within(t1, t0, v));
        if inside_bottom && inside_top {
            continue;
        }

        let mut turn = top;
        while !turn.is_ccw() {
            dq.pop_back();
            tally.0.removals += 1;
            let len = dq.len();
            turn = tally.orient(dq[len - 2], dq[len - 1], v);
        }
        dq.push_back(v);

        let mut turn = bottom;
        while !turn.is_ccw() {
            dq.pop_front();
            tally.0.removals += 1;
            turn = tally.orient(dq[0], dq[1], v);
        }
        dq.push_front(v);
        tally.0.placements += 1;
    }

    dq.pop_back();
    (HullPolygon::from_ccw_cycle(dq.into()), tally.0)
}

/// Work counters for one [`hull_oracle`] run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    /// Comparator invocations made by the sort.
    pub comparisons: u64,
    pub cross_evals: u64,
    /// Pushes plus pops on the monotone-chain stack.
    pub stack_ops: u64,
    /// Distinct input points.
    pub distinct: usize,
}

pub fn hull_oracle(points: &[Point]) -> HullPolygon {
    hull_oracle_with_stats(points).0
}

/// Andrew's monotone chain: sort lexicographically, then build the lower
/// and upper hulls with a stack.
pub fn hull_oracle_with_stats(points: &[Point]) -> (HullPolygon, OracleStats) {
    let mut stats = OracleStats::default();
    let mut sorted = points.to_vec();
    sorted.sort_unstable_by(|a, b| {
        stats.comparisons += 1;
        (a.x, a.y).cmp(&(b.x, b.y))
    });
    sorted.dedup();
    stats.distinct = sorted.len();

    match sorted.len() {
        0 => return (HullPolygon::empty(), stats),
        1 => return (HullPolygon::single(sorted[0]), stats),
        _ => {}
    }

    let mut hull: Vec<Point> = Vec::with_capacity(2 * sorted.len());
    let mut build = |hull: &mut Vec<Point>, floor: usize, p: Point| {
        while hull.len() >= floor + 2 {
            stats.cross_evals += 1;
            if oracle_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) > 0 {
                break;
            }
            hull.pop();
            stats.stack_ops += 1;
        }
        hull.push(p);
        stats.stack_ops += 1;
    };
    for &p in &sorted {
        build(&mut hull, 0, p);
    }
    let lower_len = hull.len();
    for &p in sorted.iter().rev().skip(1) {
        build(&mut hull, lower_len - 1, p);
    }
    // the upper pass ends where the lower one started
    hull.pop();

    let hull = if hull.len() < 3 {
        HullPolygon::segment(sorted[0], sorted[sorted.len() - 1])
    } else {
        HullPolygon {
            vertices: hull,
            degenerate: false,
        }
    };
    (hull, stats)
}

/// Sign of `(a - o) x (b - o)`, exact over the full `i64` range.
fn oracle_turn(o: Point, a: Point, b: Point) -> i8 {
    let ax = a.x as i128 - o.x as i128;
    let ay = a.y as i128 - o.y as i128;
    let bx = b.x as i128 - o.x as i128;
    let by = b.y as i128 - o.y as i128;
    let lhs = ax.checked_mul(by);
    let rhs = ay.checked_mul(bx);
    if let (Some(l), Some(r)) = (lhs, rhs) {
        if let Some(d) = l.checked_sub(r) {
            return d.signum() as i8;
        }
        return if l > r { 1 } else { -1 };
    }
    // |operands| < 2^64, so the magnitudes multiply without overflow in u128
    let ls = (ax.signum() * by.signum()) as i8;
    let rs = (ay.signum() * bx.signum()) as i8;
    let lm = ax.unsigned_abs() * by.unsigned_abs();
    let rm = ay.unsigned_abs() * bx.unsigned_abs();
    let ord = match (ls, rs) {
        _ if ls != rs => ls.cmp(&rs),
        (0, _) => Ordering::Equal,
        (1, _) => lm.cmp(&rm),
        _ => rm.cmp(&lm),
    };
    ord as i8
}

/// True iff every vertex is a strict left turn and the boundary winds
/// exactly once.
pub fn is_convex(poly: &HullPolygon) -> bool {
    let v = poly.vertices();
    let n = v.len();
    if n < 3 {
        return false;
    }
    // upper half-plane of directions (angle in [0, pi)) is 0, lower is 1
    let half = |a: Point, b: Point| -> u8 {
        match b.y.cmp(&a.y) {
            Ordering::Greater => 0,
            Ordering::Equal if b.x > a.x => 0,
            _ => 1,
        }
    };
    let mut wraps = 0;
    for i in 0..n {
        let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        if !orientation(a, b, c).is_ccw() {
            return false;
        }
        // each turn is less than a half revolution, so the direction angle
        // passes 2*pi exactly when it moves from the lower to the upper half
        if half(a, b) == 1 && half(b, c) == 0 {
            wraps += 1;
        }
    }
    wraps == 1
}

/// True iff every point lies inside or on the boundary of `poly`.
pub fn contains_all(poly: &HullPolygon, points: &[Point]) -> bool {
    let v = poly.vertices();
    match v.len() {
        0 => points.is_empty(),
        1 => points.iter().all(|&p| p == v[0]),
        2 => points.iter().all(|&p| {
            orientation(v[0], v[1], p) == Orientation::Collinear && within(v[0], v[1], p)
        }),
        n => points.iter().all(|&p| {
            (0..n).all(|i| orientation(v[i], v[(i + 1) % n], p) != Orientation::Clockwise)
        }),
    }
}
