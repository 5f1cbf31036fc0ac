//! Independent reference checks shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rankhull::Point;

fn cross(o: Point, a: Point, b: Point) -> i128 {
    let (ax, ay) = (a.x as i128 - o.x as i128, a.y as i128 - o.y as i128);
    let (bx, by) = (b.x as i128 - o.x as i128, b.y as i128 - o.y as i128);
    ax * by - ay * bx
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p) == 0
        && a.x.min(b.x) <= p.x
        && p.x <= a.x.max(b.x)
        && a.y.min(b.y) <= p.y
        && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) || on_segment(a, b, d)
}

/// First pair of chain segments that meet illegally: non-adjacent segments
/// that touch, or adjacent ones that overlap beyond their shared vertex.
pub fn chain_violation(chain: &[Point]) -> Option<(usize, usize)> {
    let k = chain.len();
    if k < 3 {
        return None;
    }
    for i in 0..k - 2 {
        let (a, b, c) = (chain[i], chain[i + 1], chain[i + 2]);
        // adjacent segments fold back onto each other
        if on_segment(a, b, c) || on_segment(b, c, a) {
            return Some((i, i + 1));
        }
    }
    for i in 0..k - 1 {
        for j in i + 2..k - 1 {
            if segments_intersect(chain[i], chain[i + 1], chain[j], chain[j + 1]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Point indices ordered by rank with a comparison sort.
pub fn order_by_sorting(ranks: &[u64]) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..ranks.len() as u32).collect();
    idx.sort_by_key(|&i| ranks[i as usize]);
    idx
}

/// Random points in `[0, hi]^2`. With `messy`, some points are repeated
/// and an axis-aligned or diagonal collinear run is spliced in.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, hi: i64, messy: bool) -> Vec<Point> {
    let mut pts: Vec<Point> = (0..n)
        .map(|_| Point::new(rng.random_range(0..=hi), rng.random_range(0..=hi)))
        .collect();
    if messy && n > 0 {
        let run = rng.random_range(2..=n.max(2)).min(hi as usize + 1);
        let (sx, sy) = (rng.random_range(0..=hi), rng.random_range(0..=hi));
        let (dx, dy) = [(1, 0), (0, 1), (1, 1), (1, -1)][rng.random_range(0..4)];
        for t in 0..run as i64 {
            let p = Point::new(sx + dx * t, sy + dy * t);
            if (0..=hi).contains(&p.x) && (0..=hi).contains(&p.y) {
                let at = rng.random_range(0..pts.len());
                pts[at] = p;
            }
        }
        for _ in 0..rng.random_range(1..=n.div_ceil(4)) {
            let src = pts[rng.random_range(0..pts.len())];
            let at = rng.random_range(0..pts.len());
            pts[at] = src;
        }
    }
    pts
}
