//! Shared inputs for the criterion benches.

use rankhull::geometry::Point;
use rankhull::io::generate_dense_set;
use rankhull::{BlockWidth, RankFunction, RankTable, RankVariant};

pub const SMALL: (u64, u64) = (640, 480);

/// Densities swept by the benches.
pub const DENSITIES: [f64; 4] = [0.01, 0.03, 0.10, 0.42];

pub fn dense_set(d: f64) -> Vec<Point> {
    generate_dense_set(SMALL.0, SMALL.1, d, 1).expect("valid density")
}

/// A loaded rank table over the small frame, ready to shuffle.
pub fn loaded_table(points: &[Point], width: BlockWidth) -> RankTable {
    let rf = RankFunction::new(RankVariant::ColumnMajor, SMALL.0, SMALL.1).expect("grid");
    rankhull::build_rank_table(points, &rf, width, u64::MAX).expect("table")
}
