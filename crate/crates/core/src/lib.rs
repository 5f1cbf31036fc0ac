//! Convex hulls of dense integer point sets in linear time.
//!
//! Points are ranked into a grid order that traces a simple polygonal
//! chain, compacted with a blocked occupancy bitmap, and scanned with
//! Melkman's deque algorithm. See [`pipeline::convex_hull_ranked`].

pub mod analysis;
pub mod bitrank;
mod error;
pub mod geometry;
pub mod hull;
pub mod io;
pub mod pipeline;
pub mod ranking;

pub use bitrank::{
    build_rank_table, extract_set_bits, fast_shuffle, shuffle_naive, BitExtraction, BlockWidth,
    RankTable, ShuffleResult, ShuffleVariant,
};
pub use error::{Error, Result};
pub use geometry::{bounding_box, normalize, orientation, BoundingBox, Orientation, Point};
pub use hull::{contains_all, hull_oracle, is_convex, melkman, HullPolygon};
pub use pipeline::{
    convex_hull_ranked, density, density_threshold_refined, density_threshold_simple,
    HullRoute, PipelineConfig, PipelineReport,
};
pub use ranking::{chain_order, RankFunction, RankVariant};
