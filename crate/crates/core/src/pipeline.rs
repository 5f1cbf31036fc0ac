//! End-to-end rank-based hull: bound, translate, rank, compact, scan.

use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::bitrank::{build_rank_table, BlockWidth, ShuffleVariant};
use crate::error::{Error, Result};
use crate::geometry::{bounding_box, denormalize_point, normalize, BoundingBox, Point};
use crate::hull::{hull_oracle_with_stats, melkman_with_stats, HullPolygon};
use crate::ranking::{RankFunction, RankVariant};

/// Default cap on the rank range `m`.
pub const DEFAULT_MAX_M: u64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub p: BlockWidth,
    pub rank_variant: RankVariant,
    /// Largest rank range the table may allocate.
    pub max_m: u64,
    /// Route boxes larger than `max_m` to the sort-based hull instead of
    /// failing.
    pub fallback_on_low_density: bool,
    pub shuffle_variant: ShuffleVariant,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            p: BlockWidth::P64,
            rank_variant: RankVariant::ColumnMajor,
            max_m: DEFAULT_MAX_M,
            fallback_on_low_density: true,
            shuffle_variant: ShuffleVariant::Fast,
        }
    }
}

/// Which algorithm produced a report's hull.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullRoute {
    Ranked,
    /// The box exceeded `max_m` and the comparison-sort hull was used.
    OracleFallback,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub rank_evals: u64,
    pub isleft_evals: u64,
    pub shuffle_iterations: u64,
    pub deque_ops: u64,
}

impl Counters {
    pub fn total(&self) -> u64 {
        self.rank_evals + self.isleft_evals + self.shuffle_iterations + self.deque_ops
    }
}

/// Wall-clock time of each of the five steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepTimings {
    pub bound: Duration,
    pub translate: Duration,
    pub rank: Duration,
    pub shuffle: Duration,
    pub scan: Duration,
}

impl StepTimings {
    pub fn as_array(&self) -> [Duration; 5] {
        [self.bound, self.translate, self.rank, self.shuffle, self.scan]
    }

    pub fn total(&self) -> Duration {
        self.as_array().iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    /// Hull in the caller's coordinates.
    pub hull: HullPolygon,
    /// Distinct input points.
    pub n: u64,
    pub m: u128,
    pub m1: u128,
    pub m2: u128,
    /// `n / m`; zero for empty input.
    pub density: Ratio<u128>,
    pub duplicates_skipped: u64,
    pub counters: Counters,
    pub timings: StepTimings,
    pub route: HullRoute,
}

impl PipelineReport {
    pub fn density_f64(&self) -> f64 {
        ratio_to_f64(&self.density)
    }
}

pub fn ratio_to_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Computes the hull of `points` through the rank pipeline.
///
/// Duplicate points are tolerated and counted. Boxes whose rank range
/// exceeds `cfg.max_m` fail with [`Error::BoxTooLarge`] unless
/// `cfg.fallback_on_low_density` is set.
pub fn convex_hull_ranked(points: &[Point], cfg: &PipelineConfig) -> Result<PipelineReport> {
    let mut timings = StepTimings::default();

    let clock = Instant::now();
    let bbox = match bounding_box(points) {
        Ok(b) => b,
        Err(Error::EmptyInput) => return Ok(empty_report()),
        Err(e) => return Err(e),
    };
    timings.bound = clock.elapsed();

    let m = bbox.m();
    if m > cfg.max_m as u128 {
        if cfg.fallback_on_low_density {
            return Ok(fallback(points, &bbox, timings));
        }
        return Err(Error::BoxTooLarge {
            m,
            max_m: cfg.max_m,
        });
    }

    let clock = Instant::now();
    let normalized = normalize(points, &bbox)?;
    timings.translate = clock.elapsed();

    let clock = Instant::now();
    let rf = RankFunction::for_box(cfg.rank_variant, &bbox)?;
    let table = build_rank_table(&normalized, &rf, cfg.p, cfg.max_m)?;
    let n = table.n() as u64;
    let duplicates_skipped = table.duplicates_skipped() as u64;
    timings.rank = clock.elapsed();

    let clock = Instant::now();
    let shuffled = table.shuffle_in_place(cfg.shuffle_variant);
    timings.shuffle = clock.elapsed();

    let clock = Instant::now();
    let chain: Vec<Point> = shuffled
        .order
        .iter()
        .map(|&i| normalized[i as usize])
        .collect();
    let (hull, stats) = melkman_with_stats(&chain);
    let hull = hull.map_vertices(|p| denormalize_point(p, &bbox));
    timings.scan = clock.elapsed();

    Ok(PipelineReport {
        hull,
        n,
        m,
        m1: bbox.m1(),
        m2: bbox.m2(),
        density: density(n as u128, m)?,
        duplicates_skipped,
        counters: Counters {
            rank_evals: points.len() as u64,
            isleft_evals: stats.isleft_evals,
            shuffle_iterations: shuffled.iterations,
            deque_ops: stats.deque_ops(),
        },
        timings,
        route: HullRoute::Ranked,
    })
}

fn empty_report() -> PipelineReport {
    PipelineReport {
        hull: HullPolygon::empty(),
        n: 0,
        m: 0,
        m1: 0,
        m2: 0,
        density: Ratio::from_integer(0),
        duplicates_skipped: 0,
        counters: Counters::default(),
        timings: StepTimings::default(),
        route: HullRoute::Ranked,
    }
}

fn fallback(points: &[Point], bbox: &BoundingBox, mut timings: StepTimings) -> PipelineReport {
    let clock = Instant::now();
    let (hull, stats) = hull_oracle_with_stats(points);
    timings.scan = clock.elapsed();
    let n = stats.distinct as u64;
    let m = bbox.m();
    PipelineReport {
        hull,
        n,
        m,
        m1: bbox.m1(),
        m2: bbox.m2(),
        density: Ratio::new(n as u128, m),
        duplicates_skipped: points.len() as u64 - n,
        counters: Counters {
            isleft_evals: stats.cross_evals,
            deque_ops: stats.stack_ops,
            ..Counters::default()
        },
        timings,
        route: HullRoute::OracleFallback,
    }
}

/// Fraction `n / m` of box cells occupied.
pub fn density(n: u128, m: u128) -> Result<Ratio<u128>> {
    if n == 0 || n > m {
        return Err(Error::InvalidCounts { n, m });
    }
    Ok(Ratio::new(n, m))
}

/// `1 / p`: below this density the empty-block tests of the fast shuffle
/// outnumber the points.
pub fn density_threshold_simple(p: u32) -> Ratio<u128> {
    assert!(p >= 1, "block width must be positive");
    Ratio::new(1, p as u128)
}

/// `1 / (2p(2p^2 + 5p + 1) + 1)`: below this density the cost of empty-block
/// tests, weighted against an orientation test of `2p^2 + 5p + 1` bit
/// operations, exceeds the per-point work.
pub fn density_threshold_refined(p: u32) -> Ratio<u128> {
    assert!(p >= 1, "block width must be positive");
    let p = p as u128;
    Ratio::new(1, 2 * p * (2 * p * p + 5 * p + 1) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::hull_oracle;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn triangle_report() {
        let pts = [pt(5, 7), pt(9, 7), pt(7, 9)];
        let r = convex_hull_ranked(&pts, &PipelineConfig::default()).unwrap();
        assert_eq!(r.hull.vertices(), pts);
        assert_eq!((r.m, r.m1, r.m2, r.n), (15, 5, 3, 3));
        assert_eq!(r.density, Ratio::new(1, 5));
        assert_eq!(r.route, HullRoute::Ranked);
        // one 64-bit block plus three extractions
        assert_eq!(r.counters.shuffle_iterations, 1 + 3);
        assert_eq!(r.counters.rank_evals, 3);
    }

    #[test]
    fn repeated_point() {
        let pts = vec![pt(-4, 11); 10];
        let r = convex_hull_ranked(&pts, &PipelineConfig::default()).unwrap();
        assert_eq!(r.hull, HullPolygon::single(pt(-4, 11)));
        assert_eq!(r.duplicates_skipped, 9);
        assert_eq!(r.n, 1);
        assert_eq!(r.density, Ratio::from_integer(1));
    }

    #[test]
    fn empty_input_gives_empty_report() {
        let r = convex_hull_ranked(&[], &PipelineConfig::default()).unwrap();
        assert!(r.hull.is_empty());
        assert_eq!(r.n, 0);
    }

    #[test]
    fn oversized_box_falls_back_or_fails() {
        let pts = [pt(0, 0), pt(1 << 40, 1 << 40), pt(5, 1 << 39), pt(7, 7)];
        let r = convex_hull_ranked(&pts, &PipelineConfig::default()).unwrap();
        assert_eq!(r.route, HullRoute::OracleFallback);
        assert_eq!(r.hull, hull_oracle(&pts));

        let strict = PipelineConfig {
            fallback_on_low_density: false,
            ..PipelineConfig::default()
        };
        assert!(matches!(
            convex_hull_ranked(&pts, &strict),
            Err(Error::BoxTooLarge { .. })
        ));
    }

    #[test]
    fn extreme_coordinates_fall_back_cleanly() {
        let pts = [
            pt(i64::MIN, i64::MIN),
            pt(i64::MAX, i64::MIN),
            pt(0, i64::MAX),
            pt(0, 0),
        ];
        let r = convex_hull_ranked(&pts, &PipelineConfig::default()).unwrap();
        assert_eq!(r.hull.len(), 3);
        assert_eq!(r.hull, hull_oracle(&pts));
    }

    #[test]
    fn every_configuration_agrees() {
        let pts: Vec<Point> = (0..200)
            .map(|i| pt((i * 37) % 61 - 30, (i * 53) % 47 + 1000))
            .collect();
        let expected = hull_oracle(&pts);
        for width in BlockWidth::ALL {
            for rank_variant in [RankVariant::ColumnMajor, RankVariant::RowMajor] {
                for shuffle in [ShuffleVariant::Naive, ShuffleVariant::Fast] {
                    let cfg = PipelineConfig {
                        p: width,
                        rank_variant,
                        shuffle_variant: shuffle,
                        ..PipelineConfig::default()
                    };
                    let r = convex_hull_ranked(&pts, &cfg).unwrap();
                    assert_eq!(r.hull, expected, "{cfg:?}");
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(7, 7).unwrap(), Ratio::from_integer(1));
        let d = density(9216, 307_200).unwrap();
        assert_eq!(d, Ratio::new(3, 100));
        assert_eq!(density(1, 2).unwrap(), Ratio::new(1, 2));
        assert!(matches!(density(0, 5), Err(Error::InvalidCounts { .. })));
        assert!(matches!(density(6, 5), Err(Error::InvalidCounts { .. })));
    }

    #[test]
    fn thresholds() {
        assert_eq!(density_threshold_simple(32), Ratio::new(1, 32));
        assert_eq!(density_threshold_simple(64), Ratio::new(1, 64));
        assert_eq!(density_threshold_simple(1), Ratio::from_integer(1));

        assert_eq!(density_threshold_refined(32), Ratio::new(1, 141_377));
        assert_eq!(density_threshold_refined(64), Ratio::new(1, 1_089_665));
        assert_eq!(density_threshold_refined(1), Ratio::new(1, 17));

        let r32 = ratio_to_f64(&density_threshold_refined(32));
        assert!((r32 - 7.07e-6).abs() < 0.005e-6);
        let r64 = ratio_to_f64(&density_threshold_refined(64));
        assert!((r64 - 9.18e-7).abs() < 0.005e-7);

        for p in 2..=256 {
            assert!(density_threshold_refined(p) < density_threshold_simple(p));
        }
    }
}
