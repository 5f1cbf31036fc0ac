//! Benchmark sweeps, least-squares fits and operation-count comparisons.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bitrank::BlockWidth;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::hull::hull_oracle_with_stats;
use crate::io::{generate_points, points_for_density};
use crate::pipeline::{convex_hull_ranked, PipelineConfig};

/// CSV header written by [`write_csv`].
pub const CSV_HEADER: [&str; 17] = [
    "m1",
    "m2",
    "m",
    "n",
    "density",
    "p",
    "variant",
    "rep_count",
    "median_ns",
    "step1_ns",
    "step2_ns",
    "step3_ns",
    "step4_ns",
    "step5_ns",
    "isleft_evals",
    "shuffle_iterations",
    "deque_ops",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SampleSize {
    Density(f64),
    Points(u64),
}

impl SampleSize {
    fn resolve(self, m1: u64, m2: u64) -> Result<u64> {
        match self {
            SampleSize::Density(d) => points_for_density(m1, m2, d),
            SampleSize::Points(n) => {
                let m = m1.saturating_mul(m2);
                if n == 0 || n > m {
                    Err(Error::InvalidCounts {
                        n: n as u128,
                        m: m as u128,
                    })
                } else {
                    Ok(n)
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Competitor {
    RankPipeline,
    OracleSortHull,
}

impl fmt::Display for Competitor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Competitor::RankPipeline => "rank_pipeline",
            Competitor::OracleSortHull => "oracle_sort_hull",
        })
    }
}

impl FromStr for Competitor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rank_pipeline" | "rank" => Ok(Competitor::RankPipeline),
            "oracle_sort_hull" | "oracle" => Ok(Competitor::OracleSortHull),
            other => Err(format!("unknown competitor {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkPlan {
    pub m1: u64,
    pub m2: u64,
    pub sizes: Vec<SampleSize>,
    pub p_list: Vec<BlockWidth>,
    /// Timed repetitions per cell, after one discarded warm-up run.
    pub reps: usize,
    pub seed: u64,
    pub competitors: Vec<Competitor>,
    /// Run cells one at a time so wall-clock readings are not disturbed.
    /// When false, cells run on a thread pool and only counters are
    /// trustworthy.
    pub timing: bool,
    pub pipeline: PipelineConfig,
}

impl BenchmarkPlan {
    pub fn new(m1: u64, m2: u64) -> Self {
        Self {
            m1,
            m2,
            sizes: Vec::new(),
            p_list: vec![BlockWidth::P64],
            reps: 3,
            seed: 0,
            competitors: vec![Competitor::RankPipeline],
            timing: true,
            pipeline: PipelineConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m1 == 0 || self.m2 == 0 {
            return Err(Error::InvalidCounts {
                n: 0,
                m: self.m1 as u128 * self.m2 as u128,
            });
        }
        if self.reps < 3 {
            return Err(Error::InsufficientData {
                needed: 3,
                got: self.reps,
            });
        }
        for size in &self.sizes {
            if let SampleSize::Density(d) = *size {
                if !(d > 0.0 && d <= 1.0) {
                    return Err(Error::InvalidDensity(d));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRow {
    pub m1: u64,
    pub m2: u64,
    pub m: u64,
    pub n: u64,
    pub density: f64,
    /// Block width; 0 for the sort-based competitor.
    pub p: u32,
    pub variant: Competitor,
    pub rep_count: usize,
    pub median_ns: u64,
    pub step_ns: [u64; 5],
    pub isleft_evals: u64,
    pub shuffle_iterations: u64,
    pub deque_ops: u64,
    /// Observed minus fitted median time within the row's `(p, variant)`
    /// series, when that series supports a fit.
    pub fit_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellFailure {
    pub size: SampleSize,
    pub p: u32,
    pub variant: Competitor,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchmarkOutcome {
    pub rows: Vec<BenchmarkRow>,
    pub failures: Vec<CellFailure>,
}

struct Cell {
    size_index: usize,
    size: SampleSize,
    width: Option<BlockWidth>,
    variant: Competitor,
}

/// Runs every `(size, p, competitor)` cell of `plan`.
///
/// Rows come out ordered by size, then block width, then competitor. The
/// sort-based competitor does not depend on `p` and gets one row per size.
/// A failing cell is recorded in `failures` and the sweep continues.
pub fn run_benchmark(plan: &BenchmarkPlan) -> Result<BenchmarkOutcome> {
    plan.validate()?;
    let mut cells = Vec::new();
    for (size_index, &size) in plan.sizes.iter().enumerate() {
        for (pi, &width) in plan.p_list.iter().enumerate() {
            for &variant in &plan.competitors {
                match variant {
                    Competitor::RankPipeline => cells.push(Cell {
                        size_index,
                        size,
                        width: Some(width),
                        variant,
                    }),
                    Competitor::OracleSortHull if pi == 0 => cells.push(Cell {
                        size_index,
                        size,
                        width: None,
                        variant,
                    }),
                    Competitor::OracleSortHull => {}
                }
            }
        }
    }

    let results: Vec<Result<BenchmarkRow>> = if plan.timing {
        cells.iter().map(|c| run_cell(plan, c)).collect()
    } else {
        cells.par_iter().map(|c| run_cell(plan, c)).collect()
    };

    let mut outcome = BenchmarkOutcome::default();
    for (cell, result) in cells.iter().zip(results) {
        match result {
            Ok(row) => outcome.rows.push(row),
            Err(e) => outcome.failures.push(CellFailure {
                size: cell.size,
                p: cell.width.map_or(0, BlockWidth::bits),
                variant: cell.variant,
                message: e.to_string(),
            }),
        }
    }
    attach_residuals(&mut outcome.rows);
    Ok(outcome)
}

/// Seed of the point set for the `index`-th size; shared by every block
/// width and competitor so they see the same input.
pub fn cell_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn run_cell(plan: &BenchmarkPlan, cell: &Cell) -> Result<BenchmarkRow> {
    let n = cell.size.resolve(plan.m1, plan.m2)?;
    let points = generate_points(plan.m1, plan.m2, n, cell_seed(plan.seed, cell.size_index))?;
    let m = plan.m1 * plan.m2;

    let mut totals = Vec::with_capacity(plan.reps);
    let mut steps: [Vec<u64>; 5] = Default::default();
    let mut counters = (0, 0, 0);
    for rep in 0..=plan.reps {
        let (total, step, c) = match cell.width {
            Some(width) => {
                let cfg = PipelineConfig {
                    p: width,
                    ..plan.pipeline
                };
                let clock = Instant::now();
                let report = convex_hull_ranked(&points, &cfg)?;
                let total = clock.elapsed();
                (
                    total,
                    report.timings.as_array(),
                    (
                        report.counters.isleft_evals,
                        report.counters.shuffle_iterations,
                        report.counters.deque_ops,
                    ),
                )
            }
            None => {
                let clock = Instant::now();
                let (_, stats) = hull_oracle_with_stats(&points);
                let total = clock.elapsed();
                let mut step = [Duration::ZERO; 5];
                step[4] = total;
                (total, step, (stats.cross_evals, 0, stats.stack_ops))
            }
        };
        if rep == 0 {
            counters = c;
            continue;
        }
        totals.push(nanos(total));
        for (acc, d) in steps.iter_mut().zip(step) {
            acc.push(nanos(d));
        }
    }

    Ok(BenchmarkRow {
        m1: plan.m1,
        m2: plan.m2,
        m,
        n,
        density: n as f64 / m as f64,
        p: cell.width.map_or(0, BlockWidth::bits),
        variant: cell.variant,
        rep_count: plan.reps,
        median_ns: median(&mut totals).max(1),
        step_ns: steps.map(|mut s| median(&mut s)),
        isleft_evals: counters.0,
        shuffle_iterations: counters.1,
        deque_ops: counters.2,
        fit_residual: None,
    })
}

fn nanos(d: Duration) -> u64 {
    d.as_nanos().min(u64::MAX as u128) as u64
}

/// Upper median.
fn median(values: &mut [u64]) -> u64 {
    if values.is_empty() {
        return 0;
    }
    let mid = values.len() / 2;
    *values.select_nth_unstable(mid).1
}

fn attach_residuals(rows: &mut [BenchmarkRow]) {
    let mut series: Vec<(u32, Competitor)> = rows.iter().map(|r| (r.p, r.variant)).collect();
    series.dedup();
    series.sort_by_key(|&(p, v)| (p, v as u8));
    series.dedup();
    for (p, variant) in series {
        let idx: Vec<usize> = (0..rows.len())
            .filter(|&i| rows[i].p == p && rows[i].variant == variant)
            .collect();
        let samples: Vec<(f64, f64)> = idx
            .iter()
            .map(|&i| (rows[i].n as f64, rows[i].median_ns as f64))
            .collect();
        if let Ok(fit) = linear_fit(&samples) {
            for &i in &idx {
                let predicted = fit.slope * rows[i].n as f64 + fit.intercept;
                rows[i].fit_residual = Some(rows[i].median_ns as f64 - predicted);
            }
        }
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[BenchmarkRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.m1.to_string(),
            r.m2.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            format!("{:.6}", r.density),
            r.p.to_string(),
            r.variant.to_string(),
            r.rep_count.to_string(),
            r.median_ns.to_string(),
            r.step_ns[0].to_string(),
            r.step_ns[1].to_string(),
            r.step_ns[2].to_string(),
            r.step_ns[3].to_string(),
            r.step_ns[4].to_string(),
            r.isleft_evals.to_string(),
            r.shuffle_iterations.to_string(),
            r.deque_ops.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// Median times scaled so the slowest row is 1.
pub fn normalized_times(rows: &[BenchmarkRow]) -> Vec<f64> {
    let max = rows.iter().map(|r| r.median_ns).max().unwrap_or(0);
    if max == 0 {
        return vec![0.0; rows.len()];
    }
    rows.iter()
        .map(|r| r.median_ns as f64 / max as f64)
        .collect()
}

/// Writes `n,p,variant,normalized_time` per row.
pub fn write_normalized_csv<W: Write>(out: W, rows: &[BenchmarkRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "p", "variant", "normalized_time"])?;
    for (r, t) in rows.iter().zip(normalized_times(rows)) {
        w.write_record([
            r.n.to_string(),
            r.p.to_string(),
            r.variant.to_string(),
            format!("{t:.6}"),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
///
/// Needs at least four samples spanning two distinct `x` values. Constant
/// `y` is fitted exactly and reports `r_squared = 1`.
pub fn linear_fit(samples: &[(f64, f64)]) -> Result<LinearFit> {
    if samples.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: samples.len(),
        });
    }
    let k = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / k;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / k;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in samples {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = samples
            .iter()
            .map(|&(x, y)| {
                let e = y - (slope * x + intercept);
                e * e
            })
            .sum();
        1.0 - ss_res / syy
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// `1 / log2(n)`: the density above which the rank method's `m` term is
/// dominated by a sort's `n log2 n`. `None` for `n < 2`.
pub fn crossover_ratio(n: u64) -> Option<f64> {
    (n >= 2).then(|| 1.0 / (n as f64).log2())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperationCounts {
    pub n: u64,
    /// Shuffle iterations plus rank evaluations.
    pub rank_ops: u64,
    /// Comparator calls made by the sort-based hull.
    pub sort_comparisons: u64,
}

impl OperationCounts {
    pub fn rank_cheaper(&self) -> bool {
        self.rank_ops < self.sort_comparisons
    }
}

/// Counts the ordering work of both hull routes on the same input.
pub fn compare_operation_counts(points: &[Point], cfg: &PipelineConfig) -> Result<OperationCounts> {
    let report = convex_hull_ranked(points, cfg)?;
    let (_, stats) = hull_oracle_with_stats(points);
    Ok(OperationCounts {
        n: report.n,
        rank_ops: report.counters.shuffle_iterations + report.counters.rank_evals,
        sort_comparisons: stats.comparisons,
    })
}
