use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rankhull::analysis::{run_benchmark, write_csv, write_normalized_csv, BenchmarkPlan, Competitor, SampleSize};
use rankhull::io::{generate_dense_set, image_to_points, load_points, save_points, ImageMask};
use rankhull::pipeline::ratio_to_f64;
use rankhull::{
    convex_hull_ranked, density_threshold_refined, density_threshold_simple, hull_oracle,
    BlockWidth, HullPolygon, PipelineConfig, Point, RankVariant, ShuffleVariant,
};

const EXIT_MISMATCH: u8 = 2;

#[derive(Parser)]
#[command(name = "rankhull", version, about = "Convex hulls of dense integer point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct HullOpts {
    /// Block width in bits.
    #[arg(long, default_value = "64")]
    p: BlockWidth,
    /// Rank function: f1 (column-major) or f2 (row-major).
    #[arg(long, default_value = "f1")]
    rank: RankVariant,
    #[arg(long, default_value = "fast")]
    shuffle: ShuffleVariant,
    /// Largest rank range before the sort-based fallback is used.
    #[arg(long, default_value_t = rankhull::pipeline::DEFAULT_MAX_M)]
    max_m: u64,
    /// Fail instead of falling back when the box exceeds --max-m.
    #[arg(long)]
    no_fallback: bool,
    /// Also compute the hull by sorting and exit 2 if they differ.
    #[arg(long)]
    verify: bool,
}

impl HullOpts {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            p: self.p,
            rank_variant: self.rank,
            max_m: self.max_m,
            fallback_on_low_density: !self.no_fallback,
            shuffle_variant: self.shuffle,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Hull of a point file, one vertex per line, counter-clockwise.
    Hull {
        file: PathBuf,
        #[command(flatten)]
        opts: HullOpts,
        /// Signed bit width every coordinate must fit in.
        #[arg(long, default_value_t = rankhull::io::DEFAULT_COORD_BITS)]
        coord_bits: u32,
    },
    /// Hull of the foreground pixels of a PBM or PGM image.
    ImageHull {
        file: PathBuf,
        /// Smallest graymap sample counted as foreground.
        #[arg(long, default_value_t = 1)]
        threshold: u16,
        #[command(flatten)]
        opts: HullOpts,
    },
    /// Write a random dense point set.
    Gen {
        #[arg(long)]
        width: u64,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep densities and block widths, writing one CSV row per cell.
    Bench {
        #[arg(long, default_value_t = 640)]
        width: u64,
        #[arg(long, default_value_t = 480)]
        height: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        densities: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "64")]
        p_list: Vec<BlockWidth>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Add the sort-based hull as a competitor.
        #[arg(long)]
        oracle: bool,
        /// Run cells in parallel; timings become unreliable.
        #[arg(long)]
        parallel: bool,
        /// Also write median times normalized to the slowest cell.
        #[arg(long)]
        normalized_out: Option<PathBuf>,
    },
    /// Print the simple and refined density thresholds per block width.
    Thresholds {
        #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
        p_list: Vec<u32>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Hull {
            file,
            opts,
            coord_bits,
        } => {
            let points = load_points(&file, coord_bits)?;
            hull_command(&points, &opts)
        }
        Command::ImageHull {
            file,
            threshold,
            opts,
        } => {
            let mask = ImageMask::load(&file)?;
            let points = image_to_points(&mask, threshold)?;
            hull_command(&points, &opts)
        }
        Command::Gen {
            width,
            height,
            density,
            seed,
            out,
        } => {
            let points = generate_dense_set(width, height, density, seed)?;
            save_points(&out, &points)?;
            eprintln!("wrote {} points to {}", points.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            width,
            height,
            densities,
            p_list,
            reps,
            seed,
            out,
            oracle,
            parallel,
            normalized_out,
        } => {
            let mut competitors = vec![Competitor::RankPipeline];
            if oracle {
                competitors.push(Competitor::OracleSortHull);
            }
            let plan = BenchmarkPlan {
                sizes: densities.into_iter().map(SampleSize::Density).collect(),
                p_list,
                reps,
                seed,
                competitors,
                timing: !parallel,
                ..BenchmarkPlan::new(width, height)
            };
            let outcome = run_benchmark(&plan)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_csv(BufWriter::new(file), &outcome.rows)?;
            if let Some(path) = normalized_out {
                let file =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_normalized_csv(BufWriter::new(file), &outcome.rows)?;
            }
            for f in &outcome.failures {
                eprintln!("cell {:?} p={} {} failed: {}", f.size, f.p, f.variant, f.message);
            }
            if !outcome.failures.is_empty() {
                bail!("{} benchmark cells failed", outcome.failures.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Thresholds { p_list } => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "p\tkind\texact\tvalue")?;
            for p in p_list {
                if p == 0 {
                    bail!("block width must be positive");
                }
                for (kind, r) in [
                    ("simple", density_threshold_simple(p)),
                    ("refined", density_threshold_refined(p)),
                ] {
                    writeln!(
                        out,
                        "{p}\t{kind}\t{}/{}\t{:.2e}",
                        r.numer(),
                        r.denom(),
                        ratio_to_f64(&r)
                    )?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn hull_command(points: &[Point], opts: &HullOpts) -> Result<ExitCode> {
    let report = convex_hull_ranked(points, &opts.config())?;
    print_hull(&report.hull)?;
    if opts.verify {
        let expected = hull_oracle(points);
        if expected != report.hull {
            eprintln!("verify: hull differs from the sort-based hull");
            eprintln!("expected:");
            for v in expected.vertices() {
                eprintln!("{} {}", v.x, v.y);
            }
            return Ok(ExitCode::from(EXIT_MISMATCH));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_hull(hull: &HullPolygon) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for v in hull.vertices() {
        writeln!(out, "{} {}", v.x, v.y)?;
    }
    out.flush()
}
