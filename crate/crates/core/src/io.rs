//! Point files, PBM/PGM rasters and synthetic dense sets.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{fits_signed_bits, Point};

/// Default coordinate width accepted by the point-file reader.
pub const DEFAULT_COORD_BITS: u32 = 64;

/// Parses whitespace-separated `x y` lines. Blank lines and lines starting
/// with `#` are skipped. Every coordinate must fit in a signed `bits`-bit
/// integer.
pub fn parse_points(text: &str, bits: u32) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 integers, found {} fields", fields.len()),
            });
        }
        let mut xy = [0i64; 2];
        for (slot, field) in xy.iter_mut().zip(&fields) {
            let value: i128 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not an integer: {field:?}"),
            })?;
            if !fits_signed_bits(value, bits) {
                return Err(Error::CoordinateOverflow { value, bits });
            }
            *slot = value as i64;
        }
        points.push(Point::new(xy[0], xy[1]));
    }
    Ok(points)
}

pub fn load_points(path: impl AsRef<Path>, bits: u32) -> Result<Vec<Point>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_points(&text, bits)
}

pub fn write_points<W: Write>(mut out: W, points: &[Point]) -> std::io::Result<()> {
    for p in points {
        writeln!(out, "{} {}", p.x, p.y)?;
    }
    Ok(())
}

pub fn save_points(path: impl AsRef<Path>, points: &[Point]) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_points(&mut out, points).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterKind {
    /// P1/P4: a set bit is foreground.
    Bitmap,
    /// P2/P5: samples in `0..=maxval`.
    Graymap,
}

/// Decoded raster, row-major from the top-left pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageMask {
    kind: RasterKind,
    width: usize,
    height: usize,
    maxval: u16,
    samples: Vec<u16>,
}

impl ImageMask {
    /// Decodes a P1, P2, P4 or P5 image.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut hdr = Header { bytes, pos: 0 };
        let magic = hdr.magic()?;
        let (kind, ascii) = match magic {
            b'1' => (RasterKind::Bitmap, true),
            b'2' => (RasterKind::Graymap, true),
            b'4' => (RasterKind::Bitmap, false),
            b'5' => (RasterKind::Graymap, false),
            other => {
                return Err(Error::UnsupportedFormat(format!(
                    "P{}",
                    char::from(other)
                )))
            }
        };
        let width = hdr.number("width")?;
        let height = hdr.number("height")?;
        let maxval = match kind {
            RasterKind::Bitmap => 1,
            RasterKind::Graymap => {
                let v = hdr.number("maxval")?;
                if v == 0 || v > u16::MAX as usize {
                    return Err(Error::MalformedHeader(format!("maxval {v} out of range")));
                }
                v as u16
            }
        };
        let count = width
            .checked_mul(height)
            .ok_or_else(|| Error::MalformedHeader("image dimensions overflow".into()))?;

        let samples = if ascii {
            hdr.ascii_samples(kind, count, maxval)?
        } else {
            // exactly one whitespace byte separates the header from binary data
            hdr.expect_whitespace()?;
            let data = &bytes[hdr.pos..];
            match kind {
                RasterKind::Bitmap => unpack_bits(data, width, height)?,
                RasterKind::Graymap => unpack_gray(data, count, maxval)?,
            }
        };
        Ok(Self {
            kind,
            width,
            height,
            maxval,
            samples,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&bytes)
    }

    pub fn kind(&self) -> RasterKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u16 {
        self.maxval
    }

    pub fn sample(&self, x: usize, y: usize) -> u16 {
        self.samples[y * self.width + x]
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn magic(&mut self) -> Result<u8> {
        match self.bytes {
            [b'P', d, ..] => {
                self.pos = 2;
                Ok(*d)
            }
            _ => Err(Error::UnsupportedFormat("missing P magic number".into())),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("{what} too large")))
    }

    fn expect_whitespace(&mut self) -> Result<()> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::MalformedHeader(
                "expected whitespace before raster".into(),
            )),
        }
    }

    fn ascii_samples(&mut self, kind: RasterKind, count: usize, maxval: u16) -> Result<Vec<u16>> {
        let mut samples = Vec::with_capacity(count.min(1 << 24));
        while samples.len() < count {
            self.skip_space_and_comments();
            let Some(&b) = self.bytes.get(self.pos) else {
                return Err(Error::TruncatedRaster {
                    expected: count,
                    got: samples.len(),
                });
            };
            let value = match kind {
                // plain bitmaps may run digits together
                RasterKind::Bitmap => {
                    self.pos += 1;
                    match b {
                        b'0' => 0,
                        b'1' => 1,
                        _ => {
                            return Err(Error::MalformedHeader(format!(
                                "bad bitmap sample {:?}",
                                char::from(b)
                            )))
                        }
                    }
                }
                RasterKind::Graymap => {
                    let v = self.number("sample")?;
                    if v > maxval as usize {
                        return Err(Error::MalformedHeader(format!(
                            "sample {v} exceeds maxval {maxval}"
                        )));
                    }
                    v as u16
                }
            };
            samples.push(value);
        }
        Ok(samples)
    }
}

fn unpack_bits(data: &[u8], width: usize, height: usize) -> Result<Vec<u16>> {
    let row_bytes = width.div_ceil(8);
    let needed = row_bytes * height;
    if data.len() < needed {
        return Err(Error::TruncatedRaster {
            expected: needed,
            got: data.len(),
        });
    }
    let mut samples = Vec::with_capacity(width * height);
    for row in data[..needed].chunks_exact(row_bytes.max(1)).take(height) {
        for x in 0..width {
            samples.push(((row[x / 8] >> (7 - x % 8)) & 1) as u16);
        }
    }
    Ok(samples)
}

fn unpack_gray(data: &[u8], count: usize, maxval: u16) -> Result<Vec<u16>> {
    let wide = maxval > 255;
    let needed = if wide { count * 2 } else { count };
    if data.len() < needed {
        return Err(Error::TruncatedRaster {
            expected: needed,
            got: data.len(),
        });
    }
    let samples: Vec<u16> = if wide {
        data[..needed]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    } else {
        data[..needed].iter().map(|&b| b as u16).collect()
    };
    if let Some(&bad) = samples.iter().find(|&&s| s > maxval) {
        return Err(Error::MalformedHeader(format!(
            "sample {bad} exceeds maxval {maxval}"
        )));
    }
    Ok(samples)
}

/// Foreground pixels as points, `x` rightward and `y` downward from the
/// top-left pixel at `(0, 0)`, in row-major order.
///
/// Bitmaps use their set bits and ignore `threshold`. Graymap pixels are
/// foreground when the sample is at least `threshold`, which must lie in
/// `1..=maxval`.
pub fn image_to_points(mask: &ImageMask, threshold: u16) -> Result<Vec<Point>> {
    let threshold = match mask.kind {
        RasterKind::Bitmap => 1,
        RasterKind::Graymap => {
            if threshold == 0 || threshold > mask.maxval {
                return Err(Error::InvalidThreshold {
                    threshold: threshold.into(),
                    maxval: mask.maxval.into(),
                });
            }
            threshold
        }
    };
    let mut points = Vec::new();
    for y in 0..mask.height {
        for x in 0..mask.width {
            if mask.sample(x, y) >= threshold {
                points.push(Point::new(x as i64, y as i64));
            }
        }
    }
    Ok(points)
}

/// `n` distinct grid cells of `[1..=m1] x [1..=m2]`, drawn uniformly without
/// replacement and reproducible from `seed`.
pub fn generate_points(m1: u64, m2: u64, n: u64, seed: u64) -> Result<Vec<Point>> {
    let m = m1
        .checked_mul(m2)
        .filter(|&m| m > 0 && usize::try_from(m).is_ok() && m1 <= i64::MAX as u64 && m2 <= i64::MAX as u64)
        .ok_or(Error::InvalidCounts {
            n: n as u128,
            m: m1 as u128 * m2 as u128,
        })?;
    if n > m {
        return Err(Error::InvalidCounts {
            n: n as u128,
            m: m as u128,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = index::sample(&mut rng, m as usize, n as usize);
    Ok(cells
        .into_iter()
        .map(|k| {
            let k = k as u64;
            Point::new((k % m1 + 1) as i64, (k / m1 + 1) as i64)
        })
        .collect())
}

/// Point count for density `d` on an `m1 x m2` grid: `round(d * m)`.
pub fn points_for_density(m1: u64, m2: u64, d: f64) -> Result<u64> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::InvalidDensity(d));
    }
    Ok(((d * (m1 as f64 * m2 as f64)).round() as u64).min(m1.saturating_mul(m2)))
}

/// Exactly `round(d * m1 * m2)` distinct points at target density `d`.
pub fn generate_dense_set(m1: u64, m2: u64, d: f64, seed: u64) -> Result<Vec<Point>> {
    let n = points_for_density(m1, m2, d)?;
    generate_points(m1, m2, n, seed)
}
