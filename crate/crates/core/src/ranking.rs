//! Grid ranking functions.
//!
//! A rank function numbers every cell of the normalized `m1 x m2` grid
//! `1..=m`. Visiting occupied cells in ascending rank traces a simple
//! polygonal chain: column by column for [`RankVariant::ColumnMajor`], row
//! by row for [`RankVariant::RowMajor`].

use std::fmt;
use std::str::FromStr;

use crate::bitrank::{fast_shuffle, BlockWidth, RankTable};
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RankVariant {
    /// `f1(i, j) = (i - 1) * m2 + j`: walks each column bottom to top.
    #[default]
    ColumnMajor,
    /// `f2(i, j) = (j - 1) * m1 + i`: walks each row left to right.
    RowMajor,
}

impl FromStr for RankVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f1" | "column" | "column-major" => Ok(RankVariant::ColumnMajor),
            "f2" | "row" | "row-major" => Ok(RankVariant::RowMajor),
            other => Err(format!("unknown rank function {other:?} (expected f1 or f2)")),
        }
    }
}

impl fmt::Display for RankVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankVariant::ColumnMajor => "f1",
            RankVariant::RowMajor => "f2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankFunction {
    variant: RankVariant,
    m1: u64,
    m2: u64,
}

impl RankFunction {
    pub fn new(variant: RankVariant, m1: u64, m2: u64) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::InvalidCounts {
                n: m1 as u128,
                m: m2 as u128,
            });
        }
        if m1.checked_mul(m2).is_none() {
            return Err(Error::BoxTooLarge {
                m: m1 as u128 * m2 as u128,
                max_m: u64::MAX,
            });
        }
        Ok(Self { variant, m1, m2 })
    }

    /// Rank function over the normalized grid of `bbox`.
    pub fn for_box(variant: RankVariant, bbox: &BoundingBox) -> Result<Self> {
        let too_large = || Error::BoxTooLarge {
            m: bbox.m(),
            max_m: u64::MAX,
        };
        let m1 = u64::try_from(bbox.m1()).map_err(|_| too_large())?;
        let m2 = u64::try_from(bbox.m2()).map_err(|_| too_large())?;
        Self::new(variant, m1, m2)
    }

    pub fn variant(&self) -> RankVariant {
        self.variant
    }

    pub fn m1(&self) -> u64 {
        self.m1
    }

    pub fn m2(&self) -> u64 {
        self.m2
    }

    pub fn m(&self) -> u64 {
        self.m1 * self.m2
    }

    pub fn in_grid(&self, v: Point) -> bool {
        v.x >= 1 && v.y >= 1 && v.x as u64 <= self.m1 && v.y as u64 <= self.m2
    }

    pub fn rank(&self, v: Point) -> Result<u64> {
        if !self.in_grid(v) {
            return Err(Error::OutOfGrid {
                point: v,
                m1: self.m1,
                m2: self.m2,
            });
        }
        Ok(self.rank_unchecked(v))
    }

    /// Rank of a point already known to be inside the grid.
    #[inline]
    pub(crate) fn rank_unchecked(&self, v: Point) -> u64 {
        let (i, j) = (v.x as u64, v.y as u64);
        match self.variant {
            RankVariant::ColumnMajor => (i - 1) * self.m2 + j,
            RankVariant::RowMajor => (j - 1) * self.m1 + i,
        }
    }

    pub fn unrank(&self, r: u64) -> Result<Point> {
        if r == 0 || r > self.m() {
            return Err(Error::RankOutOfRange { rank: r, m: self.m() });
        }
        let (i, j) = match self.variant {
            RankVariant::ColumnMajor => {
                let j = (r - 1) % self.m2 + 1;
                ((r - j) / self.m2 + 1, j)
            }
            RankVariant::RowMajor => {
                let i = (r - 1) % self.m1 + 1;
                (i, (r - i) / self.m1 + 1)
            }
        };
        Ok(Point::new(i as i64, j as i64))
    }
}

/// Indices of `points` in ascending rank order.
///
/// The points must be distinct and already normalized to the grid of `rf`.
/// Ordering goes through a [`RankTable`] and [`fast_shuffle`], never a
/// comparison sort.
pub fn chain_order(points: &[Point], rf: &RankFunction) -> Result<Vec<usize>> {
    let mut table = RankTable::new(rf.m(), BlockWidth::P64, u64::MAX, points.len())?;
    for (idx, &p) in points.iter().enumerate() {
        let rank = rf.rank(p)?;
        if let Some(first) = table.insert(rank, idx) {
            return Err(Error::DuplicatePoint {
                first,
                second: idx,
                rank,
            });
        }
    }
    Ok(fast_shuffle(&table)
        .order
        .into_iter()
        .map(|i| i as usize)
        .collect())
}
