//! Blocked occupancy bitmap plus rank-indexed point table, and the two
//! compaction passes that turn them into a chain order.
//!
//! A [`RankTable`] holds one bit per rank in `1..=m`, packed into
//! `r = ceil(m / p)` words of `p` bits: rank `k` lives in word `(k - 1) / p`
//! at bit `(k - 1) % p`. Next to the bitmap sits the indirect table mapping
//! each occupied rank to the index of the input point that produced it.
//!
//! [`shuffle_naive`] walks ranks one by one. [`fast_shuffle`] walks words,
//! discards empty words with a single test, and peels set bits off non-empty
//! ones with `x & (x - 1)` and a trailing-zero count. Both emit the same
//! ascending-rank order.

use std::fmt;
use std::ops::{BitAnd, BitOr};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::ranking::RankFunction;

/// Machine word used as one bitmap block.
pub trait BlockWord:
    Copy + Eq + Default + fmt::Debug + BitOr<Output = Self> + BitAnd<Output = Self> + Send + Sync
{
    const BITS: u32;
    const ZERO: Self;

    /// Word with only bit `pos` set. `pos < BITS`.
    fn bit(pos: u32) -> Self;

    /// `x & (x - 1)`: clears the lowest set bit.
    fn clear_lowest(self) -> Self;

    /// Hardware trailing-zero count. Result unspecified for zero.
    fn trailing_zeros(self) -> u32;

    fn count_ones(self) -> u32;

    fn to_u64(self) -> u64;

    #[inline]
    fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

macro_rules! impl_block_word {
    ($($ty:ty),*) => {$(
        impl BlockWord for $ty {
            const BITS: u32 = <$ty>::BITS;
            const ZERO: Self = 0;

            #[inline(always)]
            fn bit(pos: u32) -> Self {
                1 << pos
            }

            #[inline(always)]
            fn clear_lowest(self) -> Self {
                self & self.wrapping_sub(1)
            }

            #[inline(always)]
            fn trailing_zeros(self) -> u32 {
                <$ty>::trailing_zeros(self)
            }

            #[inline(always)]
            fn count_ones(self) -> u32 {
                <$ty>::count_ones(self)
            }

            #[inline(always)]
            fn to_u64(self) -> u64 {
                self as u64
            }
        }
    )*};
}

impl_block_word!(u8, u16, u32, u64);

/// A 4-bit block stored in the low half of a byte. The high half is always
/// zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Nibble(u8);

impl Nibble {
    pub fn new(value: u8) -> Option<Self> {
        (value < 16).then_some(Nibble(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl BitOr for Nibble {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        Nibble(self.0 | rhs.0)
    }
}

impl BitAnd for Nibble {
    type Output = Self;
    fn bitand(self, rhs: Self) -> Self {
        Nibble(self.0 & rhs.0)
    }
}

impl BlockWord for Nibble {
    const BITS: u32 = 4;
    const ZERO: Self = Nibble(0);

    #[inline(always)]
    fn bit(pos: u32) -> Self {
        debug_assert!(pos < 4);
        Nibble(1 << pos)
    }

    #[inline(always)]
    fn clear_lowest(self) -> Self {
        Nibble(self.0 & self.0.wrapping_sub(1))
    }

    #[inline(always)]
    fn trailing_zeros(self) -> u32 {
        self.0.trailing_zeros()
    }

    #[inline(always)]
    fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    #[inline(always)]
    fn to_u64(self) -> u64 {
        self.0 as u64
    }
}

const DE_BRUIJN_64: u64 = 0x03f7_9d71_b4cb_0a89;

const DE_BRUIJN_TABLE: [u8; 64] = {
    let mut table = [0u8; 64];
    let mut i = 0;
    while i < 64 {
        table[((DE_BRUIJN_64 << i) >> 58) as usize] = i as u8;
        i += 1;
    }
    table
};

/// Portable trailing-zero count: isolate the lowest set bit, multiply by a
/// de Bruijn sequence and look the top six bits up. `x` must be nonzero.
#[inline]
pub fn ctz_de_bruijn(x: u64) -> u32 {
    debug_assert!(x != 0, "trailing-zero count of zero");
    let lowest = x & x.wrapping_neg();
    DE_BRUIJN_TABLE[(lowest.wrapping_mul(DE_BRUIJN_64) >> 58) as usize] as u32
}

/// Index of the least significant set bit of a nonzero word.
///
/// Compiles to the target's trailing-zero instruction unless the
/// `portable-ctz` feature selects [`ctz_de_bruijn`].
#[inline(always)]
pub fn count_trailing_zeros<W: BlockWord>(word: W) -> u32 {
    debug_assert!(!word.is_zero(), "trailing-zero count of zero");
    #[cfg(feature = "portable-ctz")]
    {
        ctz_de_bruijn(word.to_u64())
    }
    #[cfg(not(feature = "portable-ctz"))]
    {
        word.trailing_zeros()
    }
}

/// Iterator over the set bit positions of a word, lowest first.
///
/// Each step computes `next = x & (x - 1)`; the position just removed is
/// `log2(x - next)`, i.e. the trailing-zero count of `x`.
#[derive(Clone, Debug)]
pub struct SetBits<W> {
    rest: W,
    steps: u32,
}

impl<W: BlockWord> SetBits<W> {
    pub fn new(word: W) -> Self {
        Self {
            rest: word,
            steps: 0,
        }
    }

    /// Bits not yet extracted.
    pub fn remaining(&self) -> W {
        self.rest
    }

    /// Clear-lowest steps performed so far.
    pub fn steps(&self) -> u32 {
        self.steps
    }
}

impl<W: BlockWord> Iterator for SetBits<W> {
    type Item = u32;

    #[inline(always)]
    fn next(&mut self) -> Option<u32> {
        if self.rest.is_zero() {
            return None;
        }
        let pos = count_trailing_zeros(self.rest);
        self.rest = self.rest.clear_lowest();
        self.steps += 1;
        Some(pos)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.rest.count_ones() as usize;
        (n, Some(n))
    }
}

impl<W: BlockWord> ExactSizeIterator for SetBits<W> {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitExtraction {
    /// Set bit positions in ascending order.
    pub positions: Vec<u32>,
    /// Number of clear-lowest steps until the word reached zero.
    pub iterations: u32,
}

pub fn extract_set_bits<W: BlockWord>(word: W) -> BitExtraction {
    let mut bits = SetBits::new(word);
    let positions = bits.by_ref().collect();
    BitExtraction {
        positions,
        iterations: bits.steps(),
    }
}

/// Bits per bitmap block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockWidth {
    P4,
    P8,
    P16,
    P32,
    #[default]
    P64,
}

impl BlockWidth {
    pub const ALL: [BlockWidth; 5] = [
        BlockWidth::P4,
        BlockWidth::P8,
        BlockWidth::P16,
        BlockWidth::P32,
        BlockWidth::P64,
    ];

    pub fn bits(self) -> u32 {
        match self {
            BlockWidth::P4 => 4,
            BlockWidth::P8 => 8,
            BlockWidth::P16 => 16,
            BlockWidth::P32 => 32,
            BlockWidth::P64 => 64,
        }
    }

    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            4 => Ok(BlockWidth::P4),
            8 => Ok(BlockWidth::P8),
            16 => Ok(BlockWidth::P16),
            32 => Ok(BlockWidth::P32),
            64 => Ok(BlockWidth::P64),
            other => Err(Error::UnsupportedBlockWidth(other)),
        }
    }

    /// Number of blocks needed for `m` ranks.
    pub fn blocks_for(self, m: u64) -> u64 {
        m.div_ceil(self.bits() as u64)
    }
}

impl FromStr for BlockWidth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits: u32 = s
            .trim()
            .parse()
            .map_err(|_| format!("invalid block width {s:?}"))?;
        BlockWidth::from_bits(bits).map_err(|e| e.to_string())
    }
}

impl fmt::Display for BlockWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

/// The occupancy bitmap, one variant per block width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bloom {
    P4(Vec<Nibble>),
    P8(Vec<u8>),
    P16(Vec<u16>),
    P32(Vec<u32>),
    P64(Vec<u64>),
}

/// Runs `$body` with `$words` bound to the bitmap's word slice.
macro_rules! with_words {
    ($bloom:expr, $words:ident => $body:expr) => {
        match $bloom {
            Bloom::P4($words) => $body,
            Bloom::P8($words) => $body,
            Bloom::P16($words) => $body,
            Bloom::P32($words) => $body,
            Bloom::P64($words) => $body,
        }
    };
}

impl Bloom {
    fn zeroed(width: BlockWidth, blocks: usize) -> Self {
        match width {
            BlockWidth::P4 => Bloom::P4(vec![Nibble::ZERO; blocks]),
            BlockWidth::P8 => Bloom::P8(vec![0; blocks]),
            BlockWidth::P16 => Bloom::P16(vec![0; blocks]),
            BlockWidth::P32 => Bloom::P32(vec![0; blocks]),
            BlockWidth::P64 => Bloom::P64(vec![0; blocks]),
        }
    }

    pub fn width(&self) -> BlockWidth {
        match self {
            Bloom::P4(_) => BlockWidth::P4,
            Bloom::P8(_) => BlockWidth::P8,
            Bloom::P16(_) => BlockWidth::P16,
            Bloom::P32(_) => BlockWidth::P32,
            Bloom::P64(_) => BlockWidth::P64,
        }
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        with_words!(self, w => w.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Block `j` widened to 64 bits.
    pub fn word(&self, j: usize) -> u64 {
        with_words!(self, w => w[j].to_u64())
    }

    pub fn words(&self) -> Vec<u64> {
        with_words!(self, w => w.iter().map(|x| x.to_u64()).collect())
    }

    pub fn count_ones(&self) -> u64 {
        with_words!(self, w => w.iter().map(|x| x.count_ones() as u64).sum())
    }

    /// Whether zero-based rank slot `slot` is occupied.
    pub fn is_set(&self, slot: u64) -> bool {
        with_words!(self, w => test_slot(w, slot as usize))
    }
}

#[inline(always)]
fn test_slot<W: BlockWord>(words: &[W], slot: usize) -> bool {
    let bits = W::BITS as usize;
    !(words[slot / bits] & W::bit((slot % bits) as u32)).is_zero()
}

/// Sets slot `slot`; returns false if it was already set.
#[inline(always)]
fn set_slot<W: BlockWord>(words: &mut [W], slot: usize) -> bool {
    let bits = W::BITS as usize;
    let word = &mut words[slot / bits];
    let bit = W::bit((slot % bits) as u32);
    if !(*word & bit).is_zero() {
        return false;
    }
    *word = *word | bit;
    true
}

/// Occupancy bitmap plus rank -> point-index table.
#[derive(Clone, Debug)]
pub struct RankTable {
    bloom: Bloom,
    // indexed by rank - 1; an entry is meaningful only where the bloom bit
    // is set
    indirect: Vec<u32>,
    n: usize,
    m: u64,
    duplicates_skipped: usize,
}

impl RankTable {
    /// Empty table over ranks `1..=m`, sized for at most `points` inputs.
    pub fn new(m: u64, width: BlockWidth, max_m: u64, points: usize) -> Result<Self> {
        if m > max_m {
            return Err(Error::BoxTooLarge {
                m: m as u128,
                max_m,
            });
        }
        if points > u32::MAX as usize + 1 {
            return Err(Error::TooManyPoints { count: points });
        }
        let slots = usize::try_from(m).map_err(|_| Error::BoxTooLarge {
            m: m as u128,
            max_m,
        })?;
        let blocks = width.blocks_for(m) as usize;
        Ok(Self {
            bloom: Bloom::zeroed(width, blocks),
            indirect: vec![0; slots],
            n: 0,
            m,
            duplicates_skipped: 0,
        })
    }

    /// Table holding the given 1-based ranks; the `i`-th rank is recorded as
    /// point index `i`. Repeated ranks keep their first index.
    pub fn from_ranks(
        m: u64,
        width: BlockWidth,
        ranks: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        let ranks = ranks.into_iter();
        let mut table = RankTable::new(m, width, u64::MAX, ranks.size_hint().0)?;
        for (idx, rank) in ranks.enumerate() {
            if rank == 0 || rank > m {
                return Err(Error::RankOutOfRange { rank, m });
            }
            if idx > u32::MAX as usize {
                return Err(Error::TooManyPoints { count: idx + 1 });
            }
            table.insert(rank, idx);
        }
        Ok(table)
    }

    /// Records point `index` at `rank`. Returns the index already stored
    /// there if the rank was taken, leaving the table unchanged apart from
    /// the duplicate counter.
    pub(crate) fn insert(&mut self, rank: u64, index: usize) -> Option<usize> {
        debug_assert!((1..=self.m).contains(&rank));
        let slot = (rank - 1) as usize;
        let fresh = with_words!(&mut self.bloom, w => set_slot(w, slot));
        if fresh {
            self.indirect[slot] = index as u32;
            self.n += 1;
            None
        } else {
            self.duplicates_skipped += 1;
            Some(self.indirect[slot] as usize)
        }
    }

    /// Distinct ranks stored.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn width(&self) -> BlockWidth {
        self.bloom.width()
    }

    /// Block count, `ceil(m / p)`.
    pub fn r(&self) -> usize {
        self.bloom.len()
    }

    pub fn duplicates_skipped(&self) -> usize {
        self.duplicates_skipped
    }

    pub fn bloom(&self) -> &Bloom {
        &self.bloom
    }

    pub fn is_set(&self, rank: u64) -> bool {
        (1..=self.m).contains(&rank) && self.bloom.is_set(rank - 1)
    }

    /// Point index stored at `rank`, if the rank is occupied.
    pub fn indirect(&self, rank: u64) -> Option<usize> {
        self.is_set(rank)
            .then(|| self.indirect[(rank - 1) as usize] as usize)
    }

    /// Compacts the indirect table in place into ascending-rank order and
    /// returns it, consuming the table. Avoids the second `n`-sized buffer
    /// the borrowing shuffles allocate.
    pub fn shuffle_in_place(self, variant: ShuffleVariant) -> ShuffleResult {
        let RankTable {
            bloom,
            mut indirect,
            n,
            m,
            ..
        } = self;
        let mut write = 0usize;
        let mut emit = |slot: usize| {
            // slot counts every rank up to and including this one, so the
            // write cursor can never overtake it
            debug_assert!(write <= slot);
            indirect[write] = indirect[slot];
            write += 1;
        };
        let (iterations, zero_buckets_skipped) = match variant {
            ShuffleVariant::Naive => (
                with_words!(&bloom, w => scan_naive(w, m as usize, n, &mut emit)),
                0,
            ),
            ShuffleVariant::Fast => with_words!(&bloom, w => scan_fast(w, &mut emit)),
        };
        indirect.truncate(write);
        ShuffleResult {
            order: indirect,
            iterations,
            zero_buckets_skipped,
        }
    }
}

/// Loads `points` (normalized to `rf`'s grid) into a new table.
///
/// A point landing on an occupied rank is a duplicate: it is skipped and
/// counted, and the first occurrence's index is kept.
pub fn build_rank_table(
    points: &[Point],
    rf: &RankFunction,
    width: BlockWidth,
    max_m: u64,
) -> Result<RankTable> {
    let mut table = RankTable::new(rf.m(), width, max_m, points.len())?;
    let RankTable {
        bloom,
        indirect,
        n,
        duplicates_skipped,
        ..
    } = &mut table;
    let loaded = with_words!(bloom, w => load(w, indirect, points, rf))?;
    *n = loaded;
    *duplicates_skipped = points.len() - loaded;
    Ok(table)
}

fn load<W: BlockWord>(
    words: &mut [W],
    indirect: &mut [u32],
    points: &[Point],
    rf: &RankFunction,
) -> Result<usize> {
    let mut loaded = 0;
    for (idx, &p) in points.iter().enumerate() {
        if !rf.in_grid(p) {
            return Err(Error::OutOfGrid {
                point: p,
                m1: rf.m1(),
                m2: rf.m2(),
            });
        }
        let slot = (rf.rank_unchecked(p) - 1) as usize;
        if set_slot(words, slot) {
            indirect[slot] = idx as u32;
            loaded += 1;
        }
    }
    Ok(loaded)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ShuffleVariant {
    /// Rank-by-rank scan with early exit once all points are found.
    Naive,
    /// Word-at-a-time scan with set-bit extraction.
    #[default]
    Fast,
}

impl FromStr for ShuffleVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(ShuffleVariant::Naive),
            "fast" => Ok(ShuffleVariant::Fast),
            other => Err(format!("unknown shuffle {other:?} (expected naive or fast)")),
        }
    }
}

impl fmt::Display for ShuffleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShuffleVariant::Naive => "naive",
            ShuffleVariant::Fast => "fast",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShuffleResult {
    /// Input point indices in ascending rank order.
    pub order: Vec<u32>,
    /// Loop steps taken: ranks visited (naive) or block tests plus bit
    /// extractions (fast).
    pub iterations: u64,
    /// Empty blocks dismissed with a single test (fast only).
    pub zero_buckets_skipped: u64,
}

/// Visits ranks `1..=m` in order and collects the occupied ones, stopping as
/// soon as all `n` have been found.
pub fn shuffle_naive(table: &RankTable) -> ShuffleResult {
    let mut order = Vec::with_capacity(table.n);
    let iterations = with_words!(&table.bloom, w => {
        scan_naive(w, table.m as usize, table.n, |slot| order.push(table.indirect[slot]))
    });
    ShuffleResult {
        order,
        iterations,
        zero_buckets_skipped: 0,
    }
}

/// Visits every block once; empty blocks cost one test, occupied blocks
/// yield their set bits lowest first.
pub fn fast_shuffle(table: &RankTable) -> ShuffleResult {
    let mut order = Vec::with_capacity(table.n);
    let (iterations, zero_buckets_skipped) = with_words!(&table.bloom, w => {
        scan_fast(w, |slot| order.push(table.indirect[slot]))
    });
    ShuffleResult {
        order,
        iterations,
        zero_buckets_skipped,
    }
}

fn scan_naive<W: BlockWord>(
    words: &[W],
    m: usize,
    n: usize,
    mut emit: impl FnMut(usize),
) -> u64 {
    let mut found = 0;
    let mut iterations = 0;
    for slot in 0..m {
        iterations += 1;
        if test_slot(words, slot) {
            emit(slot);
            found += 1;
            if found == n {
                break;
            }
        }
    }
    iterations
}

/// Returns `(iterations, zero_blocks)` with `iterations = r + n`.
#[inline]
fn scan_fast<W: BlockWord>(words: &[W], mut emit: impl FnMut(usize)) -> (u64, u64) {
    let bits = W::BITS as usize;
    let mut extracted = 0u64;
    let mut zero = 0u64;
    for (j, &word) in words.iter().enumerate() {
        if word.is_zero() {
            zero += 1;
            continue;
        }
        let base = j * bits;
        let mut rest = word;
        while !rest.is_zero() {
            // bit b of block j holds rank p*j + b + 1, i.e. slot p*j + b
            emit(base + count_trailing_zeros(rest) as usize);
            rest = rest.clear_lowest();
            extracted += 1;
        }
    }
    (words.len() as u64 + extracted, zero)
}
