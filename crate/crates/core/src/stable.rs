//! Stable configuration, distance distribution and total firing count.
//!
//! A vertex that received `c` chips fires `⌊c / 2⌋` times and keeps `c mod 2`,
//! so the stable configuration is the parity pattern of `F`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{CoreError, Result};
use crate::lattice::{intermediate_configuration, LatticePoint, Row};

/// Fixed-length bit set; bit `k` refers to entry `k` of a row.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitPattern {
    words: Vec<u64>,
    len: usize,
}

impl BitPattern {
    pub fn zeros(len: usize) -> Self {
        BitPattern {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut p = BitPattern::zeros(bits.len());
        for (k, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            p.set(k);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, k: usize) {
        assert!(
            k < self.len,
            "bit {k} out of range for pattern of length {}",
            self.len
        );
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub fn get(&self, k: usize) -> bool {
        k < self.len && self.words[k / 64] & (1 << (k % 64)) != 0
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&k| self.get(k))
    }
}

/// Renders as `0110`, bit 0 first.
impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            f.write_str(if self.get(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Marks the odd entries of a row.
pub fn stable_row(r: &Row) -> BitPattern {
    let mut bits = BitPattern::zeros(r.len());
    for (k, &v) in r.values().iter().enumerate() {
        if v % 2 == 1 {
            bits.set(k);
        }
    }
    bits
}

/// Chips of the stable configuration within one row, aligned with the row of
/// `F` it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableRow {
    pub index: usize,
    pub y_min: usize,
    pub bits: BitPattern,
}

impl StableRow {
    pub fn from_row(r: &Row) -> Self {
        StableRow {
            index: r.index(),
            y_min: r.y_min(),
            bits: stable_row(r),
        }
    }

    pub fn chips(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.bits.ones().map(move |k| {
            let y = self.y_min + k;
            LatticePoint::new(self.index - y, y)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableConfig {
    n: u32,
    rows: Vec<StableRow>,
}

impl StableConfig {
    pub fn from_rows<'a>(n: u32, rows: impl IntoIterator<Item = &'a Row>) -> Self {
        StableConfig {
            n,
            rows: rows.into_iter().map(StableRow::from_row).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> &[StableRow] {
        &self.rows
    }

    pub fn chip_count(&self) -> usize {
        self.rows.iter().map(|r| r.bits.count_ones()).sum()
    }

    pub fn chips(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.rows.iter().flat_map(StableRow::chips)
    }

    pub fn has_chip(&self, p: LatticePoint) -> bool {
        self.rows
            .get(p.row())
            .map(|r| p.y >= r.y_min && r.bits.get(p.y - r.y_min))
            .unwrap_or(false)
    }

    pub fn first_marked_row(&self) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.bits.count_ones() > 0)
            .map(|r| r.index)
    }

    pub fn last_marked_row(&self) -> Option<usize> {
        self.rows
            .iter()
            .rev()
            .find(|r| r.bits.count_ones() > 0)
            .map(|r| r.index)
    }
}

pub fn stable_configuration(n: u32) -> Result<StableConfig> {
    let rows = intermediate_configuration(n, None)?.collect_rows()?;
    Ok(StableConfig::from_rows(n, &rows))
}

/// Stable chip counts grouped by `y - x`, dense over `-m..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDistribution {
    n: u32,
    half_width: usize,
    counts: Vec<u128>,
}

impl DistanceDistribution {
    pub fn from_counts(n: u32, counts: &BTreeMap<i64, u128>) -> Self {
        let half_width = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&d, _)| d.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let m = half_width as i64;
        let dense = (-m..=m)
            .map(|d| counts.get(&d).copied().unwrap_or(0))
            .collect();
        DistanceDistribution {
            n,
            half_width,
            counts: dense,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Counts for `-m..=m`.
    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn get(&self, distance: i64) -> u128 {
        let k = distance + self.half_width as i64;
        usize::try_from(k)
            .ok()
            .and_then(|k| self.counts.get(k))
            .copied()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u128)> + '_ {
        let m = self.half_width as i64;
        self.counts
            .iter()
            .enumerate()
            .map(move |(k, &c)| (k as i64 - m, c))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts.iter().eq(self.counts.iter().rev())
    }
}

pub fn distance_distribution(s: &StableConfig) -> DistanceDistribution {
    let mut counts = BTreeMap::new();
    for p in s.chips() {
        *counts.entry(p.distance()).or_insert(0u128) += 1;
    }
    DistanceDistribution::from_counts(s.n(), &counts)
}

/// `Σ i² · D(i)`.
pub fn second_raw_moment(d: &DistanceDistribution) -> Result<u128> {
    d.iter().try_fold(0u128, |acc, (i, c)| {
        let sq = (i.unsigned_abs() as u128).pow(2);
        sq.checked_mul(c)
            .and_then(|t| acc.checked_add(t))
            .ok_or_else(|| CoreError::Overflow("second raw moment".into()))
    })
}

/// Total firings as half the second raw moment of the distance distribution.
/// Each firing of a vertex at distance `d` replaces `2d²` by
/// `(d - 1)² + (d + 1)² = 2d² + 2`, so the moment is twice the firing count.
pub fn total_firings_via_moment(n: u32) -> Result<u128> {
    let d = distance_distribution(&stable_configuration(n)?);
    let moment = second_raw_moment(&d)?;
    if moment % 2 != 0 {
        return Err(CoreError::Inconsistent(format!(
            "second raw moment {moment} for n = {n} is odd"
        )));
    }
    Ok(moment / 2)
}

/// Total firings as `Σ ⌊F(v) / 2⌋` over all vertices.
pub fn total_firings_via_sum(n: u32) -> Result<u128> {
    let mut total = 0u128;
    for row in intermediate_configuration(n, None)? {
        total = firings_in_row(&row?)
            .checked_add(total)
            .ok_or_else(|| CoreError::Overflow("total firings".into()))?;
    }
    Ok(total)
}

pub(crate) fn firings_in_row(r: &Row) -> u128 {
    r.values().iter().map(|v| v / 2).sum()
}
