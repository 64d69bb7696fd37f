//! Rows of the intermediate firing configuration and the row recurrence.
//!
//! Row `i` holds the vertices `(x, y)` with `x + y = i`. Every chip a vertex
//! of row `i + 1` ever receives comes from row `i`, and a vertex that received
//! `c` chips fires `⌊c / 2⌋` times, sending that many chips to each child. So
//!
//! ```text
//! F(x, y) = ⌊F(x - 1, y) / 2⌋ + ⌊F(x, y - 1) / 2⌋
//! ```
//!
//! and the whole table can be produced one row at a time.

use std::fmt;
use std::mem;

use crate::error::{CoreError, Result};
use crate::structure::row_bound;

/// Number of chips at a vertex. Every entry of `F` is at most `2^n`.
pub type ChipCount = u128;

/// Largest exponent accepted for the initial pile of `2^n` chips.
pub const MAX_N: u32 = 126;

/// A vertex of the quadrant lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: usize,
    pub y: usize,
}

impl LatticePoint {
    pub fn new(x: usize, y: usize) -> Self {
        LatticePoint { x, y }
    }

    /// Row index `x + y`.
    pub fn row(&self) -> usize {
        self.x + self.y
    }

    /// Signed distance from the diagonal, `y - x`.
    pub fn distance(&self) -> i64 {
        self.y as i64 - self.x as i64
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One antidiagonal of `F`, trimmed to its nonzero span.
///
/// `values[k]` is the chip count at `y = y_min + k`, `x = index - y`.
/// Positions outside the span hold zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    index: usize,
    y_min: usize,
    values: Vec<ChipCount>,
}

impl Row {
    /// Builds a row from raw parts, rejecting zero entries and spans that
    /// leave the quadrant.
    pub fn new(index: usize, y_min: usize, values: Vec<ChipCount>) -> Result<Row> {
        if values.is_empty() {
            return Ok(Row::empty(index));
        }
        if let Some(k) = values.iter().position(|&v| v == 0) {
            return Err(CoreError::InvalidArgument(format!(
                "row {index} has a zero at position {k}; rows store only their nonzero span"
            )));
        }
        if y_min + values.len() - 1 > index {
            return Err(CoreError::InvalidArgument(format!(
                "row {index} with y_min {y_min} and {} entries leaves the quadrant",
                values.len()
            )));
        }
        Ok(Row {
            index,
            y_min,
            values,
        })
    }

    pub fn empty(index: usize) -> Row {
        Row {
            index,
            y_min: 0,
            values: Vec::new(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn y_min(&self) -> usize {
        self.y_min
    }

    /// Largest `y` with a nonzero entry.
    pub fn y_max(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.y_min + self.values.len() - 1)
    }

    pub fn values(&self) -> &[ChipCount] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ChipCount> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `F(index - y, y)`, zero outside the span.
    pub fn get(&self, y: usize) -> ChipCount {
        y.checked_sub(self.y_min)
            .and_then(|k| self.values.get(k))
            .copied()
            .unwrap_or(0)
    }

    /// Lattice point of the `k`-th stored entry.
    pub fn point(&self, k: usize) -> LatticePoint {
        let y = self.y_min + k;
        LatticePoint::new(self.index - y, y)
    }

    pub fn points(&self) -> impl Iterator<Item = (LatticePoint, ChipCount)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (self.point(k), v))
    }

    pub fn sum(&self) -> ChipCount {
        self.values.iter().sum()
    }

    pub fn odd_count(&self) -> usize {
        self.values.iter().filter(|&&v| v % 2 == 1).count()
    }

    pub fn is_palindrome(&self) -> bool {
        self.values.iter().eq(self.values.iter().rev())
    }

    /// The following row of `F`.
    pub fn next(&self) -> Row {
        next_row(self)
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} @y{}: [", self.index, self.y_min)?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Row 0: the whole pile at the origin.
pub fn initial_row(n: u32) -> Result<Row> {
    if n > MAX_N {
        return Err(CoreError::Overflow(format!(
            "2^{n} chips exceed the supported maximum of 2^{MAX_N}"
        )));
    }
    Ok(Row {
        index: 0,
        y_min: 0,
        values: vec![1u128 << n],
    })
}

/// Applies the row recurrence once.
///
/// Entry `k` of the result (before trimming) sits at `y = y_min + k` and
/// collects half of the parent at the same `y` plus half of the parent at
/// `y - 1`. Parents outside the span contribute nothing.
pub fn next_row(r: &Row) -> Row {
    let index = r.index + 1;
    if r.values.is_empty() {
        return Row::empty(index);
    }

    let mut out = Vec::with_capacity(r.values.len() + 1);
    let mut carry = 0;
    for &v in &r.values {
        let half = v / 2;
        out.push(carry + half);
        carry = half;
    }
    out.push(carry);

    let lead = out.iter().take_while(|&&v| v == 0).count();
    if lead == out.len() {
        return Row::empty(index);
    }
    let trail = out.iter().rev().take_while(|&&v| v == 0).count();
    out.truncate(out.len() - trail);
    out.drain(..lead);

    Row {
        index,
        y_min: r.y_min + lead,
        values: out,
    }
}

/// Stream of the nonzero rows of `F`, starting at row 0.
///
/// Yields `Err(CapExceeded)` once if the cap is reached while rows remain,
/// then stops.
#[derive(Debug, Clone)]
pub struct ConfigStream {
    n: u32,
    current: Row,
    rows_emitted: usize,
    cap: usize,
    failed: bool,
}

impl ConfigStream {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The row that the next call to `next` will return.
    pub fn current_row(&self) -> &Row {
        &self.current
    }

    pub fn rows_emitted(&self) -> usize {
        self.rows_emitted
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Drains the stream into a vector.
    pub fn collect_rows(self) -> Result<Vec<Row>> {
        self.collect()
    }
}

impl Iterator for ConfigStream {
    type Item = Result<Row>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.current.is_empty() {
            return None;
        }
        if self.rows_emitted >= self.cap {
            self.failed = true;
            return Some(Err(CoreError::CapExceeded {
                n: self.n,
                cap: self.cap,
            }));
        }
        let following = self.current.next();
        let row = mem::replace(&mut self.current, following);
        self.rows_emitted += 1;
        Some(Ok(row))
    }
}

/// Streams `F` for `2^n` chips.
///
/// `row_cap` limits the number of rows produced; without it the stream is
/// capped one past the theoretical bound on the last nonzero row.
pub fn intermediate_configuration(n: u32, row_cap: Option<usize>) -> Result<ConfigStream> {
    let current = initial_row(n)?;
    let cap = match row_cap {
        Some(0) => {
            return Err(CoreError::InvalidArgument(
                "row cap must be at least 1".into(),
            ));
        }
        Some(cap) => cap,
        None => usize::try_from(row_bound(n)?)
            .ok()
            .and_then(|b| b.checked_add(1))
            .unwrap_or(usize::MAX),
    };
    Ok(ConfigStream {
        n,
        current,
        rows_emitted: 0,
        cap,
        failed: false,
    })
}

/// All nonzero rows of `F`.
pub fn configuration(n: u32) -> Result<Vec<Row>> {
    intermediate_configuration(n, None)?.collect_rows()
}

/// `F(x, y)`, computed by streaming up to row `x + y`.
pub fn entry(n: u32, x: usize, y: usize) -> Result<ChipCount> {
    let target = x + y;
    for row in intermediate_configuration(n, None)? {
        let row = row?;
        if row.index() == target {
            return Ok(row.get(y));
        }
    }
    Ok(0)
}
