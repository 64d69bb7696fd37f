//! Row structure of `F`: lengths, the Pascal top triangle, minimal rows and
//! the top / midsection / rectangle / bottom segmentation.

use std::ops::Range;

use crate::error::{CoreError, Result};
use crate::lattice::{initial_row, intermediate_configuration, ChipCount, Row};

/// Row `i ≤ n` of `F`: `2^(n-i) · C(i, y)` for `y = 0..=i`.
pub fn pascal_row(n: u32, i: usize) -> Result<Row> {
    initial_row(n)?;
    if i > n as usize {
        return Err(CoreError::IndexOutOfRange { n, index: i });
    }
    let mut binom: Vec<ChipCount> = vec![1];
    for _ in 0..i {
        let mut next = Vec::with_capacity(binom.len() + 1);
        next.push(1);
        next.extend(binom.windows(2).map(|w| w[0] + w[1]));
        next.push(1);
        binom = next;
    }
    let scale = n as usize - i;
    Row::new(i, 0, binom.into_iter().map(|c| c << scale).collect())
}

/// Last nonzero row index can be at most this.
///
/// The diagonal entries are even and drop by at least 2 per step, starting
/// from the central binomial coefficient of row `n`, which bounds the number
/// of rows the diagonal can stay positive.
pub fn row_bound(n: u32) -> Result<u128> {
    let half = n / 2;
    let central = binomial(n, half)?;
    let n = n as u128;
    let bound = if n.is_multiple_of(2) {
        n.checked_add(central)
    } else {
        (central / 2)
            .checked_mul(2)
            .and_then(|c| c.checked_add(n + 1))
    };
    bound.ok_or_else(|| CoreError::Overflow(format!("row bound for n = {n}")))
}

fn binomial(n: u32, k: u32) -> Result<u128> {
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut c: u128 = 1;
    for j in 0..k {
        // c * (n - j) / (j + 1) stays an integer at every step.
        let g = gcd(c, j + 1);
        let (c_red, d) = (c / g, (j + 1) / g);
        c = c_red
            .checked_mul((n - j) / d)
            .ok_or_else(|| CoreError::Overflow(format!("C({n}, {k})")))?;
    }
    Ok(c)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of nonzero entries in every nonzero row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowProfile {
    pub n: u32,
    pub lengths: Vec<usize>,
}

impl RowProfile {
    pub fn nonzero_rows(&self) -> usize {
        self.lengths.len()
    }

    pub fn longest(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

pub fn row_profile(n: u32) -> Result<RowProfile> {
    let lengths = intermediate_configuration(n, None)?
        .map(|r| r.map(|r| r.len()))
        .collect::<Result<_>>()?;
    Ok(RowProfile { n, lengths })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestRow {
    pub length: usize,
    pub first_index: usize,
    pub row: Row,
}

/// The first row attaining the maximum length.
pub fn longest_row(n: u32) -> Result<LongestRow> {
    let mut best: Option<Row> = None;
    for row in intermediate_configuration(n, None)? {
        let row = row?;
        if best.as_ref().is_none_or(|b| row.len() > b.len()) {
            best = Some(row);
        }
    }
    let row = best.ok_or_else(|| CoreError::Inconsistent("configuration has no rows".into()))?;
    Ok(LongestRow {
        length: row.len(),
        first_index: row.index(),
        row,
    })
}

/// The row of `j + 1` entries with the smallest entries compatible with the
/// monotonicity constraints: `1, 3, 5, …` rising to `j` at the centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalRow {
    pub j: usize,
    pub values: Vec<ChipCount>,
}

impl MinimalRow {
    pub fn sum(&self) -> u128 {
        self.values.iter().sum()
    }
}

pub fn minimal_row(j: usize) -> Result<MinimalRow> {
    if j == 0 {
        return Err(CoreError::InvalidArgument(
            "minimal rows start at j = 1".into(),
        ));
    }
    let values = (0..=j)
        .map(|p| (2 * p + 1).min(2 * (j - p) + 1).min(j) as ChipCount)
        .collect();
    Ok(MinimalRow { j, values })
}

/// `⌊(j + 1)² / 2⌋`
pub fn minimal_row_sum(j: usize) -> Result<u128> {
    if j == 0 {
        return Err(CoreError::InvalidArgument(
            "minimal rows start at j = 1".into(),
        ));
    }
    let j = j as u128;
    Ok((j + 1) * (j + 1) / 2)
}

pub fn is_minimal(r: &Row) -> bool {
    match r.len() {
        0 | 1 => false,
        len => minimal_row(len - 1).is_ok_and(|m| m.values == r.values()),
    }
}

/// Partition of the nonzero rows into four consecutive blocks.
///
/// * top triangle: rows `0..=n` (the scaled Pascal rows);
/// * bottom triangle: the longest terminal block in which each row is one
///   entry shorter than the previous one;
/// * rectangle: the longest block directly above the bottom triangle whose
///   lengths are all `W - 1` or `W`, `W` being the longest length. This is a
///   heuristic boundary, not a derived one;
/// * midsection: whatever lies between the top triangle and the rectangle.
///
/// For small `n` the bottom triangle and the rectangle are clipped so they do
/// not reach into the top triangle; clipped blocks may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub n: u32,
    pub top_triangle: Range<usize>,
    pub midsection: Range<usize>,
    pub rectangle: Range<usize>,
    pub bottom_triangle: Range<usize>,
    pub longest_length: usize,
    pub first_longest_row: usize,
    pub total_rows: usize,
    /// Height of the bottom triangle before clipping against the top triangle.
    pub bottom_triangle_height: usize,
}

/// Consumes row lengths one at a time in O(1) memory.
///
/// Relies on consecutive lengths differing by exactly one; `finish` reports
/// an error otherwise.
#[derive(Debug, Clone)]
pub struct Segmenter {
    n: u32,
    rows: usize,
    prev_len: Option<usize>,
    longest: usize,
    first_longest: usize,
    /// Start of the trailing run of rows with length `longest - 1` or `longest`.
    run_start: Option<usize>,
    /// Start of the trailing run of rows shrinking by one each step.
    shrink_start: usize,
    /// Start of the `{W - 1, W}` run ending right before `shrink_start`.
    run_before_shrink: Option<usize>,
    bad_step: Option<usize>,
}

impl Segmenter {
    pub fn new(n: u32) -> Self {
        Segmenter {
            n,
            rows: 0,
            prev_len: None,
            longest: 0,
            first_longest: 0,
            run_start: None,
            shrink_start: 0,
            run_before_shrink: None,
            bad_step: None,
        }
    }

    pub fn push(&mut self, len: usize) {
        let r = self.rows;
        if let Some(prev) = self.prev_len {
            if prev.abs_diff(len) != 1 && self.bad_step.is_none() {
                self.bad_step = Some(r);
            }
        }

        let old_longest = self.longest;
        if len > self.longest {
            self.longest = len;
            self.first_longest = r;
        }
        let in_band = |l: usize| l + 1 >= self.longest;

        // Run ending at row r - 1, measured against the current longest length.
        // A new maximum can only be preceded by a row one shorter, and the row
        // before that is shorter still, so the run restarts there.
        let run_prev = if self.longest != old_longest {
            self.prev_len.filter(|&p| in_band(p)).map(|_| r - 1)
        } else {
            self.run_start
        };

        self.run_start = if in_band(len) {
            Some(run_prev.unwrap_or(r))
        } else {
            None
        };

        if self.prev_len != Some(len + 1) {
            self.shrink_start = r;
            self.run_before_shrink = run_prev;
        }

        self.prev_len = Some(len);
        self.rows += 1;
    }

    pub fn finish(self) -> Result<Segmentation> {
        let n = self.n;
        if let Some(r) = self.bad_step {
            return Err(CoreError::DegenerateSegmentation {
                n,
                reason: format!(
                    "row {r} does not differ in length from row {} by one",
                    r - 1
                ),
            });
        }
        if self.rows == 0 {
            return Err(CoreError::DegenerateSegmentation {
                n,
                reason: "no rows".into(),
            });
        }
        let total = self.rows;
        let top = 0..(n as usize + 1).min(total);
        let bottom_start = self.shrink_start.max(top.end);
        let bottom = bottom_start..total;
        let rect_start = match self.run_before_shrink {
            Some(s) if self.shrink_start >= top.end => s.max(top.end),
            _ => bottom_start,
        };
        let rectangle = rect_start..bottom_start;
        let midsection = top.end..rect_start;

        let ordered = top.end <= midsection.end
            && midsection.end == rectangle.start
            && rectangle.end == bottom.start
            && bottom.end == total;
        if !ordered {
            return Err(CoreError::DegenerateSegmentation {
                n,
                reason: format!(
                    "blocks overlap: top {top:?}, mid {midsection:?}, rect {rectangle:?}, bottom {bottom:?}"
                ),
            });
        }

        Ok(Segmentation {
            n,
            top_triangle: top,
            midsection,
            rectangle,
            bottom_triangle: bottom,
            longest_length: self.longest,
            first_longest_row: self.first_longest,
            total_rows: total,
            bottom_triangle_height: total - self.shrink_start,
        })
    }
}

/// Segments a sequence of row lengths.
pub fn segment_lengths(n: u32, lengths: impl IntoIterator<Item = usize>) -> Result<Segmentation> {
    let mut s = Segmenter::new(n);
    lengths.into_iter().for_each(|l| s.push(l));
    s.finish()
}

pub fn segment(n: u32) -> Result<Segmentation> {
    if n == 0 {
        return Err(CoreError::InvalidArgument(
            "segmentation needs n >= 1".into(),
        ));
    }
    let mut s = Segmenter::new(n);
    for row in intermediate_configuration(n, None)? {
        s.push(row?.len());
    }
    s.finish()
}

/// Outcome of comparing the bottom-triangle height with the longest row
/// length minus one. Informational: the relation is observed, not proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjectureReport {
    pub n: u32,
    pub holds: bool,
    pub triangle_rows: usize,
    pub longest_length: usize,
}

pub fn check_bottom_conjecture(n: u32) -> Result<ConjectureReport> {
    if n < 2 {
        return Err(CoreError::InvalidArgument(
            "the bottom-triangle check needs n >= 2".into(),
        ));
    }
    let seg = segment(n)?;
    Ok(conjecture_from(&seg))
}

pub fn conjecture_from(seg: &Segmentation) -> ConjectureReport {
    ConjectureReport {
        n: seg.n,
        holds: seg.bottom_triangle_height + 1 == seg.longest_length,
        triangle_rows: seg.bottom_triangle_height,
        longest_length: seg.longest_length,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_rows() {
        assert_eq!(pascal_row(4, 3).unwrap().values(), &[2, 6, 6, 2]);
        assert_eq!(pascal_row(7, 0).unwrap().values(), &[128]);
        assert_eq!(
            pascal_row(11, 11).unwrap().values(),
            &[1, 11, 55, 165, 330, 462, 462, 330, 165, 55, 11, 1]
        );
        assert!(matches!(
            pascal_row(4, 5),
            Err(CoreError::IndexOutOfRange { .. })
        ));
        // Largest supported case stays within the counter.
        let r = pascal_row(126, 126).unwrap();
        assert_eq!(r.sum(), 1u128 << 126);
    }

    #[test]
    fn row_bounds() {
        assert_eq!(row_bound(4).unwrap(), 10);
        assert_eq!(row_bound(5).unwrap(), 16);
        assert_eq!(row_bound(0).unwrap(), 1);
        assert_eq!(row_bound(1).unwrap(), 2);
        assert!(row_bound(126).is_ok());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5).unwrap(), 252);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(
            binomial(126, 63).unwrap(),
            6_034_934_435_761_406_706_427_864_636_568_328_000
        );
    }

    #[test]
    fn profiles() {
        assert_eq!(row_profile(0).unwrap().lengths, vec![1]);
        assert_eq!(
            row_profile(4).unwrap().lengths,
            vec![1, 2, 3, 4, 5, 4, 5, 4, 3, 2]
        );

        let p = row_profile(9).unwrap();
        assert_eq!(p.nonzero_rows(), 92);
        let l = &p.lengths;
        assert_eq!(&l[..10], &(1..=10).collect::<Vec<_>>()[..]);
        assert_eq!(
            &l[10..23],
            &[9, 10, 11, 10, 11, 10, 11, 12, 11, 12, 11, 12, 11]
        );
        for (k, &len) in l[23..80].iter().enumerate() {
            assert_eq!(len, if k % 2 == 0 { 12 } else { 13 });
        }
        assert_eq!(&l[80..], &(2..=13).rev().collect::<Vec<_>>()[..]);
    }

    #[test]
    fn longest_rows() {
        assert_eq!(longest_row(8).unwrap().length, 10);
        let l = longest_row(11).unwrap();
        assert_eq!(l.length, 19);
        assert_eq!(
            l.row.values(),
            &[1, 6, 18, 38, 66, 102, 143, 181, 208, 218, 208, 181, 143, 102, 66, 38, 18, 6, 1]
        );
        assert_eq!(longest_row(0).unwrap().first_index, 0);
    }

    #[test]
    fn minimal_rows() {
        assert_eq!(minimal_row(3).unwrap().values, vec![1, 3, 3, 1]);
        assert_eq!(minimal_row(4).unwrap().values, vec![1, 3, 4, 3, 1]);
        assert_eq!(minimal_row(1).unwrap().values, vec![1, 1]);
        assert_eq!(minimal_row(5).unwrap().sum(), 18);
        assert!(minimal_row(0).is_err());

        assert_eq!(minimal_row_sum(1).unwrap(), 2);
        assert_eq!(minimal_row_sum(8).unwrap(), 40);
        for k in 1..=50usize {
            assert_eq!(minimal_row_sum(2 * k - 1).unwrap(), 2 * (k * k) as u128);
        }
        for j in 1..=64 {
            assert_eq!(minimal_row(j).unwrap().sum(), minimal_row_sum(j).unwrap());
        }
    }

    #[test]
    fn minimality() {
        let r = |v: &[u128]| Row::new(v.len() - 1, 0, v.to_vec()).unwrap();
        assert!(is_minimal(&r(&[1, 3, 3, 1])));
        assert!(is_minimal(&r(&[1, 3, 4, 3, 1])));
        assert!(!is_minimal(&r(&[1, 4, 6, 4, 1])));
        assert!(!is_minimal(&r(&[1])));
        assert!(!is_minimal(&Row::empty(3)));
    }

    #[test]
    fn segmentation_n9() {
        let s = segment(9).unwrap();
        assert_eq!(s.top_triangle, 0..10);
        assert_eq!(s.midsection.len(), 13);
        assert_eq!(s.rectangle.len(), 57);
        assert_eq!(s.bottom_triangle.len(), 12);
        assert_eq!(s.total_rows, 92);
        assert_eq!(s.longest_length, 13);

        let p = row_profile(9).unwrap();
        let bottom: Vec<_> = p.lengths[s.bottom_triangle.clone()].to_vec();
        assert_eq!(bottom, (2..=13).rev().collect::<Vec<_>>());
        assert_eq!(p.lengths[s.first_longest_row], 13);
        assert!(p.lengths[..s.first_longest_row].iter().all(|&l| l < 13));
    }

    #[test]
    fn segmentation_small_n() {
        let s = segment(1).unwrap();
        assert_eq!(s.total_rows, 2);
        assert_eq!(s.top_triangle, 0..2);
        assert!(s.midsection.is_empty() && s.rectangle.is_empty() && s.bottom_triangle.is_empty());

        for n in 2..=8 {
            let s = segment(n).unwrap();
            let covered = s.top_triangle.len()
                + s.midsection.len()
                + s.rectangle.len()
                + s.bottom_triangle.len();
            assert_eq!(covered, s.total_rows, "n = {n}");
        }
        assert!(segment(0).is_err());
    }

    #[test]
    fn segmenter_rejects_bad_steps() {
        assert!(matches!(
            segment_lengths(3, [1, 2, 2, 1]),
            Err(CoreError::DegenerateSegmentation { .. })
        ));
        assert!(segment_lengths(3, []).is_err());
    }

    #[test]
    fn segmenter_new_maximum_at_bottom_start() {
        // Longest row opens the bottom triangle directly after a band row.
        let s = segment_lengths(2, [1, 2, 3, 4, 3, 4, 5, 4, 3, 2]).unwrap();
        assert_eq!(s.bottom_triangle, 6..10);
        assert_eq!(s.rectangle, 5..6);
        assert_eq!(s.midsection, 3..5);
        assert_eq!(s.first_longest_row, 6);
    }

    #[test]
    fn conjecture_reports() {
        let r = check_bottom_conjecture(9).unwrap();
        assert!(r.holds);
        assert_eq!((r.triangle_rows, r.longest_length), (12, 13));
        let r = check_bottom_conjecture(11).unwrap();
        assert!(r.holds);
        assert_eq!((r.triangle_rows, r.longest_length), (18, 19));
        assert!(check_bottom_conjecture(12).unwrap().holds);
        assert!(check_bottom_conjecture(1).is_err());
    }
}
