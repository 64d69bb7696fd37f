//! Difference tables: `F'(x, y) = F(x - 1, y) - F(x, y - 1)`.
//!
//! Both terms lie on row `x + y - 1`, at heights `y` and `y - 1`, so row `i`
//! of `F'` is the sequence of first differences of row `i - 1` of `F`, padded
//! with a zero on both sides. With rows stored by increasing `y`, the left
//! half of a difference row is nonnegative and the right half nonpositive.

use std::fmt;

use crate::error::Result;
use crate::lattice::{intermediate_configuration, ConfigStream, Row};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffRow {
    index: usize,
    y_min: usize,
    values: Vec<i128>,
}

impl DiffRow {
    pub fn new(index: usize, y_min: usize, values: Vec<i128>) -> Self {
        DiffRow {
            index,
            y_min,
            values,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn y_min(&self) -> usize {
        self.y_min
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at height `y`, zero outside the stored span.
    pub fn get(&self, y: i64) -> i128 {
        y.checked_sub(self.y_min as i64)
            .and_then(|k| usize::try_from(k).ok())
            .and_then(|k| self.values.get(k))
            .copied()
            .unwrap_or(0)
    }

    /// Entries at positions with `y ≤ x`, i.e. `y ≤ index / 2`.
    pub fn left_half(&self) -> &[i128] {
        let last_y = self.index / 2;
        let end = (last_y + 1)
            .saturating_sub(self.y_min)
            .min(self.values.len());
        &self.values[..end]
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.values
            .iter()
            .zip(self.values.iter().rev())
            .all(|(&a, &b)| a == -b)
    }

    /// Prefix sums: recovers the row of `F` this row was taken from.
    /// The final prefix sum is zero for a well-formed row and is dropped.
    pub fn integrate(&self) -> Option<Row> {
        if self.values.is_empty() {
            return Some(Row::empty(self.index.checked_sub(1)?));
        }
        let mut acc: i128 = 0;
        let mut out = Vec::with_capacity(self.values.len());
        for &d in &self.values {
            acc += d;
            out.push(u128::try_from(acc).ok()?);
        }
        if out.pop()? != 0 {
            return None;
        }
        Row::new(self.index.checked_sub(1)?, self.y_min, out).ok()
    }
}

impl fmt::Display for DiffRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "diff row {} @y{}: {:?}",
            self.index, self.y_min, self.values
        )
    }
}

/// Row `prev.index() + 1` of `F'`.
pub fn diff_row(prev: &Row) -> DiffRow {
    let values = prev.values();
    if values.is_empty() {
        return DiffRow::new(prev.index() + 1, prev.y_min(), Vec::new());
    }
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut before: i128 = 0;
    for &v in values {
        let v = v as i128;
        out.push(v - before);
        before = v;
    }
    out.push(-before);
    DiffRow::new(prev.index() + 1, prev.y_min(), out)
}

/// Difference rows `1 ..= last + 1`, one per nonzero row of `F`.
#[derive(Debug, Clone)]
pub struct DiffTable {
    rows: ConfigStream,
}

impl Iterator for DiffTable {
    type Item = Result<DiffRow>;

    fn next(&mut self) -> Option<Self::Item> {
        self.rows.next().map(|r| r.map(|r| diff_row(&r)))
    }
}

pub fn diff_table(n: u32) -> Result<DiffTable> {
    Ok(DiffTable {
        rows: intermediate_configuration(n, None)?,
    })
}

pub fn row_max_abs(d: &DiffRow) -> u128 {
    d.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
}

/// Weakly increasing, then weakly decreasing.
pub fn is_weakly_unimodal(xs: &[i128]) -> bool {
    let mut descending = false;
    for w in xs.windows(2) {
        if w[1] < w[0] {
            descending = true;
        } else if w[1] > w[0] && descending {
            return false;
        }
    }
    true
}

/// Checks that the left half, preceded by one implicit zero, rises weakly and
/// then falls weakly.
pub fn unimodal_check(d: &DiffRow) -> bool {
    let mut xs = Vec::with_capacity(d.len() + 1);
    xs.push(0);
    xs.extend_from_slice(d.left_half());
    is_weakly_unimodal(&xs)
}

/// A maximal run of at least two equal consecutive entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plateau {
    /// Position of the first entry within the row's values.
    pub start: usize,
    pub len: usize,
    pub value: i128,
}

pub fn plateaus(d: &DiffRow) -> Vec<Plateau> {
    d.values
        .chunk_by(|a, b| a == b)
        .scan(0, |pos, run| {
            let start = *pos;
            *pos += run.len();
            Some(Plateau {
                start,
                len: run.len(),
                value: run[0],
            })
        })
        .filter(|p| p.len >= 2)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

impl Sign {
    pub fn of(v: i128) -> Sign {
        match v.signum() {
            1 => Sign::Plus,
            0 => Sign::Zero,
            _ => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Zero => '0',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Signs of `values[k + 1] - values[k]`, left to right.
pub fn signs(d: &DiffRow) -> Vec<Sign> {
    d.values.windows(2).map(|w| Sign::of(w[1] - w[0])).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignRow {
    pub index: usize,
    pub y_min: usize,
    pub signs: Vec<Sign>,
}

pub fn sign_map(n: u32) -> Result<Vec<SignRow>> {
    diff_table(n)?
        .map(|d| {
            d.map(|d| SignRow {
                index: d.index(),
                y_min: d.y_min(),
                signs: signs(&d),
            })
        })
        .collect()
}

/// Checks the local propagation rule between consecutive difference rows:
/// three weakly increasing (decreasing) entries at heights `y, y+1, y+2` force
/// the entries at `y+1, y+2` of the next row to be weakly increasing
/// (decreasing). Returns the heights `y` where the rule fails; zero padding is
/// included, so the check covers the whole row.
pub fn propagation_violations(upper: &DiffRow, lower: &DiffRow) -> Vec<i64> {
    let lo = upper.y_min as i64 - 3;
    let hi = upper.y_min as i64 + upper.len() as i64;
    (lo..=hi)
        .filter(|&y| {
            let (d1, d2, d3) = (upper.get(y), upper.get(y + 1), upper.get(y + 2));
            let (b1, b2) = (lower.get(y + 1), lower.get(y + 2));
            (d1 <= d2 && d2 <= d3 && b1 > b2) || (d1 >= d2 && d2 >= d3 && b1 < b2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::configuration;
    use crate::structure::{longest_row, segment};

    fn row(index: usize, y_min: usize, values: &[u128]) -> Row {
        Row::new(index, y_min, values.to_vec()).unwrap()
    }

    #[test]
    fn diff_row_examples() {
        let d = diff_row(&row(0, 0, &[16]));
        assert_eq!((d.index(), d.values()), (1, &[16, -16][..]));

        let q = 1u128 << 9;
        let d = diff_row(&row(1, 0, &[q, q]));
        assert_eq!(d.values(), &[q as i128, 0, -(q as i128)]);

        let d = diff_row(&Row::empty(10));
        assert!(d.is_empty());
        assert_eq!(d.index(), 11);
    }

    #[test]
    fn top_of_table() {
        let n = 6u32;
        let p = |k: u32| 1i128 << (n - k);
        let rows: Vec<_> = diff_table(n).unwrap().take(5).map(Result::unwrap).collect();
        assert_eq!(rows[0].values(), &[p(0), -p(0)]);
        assert_eq!(rows[1].values(), &[p(1), 0, -p(1)]);
        assert_eq!(rows[2].values(), &[p(2), p(2), -p(2), -p(2)]);
        assert_eq!(rows[3].values(), &[p(3), 2 * p(3), 0, -2 * p(3), -p(3)]);
        assert_eq!(
            rows[4].values(),
            &[p(4), 3 * p(4), 2 * p(4), -2 * p(4), -3 * p(4), -p(4)]
        );

        let maxima: Vec<_> = rows.iter().map(row_max_abs).collect();
        let p = |k: u32| 1u128 << (n - k);
        assert_eq!(maxima, vec![p(0), p(1), p(2), p(2), 3 * p(4)]);
    }

    #[test]
    fn n11_significant_rows() {
        let top = configuration(11).unwrap()[11].clone();
        assert_eq!(
            diff_row(&top).values(),
            &[1, 10, 44, 110, 165, 132, 0, -132, -165, -110, -44, -10, -1]
        );

        let longest = longest_row(11).unwrap().row;
        let d = diff_row(&longest);
        assert_eq!(
            d.values(),
            &[
                1, 5, 12, 20, 28, 36, 41, 38, 27, 10, -10, -27, -38, -41, -36, -28, -20, -12, -5,
                -1
            ]
        );
        assert!(unimodal_check(&d));

        let seg = segment(11).unwrap();
        let last_rect = configuration(11).unwrap()[seg.bottom_triangle.start].clone();
        let d = diff_row(&last_rect);
        assert_eq!(
            d.values(),
            &[1, 2, 2, 2, 2, 2, 2, 2, 2, 1, -1, -2, -2, -2, -2, -2, -2, -2, -2, -1]
        );
        let s: String = signs(&d).iter().map(|s| s.symbol()).collect();
        assert_eq!(s, "+0000000---0000000+");
        assert_eq!(
            plateaus(&d),
            vec![
                Plateau {
                    start: 1,
                    len: 8,
                    value: 2
                },
                Plateau {
                    start: 11,
                    len: 8,
                    value: -2
                }
            ]
        );
    }

    #[test]
    fn max_abs() {
        assert_eq!(row_max_abs(&DiffRow::new(1, 0, vec![16, -16])), 16);
        assert_eq!(row_max_abs(&DiffRow::new(4, 0, vec![])), 0);
    }

    #[test]
    fn unimodality() {
        let q = 64;
        assert!(unimodal_check(&DiffRow::new(3, 0, vec![q, q, -q, -q])));
        assert_eq!(DiffRow::new(3, 0, vec![q, q, -q, -q]).left_half(), &[q, q]);
        assert!(!unimodal_check(&DiffRow::new(
            9,
            0,
            vec![1, 3, 2, 4, 5, -5, -4, -2, -3, -1]
        )));
        assert!(is_weakly_unimodal(&[]));
        assert!(is_weakly_unimodal(&[0, 1, 1, 3, 3, 2, 2, 0]));
        assert!(!is_weakly_unimodal(&[0, 2, 1, 2]));
    }

    #[test]
    fn left_half_respects_offset() {
        // Row 9 with span y = 3..=7: left half is y ≤ 4.
        let d = DiffRow::new(9, 3, vec![1, 2, -2, -1, 0]);
        assert_eq!(d.left_half(), &[1, 2]);
        // Span entirely right of the centre.
        let d = DiffRow::new(4, 3, vec![-1, 1]);
        assert!(d.left_half().is_empty());
    }

    #[test]
    fn plateau_examples() {
        assert!(plateaus(&DiffRow::new(1, 0, vec![16, -16])).is_empty());
        let q = 4;
        assert_eq!(
            plateaus(&DiffRow::new(3, 0, vec![q, q, -q, -q])),
            vec![
                Plateau {
                    start: 0,
                    len: 2,
                    value: q
                },
                Plateau {
                    start: 2,
                    len: 2,
                    value: -q
                }
            ]
        );
    }

    #[test]
    fn sign_examples() {
        let s = |v: Vec<i128>| signs(&DiffRow::new(1, 0, v));
        assert_eq!(s(vec![16, -16]), vec![Sign::Minus]);
        assert_eq!(s(vec![8, 0, -8]), vec![Sign::Minus, Sign::Minus]);
    }

    #[test]
    fn sign_map_zeros_match_plateaus() {
        for d in diff_table(9).unwrap() {
            let d = d.unwrap();
            let zeros = signs(&d).iter().filter(|&&s| s == Sign::Zero).count();
            let from_runs: usize = plateaus(&d).iter().map(|p| p.len - 1).sum();
            assert_eq!(zeros, from_runs);
        }
        let map = sign_map(4).unwrap();
        assert_eq!(map.len(), 10);
        assert_eq!(map[0].signs, vec![Sign::Minus]);
    }

    #[test]
    fn integrate_recovers_row() {
        for r in configuration(7).unwrap() {
            assert_eq!(diff_row(&r).integrate(), Some(r));
        }
        assert_eq!(DiffRow::new(2, 0, vec![1, 1]).integrate(), None);
    }

    #[test]
    fn propagation_on_n8() {
        let rows: Vec<_> = diff_table(8).unwrap().map(Result::unwrap).collect();
        for w in rows.windows(2) {
            assert!(
                propagation_violations(&w[0], &w[1]).is_empty(),
                "row {}",
                w[0].index()
            );
        }
    }
}
