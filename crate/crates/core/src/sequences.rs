//! Integer sequences read off the configuration, with reference values.

use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};
use crate::lattice::intermediate_configuration;
use crate::stable::firings_in_row;
use crate::structure::minimal_row_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceId {
    /// Total number of firings `T(n)`.
    TotalFirings,
    /// Number of nonzero rows of `F`.
    NonzeroRows,
    /// Length of the longest row of `F`.
    LongestRow,
    /// Chip count of the minimal row with `j + 1` entries, from `j = 1`.
    MinimalRowSums,
}

impl SequenceId {
    pub const ALL: [SequenceId; 4] = [
        SequenceId::TotalFirings,
        SequenceId::NonzeroRows,
        SequenceId::LongestRow,
        SequenceId::MinimalRowSums,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceId::TotalFirings => "total-firings",
            SequenceId::NonzeroRows => "nonzero-rows",
            SequenceId::LongestRow => "longest-row",
            SequenceId::MinimalRowSums => "minimal-row-sums",
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        SequenceId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| CoreError::InvalidArgument(format!("unknown sequence '{s}'")))
    }
}

/// Reference values for a sequence, starting at index `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceTable {
    pub id: SequenceId,
    pub offset: usize,
    pub known: &'static [u128],
    pub source: &'static str,
}

impl SequenceTable {
    pub fn last_known_index(&self) -> usize {
        self.offset + self.known.len() - 1
    }
}

const TOTAL_FIRINGS: &[u128] = &[0, 1, 5, 15, 52, 163, 458, 1359, 4296, 12890, 38570];
const NONZERO_ROWS: &[u128] = &[
    1, 2, 4, 6, 10, 16, 24, 38, 60, 92, 144, 226, 362, 570, 906, 1430,
];
const LONGEST_ROW: &[u128] = &[
    1, 2, 3, 4, 5, 6, 7, 8, 10, 13, 15, 19, 24, 30, 37, 46, 58, 73,
];
const MINIMAL_ROW_SUMS: &[u128] = &[2, 4, 8, 12, 18, 24, 32, 40, 50];

pub fn table(id: SequenceId) -> SequenceTable {
    match id {
        SequenceId::TotalFirings => SequenceTable {
            id,
            offset: 0,
            known: TOTAL_FIRINGS,
            source: "OEIS A389565",
        },
        SequenceId::NonzeroRows => SequenceTable {
            id,
            offset: 0,
            known: NONZERO_ROWS,
            source: "OEIS A390129",
        },
        SequenceId::LongestRow => SequenceTable {
            id,
            offset: 0,
            known: LONGEST_ROW,
            source: "OEIS A390355",
        },
        SequenceId::MinimalRowSums => SequenceTable {
            id,
            offset: 1,
            known: MINIMAL_ROW_SUMS,
            source: "OEIS A007590",
        },
    }
}

/// Per-`n` quantities gathered in one pass over the rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowStats {
    pub nonzero_rows: usize,
    pub longest_row: usize,
    pub total_firings: u128,
}

pub fn row_stats(n: u32) -> Result<RowStats> {
    let mut stats = RowStats {
        nonzero_rows: 0,
        longest_row: 0,
        total_firings: 0,
    };
    for row in intermediate_configuration(n, None)? {
        let row = row?;
        stats.nonzero_rows += 1;
        stats.longest_row = stats.longest_row.max(row.len());
        stats.total_firings = stats
            .total_firings
            .checked_add(firings_in_row(&row))
            .ok_or_else(|| CoreError::Overflow("total firings".into()))?;
    }
    Ok(stats)
}

fn exponent(index: usize) -> Result<u32> {
    u32::try_from(index).map_err(|_| CoreError::Overflow(format!("index {index}")))
}

/// Terms for indices `offset..=upto`.
pub fn generate(id: SequenceId, upto: usize) -> Result<Vec<u128>> {
    let offset = table(id).offset;
    (offset..=upto)
        .map(|k| match id {
            SequenceId::TotalFirings => row_stats(exponent(k)?).map(|s| s.total_firings),
            SequenceId::NonzeroRows => row_stats(exponent(k)?).map(|s| s.nonzero_rows as u128),
            SequenceId::LongestRow => row_stats(exponent(k)?).map(|s| s.longest_row as u128),
            SequenceId::MinimalRowSums => minimal_row_sum(k),
        })
        .collect()
}

/// Half the nonzero-row count, for `n = 1..=upto`. The count is always even
/// for `n ≥ 1`; an odd count is reported as an error.
pub fn half_nonzero_rows(upto: usize) -> Result<Vec<u128>> {
    if upto == 0 {
        return Err(CoreError::InvalidArgument(
            "half sequence starts at n = 1".into(),
        ));
    }
    generate(SequenceId::NonzeroRows, upto)?
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, rows)| {
            if rows % 2 == 0 {
                Ok(rows / 2)
            } else {
                Err(CoreError::Inconsistent(format!(
                    "n = {n} has an odd number of rows ({rows})"
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_prefixes() {
        assert_eq!(
            generate(SequenceId::TotalFirings, 10).unwrap(),
            TOTAL_FIRINGS
        );
        assert_eq!(generate(SequenceId::NonzeroRows, 15).unwrap(), NONZERO_ROWS);
        assert_eq!(
            generate(SequenceId::MinimalRowSums, 9).unwrap(),
            MINIMAL_ROW_SUMS
        );
    }

    #[test]
    fn half_sequence() {
        assert_eq!(half_nonzero_rows(5).unwrap(), vec![1, 2, 3, 5, 8]);
        assert_eq!(
            half_nonzero_rows(10).unwrap(),
            vec![1, 2, 3, 5, 8, 12, 19, 30, 46, 72]
        );
        assert_eq!(half_nonzero_rows(1).unwrap(), vec![1]);
        assert!(half_nonzero_rows(0).is_err());
    }

    #[test]
    fn half_sequence_exact_halves() {
        // Exact halves of the full counts: 570 / 2 = 285 at n = 13.
        let h = half_nonzero_rows(15).unwrap();
        assert_eq!(&h[10..], &[113, 181, 285, 453, 715]);
    }

    #[test]
    fn ids_round_trip() {
        for id in SequenceId::ALL {
            assert_eq!(id.name().parse::<SequenceId>().unwrap(), id);
        }
        assert!("fibonacci".parse::<SequenceId>().is_err());
        assert_eq!(table(SequenceId::LongestRow).last_known_index(), 17);
        assert_eq!(table(SequenceId::MinimalRowSums).last_known_index(), 9);
    }

    #[test]
    fn empty_ranges() {
        assert!(generate(SequenceId::MinimalRowSums, 0).unwrap().is_empty());
        assert_eq!(generate(SequenceId::TotalFirings, 0).unwrap(), vec![0]);
    }
}
