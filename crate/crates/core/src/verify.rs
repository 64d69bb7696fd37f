//! Named invariant checks over a full configuration.
//!
//! Row-local checks share a single streaming pass; the oracle comparison and
//! the minimal-row descent run separately. The bottom-triangle conjecture is
//! not a property here: see [`crate::structure::check_bottom_conjecture`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::difftable::{diff_row, propagation_violations, row_max_abs, unimodal_check, DiffRow};
use crate::error::{CoreError, Result};
use crate::lattice::{intermediate_configuration, next_row, Row};
use crate::oracle::{arrivals, confluence_check, ORACLE_LIMIT};
use crate::structure::{is_minimal, minimal_row, pascal_row, row_bound, Segmenter};

/// Largest `j` for which minimal-row descent is checked.
pub const MINIMAL_DESCENT_LIMIT: usize = 64;

macro_rules! properties {
    ($($variant:ident => $name:literal, $about:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Property {
            $(#[doc = $about] $variant,)*
        }

        impl Property {
            pub const ALL: &'static [Property] = &[$(Property::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Property::$variant => $name,)*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $(Property::$variant => $about,)*
                }
            }
        }
    };
}

properties! {
    Symmetry => "symmetry", "every row is a palindrome";
    EvenDiagonal => "even-diagonal", "F(x, x) is even";
    ChipAccounting => "chip-accounting", "each row loses its odd entries to the stable configuration";
    Contiguity => "contiguity", "no row has an interior zero";
    MonotoneSteps => "monotone-steps", "entries rise by at least 2 towards the diagonal, at least 1 onto it";
    Parity => "parity", "the odd entries hold exactly 2^n chips";
    PascalTop => "pascal-top", "rows 0..=n are scaled binomial rows";
    FirstStableRow => "first-stable-row", "row n is the first row with an odd entry";
    LengthSteps => "length-steps", "consecutive row lengths differ by one";
    LengthParity => "length-parity", "row lengths alternate parity and the row count is even";
    RowStart => "row-start", "a row starting 1, a with 4 <= a <= 7 is followed two rows later by a row of the same length starting with 1";
    DiagonalDecay => "diagonal-decay", "F(x+1, x+1) <= F(x, x) - 2 while F(x, x) > 0";
    RowBound => "row-bound", "the last nonzero row lies within the proven bound";
    LastRow => "last-row", "the last nonzero row is [1, 1]";
    MinimalDescent => "minimal-descent", "the minimal row R(j) evolves into R(j - 1)";
    BottomMinimal => "bottom-minimal", "every row of the bottom triangle is minimal";
    MomentIdentity => "moment-identity", "half the second moment of the distance distribution equals the firing count";
    DiffAntisymmetry => "diff-antisymmetry", "difference rows are antisymmetric";
    DiffMaxima => "diff-maxima", "the largest absolute difference never grows after row 1";
    Unimodal => "unimodal", "the left half of each difference row is weakly unimodal";
    Propagation => "propagation", "monotone triples in a difference row stay monotone one row down";
    Telescoping => "telescoping", "prefix sums of a difference row recover the row above";
    Oracle => "oracle", "brute-force simulation agrees with the row recurrence under every firing order";
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| CoreError::InvalidArgument(format!("unknown property '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub property: Property,
    pub n: u32,
    pub status: Status,
    /// Extra information for passing checks, e.g. a chip count.
    pub note: Option<String>,
}

impl Outcome {
    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, msg) = match &self.status {
            Status::Pass => ("pass", self.note.as_deref()),
            Status::Fail(m) => ("FAIL", Some(m.as_str())),
            Status::Skipped(m) => ("skip", Some(m.as_str())),
        };
        write!(f, "n={} {:<18} {tag}", self.n, self.property.name())?;
        if let Some(m) = msg {
            write!(f, ": {m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random firing orders per oracle run; below 2 the oracle is skipped.
    pub oracle_trials: usize,
    pub seed: u64,
    /// Largest `n` handed to the oracle.
    pub oracle_limit: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle_trials: 10,
            seed: 0,
            oracle_limit: 8,
        }
    }
}

/// First failure per property.
#[derive(Default)]
struct Failures(BTreeMap<Property, String>);

impl Failures {
    fn check(&mut self, p: Property, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.entry(p).or_insert_with(msg);
        }
    }
}

/// State carried through the streaming pass.
struct Pass {
    n: u32,
    fails: Failures,
    prev: Option<Row>,
    prev_diff: Option<DiffRow>,
    prev_diff_max: Option<u128>,
    odd_total: u128,
    first_odd_row: Option<usize>,
    /// Rows starting `1, a` with `4 <= a <= 7`, waiting for the row two below.
    pending_starts: VecDeque<(usize, usize)>,
    last_diagonal: Option<(usize, u128)>,
    moment: u128,
    firings: u128,
    segmenter: Segmenter,
    /// Trailing run of rows each one shorter than the last.
    shrinking: Vec<Row>,
    overflow: bool,
}

impl Pass {
    fn new(n: u32) -> Self {
        Pass {
            n,
            fails: Failures::default(),
            prev: None,
            prev_diff: None,
            prev_diff_max: None,
            odd_total: 0,
            first_odd_row: None,
            pending_starts: VecDeque::new(),
            last_diagonal: None,
            moment: 0,
            firings: 0,
            segmenter: Segmenter::new(n),
            shrinking: Vec::new(),
            overflow: false,
        }
    }

    fn row(&mut self, r: &Row) {
        use Property::*;
        let (n, i, vals) = (self.n, r.index(), r.values());
        let f = &mut self.fails;

        f.check(Symmetry, r.is_palindrome(), || {
            format!("row {i} is not a palindrome")
        });
        f.check(Contiguity, vals.iter().all(|&v| v > 0), || {
            format!("row {i} has an interior zero")
        });
        if n >= 1 && i % 2 == 0 {
            let d = r.get(i / 2);
            f.check(EvenDiagonal, d.is_multiple_of(2), || {
                format!("F({0}, {0}) = {d} is odd", i / 2)
            });
        }

        for k in 1..vals.len() {
            let y = r.y_min() + k;
            let x = i - y;
            if y > x {
                break;
            }
            let (a, b) = (vals[k - 1], vals[k]);
            let need = if y == x { 1 } else { 2 };
            f.check(MonotoneSteps, b >= a + need, || {
                format!("row {i}: F({x}, {y}) = {b} after {a}")
            });
        }

        if i <= n as usize {
            let ok = pascal_row(n, i).is_ok_and(|p| &p == r);
            f.check(PascalTop, ok, || {
                format!("row {i} is not the scaled binomial row")
            });
        }

        let odd = r.odd_count();
        if odd > 0 && self.first_odd_row.is_none() {
            self.first_odd_row = Some(i);
        }
        self.odd_total += odd as u128;
        for (p, v) in r.points() {
            let d = p.distance().unsigned_abs() as u128;
            if v % 2 == 1 {
                match d.checked_mul(d).and_then(|sq| self.moment.checked_add(sq)) {
                    Some(m) => self.moment = m,
                    None => self.overflow = true,
                }
            }
            self.firings += v / 2;
        }

        if let Some(prev) = &self.prev {
            let expect = prev.sum() - prev.odd_count() as u128;
            f.check(ChipAccounting, r.sum() == expect, || {
                format!("row {i} holds {} chips, expected {expect}", r.sum())
            });
            let (pl, rl) = (prev.len(), r.len());
            f.check(LengthSteps, pl.abs_diff(rl) == 1, || {
                format!("rows {} and {i} have lengths {pl} and {rl}", i - 1)
            });
            f.check(LengthParity, pl % 2 != rl % 2, || {
                format!("rows {} and {i} have lengths of equal parity", i - 1)
            });
        }

        while let Some(&(start, len)) = self.pending_starts.front() {
            if start + 2 > i {
                break;
            }
            self.pending_starts.pop_front();
            let ok = start + 2 == i && r.len() == len && vals.first() == Some(&1);
            f.check(RowStart, ok, || {
                format!(
                    "row {start} starts 1, a with 4 <= a <= 7 but row {} does not follow suit",
                    start + 2
                )
            });
        }
        if let [1, a, ..] = vals {
            if (4..=7).contains(a) {
                self.pending_starts.push_back((i, r.len()));
            }
        }

        if i % 2 == 0 {
            let d = r.get(i / 2);
            if let Some((j, prev)) = self.last_diagonal {
                f.check(DiagonalDecay, d + 2 <= prev, || {
                    format!("F({0}, {0}) = {prev} but F({1}, {1}) = {d}", j / 2, i / 2)
                });
            }
            self.last_diagonal = (d > 0).then_some((i, d));
        }

        self.diff(diff_row(r), r);

        self.segmenter.push(r.len());
        if self
            .shrinking
            .last()
            .is_some_and(|p| p.len() == r.len() + 1)
        {
            self.shrinking.push(r.clone());
        } else {
            self.shrinking.clear();
            self.shrinking.push(r.clone());
        }
        self.prev = Some(r.clone());
    }

    /// Checks on difference row `d.index()`, built from `above`.
    fn diff(&mut self, d: DiffRow, above: &Row) {
        use Property::*;
        let (n, i) = (self.n, d.index());
        let f = &mut self.fails;
        f.check(DiffAntisymmetry, d.is_antisymmetric(), || {
            format!("diff row {i} is not antisymmetric")
        });
        f.check(Unimodal, unimodal_check(&d), || {
            format!("diff row {i}: left half {:?}", d.left_half())
        });
        f.check(Telescoping, d.integrate().as_ref() == Some(above), || {
            format!(
                "prefix sums of diff row {i} do not give row {}",
                above.index()
            )
        });

        let max = row_max_abs(&d);
        if n > 2 && i > 2 {
            if let Some(pm) = self.prev_diff_max {
                f.check(DiffMaxima, max <= pm, || {
                    format!("diff row {i} reaches {max}, row {} only {pm}", i - 1)
                });
            }
        }
        if let Some(up) = &self.prev_diff {
            let bad = propagation_violations(up, &d);
            f.check(Propagation, bad.is_empty(), || {
                format!("diff rows {} -> {i} at heights {bad:?}", i - 1)
            });
        }
        self.prev_diff_max = Some(max);
        self.prev_diff = Some(d);
    }

    fn finish(mut self, props: &[Property]) -> Result<Vec<Outcome>> {
        use Property::*;
        let n = self.n;
        let last = self.prev.take().expect("every configuration has row 0");
        let rows = last.index() + 1;

        // Row after the last nonzero row is empty.
        if let Some((j, d)) = self.last_diagonal {
            if j + 2 >= rows {
                self.fails.check(DiagonalDecay, d >= 2, || {
                    format!("F({0}, {0}) = {d} is followed by an empty diagonal", j / 2)
                });
            }
        }
        for &(start, _) in &self.pending_starts {
            self.fails.check(RowStart, false, || {
                format!(
                    "row {start} starts 1, a with 4 <= a <= 7 but row {} is empty",
                    start + 2
                )
            });
        }
        let remainder = last.sum() - last.odd_count() as u128;
        self.fails.check(ChipAccounting, remainder == 0, || {
            format!("last row {} passes on {remainder} chips", last.index())
        });
        self.fails
            .check(ChipAccounting, self.odd_total == 1u128 << n, || {
                format!("{} odd entries, expected 2^{n}", self.odd_total)
            });
        self.fails.check(Parity, self.odd_total == 1u128 << n, || {
            format!("{} stable chips, expected 2^{n}", self.odd_total)
        });
        self.fails.check(
            FirstStableRow,
            self.first_odd_row == Some(n as usize),
            || format!("first odd entry in row {:?}", self.first_odd_row),
        );
        let bound = row_bound(n)?;
        self.fails
            .check(RowBound, (last.index() as u128) <= bound, || {
                format!("last row {} exceeds bound {bound}", last.index())
            });
        if self.overflow {
            return Err(CoreError::Overflow(format!("second moment for n = {n}")));
        }
        self.fails
            .check(MomentIdentity, self.moment == 2 * self.firings, || {
                format!("moment {} vs 2 × {} firings", self.moment, self.firings)
            });

        let mut notes: BTreeMap<Property, String> = BTreeMap::new();
        let plural = if self.odd_total == 1 { "" } else { "s" };
        notes.insert(Parity, format!("{} stable chip{plural}", self.odd_total));
        notes.insert(RowBound, format!("last row {} <= {bound}", last.index()));
        notes.insert(MomentIdentity, format!("T({n}) = {}", self.firings));
        let mut skips: BTreeMap<Property, String> = BTreeMap::new();

        if n == 0 {
            for p in [
                EvenDiagonal,
                DiagonalDecay,
                LengthParity,
                LastRow,
                BottomMinimal,
                DiffMaxima,
            ] {
                skips.insert(p, "degenerate for n = 0".into());
            }
        } else {
            self.fails.check(LengthParity, rows.is_multiple_of(2), || {
                format!("{rows} nonzero rows")
            });
            self.fails.check(LastRow, last.values() == [1, 1], || {
                format!("last row is {:?}", last.values())
            });
            let seg = self.segmenter.finish()?;
            let height = seg.bottom_triangle_height;
            let tail = &self.shrinking[self.shrinking.len().saturating_sub(height)..];
            for r in tail {
                self.fails.check(BottomMinimal, is_minimal(r), || {
                    format!("bottom-triangle row {} is {:?}", r.index(), r.values())
                });
            }
            notes.insert(BottomMinimal, format!("{height} rows"));
            if n <= 2 {
                skips.insert(DiffMaxima, "needs n > 2".into());
            }
        }

        Ok(props
            .iter()
            .filter(|p| !matches!(p, MinimalDescent | Oracle))
            .map(|&p| {
                let status = if let Some(s) = skips.remove(&p) {
                    Status::Skipped(s)
                } else if let Some(m) = self.fails.0.remove(&p) {
                    Status::Fail(m)
                } else {
                    Status::Pass
                };
                let note = matches!(status, Status::Pass)
                    .then(|| notes.remove(&p))
                    .flatten();
                Outcome {
                    property: p,
                    n,
                    status,
                    note,
                }
            })
            .collect())
    }
}

/// `next_row(R(j)) == R(j - 1)` for `2 <= j <= upto`.
pub fn minimal_descent(upto: usize) -> Result<Option<usize>> {
    for j in 2..=upto {
        let r = Row::new(j, 0, minimal_row(j)?.values)?;
        if next_row(&r).values() != minimal_row(j - 1)?.values {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Compares brute-force simulation with the row recurrence. Returns the first
/// discrepancy, if any.
pub fn oracle_agreement(n: u32, rows: &[Row], trials: usize, seed: u64) -> Result<Option<String>> {
    let report = confluence_check(n, trials, seed)?;
    if let Some(m) = report.mismatches.first() {
        return Ok(Some(m.clone()));
    }
    let reference = &report.reference;
    let arrived = arrivals(reference);
    let mut entries = 0usize;
    for r in rows {
        for (p, v) in r.points() {
            entries += 1;
            let a = arrived.get(p.x, p.y);
            if a != v {
                return Ok(Some(format!("arrivals at {p} are {a}, F = {v}")));
            }
            let fired = reference.firings().get(p.x, p.y) as u128;
            if fired != v / 2 {
                return Ok(Some(format!("{p} fired {fired} times, F = {v}")));
            }
            let left = reference.chips().get(p.x, p.y);
            if left != v % 2 {
                return Ok(Some(format!("{p} holds {left} chips, F = {v}")));
            }
        }
    }
    let support = arrived.support().count();
    if support != entries {
        return Ok(Some(format!(
            "{support} vertices received chips, F has {entries} nonzero entries"
        )));
    }
    Ok(None)
}

/// Runs the selected properties for one `n`.
pub fn verify_n(n: u32, props: &[Property], opts: &VerifyOptions) -> Result<Vec<Outcome>> {
    let want_oracle = props.contains(&Property::Oracle);
    let oracle_runs =
        want_oracle && n <= opts.oracle_limit.min(ORACLE_LIMIT) && opts.oracle_trials >= 2;

    let mut pass = Pass::new(n);
    let mut kept = Vec::new();
    for row in intermediate_configuration(n, None)? {
        let row = row?;
        pass.row(&row);
        if oracle_runs {
            kept.push(row);
        }
    }
    let mut out = pass.finish(props)?;

    if props.contains(&Property::MinimalDescent) {
        let status = match minimal_descent(MINIMAL_DESCENT_LIMIT)? {
            None => Status::Pass,
            Some(j) => Status::Fail(format!("R({j}) does not evolve into R({})", j - 1)),
        };
        out.push(Outcome {
            property: Property::MinimalDescent,
            n,
            status,
            note: Some(format!("j <= {MINIMAL_DESCENT_LIMIT}")),
        });
    }
    if want_oracle {
        let status = if !oracle_runs {
            if opts.oracle_trials < 2 {
                Status::Skipped("oracle needs at least 2 trials".into())
            } else {
                Status::Skipped(format!(
                    "oracle limited to n <= {}",
                    opts.oracle_limit.min(ORACLE_LIMIT)
                ))
            }
        } else {
            match oracle_agreement(n, &kept, opts.oracle_trials, opts.seed)? {
                None => Status::Pass,
                Some(m) => Status::Fail(m),
            }
        };
        let note = oracle_runs.then(|| format!("{} random orders + 3 fixed", opts.oracle_trials));
        out.push(Outcome {
            property: Property::Oracle,
            n,
            status,
            note,
        });
    }
    Ok(out)
}
