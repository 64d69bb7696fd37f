//! Unlabeled chip-firing on the quadrant lattice `Z≥0 × Z≥0`, started from
//! `2^n` chips at the origin.
//!
//! The central object is the intermediate firing configuration `F(x, y)`:
//! the number of chips that arrive at `(x, y)` when the lattice is stabilized
//! row by row (row `i` is the antidiagonal `x + y = i`). Each row depends only
//! on the previous one, so the whole table is produced as a stream and never
//! held in memory at once.
//!
//! Orientation: within a row, entries are ordered by increasing `y`
//! ("left" means smaller `y`). Every asymmetric definition in this crate
//! (leftmost entry, sign of difference-table entries, bit order of stable
//! patterns) is relative to that ordering.
//!
//! Modules:
//! - [`lattice`]: rows, the row recurrence, the streaming configuration.
//! - [`stable`]: stable configuration, distance distribution, total firings.
//! - [`structure`]: row lengths, Pascal top rows, minimal rows, segmentation.
//! - [`difftable`]: first-difference tables and their shape checks.
//! - [`oracle`]: brute-force simulator with arbitrary firing orders.
//! - [`sequences`]: integer sequences with embedded reference values.
//! - [`cache`]: versioned binary on-disk row cache.
//! - [`svg`]: figure emitters.
//! - [`verify`]: named invariant checks used by the `verify` command.

pub mod cache;
pub mod difftable;
mod error;
pub mod lattice;
pub mod oracle;
pub mod sequences;
pub mod stable;
pub mod structure;
pub mod svg;
pub mod verify;

pub use error::{CoreError, Result};
pub use lattice::{
    entry, initial_row, intermediate_configuration, ChipCount, ConfigStream, LatticePoint, Row,
};
