//! Brute-force chip-firing with an explicit firing order.
//!
//! One move fires one vertex once: it loses two chips and each child gains
//! one. The simulator keeps dense grids of chips and firing counts over a
//! bounding box that doubles whenever a chip would leave it. It knows nothing
//! about rows or the recurrence in [`crate::lattice`], which is what makes it
//! useful as a cross-check.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::lattice::{initial_row, ChipCount, LatticePoint};
use crate::structure::row_bound;

/// Largest `n` the oracle accepts unless a higher limit is passed explicitly.
pub const ORACLE_LIMIT: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Uniform choice among the currently fireable vertices.
    Random { seed: u64 },
    /// Smallest `y - x` first, then lowest row.
    LeftmostFirst,
    /// Fireable vertices are served in the order they became fireable.
    FifoQueue,
    /// Lowest row first, left to right within a row.
    RowByRow,
}

impl Strategy {
    pub const DETERMINISTIC: [Strategy; 3] = [
        Strategy::LeftmostFirst,
        Strategy::FifoQueue,
        Strategy::RowByRow,
    ];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Random { seed } => write!(f, "random(seed={seed})"),
            Strategy::LeftmostFirst => f.write_str("leftmost-first"),
            Strategy::FifoQueue => f.write_str("fifo-queue"),
            Strategy::RowByRow => f.write_str("row-by-row"),
        }
    }
}

/// Dense grid over `0..width × 0..height`; reads outside return the default.
#[derive(Debug, Clone)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    cells: Vec<T>,
}

impl<T: Copy + Default + PartialEq> Grid<T> {
    fn new(width: usize, height: usize) -> Self {
        Grid {
            width,
            height,
            cells: vec![T::default(); width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        if x < self.width && y < self.height {
            self.cells[y * self.width + x]
        } else {
            T::default()
        }
    }

    fn get_mut(&mut self, x: usize, y: usize) -> &mut T {
        &mut self.cells[y * self.width + x]
    }

    fn resized(&self, width: usize, height: usize) -> Self {
        let mut g = Grid::new(width, height);
        for y in 0..self.height.min(height) {
            for x in 0..self.width.min(width) {
                *g.get_mut(x, y) = self.get(x, y);
            }
        }
        g
    }

    /// Points holding a non-default value.
    pub fn support(&self) -> impl Iterator<Item = (LatticePoint, T)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != T::default())
            .map(|(k, &v)| (LatticePoint::new(k % self.width, k / self.width), v))
    }

    /// Equality over the whole quadrant, independent of allocated size.
    pub fn same_values(&self, other: &Grid<T>) -> bool {
        let w = self.width.max(other.width);
        let h = self.height.max(other.height);
        (0..h).all(|y| (0..w).all(|x| self.get(x, y) == other.get(x, y)))
    }
}

#[derive(Debug, Clone)]
pub struct OracleState {
    n: u32,
    chips: Grid<ChipCount>,
    firings: Grid<u64>,
    moves: u64,
}

impl OracleState {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn chips(&self) -> &Grid<ChipCount> {
        &self.chips
    }

    pub fn firings(&self) -> &Grid<u64> {
        &self.firings
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    pub fn total_chips(&self) -> ChipCount {
        self.chips.cells.iter().sum()
    }

    pub fn is_stable(&self) -> bool {
        self.chips.cells.iter().all(|&c| c < 2)
    }

    fn grow_to(&mut self, x: usize, y: usize) {
        let mut w = self.chips.width;
        let mut h = self.chips.height;
        while x >= w {
            w *= 2;
        }
        while y >= h {
            h *= 2;
        }
        if (w, h) != (self.chips.width, self.chips.height) {
            self.chips = self.chips.resized(w, h);
            self.firings = self.firings.resized(w, h);
        }
    }
}

/// Chips that ever arrived at each vertex:
/// `[v = origin]·2^n + firings(x-1, y) + firings(x, y-1)`.
pub fn arrivals(o: &OracleState) -> Grid<ChipCount> {
    let (w, h) = (o.firings.width, o.firings.height);
    let mut g = Grid::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut a = 0u128;
            if (x, y) == (0, 0) {
                a += 1u128 << o.n;
            }
            if x > 0 {
                a += o.firings.get(x - 1, y) as u128;
            }
            if y > 0 {
                a += o.firings.get(x, y - 1) as u128;
            }
            *g.get_mut(x, y) = a;
        }
    }
    g
}

type Key = (i64, i64);

enum Scheduler {
    Random {
        rng: Box<ChaCha8Rng>,
        items: Vec<(usize, usize)>,
    },
    Fifo(VecDeque<(usize, usize)>),
    Ordered {
        key: fn(usize, usize) -> Key,
        set: BTreeSet<(Key, (usize, usize))>,
    },
}

impl Scheduler {
    fn new(strategy: Strategy) -> Self {
        match strategy {
            Strategy::Random { seed } => Scheduler::Random {
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
                items: Vec::new(),
            },
            Strategy::FifoQueue => Scheduler::Fifo(VecDeque::new()),
            Strategy::LeftmostFirst => Scheduler::Ordered {
                key: |x, y| (y as i64 - x as i64, (x + y) as i64),
                set: BTreeSet::new(),
            },
            Strategy::RowByRow => Scheduler::Ordered {
                key: |x, y| ((x + y) as i64, y as i64),
                set: BTreeSet::new(),
            },
        }
    }

    fn push(&mut self, v: (usize, usize)) {
        match self {
            Scheduler::Random { items, .. } => items.push(v),
            Scheduler::Fifo(q) => q.push_back(v),
            Scheduler::Ordered { key, set } => {
                set.insert((key(v.0, v.1), v));
            }
        }
    }

    fn pop(&mut self) -> Option<(usize, usize)> {
        match self {
            Scheduler::Random { rng, items } => {
                if items.is_empty() {
                    return None;
                }
                let k = rng.random_range(0..items.len());
                Some(items.swap_remove(k))
            }
            Scheduler::Fifo(q) => q.pop_front(),
            Scheduler::Ordered { set, .. } => set.pop_first().map(|(_, v)| v),
        }
    }
}

/// Step-by-step simulation. Every vertex holding two or more chips is queued
/// exactly once.
pub struct Simulation {
    state: OracleState,
    queue: Scheduler,
    strategy: Strategy,
}

impl Simulation {
    pub fn new(n: u32, strategy: Strategy) -> Result<Self> {
        Self::with_limit(n, strategy, ORACLE_LIMIT)
    }

    pub fn with_limit(n: u32, strategy: Strategy, limit: u32) -> Result<Self> {
        if n > limit {
            return Err(CoreError::OracleLimit { n, limit });
        }
        initial_row(n)?;
        let size = 4;
        let mut state = OracleState {
            n,
            chips: Grid::new(size, size),
            firings: Grid::new(size, size),
            moves: 0,
        };
        *state.chips.get_mut(0, 0) = 1u128 << n;
        let mut queue = Scheduler::new(strategy);
        if n >= 1 {
            queue.push((0, 0));
        }
        Ok(Simulation {
            state,
            queue,
            strategy,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn state(&self) -> &OracleState {
        &self.state
    }

    pub fn into_state(self) -> OracleState {
        self.state
    }

    /// Fires one vertex; `None` once the configuration is stable.
    pub fn step(&mut self) -> Option<LatticePoint> {
        let (x, y) = self.queue.pop()?;
        self.state.grow_to(x + 1, y + 1);
        let s = &mut self.state;
        *s.chips.get_mut(x, y) -= 2;
        *s.firings.get_mut(x, y) += 1;
        s.moves += 1;
        if s.chips.get(x, y) >= 2 {
            self.queue.push((x, y));
        }
        for (cx, cy) in [(x + 1, y), (x, y + 1)] {
            let c = s.chips.get_mut(cx, cy);
            *c += 1;
            // Queued exactly when the count reaches two.
            if *c == 2 {
                self.queue.push((cx, cy));
            }
        }
        Some(LatticePoint::new(x, y))
    }

    pub fn run(mut self, move_cap: u64) -> Result<OracleState> {
        while self.step().is_some() {
            if self.state.moves > move_cap {
                return Err(CoreError::MoveCapExceeded {
                    n: self.state.n,
                    cap: move_cap,
                });
            }
        }
        Ok(self.state)
    }
}

/// Generous cap on the number of moves: every chip ends within the row bound,
/// so the second moment (twice the move count) is at most `2^n · bound²`.
pub fn default_move_cap(n: u32) -> u64 {
    row_bound(n)
        .ok()
        .and_then(|b| b.checked_mul(b))
        .and_then(|b2| b2.checked_mul(1u128 << n.min(126)))
        .and_then(|m| u64::try_from(m / 2).ok())
        .unwrap_or(u64::MAX)
}

pub fn simulate(n: u32, strategy: Strategy, move_cap: u64) -> Result<OracleState> {
    Simulation::new(n, strategy)?.run(move_cap)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub strategy: Strategy,
    pub moves: u64,
}

#[derive(Debug, Clone)]
pub struct ConfluenceReport {
    pub n: u32,
    pub runs: Vec<RunSummary>,
    pub mismatches: Vec<String>,
    /// Final stable state of the first run.
    pub reference: OracleState,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn moves(&self) -> u64 {
        self.reference.moves
    }
}

/// Seeds for the random trials: a SplitMix64 walk from the base seed.
fn trial_seed(base: u64, k: u64) -> u64 {
    let mut z = base.wrapping_add((k + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trials` random orders plus every deterministic strategy and compares
/// the stable grids, firing-count grids and move totals.
pub fn confluence_check(n: u32, trials: usize, seed: u64) -> Result<ConfluenceReport> {
    if trials < 2 {
        return Err(CoreError::InvalidArgument(
            "confluence check needs at least 2 trials".into(),
        ));
    }
    let strategies = (0..trials as u64)
        .map(|k| Strategy::Random {
            seed: trial_seed(seed, k),
        })
        .chain(Strategy::DETERMINISTIC);

    let cap = default_move_cap(n);
    let mut runs = Vec::new();
    let mut mismatches = Vec::new();
    let mut reference: Option<OracleState> = None;
    for strategy in strategies {
        let state = simulate(n, strategy, cap)?;
        runs.push(RunSummary {
            strategy,
            moves: state.moves,
        });
        match &reference {
            None => reference = Some(state),
            Some(r) => {
                if r.moves != state.moves {
                    mismatches.push(format!("{strategy}: {} moves vs {}", state.moves, r.moves));
                }
                if !r.chips.same_values(&state.chips) {
                    mismatches.push(format!("{strategy}: stable configuration differs"));
                }
                if !r.firings.same_values(&state.firings) {
                    mismatches.push(format!("{strategy}: firing counts differ"));
                }
            }
        }
    }
    Ok(ConfluenceReport {
        n,
        runs,
        mismatches,
        reference: reference.expect("at least two runs"),
    })
}
