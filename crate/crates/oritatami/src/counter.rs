//! Semantics harness for the binary-counter construction: seed encoding of
//! the initial value, row decoding, the row-by-row verification of counting
//! runs, and the module/function check used for proof-by-simulation.
//!
//! A counter row is a start signal (3 beads) followed by alternating bit
//! blocks (4 beads) and silent blocks (6 beads), starting and ending with a
//! bit block. The exact bead coding inside blocks is configuration: callers
//! that verify a folded conformation supply the mapping from beads to row
//! descriptors.

use crate::dynamics::{run, RunConfig, RunStatus};
use crate::model::{Conformation, DynamicsKind, OritatamiSystem, Seed};
use crate::lattice::Point;
use thiserror::Error;

/// One block of a counter row descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowBlock {
    Start,
    Bit(bool),
    Silent,
}

/// Which end of the row carries the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitOrder {
    MsbFirst,
    LsbFirst,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CounterError {
    #[error("bit width must be odd and positive, got {0}")]
    BadWidth(usize),
    #[error("value {value} does not fit in {bits} bits")]
    RangeError { value: u64, bits: usize },
    #[error("row is malformed: {0}")]
    MalformedRow(&'static str),
    #[error("row {0} is missing from the trace")]
    MissingRow(usize),
    #[error("row {row} failed to decode: {reason}")]
    DecodeFailure { row: usize, reason: &'static str },
}

/// Row structure for a given (odd) bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterLayout {
    pub bits: usize,
}

impl CounterLayout {
    pub fn new(bits: usize) -> Result<Self, CounterError> {
        if bits == 0 || bits % 2 == 0 {
            return Err(CounterError::BadWidth(bits));
        }
        Ok(CounterLayout { bits })
    }

    /// Beads per row: start signal, bit blocks, and interleaved silent
    /// blocks.
    pub fn row_beads(&self) -> usize {
        3 + 4 * self.bits + 6 * (self.bits - 1)
    }

    /// Blocks per row descriptor.
    pub fn row_blocks(&self) -> usize {
        1 + self.bits + (self.bits - 1)
    }

    /// Rows per zig-zag pass is fixed by the construction: three rows down
    /// per zig and three per zag, so successive values sit six rows apart.
    pub const ROWS_PER_VALUE: usize = 6;
}

/// Encode `value` as a row descriptor: start signal, then bit blocks most
/// significant first, interleaved with silent blocks.
pub fn encode_seed(value: u64, bits: usize) -> Result<Vec<RowBlock>, CounterError> {
    let layout = CounterLayout::new(bits)?;
    if bits < 64 && value >= (1u64 << bits) {
        return Err(CounterError::RangeError { value, bits });
    }
    let mut row = Vec::with_capacity(layout.row_blocks());
    row.push(RowBlock::Start);
    for i in (0..bits).rev() {
        row.push(RowBlock::Bit((value >> i) & 1 == 1));
        if i > 0 {
            row.push(RowBlock::Silent);
        }
    }
    Ok(row)
}

/// Decode a row descriptor produced by [`encode_seed`] (or by a bead-to-row
/// mapping) back to its value. `order` says which end holds the most
/// significant bit.
pub fn decode_row(row: &[RowBlock], order: BitOrder) -> Result<u64, CounterError> {
    let mut blocks = row.iter();
    if blocks.next() != Some(&RowBlock::Start) {
        return Err(CounterError::MalformedRow("missing start signal"));
    }
    let mut bits = Vec::new();
    let mut expect_bit = true;
    for b in blocks {
        match (expect_bit, b) {
            (true, RowBlock::Bit(v)) => bits.push(*v),
            (false, RowBlock::Silent) => {}
            (true, _) => return Err(CounterError::MalformedRow("expected a bit block")),
            (false, _) => return Err(CounterError::MalformedRow("expected a silent block")),
        }
        expect_bit = !expect_bit;
    }
    if bits.is_empty() || bits.len() % 2 == 0 {
        return Err(CounterError::MalformedRow(
            "alternation must start and end with a bit block",
        ));
    }
    let ordered: Vec<bool> = match order {
        BitOrder::MsbFirst => bits,
        BitOrder::LsbFirst => bits.into_iter().rev().collect(),
    };
    Ok(ordered
        .into_iter()
        .fold(0u64, |acc, b| (acc << 1) | u64::from(b)))
}

/// Supplies decoded row descriptors of a counting run, indexed by grid row.
/// Implementations hold either synthetic rows or a mapping from a folded
/// conformation's beads to rows.
pub trait RowSource {
    fn row(&self, index: usize) -> Option<Vec<RowBlock>>;
}

impl RowSource for Vec<(usize, Vec<RowBlock>)> {
    fn row(&self, index: usize) -> Option<Vec<RowBlock>> {
        self.iter().find(|(i, _)| *i == index).map(|(_, r)| r.clone())
    }
}

/// Verification report: how many values were checked before overflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterReport {
    pub checked: usize,
}

/// Check that row `6i` decodes to `start + i` for every `i < 2^bits - start`.
pub fn verify_counter(
    rows: &dyn RowSource,
    start: u64,
    bits: usize,
    order: BitOrder,
) -> Result<CounterReport, CounterError> {
    let layout = CounterLayout::new(bits)?;
    if bits < 64 && start >= (1u64 << bits) {
        return Err(CounterError::RangeError { value: start, bits });
    }
    let span = (1u64 << bits) - start;
    let mut checked = 0usize;
    for i in 0..span {
        let row_index = (i as usize) * CounterLayout::ROWS_PER_VALUE;
        let row = rows
            .row(row_index)
            .ok_or(CounterError::MissingRow(row_index))?;
        if row.len() != layout.row_blocks() {
            return Err(CounterError::DecodeFailure {
                row: row_index,
                reason: "row has the wrong block count",
            });
        }
        let value = decode_row(&row, order).map_err(|_| CounterError::DecodeFailure {
            row: row_index,
            reason: "row does not decode",
        })?;
        if value != start + i {
            return Err(CounterError::DecodeFailure {
                row: row_index,
                reason: "row decodes to the wrong value",
            });
        }
        checked += 1;
    }
    Ok(CounterReport { checked })
}

/// A module function: the unit of proof-by-simulation. The module's fold is
/// checked inside a perimeter, entered at a fixed position, against fixed
/// surroundings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpec {
    /// Region the function's fold must stay inside.
    pub perimeter: Vec<Point>,
    /// Position of the module's first bead.
    pub entry: Point,
    /// The beads surrounding the perimeter, as a seed conformation.
    pub surroundings: Conformation,
    /// Expected fold of the module inside the perimeter.
    pub expected: Conformation,
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<(), CounterError> {
        if self.expected.points().first() != Some(&self.entry) {
            return Err(CounterError::MalformedRow(
                "expected conformation must start at the entry position",
            ));
        }
        if !self
            .expected
            .points()
            .iter()
            .all(|p| self.perimeter.contains(p))
        {
            return Err(CounterError::MalformedRow(
                "expected conformation must stay inside the perimeter",
            ));
        }
        Ok(())
    }
}

/// Simulate the module's beads from the function's surroundings and report
/// whether the fold is deterministic and equal to the expected conformation.
pub fn check_function(
    sys: &OritatamiSystem,
    spec: &FunctionSpec,
    dynamics: DynamicsKind,
) -> Result<bool, crate::dynamics::DynamicsError> {
    let seed = Seed(spec.surroundings.clone());
    let outcome = run(sys, &seed, dynamics, &RunConfig::default())?;
    if outcome.status != RunStatus::Completed {
        return Ok(false);
    }
    let folded = &outcome.final_frontier().members()[0];
    let tail_points = &folded.points()[seed.len()..];
    Ok(tail_points == spec.expected.points())
}

/// The function inventory of the 60-bead counter: two half-adder modules
/// with six functions each and two U-turn modules with four each.
pub fn function_inventory() -> [(&'static str, usize, usize); 2] {
    [("half-adder", 2, 6), ("u-turn", 2, 4)]
}

/// Total function count of the inventory.
pub fn function_count() -> usize {
    function_inventory()
        .iter()
        .map(|(_, modules, functions)| modules * functions)
        .sum()
}
