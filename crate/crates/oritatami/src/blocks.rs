//! The production-block automaton: the word-level canvas of the tag-system
//! folding design.
//!
//! Execution proceeds in swipe cycles. A forward swipe trims the leading 0s
//! of the current word until a 1 is met, then appends the production after
//! the one holding the lead; the backward swipe copies the resulting word
//! onto the next grid row and a line feed starts the next cycle. Running out
//! of letters halts the automaton. Letters are recorded abstractly: a bump
//! for each 0 and a flat surface for each 1.

use crate::scts::{Scts, Word};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockEventKind {
    UprightRead0,
    UprightRead1,
    MirroredCopyAppend,
    RotatedCopyRewind,
    LineFeed,
    Halt,
}

/// One bookkeeping event of the automaton: what happened, which production
/// block held the lead, and the letters read, appended, or copied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEvent {
    pub kind: BlockEventKind,
    pub production: usize,
    pub letters: Word,
}

/// Letter geometry on a grid row: a bump encodes 0, a flat surface 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSymbol {
    Bump,
    Flat,
}

impl GridSymbol {
    pub fn from_letter(letter: u8) -> Self {
        if letter == 0 {
            GridSymbol::Bump
        } else {
            GridSymbol::Flat
        }
    }

    pub fn to_char(self) -> char {
        match self {
            GridSymbol::Bump => 'B',
            GridSymbol::Flat => 'F',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRun {
    pub events: Vec<BlockEvent>,
    /// One row per swipe cycle boundary; row r encodes the word at tag-system
    /// step `boundary_steps[r]`.
    pub grid: Vec<Vec<GridSymbol>>,
    /// Tag-system step index of each grid row.
    pub boundary_steps: Vec<usize>,
    /// Output pointer when the automaton halted.
    pub halted: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlocksError {
    #[error("the block design requires a production count divisible by 4, got {0}")]
    BadParameters(usize),
    #[error("swipe limit of {0} reached before halting")]
    SwipeLimit(usize),
}

fn row_of(word: &[u8]) -> Vec<GridSymbol> {
    word.iter().map(|&l| GridSymbol::from_letter(l)).collect()
}

/// Run the automaton from `w0` for at most `max_swipes` swipes (a cycle is a
/// forward plus a backward swipe).
pub fn block_automaton_run(sys: &Scts, w0: &[u8], max_swipes: usize) -> Result<BlockRun, BlocksError> {
    let n = sys.len();
    if n % 4 != 0 {
        return Err(BlocksError::BadParameters(n));
    }
    let mut run = BlockRun {
        events: Vec::new(),
        grid: Vec::new(),
        boundary_steps: Vec::new(),
        halted: None,
    };
    let mut word = w0.to_vec();
    let mut pointer = 0usize;
    let mut step = 0usize;
    let mut swipes = 0usize;

    loop {
        if word.is_empty() {
            run.events.push(BlockEvent {
                kind: BlockEventKind::Halt,
                production: pointer,
                letters: Vec::new(),
            });
            run.halted = Some(pointer);
            return Ok(run);
        }
        if swipes >= max_swipes {
            return Err(BlocksError::SwipeLimit(max_swipes));
        }
        run.grid.push(row_of(&word));
        run.boundary_steps.push(step);
        swipes += 2;

        // forward swipe: trim leading zeros
        let mut trimmed = 0;
        while trimmed < word.len() && word[trimmed] == 0 {
            run.events.push(BlockEvent {
                kind: BlockEventKind::UprightRead0,
                production: pointer,
                letters: vec![0],
            });
            pointer = (pointer + 1) % n;
            step += 1;
            trimmed += 1;
        }
        if trimmed == word.len() {
            // ran out of letters mid-swipe
            run.events.push(BlockEvent {
                kind: BlockEventKind::Halt,
                production: pointer,
                letters: Vec::new(),
            });
            run.halted = Some(pointer);
            return Ok(run);
        }
        run.events.push(BlockEvent {
            kind: BlockEventKind::UprightRead1,
            production: pointer,
            letters: vec![1],
        });
        let appended = sys.productions[(pointer + 1) % n].clone();
        run.events.push(BlockEvent {
            kind: BlockEventKind::MirroredCopyAppend,
            production: (pointer + 1) % n,
            letters: appended.clone(),
        });
        let mut next_word = word[trimmed + 1..].to_vec();
        next_word.extend_from_slice(&appended);
        pointer = (pointer + 2) % n;
        step += 1;

        // backward swipe: copy the word down for the next reading
        run.events.push(BlockEvent {
            kind: BlockEventKind::RotatedCopyRewind,
            production: pointer,
            letters: next_word.clone(),
        });
        run.events.push(BlockEvent {
            kind: BlockEventKind::LineFeed,
            production: pointer,
            letters: Vec::new(),
        });
        word = next_word;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scts::{parse_word, scts_run};

    #[test]
    fn requires_multiple_of_four() {
        let sys = Scts::parse("1,0,1").unwrap();
        assert_eq!(
            block_automaton_run(&sys, &[1], 10),
            Err(BlocksError::BadParameters(3))
        );
    }

    #[test]
    fn empty_input_single_halt_event() {
        let sys = Scts::parse("e,100,1,0").unwrap();
        let run = block_automaton_run(&sys, &[], 10).unwrap();
        assert!(run.grid.is_empty());
        assert_eq!(run.events.len(), 1);
        assert_eq!(run.events[0].kind, BlockEventKind::Halt);
        assert_eq!(run.halted, Some(0));
    }

    #[test]
    fn worked_example_rows_match_word_trace() {
        let sys = Scts::parse("e,100,1,0").unwrap();
        let w0 = parse_word("010").unwrap();
        let run = block_automaton_run(&sys, &w0, 100).unwrap();
        let trace = scts_run(&sys, &w0, 1000).unwrap();
        assert_eq!(run.grid.len(), run.boundary_steps.len());
        for (row, &t) in run.grid.iter().zip(&run.boundary_steps) {
            assert_eq!(row, &row_of(&trace.words[t]), "row mismatch at step {t}");
        }
        assert_eq!(run.halted, trace.halt);
    }

    #[test]
    fn events_alternate_by_swipe() {
        let sys = Scts::parse("e,100,1,0").unwrap();
        let run = block_automaton_run(&sys, &parse_word("010").unwrap(), 100).unwrap();
        // each cycle is reads* then append, rewind, line feed; a halt only
        // ever follows a line feed or starts the run
        use BlockEventKind::*;
        let mut expecting_forward = true;
        for e in &run.events {
            match e.kind {
                UprightRead0 | UprightRead1 | Halt => assert!(expecting_forward),
                MirroredCopyAppend => {
                    assert!(expecting_forward);
                    expecting_forward = false;
                }
                RotatedCopyRewind => assert!(!expecting_forward),
                LineFeed => {
                    assert!(!expecting_forward);
                    expecting_forward = true;
                }
            }
        }
    }
}
