//! Skipping cyclic tag system interpreter and the mod-4 production-count
//! normalization.
//!
//! A system holds `n` binary productions. Reading a leading 0 drops it and
//! advances the pointer by one; reading a leading 1 drops it, appends the
//! *next* production, and advances by two. An empty word halts and outputs
//! the pointer.

use std::fmt;
use thiserror::Error;

/// A binary word over {0,1}, stored as bytes 0/1.
pub type Word = Vec<u8>;

/// Render a word for display, with `e` for the empty word.
pub fn word_string(w: &[u8]) -> String {
    if w.is_empty() {
        "e".to_string()
    } else {
        w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
    }
}

/// Parse a word from text; `e` (or the empty string) is the empty word.
pub fn parse_word(s: &str) -> Result<Word, SctsError> {
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(SctsError::BadLetter(other)),
        })
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SctsError {
    #[error("words are over {{0,1}}; found {0:?}")]
    BadLetter(char),
    #[error("a tag system needs at least one production")]
    NoProductions,
    #[error("step limit of {0} reached before halting")]
    StepLimit(usize),
    #[error("normalization failed trace-equivalence validation at sample {sample}")]
    NormalizationUnvalidated { sample: usize },
}

/// A skipping cyclic tag system: its production list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scts {
    pub productions: Vec<Word>,
}

impl Scts {
    pub fn new(productions: Vec<Word>) -> Result<Self, SctsError> {
        if productions.is_empty() {
            return Err(SctsError::NoProductions);
        }
        Ok(Scts { productions })
    }

    /// Parse a comma-separated production list, `e` spelling the empty word.
    pub fn parse(text: &str) -> Result<Self, SctsError> {
        let productions = text
            .split(',')
            .map(|w| parse_word(w.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Scts::new(productions)
    }

    pub fn len(&self) -> usize {
        self.productions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.productions.is_empty()
    }
}

impl fmt::Display for Scts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.productions.iter().map(|w| word_string(w)).collect();
        write!(f, "({})", words.join(","))
    }
}

/// Machine state: current word and production pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SctsState {
    pub word: Word,
    pub pointer: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Next(SctsState),
    Halt { pointer: usize },
}

/// One step of the tag system.
pub fn scts_step(state: &SctsState, sys: &Scts) -> StepResult {
    let n = sys.len();
    debug_assert!(state.pointer < n);
    let Some((&first, rest)) = state.word.split_first() else {
        return StepResult::Halt {
            pointer: state.pointer,
        };
    };
    if first == 0 {
        StepResult::Next(SctsState {
            word: rest.to_vec(),
            pointer: (state.pointer + 1) % n,
        })
    } else {
        let mut word = rest.to_vec();
        word.extend_from_slice(&sys.productions[(state.pointer + 1) % n]);
        StepResult::Next(SctsState {
            word,
            pointer: (state.pointer + 2) % n,
        })
    }
}

/// A finished or truncated run: the `⟨word, current production⟩` display
/// pairs per step, plus halt data when the system stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SctsTrace {
    /// `(w^t, p_{q^t})` for each reached time t, including t = 0.
    pub pairs: Vec<(Word, Word)>,
    /// Word per time step (the first components of `pairs`).
    pub words: Vec<Word>,
    /// Pointer per time step.
    pub pointers: Vec<usize>,
    /// Output pointer at the halting step.
    pub halt: Option<usize>,
}

/// Iterate the system from `w0`, recording the display trace.
pub fn scts_run(sys: &Scts, w0: &[u8], max_steps: usize) -> Result<SctsTrace, SctsError> {
    let mut state = SctsState {
        word: w0.to_vec(),
        pointer: 0,
    };
    let mut trace = SctsTrace {
        pairs: Vec::new(),
        words: Vec::new(),
        pointers: Vec::new(),
        halt: None,
    };
    for _ in 0..=max_steps {
        trace.pairs.push((
            state.word.clone(),
            sys.productions[state.pointer].clone(),
        ));
        trace.words.push(state.word.clone());
        trace.pointers.push(state.pointer);
        match scts_step(&state, sys) {
            StepResult::Halt { pointer } => {
                trace.halt = Some(pointer);
                return Ok(trace);
            }
            StepResult::Next(next) => state = next,
        }
    }
    Err(SctsError::StepLimit(max_steps))
}

/// A production-count normalization together with its projection witness:
/// original pointer q corresponds to normalized pointer `q << doublings`,
/// and words embed via the letter map applied `doublings` times.
#[derive(Debug, Clone)]
pub struct NormalizedScts {
    pub system: Scts,
    pub doublings: u32,
}

impl NormalizedScts {
    /// Map a word of the original system into the normalized one.
    pub fn inject_word(&self, w: &[u8]) -> Word {
        let mut out = w.to_vec();
        for _ in 0..self.doublings {
            out = expand_letters(&out);
        }
        out
    }

    /// Map a normalized pointer back to the original system's pointer.
    pub fn project_pointer(&self, pointer: usize) -> usize {
        pointer >> self.doublings
    }
}

/// Letter map of one doubling pass: `0 -> 00`, `1 -> 100`.
///
/// Every original step must advance the doubled pointer by exactly twice the
/// original advance. A 0-read (+1) becomes two 0-reads (+2). A bare 1-read
/// advances by 2 in any system, which is only half of the +4 a doubled
/// 1-read (+2) needs, so each 1 drags two padding 0s behind it.
fn expand_letters(w: &[u8]) -> Word {
    let mut out = Vec::with_capacity(w.len() * 3);
    for &b in w {
        if b == 0 {
            out.extend_from_slice(&[0, 0]);
        } else {
            out.extend_from_slice(&[1, 0, 0]);
        }
    }
    out
}

/// One doubling pass over a system with n productions, yielding 2n. With
/// pointer correspondence q -> 2q, reads happen at even slots and appends
/// take the following odd slot, so slot 2i+1 must hold the expansion of
/// p_{i+1}. Even slots are only ever displayed, never appended; they carry
/// the expansion of p_i to keep the projection readable.
fn double_system(sys: &Scts) -> Scts {
    let n = sys.len();
    let mut productions = Vec::with_capacity(2 * n);
    for i in 0..n {
        productions.push(expand_letters(&sys.productions[i]));
        productions.push(expand_letters(&sys.productions[(i + 1) % n]));
    }
    Scts { productions }
}

/// Normalize the production count to a multiple of four, validating the
/// transformation by sampled trace equivalence (inputs of length <= 8, run
/// horizons <= 200). A transformation that fails validation is rejected.
pub fn normalize_mod4(sys: &Scts) -> Result<NormalizedScts, SctsError> {
    let mut normalized = NormalizedScts {
        system: sys.clone(),
        doublings: 0,
    };
    while normalized.system.len() % 4 != 0 {
        normalized = NormalizedScts {
            system: double_system(&normalized.system),
            doublings: normalized.doublings + 1,
        };
    }
    validate_normalization(sys, &normalized)?;
    Ok(normalized)
}

/// Check halting behavior and outputs of the normalized system against the
/// original over a deterministic sample of short inputs.
///
/// One original step costs between 2^d and 3^d normalized steps after d
/// doublings, which fixes the horizons: a halting original run must halt in
/// the normalized system within the 3^d bound, and a normalized halt inside
/// the 2^d bound of a non-halting original run is a genuine mismatch.
fn validate_normalization(orig: &Scts, norm: &NormalizedScts) -> Result<(), SctsError> {
    let horizon = 200usize;
    let lo = 2usize.pow(norm.doublings);
    let hi = 3usize.pow(norm.doublings);
    for (sample, w0) in sample_words(8).enumerate() {
        let injected = norm.inject_word(&w0);
        match scts_run(orig, &w0, horizon) {
            Ok(ta) => {
                let halt_step = ta.words.len() - 1;
                let ha = ta.halt.expect("finished runs halt");
                match scts_run(&norm.system, &injected, hi * (halt_step + 2)) {
                    Ok(tb) if norm.project_pointer(tb.halt.expect("finished runs halt")) == ha => {}
                    _ => return Err(SctsError::NormalizationUnvalidated { sample }),
                }
            }
            Err(SctsError::StepLimit(_)) => {
                if scts_run(&norm.system, &injected, lo * horizon).is_ok() {
                    return Err(SctsError::NormalizationUnvalidated { sample });
                }
            }
            Err(other) => return Err(other),
        }
    }
    Ok(())
}

/// Deterministic sample of binary words: everything up to length 4, plus a
/// spread of longer words up to `max_len`.
fn sample_words(max_len: usize) -> impl Iterator<Item = Word> {
    let mut out: Vec<Word> = Vec::new();
    for len in 0..=max_len.min(4) {
        for bits in 0..(1u32 << len) {
            out.push((0..len).map(|i| ((bits >> i) & 1) as u8).collect());
        }
    }
    for len in 5..=max_len {
        for seed in [0u32, 0x5a5a_5a5a, 0xffff_ffff, 0x1234_5678] {
            out.push((0..len).map(|i| ((seed >> (i % 32)) & 1) as u8).collect());
        }
    }
    out.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(text: &str) -> Scts {
        Scts::parse(text).unwrap()
    }

    #[test]
    fn step_examples() {
        let s = sys("e,100,1,0");
        let st = SctsState {
            word: parse_word("010").unwrap(),
            pointer: 0,
        };
        let next = scts_step(&st, &s);
        assert_eq!(
            next,
            StepResult::Next(SctsState {
                word: parse_word("10").unwrap(),
                pointer: 1
            })
        );
        let StepResult::Next(st2) = next else { unreachable!() };
        assert_eq!(
            scts_step(&st2, &s),
            StepResult::Next(SctsState {
                word: parse_word("01").unwrap(),
                pointer: 3
            })
        );
        let halted = SctsState {
            word: Vec::new(),
            pointer: 2,
        };
        assert_eq!(scts_step(&halted, &s), StepResult::Halt { pointer: 2 });
    }

    #[test]
    fn worked_example_pair_trace() {
        let s = sys("e,100,1,0");
        let trace = scts_run(&s, &parse_word("010").unwrap(), 100).unwrap();
        let display: Vec<(String, String)> = trace
            .pairs
            .iter()
            .map(|(w, p)| (word_string(w), word_string(p)))
            .collect();
        let want = [
            ("010", "e"),
            ("10", "100"),
            ("01", "0"),
            ("1", "e"),
            ("100", "1"),
            ("000", "e"),
            ("00", "100"),
            ("0", "1"),
            ("e", "0"),
        ];
        assert_eq!(display.len(), want.len());
        for (got, want) in display.iter().zip(want) {
            assert_eq!((got.0.as_str(), got.1.as_str()), want);
        }
        // halts right after <0,1>, outputting the pointer
        assert_eq!(trace.halt, Some(3));
    }

    #[test]
    fn second_worked_example_word_trace() {
        let s = sys("100,1,0,e");
        let trace = scts_run(&s, &parse_word("10").unwrap(), 100).unwrap();
        let words: Vec<String> = trace.words.iter().map(|w| word_string(w)).collect();
        assert_eq!(words, vec!["10", "01", "1", "100", "000", "00", "0", "e"]);
        assert_eq!(trace.words.len() - 1, 7);
        // read-letter history is seven letters long
        let history: String = trace
            .words
            .windows(2)
            .map(|w| if w[0][0] == 0 { '0' } else { '1' })
            .collect();
        assert_eq!(history, "1011000");
    }

    #[test]
    fn empty_input_halts_immediately() {
        let s = sys("1,0,1");
        let trace = scts_run(&s, &[], 10).unwrap();
        assert_eq!(trace.halt, Some(0));
        assert_eq!(trace.words.len(), 1);
    }

    #[test]
    fn word_length_law() {
        let s = sys("101,e,11,0");
        let mut state = SctsState {
            word: parse_word("1101001").unwrap(),
            pointer: 0,
        };
        for _ in 0..50 {
            match scts_step(&state, &s) {
                StepResult::Next(next) => {
                    let expected = if state.word[0] == 0 {
                        state.word.len() - 1
                    } else {
                        state.word.len() - 1 + s.productions[(state.pointer + 1) % s.len()].len()
                    };
                    assert_eq!(next.word.len(), expected);
                    assert!(next.pointer < s.len());
                    state = next;
                }
                StepResult::Halt { .. } => break,
            }
        }
    }

    #[test]
    fn normalize_identity_when_multiple_of_four() {
        let s = sys("e,100,1,0");
        let norm = normalize_mod4(&s).unwrap();
        assert_eq!(norm.doublings, 0);
        assert_eq!(norm.system, s);
    }

    #[test]
    fn normalize_three_productions() {
        let s = sys("10,0,1");
        let norm = normalize_mod4(&s).unwrap();
        assert_eq!(norm.system.len() % 4, 0);
        // spot-check one projection by hand
        let trace = scts_run(&s, &parse_word("10").unwrap(), 200).unwrap();
        assert_eq!(trace.halt, Some(1));
        let ntrace = scts_run(
            &norm.system,
            &norm.inject_word(&parse_word("10").unwrap()),
            1800,
        )
        .unwrap();
        assert_eq!(
            trace.halt.unwrap(),
            norm.project_pointer(ntrace.halt.unwrap())
        );
    }

    #[test]
    fn broken_transformation_is_rejected() {
        // a deliberately wrong doubling: pairs each production with itself
        // instead of its successor, so appended productions misalign
        let s = sys("10,0,1");
        let mut wrong = Vec::new();
        for p in &s.productions {
            wrong.push(expand_letters(p));
            wrong.push(expand_letters(p));
        }
        wrong.push(Vec::new());
        wrong.push(Vec::new());
        let candidate = NormalizedScts {
            system: Scts::new(wrong).unwrap(),
            doublings: 1,
        };
        assert!(matches!(
            validate_normalization(&s, &candidate),
            Err(SctsError::NormalizationUnvalidated { .. })
        ));
    }
}
