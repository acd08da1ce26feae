//! Geometry calculator for the tag-system folding construction: block
//! dimensions, per-module lengths, the congruences the design relies on,
//! and the bead-type budget.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TuringError {
    #[error("production count must be a positive multiple of 4, got {0}")]
    BadParameters(u64),
    #[error("maximum production length must be at least 1, got {0}")]
    BadLength(u64),
}

/// Dimensions of the production-module design for `n` productions of
/// maximum length `max_len`.
///
/// `width` is the width of a production module minus its last submodule in
/// compact form; `height` is the production-module height. Submodule
/// lengths: the init scaffold A, the empty-word probe B, the end-of-word
/// probe C, the letters D (total over the six switchback strands), the
/// padding/carriage-return E for each padding parameter k, the terminal
/// scaffold F, and the read/copy/line-feed head G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringGeometry {
    pub n: u64,
    pub max_len: u64,
    pub width: u64,
    pub height: u64,
    pub a_len: u64,
    pub b_len: u64,
    pub c_len: u64,
    pub d_len: u64,
    /// E-module length per padding parameter k = 0..=max_len.
    pub e_lens: Vec<u64>,
    pub f_len: u64,
    pub g_len: u64,
}

/// One congruence the design depends on, with its observed residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub name: &'static str,
    pub value: u64,
    pub modulus: u64,
    pub expected: u64,
}

impl Congruence {
    pub fn holds(&self) -> bool {
        self.value % self.modulus == self.expected
    }
}

pub fn turing_geometry(n: u64, max_len: u64) -> Result<TuringGeometry, TuringError> {
    if n == 0 || n % 4 != 0 {
        return Err(TuringError::BadParameters(n));
    }
    if max_len == 0 {
        return Err(TuringError::BadLength(max_len));
    }
    let width = 6 * (max_len + 9) + 18;
    let height = n * (width + 6) - (width + 3);
    let e_lens = (0..=max_len)
        .map(|k| 3 * n * (max_len - k + 9) * (width + 6) + 8 * height - 1)
        .collect();
    Ok(TuringGeometry {
        n,
        max_len,
        width,
        height,
        a_len: 3 * height - 2,
        b_len: 5,
        c_len: 3 * height - 10,
        d_len: 3 * n * (width + 6),
        e_lens,
        f_len: 4 * height,
        g_len: 6 * height - 1,
    })
}

impl TuringGeometry {
    /// The congruence suite the module design requires.
    pub fn congruences(&self) -> Vec<Congruence> {
        let mut out = vec![
            Congruence {
                name: "w = 0 mod 6",
                value: self.width,
                modulus: 6,
                expected: 0,
            },
            Congruence {
                name: "h = 3 mod 6",
                value: self.height,
                modulus: 6,
                expected: 3,
            },
            Congruence {
                name: "n(w+6) = 0 mod 24",
                value: self.n * (self.width + 6),
                modulus: 24,
                expected: 0,
            },
            Congruence {
                name: "C pairs into switchbacks: 3h-9 = 0 mod 2",
                value: 3 * self.height - 9,
                modulus: 2,
                expected: 0,
            },
            Congruence {
                name: "D strand length n(w+6)/2 = 0 mod 12",
                value: self.n * (self.width + 6) / 2,
                modulus: 12,
                expected: 0,
            },
        ];
        for &len in &self.e_lens {
            out.push(Congruence {
                name: "E length = 23 mod 24",
                value: len,
                modulus: 24,
                expected: 23,
            });
            // E folds back spontaneously around 3c where c = (len+1)/4
            let c = (len + 1) / 4;
            out.push(Congruence {
                name: "E foldback c = 0 mod 6",
                value: c,
                modulus: 6,
                expected: 0,
            });
        }
        out
    }

    pub fn congruences_hold(&self) -> bool {
        self.congruences().iter().all(Congruence::holds)
    }
}

/// Bead-type accounting for one submodule: labeled parts and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleBudget {
    pub module: &'static str,
    pub parts: Vec<(&'static str, u64)>,
    pub total: u64,
}

fn module_budget(module: &'static str, parts: Vec<(&'static str, u64)>) -> ModuleBudget {
    let total = parts.iter().map(|(_, c)| c).sum();
    ModuleBudget {
        module,
        parts,
        total,
    }
}

/// Per-module bead-type counts of the design. The counts are fixed by the
/// module structure, not by the geometry parameters; the geometry argument
/// pins the budget to a concrete, valid instantiation.
pub fn bead_budget(geometry: &TuringGeometry) -> Vec<ModuleBudget> {
    debug_assert!(geometry.congruences_hold());
    vec![
        module_budget(
            "A",
            vec![("opening run", 5), ("glider period", 6), ("closing pair", 2)],
        ),
        module_budget("B", vec![("probe beads", 5)]),
        module_budget(
            "C",
            vec![
                ("switchback pattern 1", 6),
                ("switchback pattern 2", 6),
                ("switchback pattern 3", 6),
                ("raised two-switchback variant", 6),
            ],
        ),
        module_budget(
            "D",
            vec![
                ("switchback period", 4 * 12),
                ("zero bump", 8),
                ("strand boots", 4 * 16),
            ],
        ),
        module_budget(
            "E",
            vec![
                ("short switchbacks, both phases", 2 * (4 * 12 + 4 * 16)),
                ("long glider", 18),
                ("long switchbacks", 5 * 6),
            ],
        ),
        module_budget(
            "F",
            vec![("log-colored strands", 4 * 12), ("glider", 12)],
        ),
        module_budget(
            "G",
            vec![
                ("black parts", 7 * 12),
                ("red parts", 3 * 14 + 18 + 15 + 29 + 6),
                ("lead glider coloring", 60),
            ],
        ),
    ]
}

/// The logarithmic coloring of strand beads: bead i receives the color
/// `(floor(log3 i) mod 4, i mod 12)`. The optional shift is added to i
/// before coloring; `i + shift` must be at least 1.
pub fn coloring(i: u64, shift: u64) -> (u8, u8) {
    let j = i + shift;
    assert!(j >= 1, "coloring is defined for indices >= 1");
    let mut log3 = 0u64;
    let mut power = 3u64;
    while power <= j {
        log3 += 1;
        power *= 3;
    }
    ((log3 % 4) as u8, (j % 12) as u8)
}
