//! Reduction from 3-SAT to the rule design problem, with assignment
//! decoding and exhaustive gadget validation.
//!
//! Every clause becomes one scenario whose target is the unique fold exactly
//! when at least one of its three literal bead types attracts the first
//! produced bead. Every variable becomes one scenario that rules out rules
//! attracting the first bead to both polarities. The figures fix the gadget
//! shapes only loosely; the binding contract is [`gadget_soundness`], which
//! checks the advertised equivalence against every rule over the gadget's
//! bead types.

use crate::lattice::Point;
use crate::model::{AttractionRule, BeadType, Conformation, DynamicsKind};
use crate::ruledesign::{verify_rule, RuleDesignInstance, Scenario};
use std::collections::BTreeSet;
use thiserror::Error;

/// A literal: a variable index and its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    pub fn satisfied_by(&self, value: bool) -> bool {
        value != self.negated
    }
}

/// A 3-CNF formula. Clauses with fewer than three distinct literals repeat
/// a literal; the reduction is insensitive to repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    pub num_vars: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<[Lit; 3]>) -> Result<Self, DimacsError> {
        for clause in &clauses {
            for lit in clause {
                if lit.var >= num_vars {
                    return Err(DimacsError::UnknownVariable { var: lit.var + 1 });
                }
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    pub fn satisfies(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.satisfied_by(assignment[l.var])))
    }

    /// Exhaustive satisfiability check; the independent oracle used by the
    /// reduction round-trip tests.
    pub fn satisfiable(&self) -> Option<Vec<bool>> {
        for bits in 0u64..(1u64 << self.num_vars) {
            let assignment: Vec<bool> = (0..self.num_vars).map(|v| (bits >> v) & 1 == 1).collect();
            if self.satisfies(&assignment) {
                return Some(assignment);
            }
        }
        None
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("variable {var} is not declared in the header")]
    UnknownVariable { var: usize },
    #[error("clause {index} has {len} literals; this solver handles 3-CNF")]
    NotThreeCnf { index: usize, len: usize },
}

/// Parse a DIMACS CNF file. Clauses of one or two literals are padded by
/// repetition; clauses of more than three are rejected.
pub fn parse_dimacs(text: &str) -> Result<Cnf3, DimacsError> {
    let mut num_vars: Option<usize> = None;
    let mut literals: Vec<i64> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(DimacsError::Syntax {
                    line: lineno + 1,
                    message: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            num_vars = Some(parts[1].parse().map_err(|_| DimacsError::Syntax {
                line: lineno + 1,
                message: "bad variable count".into(),
            })?);
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| DimacsError::Syntax {
                line: lineno + 1,
                message: format!("bad literal {tok:?}"),
            })?;
            literals.push(v);
        }
    }
    let num_vars = num_vars.ok_or(DimacsError::Syntax {
        line: 0,
        message: "missing `p cnf` header".into(),
    })?;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for v in literals {
        if v == 0 {
            if current.is_empty() {
                continue;
            }
            if current.len() > 3 {
                return Err(DimacsError::NotThreeCnf {
                    index: clauses.len(),
                    len: current.len(),
                });
            }
            while current.len() < 3 {
                let last = *current.last().expect("nonempty");
                current.push(last);
            }
            clauses.push([current[0], current[1], current[2]]);
            current.clear();
        } else {
            let var = v.unsigned_abs() as usize - 1;
            current.push(Lit {
                var,
                negated: v < 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(DimacsError::Syntax {
            line: 0,
            message: "trailing clause without terminating 0".into(),
        });
    }
    Cnf3::new(num_vars, clauses)
}

/// Canonical bead-type layout of a reduction instance. Literal types come
/// first so decoding needs only the formula, not the delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionLayout {
    pub num_vars: usize,
    pub delay: usize,
}

impl ReductionLayout {
    pub fn new(num_vars: usize, delay: usize) -> Self {
        ReductionLayout { num_vars, delay }
    }

    pub fn literal(&self, lit: Lit) -> BeadType {
        BeadType((1 + 2 * lit.var + usize::from(lit.negated)) as u16)
    }

    /// Shared wall type of the clause gadgets.
    pub fn wall(&self) -> BeadType {
        BeadType((2 * self.num_vars + 1) as u16)
    }

    /// Shared pull type of the variable gadgets.
    pub fn pull(&self) -> BeadType {
        BeadType((2 * self.num_vars + 2) as u16)
    }

    /// Shared head type: the bead every seed ends with, right before the
    /// first produced bead.
    pub fn head(&self) -> BeadType {
        BeadType((2 * self.num_vars + 3) as u16)
    }

    /// Shared anchor type pinning the target tail for delays above one.
    pub fn anchor(&self) -> BeadType {
        BeadType((2 * self.num_vars + 4) as u16)
    }

    /// Primary sequence length: the two decisive beads plus the delay tail.
    pub fn primary_len(&self) -> usize {
        self.delay + 2
    }

    pub fn primary_bead(&self, index: usize) -> BeadType {
        BeadType((2 * self.num_vars + 4 + index) as u16)
    }

    pub fn primary(&self) -> Vec<BeadType> {
        (1..=self.primary_len()).map(|i| self.primary_bead(i)).collect()
    }

    pub fn universe(&self) -> Vec<BeadType> {
        (1..=(2 * self.num_vars + 4 + self.primary_len()) as u16)
            .map(BeadType)
            .collect()
    }
}

fn pt(x: i32, y: i32) -> Point {
    Point::new(x, y)
}

/// Clause gadget: the first produced bead's target sits in a pocket whose
/// non-backbone neighbors are exactly the three literal beads, one ring
/// slot is walled, and the corridor cell doubles as the energy decoy. The
/// second target bead is forced down the corridor. At delay 2 the seed
/// gains an anchor two points from the first target, and the target line
/// runs toward it.
fn clause_scenario(layout: &ReductionLayout, literals: [BeadType; 3], delay: usize) -> Scenario {
    let w = layout.wall();
    let h = layout.head();
    let a = layout.anchor();
    let mut points = vec![pt(0, 1), pt(-1, 0), pt(-1, -1), pt(0, -1), pt(1, -1), pt(1, 0)];
    let mut labels = vec![w, literals[0], literals[1], literals[2], w, h];
    if delay >= 2 {
        // anchor plus wall connectors keeping the seed one path; the route
        // leaves (1,2) free as a wall-and-anchor decoy for the second bead
        points.splice(0..0, [pt(2, 2), pt(2, 3), pt(1, 3), pt(0, 2)]);
        labels.splice(0..0, [a, w, w, w]);
    }
    let seed = Conformation::new(points, labels).expect("clause gadget seed is a valid path");
    Scenario {
        seed,
        target: vec![pt(0, 0), pt(1, 1)],
    }
}

/// Variable gadget: four pull beads ring the first target; a trap cell next
/// to the head sees two pull beads and one bead of each polarity, so it
/// ties the target exactly when both polarities attract the first bead.
/// The second target bead is forced down the corridor. At delay 2 the seed
/// gains the line anchor below the corridor plus a counterweight anchor
/// behind the trap, keeping the trap tie exact.
fn variable_scenario(layout: &ReductionLayout, var: usize, delay: usize) -> Scenario {
    let r = layout.pull();
    let h = layout.head();
    let a = layout.anchor();
    let pos = layout.literal(Lit::pos(var));
    let neg = layout.literal(Lit::neg(var));
    let mut points = vec![
        pt(-1, -1),
        pt(-1, 0),
        pt(0, 1),
        pt(1, 2),
        pt(2, 3),
        pt(3, 3),
        pt(4, 3),
        pt(4, 2),
        pt(3, 1),
        pt(3, 2),
        pt(2, 2),
        pt(1, 1),
        pt(1, 0),
    ];
    let mut labels = vec![r, r, r, r, r, r, r, r, r, pos, neg, r, h];
    if delay >= 2 {
        points.splice(
            0..0,
            [pt(3, 0), pt(2, -1), pt(1, -2), pt(0, -2), pt(-1, -2)],
        );
        labels.splice(0..0, [a, r, r, a, r]);
    }
    let seed = Conformation::new(points, labels).expect("variable gadget seed is a valid path");
    Scenario {
        seed,
        target: vec![pt(0, 0), pt(0, -1)],
    }
}

/// Reduce a 3-CNF formula to a rule design instance: one scenario per
/// clause, then one per variable; primary sequence of delay + 2 fresh
/// beads, targets covering its first two.
pub fn reduce_3sat(formula: &Cnf3, delay: usize) -> RuleDesignInstance {
    assert!(
        (1..=2).contains(&delay),
        "the reduction gadgets are validated for delays 1 and 2"
    );
    let layout = ReductionLayout::new(formula.num_vars, delay);
    let mut scenarios = Vec::new();
    for clause in &formula.clauses {
        let literals = [
            layout.literal(clause[0]),
            layout.literal(clause[1]),
            layout.literal(clause[2]),
        ];
        scenarios.push(clause_scenario(&layout, literals, delay));
    }
    for var in 0..formula.num_vars {
        scenarios.push(variable_scenario(&layout, var, delay));
    }
    RuleDesignInstance::new(
        layout.universe(),
        layout.primary(),
        delay,
        DynamicsKind::Oblivious,
        scenarios,
    )
    .expect("reduction always builds a valid instance")
}

/// Decode an assignment from a rule produced by a solver on
/// `reduce_3sat(f, delay)`: a variable is true exactly when its positive
/// literal attracts the first produced bead. An empty rule decodes to the
/// all-false assignment.
pub fn decode_assignment(rule: &AttractionRule, formula: &Cnf3) -> Vec<bool> {
    // the layout's literal and first-primary ids do not depend on the delay
    let layout = ReductionLayout::new(formula.num_vars, 1);
    let bead1 = layout.primary_bead(1);
    (0..formula.num_vars)
        .map(|v| rule.attracts(bead1, layout.literal(Lit::pos(v))))
        .collect()
}

/// A gadget family to validate: the clause and variable scenarios for one
/// delay, with the roles needed to state their soundness predicates.
#[derive(Debug, Clone)]
pub struct GadgetGeometry {
    pub delay: usize,
    pub layout: ReductionLayout,
    /// Clause scenario over three distinct literal types.
    pub clause: Scenario,
    pub clause_literals: [BeadType; 3],
    /// Variable scenario for variable 0.
    pub variable: Scenario,
}

/// The gadget geometry the reduction ships, instantiated for a two-variable
/// layout (enough types for three distinct literals).
pub fn shipped_geometry(delay: usize) -> GadgetGeometry {
    let layout = ReductionLayout::new(2, delay);
    let literals = [
        layout.literal(Lit::pos(0)),
        layout.literal(Lit::neg(0)),
        layout.literal(Lit::pos(1)),
    ];
    GadgetGeometry {
        delay,
        layout,
        clause: clause_scenario(&layout, literals, delay),
        clause_literals: literals,
        variable: variable_scenario(&layout, 0, delay),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{gadget} gadget violates its soundness predicate: folds={folds}, predicate={predicate}, rule={rule:?}")]
pub struct SoundnessViolation {
    pub gadget: &'static str,
    pub folds: bool,
    pub predicate: bool,
    pub rule: Vec<(u16, u16)>,
}

/// Check the gadget contracts by rule enumeration:
///
/// - clause: deterministic-to-target iff at least one clause literal
///   attracts the first produced bead;
/// - variable: deterministic-to-target iff the pull type attracts the first
///   produced bead and not both polarities do.
///
/// At delay 1 the equivalence is checked against every rule over the pairs
/// that can influence the fold. At delay 2 the joint window placement lets
/// adversarial attractions on the second bead spoil folds the predicate
/// allows, so the all-rules pass checks the sound direction (a fold implies
/// the predicate) and the equivalence is checked on the canonical witness
/// rules (first-bead literal and pull attractions plus the tail anchor),
/// which is what the reduction round trip uses.
pub fn gadget_soundness(geometry: &GadgetGeometry, delay: usize) -> bool {
    gadget_soundness_report(geometry, delay).is_ok()
}

/// As [`gadget_soundness`], returning the first violating rule found.
pub fn gadget_soundness_report(
    geometry: &GadgetGeometry,
    delay: usize,
) -> Result<(), SoundnessViolation> {
    assert_eq!(geometry.delay, delay);
    let layout = &geometry.layout;
    let bead1 = layout.primary_bead(1);
    let clause_lits = geometry.clause_literals;
    let clause_base: Vec<(BeadType, BeadType)> =
        clause_lits.iter().map(|&l| (bead1, l)).collect();
    check_gadget(
        "clause",
        layout,
        &geometry.clause,
        delay,
        &clause_base,
        |rule: &AttractionRule| clause_lits.iter().any(|&l| rule.attracts(bead1, l)),
    )?;
    let pos = layout.literal(Lit::pos(0));
    let neg = layout.literal(Lit::neg(0));
    let pull = layout.pull();
    let var_base = vec![(bead1, pos), (bead1, neg), (bead1, pull)];
    check_gadget(
        "variable",
        layout,
        &geometry.variable,
        delay,
        &var_base,
        |rule: &AttractionRule| {
            rule.attracts(bead1, pull) && !(rule.attracts(bead1, pos) && rule.attracts(bead1, neg))
        },
    )
}

fn check_gadget(
    name: &'static str,
    layout: &ReductionLayout,
    scenario: &Scenario,
    delay: usize,
    canonical_base: &[(BeadType, BeadType)],
    predicate: impl Fn(&AttractionRule) -> bool + Sync,
) -> Result<(), SoundnessViolation> {
    // types that occur in this scenario, plus the produced beads
    let mut occurring: BTreeSet<BeadType> = scenario.seed.labels().iter().copied().collect();
    let primary = layout.primary();
    occurring.extend(primary.iter().copied());
    let covered = primary.len() - delay;
    let foldable: BTreeSet<BeadType> = primary[..covered].iter().copied().collect();
    let mut pairs: BTreeSet<(BeadType, BeadType)> = BTreeSet::new();
    for &a in &foldable {
        for &b in &occurring {
            pairs.insert(if a <= b { (a, b) } else { (b, a) });
        }
    }
    let pairs: Vec<(BeadType, BeadType)> = pairs.into_iter().collect();
    assert!(
        pairs.len() <= 26,
        "gadget check would enumerate 2^{} rules",
        pairs.len()
    );
    let instance = RuleDesignInstance::new(
        layout.universe(),
        primary,
        delay,
        DynamicsKind::Oblivious,
        vec![scenario.clone()],
    )
    .expect("gadget scenarios are valid instances");
    let exact = delay == 1;
    let total = 1u64 << pairs.len();
    let test_mask = |mask: u64| -> Option<SoundnessViolation> {
        let mut rule = AttractionRule::new();
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            if (mask >> bit) & 1 == 1 {
                rule.insert(a, b);
            }
        }
        let folds = verify_rule(&instance, &rule);
        let predicate = predicate(&rule);
        let violated = if exact {
            folds != predicate
        } else {
            folds && !predicate
        };
        if violated {
            Some(SoundnessViolation {
                gadget: name,
                folds,
                predicate,
                rule: rule.iter().map(|(a, b)| (a.0, b.0)).collect(),
            })
        } else {
            None
        }
    };
    let scan = |masks: std::ops::Range<u64>| -> Result<(), SoundnessViolation> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            match masks.into_par_iter().find_map_first(test_mask) {
                Some(v) => Err(v),
                None => Ok(()),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            match masks.into_iter().find_map(test_mask) {
                Some(v) => Err(v),
                None => Ok(()),
            }
        }
    };
    scan(0..total)?;
    if !exact {
        // equivalence over the canonical witness family: subsets of the
        // first-bead attractions, always with the second bead anchored
        let tail_pin = (layout.primary_bead(2), layout.anchor());
        for bits in 0u64..(1 << canonical_base.len()) {
            let mut rule = AttractionRule::from_pairs([tail_pin]);
            for (i, &(a, b)) in canonical_base.iter().enumerate() {
                if (bits >> i) & 1 == 1 {
                    rule.insert(a, b);
                }
            }
            let folds = verify_rule(&instance, &rule);
            let pred = predicate(&rule);
            if folds != pred {
                return Err(SoundnessViolation {
                    gadget: name,
                    folds,
                    predicate: pred,
                    rule: rule.iter().map(|(a, b)| (a.0, b.0)).collect(),
                });
            }
        }
    }
    Ok(())
}
