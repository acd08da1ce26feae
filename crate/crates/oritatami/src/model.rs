//! The static folding model: bead types, attraction rules, conformations,
//! energy, systems, and elongation enumeration.

use crate::lattice::{adjacent, neighbors, Point};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// An abstract monomer type, identified by a small integer. Display names,
/// when any, live in the file-format layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BeadType(pub u16);

/// A symmetric attraction relation over bead types. Pairs are stored
/// unordered; self-pairs `(a,a)` are permitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AttractionRule {
    pairs: BTreeSet<(BeadType, BeadType)>,
}

impl AttractionRule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (BeadType, BeadType)>>(pairs: I) -> Self {
        let mut rule = Self::new();
        for (a, b) in pairs {
            rule.insert(a, b);
        }
        rule
    }

    pub fn insert(&mut self, a: BeadType, b: BeadType) {
        self.pairs.insert(normalize(a, b));
    }

    pub fn remove(&mut self, a: BeadType, b: BeadType) {
        self.pairs.remove(&normalize(a, b));
    }

    pub fn attracts(&self, a: BeadType, b: BeadType) -> bool {
        self.pairs.contains(&normalize(a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &AttractionRule) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Pairs in normalized `(min, max)` order.
    pub fn iter(&self) -> impl Iterator<Item = (BeadType, BeadType)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn union(&self, other: &AttractionRule) -> AttractionRule {
        AttractionRule {
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }
}

fn normalize(a: BeadType, b: BeadType) -> (BeadType, BeadType) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConformationError {
    #[error("conformation step {index} -> {} is not lattice-adjacent", index + 1)]
    NonAdjacentStep { index: usize },
    #[error("conformation revisits a lattice point at index {index}")]
    DuplicatePoint { index: usize },
    #[error("conformation has {points} points but {labels} labels")]
    LabelMismatch { points: usize, labels: usize },
}

/// A self-avoiding labeled path on the triangular lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conformation {
    points: Vec<Point>,
    labels: Vec<BeadType>,
}

impl Conformation {
    pub fn new(points: Vec<Point>, labels: Vec<BeadType>) -> Result<Self, ConformationError> {
        if points.len() != labels.len() {
            return Err(ConformationError::LabelMismatch {
                points: points.len(),
                labels: labels.len(),
            });
        }
        for (i, pair) in points.windows(2).enumerate() {
            if !adjacent(pair[0], pair[1]) {
                return Err(ConformationError::NonAdjacentStep { index: i });
            }
        }
        let mut seen = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if seen.insert(*p, i).is_some() {
                return Err(ConformationError::DuplicatePoint { index: i });
            }
        }
        Ok(Conformation { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &[BeadType] {
        &self.labels
    }

    pub fn head(&self) -> Option<Point> {
        self.points.last().copied()
    }

    /// Position-to-index map of the occupied lattice points.
    pub fn occupancy(&self) -> HashMap<Point, usize> {
        self.points.iter().enumerate().map(|(i, p)| (*p, i)).collect()
    }

    /// The set of bonds under `rule`: unordered index pairs `(i, j)` with
    /// `j > i + 1`, lattice-adjacent positions, and attracting labels.
    /// Returned sorted.
    pub fn bonds(&self, rule: &AttractionRule) -> Vec<(usize, usize)> {
        let occ = self.occupancy();
        let mut out = Vec::new();
        for (j, &pj) in self.points.iter().enumerate() {
            for q in neighbors(pj) {
                if let Some(&i) = occ.get(&q) {
                    if j > i + 1 && rule.attracts(self.labels[i], self.labels[j]) {
                        out.push((i, j));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Energy: the negation of the bond count. Always `<= 0`.
    pub fn energy(&self, rule: &AttractionRule) -> i64 {
        -(self.bonds(rule).len() as i64)
    }

    /// All self-avoiding extensions of `self` by the first `k` beads of
    /// `next`. `k = 0` yields `self` alone; a trapped head yields none.
    pub fn elongations(&self, next: &[BeadType], k: usize) -> Vec<Conformation> {
        assert!(k <= next.len(), "cannot elongate by {k} with {} labels", next.len());
        if k == 0 {
            return vec![self.clone()];
        }
        let mut occupied: BTreeSet<Point> = self.points.iter().copied().collect();
        let mut out = Vec::new();
        let mut tail: Vec<Point> = Vec::with_capacity(k);
        // The seed conformation may be empty; the first bead is then free to
        // start anywhere, which has no finite enumeration. Require a start.
        let Some(start) = self.head() else {
            assert!(
                self.points.is_empty(),
                "conformation with points must have a head"
            );
            panic!("cannot enumerate elongations of an empty conformation");
        };
        self.extend_rec(start, next, k, &mut occupied, &mut tail, &mut out);
        out
    }

    fn extend_rec(
        &self,
        head: Point,
        next: &[BeadType],
        k: usize,
        occupied: &mut BTreeSet<Point>,
        tail: &mut Vec<Point>,
        out: &mut Vec<Conformation>,
    ) {
        if tail.len() == k {
            let mut points = self.points.clone();
            points.extend_from_slice(tail);
            let mut labels = self.labels.clone();
            labels.extend_from_slice(&next[..k]);
            out.push(Conformation { points, labels });
            return;
        }
        for q in neighbors(head) {
            if occupied.insert(q) {
                tail.push(q);
                self.extend_rec(q, next, k, occupied, tail, out);
                tail.pop();
                occupied.remove(&q);
            }
        }
    }

    /// Prefix of length `max(len - k, floor)`; `floor` is the seed length,
    /// so seed beads are never removed.
    pub fn truncate(&self, k: usize, floor: usize) -> Conformation {
        let keep = self.len().saturating_sub(k).max(floor).min(self.len());
        Conformation {
            points: self.points[..keep].to_vec(),
            labels: self.labels[..keep].to_vec(),
        }
    }

    /// Apply a lattice symmetry pointwise. Labels are unchanged.
    pub fn transform(&self, s: &crate::lattice::LatticeSymmetry) -> Conformation {
        Conformation {
            points: self.points.iter().map(|&p| s.apply(p)).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Which greedy dynamics drives a fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynamicsKind {
    Oblivious,
    Hasty,
}

impl std::fmt::Display for DynamicsKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DynamicsKind::Oblivious => write!(f, "oblivious"),
            DynamicsKind::Hasty => write!(f, "hasty"),
        }
    }
}

/// An Oritatami system: primary sequence, attraction rule, and delay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OritatamiSystem {
    pub primary: Vec<BeadType>,
    pub rule: AttractionRule,
    pub delay: usize,
}

impl OritatamiSystem {
    pub fn new(primary: Vec<BeadType>, rule: AttractionRule, delay: usize) -> Self {
        assert!(delay >= 1, "delay must be at least 1");
        OritatamiSystem { primary, rule, delay }
    }
}

/// A seed conformation: the fixed, already-folded prefix a fold grows from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed(pub Conformation);

impl Seed {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
