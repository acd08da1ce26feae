//! Demonstration motifs: the glider, a rigid six-bead-period scaffold that
//! advances two columns per period and holds itself with one bond every
//! three beads on average.
//!
//! The motif is produced end to end: [`glider_instance`] states the design
//! problem over one seeded period, the rule-design solver finds an
//! attraction rule, and [`glider_system`] builds the periodic system that
//! folds the motif indefinitely.

use crate::lattice::Point;
use crate::model::{AttractionRule, BeadType, Conformation, DynamicsKind, OritatamiSystem, Seed};
use crate::ruledesign::{RuleDesignInstance, Scenario};

/// Stroke pattern of one glider period: up, up, forward, down, down,
/// forward. Each tooth leans onto the previous one, so every bead has a
/// non-consecutive contact available to pin it.
const GLIDER_STROKES: [(i32, i32); 6] = [(1, 1), (0, 1), (1, 0), (0, -1), (-1, -1), (1, 0)];

/// Number of bead types in the glider's period.
pub const GLIDER_PERIOD: usize = 6;

/// The first `len` positions of the glider path from the origin.
pub fn glider_path(len: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(len);
    let mut p = Point::new(0, 0);
    for k in 0..len {
        if k > 0 {
            let (dx, dy) = GLIDER_STROKES[(k - 1) % GLIDER_PERIOD];
            p = Point::new(p.x + dx, p.y + dy);
        }
        out.push(p);
    }
    out
}

/// Bead type of path index `k`: the six types cycle with the period.
pub fn glider_type(k: usize) -> BeadType {
    BeadType((k % GLIDER_PERIOD) as u16)
}

/// The design instance for the glider: one pre-folded period as the seed,
/// `periods` further periods of the cycling sequence as the primary, with
/// the glider path as the target.
pub fn glider_instance(periods: usize, delay: usize) -> RuleDesignInstance {
    assert!(periods >= 1);
    let n = GLIDER_PERIOD * periods;
    let path = glider_path(GLIDER_PERIOD + n);
    let seed = Conformation::new(
        path[..GLIDER_PERIOD].to_vec(),
        (0..GLIDER_PERIOD).map(glider_type).collect(),
    )
    .expect("the glider path is self-avoiding");
    let covered = n - delay;
    let primary: Vec<BeadType> = (0..n).map(|i| glider_type(GLIDER_PERIOD + i)).collect();
    RuleDesignInstance::new(
        (0..GLIDER_PERIOD as u16).map(BeadType).collect(),
        primary,
        delay,
        DynamicsKind::Oblivious,
        vec![Scenario {
            seed,
            target: path[GLIDER_PERIOD..GLIDER_PERIOD + covered].to_vec(),
        }],
    )
    .expect("the glider instance is well formed")
}

/// A periodic glider system folding `beads` primary beads under `rule`.
pub fn glider_system(rule: AttractionRule, delay: usize, beads: usize) -> (OritatamiSystem, Seed) {
    let path = glider_path(GLIDER_PERIOD);
    let seed = Seed(
        Conformation::new(path, (0..GLIDER_PERIOD).map(glider_type).collect())
            .expect("the glider path is self-avoiding"),
    );
    let primary: Vec<BeadType> = (0..beads).map(|i| glider_type(GLIDER_PERIOD + i)).collect();
    (OritatamiSystem::new(primary, rule, delay), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::is_self_avoiding;

    #[test]
    fn path_is_self_avoiding_and_periodic() {
        let path = glider_path(120);
        assert_eq!(is_self_avoiding(&path), Ok(true));
        // one period advances by (2, 0)
        for k in 0..120 - GLIDER_PERIOD {
            let a = path[k];
            let b = path[k + GLIDER_PERIOD];
            assert_eq!((b.x - a.x, b.y - a.y), (2, 0));
        }
    }

    #[test]
    fn instance_shape() {
        let instance = glider_instance(2, 3);
        assert_eq!(instance.primary.len(), 12);
        assert_eq!(instance.scenarios[0].target.len(), 9);
        assert_eq!(instance.beads.len(), 6);
    }
}
