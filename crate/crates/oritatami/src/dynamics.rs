//! The oblivious and hasty greedy folding engines, determinism checking,
//! halt detection, and trace production.
//!
//! A step maps a frontier (the set of partial conformations at one time) to
//! the next frontier. One step transcribes one new bead; the oblivious step
//! re-places the whole delay window, the hasty step extends each survivor by
//! a single bead and prunes non-minimal extensions within each prefix group.
//! With `feature = "parallel"` (the default), large frontiers are expanded
//! with rayon; the merged result is canonicalized so the outcome is
//! independent of evaluation order.

use crate::lattice::{neighbors, Point};
use crate::model::{BeadType, Conformation, DynamicsKind, OritatamiSystem, Seed};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// The set of partial conformations at one time; members all extend the same
/// seed and have equal length. `time` counts placed primary beads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    members: Vec<Conformation>,
    pub time: usize,
}

impl Frontier {
    /// Build a frontier in canonical order (sorted, deduplicated).
    pub fn new(mut members: Vec<Conformation>, time: usize) -> Self {
        members.sort_unstable();
        members.dedup();
        Frontier { members, time }
    }

    pub fn members(&self) -> &[Conformation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The distinct positions of the bead at absolute index `idx` across all
    /// members, sorted.
    pub fn positions_of(&self, idx: usize) -> Vec<Point> {
        let mut pts: Vec<Point> = self
            .members
            .iter()
            .filter_map(|c| c.points().get(idx).copied())
            .collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("frontier grew to {size} members at time {time}, over the cap of {cap}")]
    FrontierLimit { time: usize, size: usize, cap: usize },
}

/// Run status, in reporting priority order: an ambiguous bead outranks
/// trapping and the step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Trapped(usize),
    NondeterministicAt(usize),
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: RunStatus,
    /// Frontier after each step, starting with the seed frontier at time 0.
    pub trace: Vec<Frontier>,
    /// Final position per 1-indexed primary bead, for beads whose position
    /// is already unique at their finalization check.
    pub final_positions: BTreeMap<usize, Point>,
}

impl RunOutcome {
    pub fn final_frontier(&self) -> &Frontier {
        self.trace.last().expect("trace always holds the seed frontier")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub max_steps: usize,
    pub max_frontier: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_steps: usize::MAX,
            max_frontier: 1_000_000,
        }
    }
}

/// Tail candidate produced while expanding one frontier member: the new bead
/// positions plus the energy contribution of every bond that involves them.
struct TailCandidate {
    tail: Vec<Point>,
    delta: i64,
}

/// Enumerates all self-avoiding placements of `count` beads from a prefix
/// head, scoring each placement by the bonds the new beads form.
/// `base_index` is the absolute index of the first new bead.
struct TailEnum<'a> {
    labels_all: &'a [BeadType],
    base_index: usize,
    count: usize,
    rule: &'a crate::model::AttractionRule,
}

impl<'a> TailEnum<'a> {
    fn run(&self, prefix: &Conformation) -> Vec<TailCandidate> {
        let mut occ = prefix.occupancy();
        let mut out = Vec::new();
        let head = prefix.head().expect("cannot extend an empty conformation");
        let mut tail = Vec::with_capacity(self.count);
        self.rec(head, &mut occ, &mut tail, 0, &mut out);
        out
    }

    fn rec(
        &self,
        head: Point,
        occ: &mut HashMap<Point, usize>,
        tail: &mut Vec<Point>,
        delta: i64,
        out: &mut Vec<TailCandidate>,
    ) {
        if tail.len() == self.count {
            out.push(TailCandidate { tail: tail.clone(), delta });
            return;
        }
        let j = self.base_index + tail.len();
        let label_j = self.labels_all[j];
        for q in neighbors(head) {
            if occ.contains_key(&q) {
                continue;
            }
            // bonds from the new bead j to every occupied neighbor i < j-1
            let mut gained = 0i64;
            for r in neighbors(q) {
                if let Some(&i) = occ.get(&r) {
                    if i + 1 < j && self.rule.attracts(self.labels_all[i], label_j) {
                        gained -= 1;
                    }
                }
            }
            occ.insert(q, j);
            tail.push(q);
            self.rec(q, occ, tail, delta + gained, out);
            tail.pop();
            occ.remove(&q);
        }
    }
}

/// All energy-minimal self-avoiding extensions of `prefix` by `count`
/// beads, scored by the bonds the new beads form (the shared prefix energy
/// cancels in the comparison). Sorted canonical.
pub(crate) fn argmin_extensions(
    prefix: &Conformation,
    labels_all: &[BeadType],
    count: usize,
    rule: &crate::model::AttractionRule,
) -> Vec<Conformation> {
    let en = TailEnum {
        labels_all,
        base_index: prefix.len(),
        count,
        rule,
    };
    let cands = en.run(prefix);
    let Some(best) = cands.iter().map(|c| c.delta).min() else {
        return Vec::new();
    };
    let mut out: Vec<Conformation> = cands
        .into_iter()
        .filter(|c| c.delta == best)
        .map(|c| append_tail(prefix, &c.tail, labels_all))
        .collect();
    out.sort_unstable();
    out
}

/// Argmin expansion of a single frontier member under the oblivious step:
/// truncate by `delay - 1` (clamped at the seed), elongate by
/// `min(delay, beads remaining)`, keep the energy-minimal placements.
fn expand_oblivious_member(
    member: &Conformation,
    sys: &OritatamiSystem,
    seed_len: usize,
    labels_all: &[BeadType],
) -> Vec<Conformation> {
    let total = seed_len + sys.primary.len();
    let prefix = member.truncate(sys.delay - 1, seed_len);
    let m = prefix.len();
    let dp = sys.delay.min(total - m);
    debug_assert!(dp >= 1, "step requires an untranscribed bead");
    argmin_extensions(&prefix, labels_all, dp, &sys.rule)
}

fn append_tail(prefix: &Conformation, tail: &[Point], labels_all: &[BeadType]) -> Conformation {
    let mut points = prefix.points().to_vec();
    points.extend_from_slice(tail);
    let labels = labels_all[..points.len()].to_vec();
    Conformation::new(points, labels).expect("enumerated tails are valid extensions")
}

/// One-bead candidates of a member plus the member's own tail bonds past the
/// hasty group boundary, so candidates compare by full energy within a group.
fn hasty_candidates(
    member: &Conformation,
    group_len: usize,
    sys: &OritatamiSystem,
    labels_all: &[BeadType],
) -> Vec<(Conformation, i64)> {
    // bonds internal to the member that involve indices >= group_len
    let occ = member.occupancy();
    let mut tail_delta = 0i64;
    for j in group_len..member.len() {
        let pj = member.points()[j];
        for r in neighbors(pj) {
            if let Some(&i) = occ.get(&r) {
                if i + 1 < j && sys.rule.attracts(labels_all[i], labels_all[j]) {
                    tail_delta -= 1;
                }
            }
        }
    }
    let en = TailEnum {
        labels_all,
        base_index: member.len(),
        count: 1,
        rule: &sys.rule,
    };
    en.run(member)
        .into_iter()
        .map(|c| (append_tail(member, &c.tail, labels_all), tail_delta + c.delta))
        .collect()
}

fn full_labels(sys: &OritatamiSystem, seed: &[BeadType]) -> Vec<BeadType> {
    let mut labels = seed.to_vec();
    labels.extend_from_slice(&sys.primary);
    labels
}

fn labels_of_frontier(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Vec<BeadType> {
    let member = f.members.first().expect("step requires a non-empty frontier");
    debug_assert!(member.len() >= seed_len);
    full_labels(sys, &member.labels()[..seed_len])
}

fn next_time(len_after: usize, seed_len: usize) -> usize {
    len_after - seed_len
}

/// Sequential implementations of both steps. Always available; the public
/// step functions fall back to these when `parallel` is disabled or the
/// frontier is small.
pub mod serial {
    use super::*;

    pub fn step_oblivious(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Frontier {
        let labels_all = labels_of_frontier(f, sys, seed_len);
        let mut out = Vec::new();
        for member in f.members() {
            out.extend(expand_oblivious_member(member, sys, seed_len, &labels_all));
        }
        let time = out.first().map_or(f.time + 1, |c| next_time(c.len(), seed_len));
        Frontier::new(out, time)
    }

    pub fn step_hasty(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Frontier {
        let labels_all = labels_of_frontier(f, sys, seed_len);
        let len = f.members()[0].len();
        let group_len = (len + 1).saturating_sub(sys.delay).max(seed_len);
        let mut cands = Vec::new();
        for member in f.members() {
            cands.extend(hasty_candidates(member, group_len, sys, &labels_all));
        }
        group_minima(cands, group_len, f.time + 1)
    }
}

/// Group hasty candidates by their clamped prefix and keep per-group minima.
fn group_minima(cands: Vec<(Conformation, i64)>, group_len: usize, time: usize) -> Frontier {
    let mut groups: BTreeMap<Vec<Point>, (i64, Vec<Conformation>)> = BTreeMap::new();
    for (c, e) in cands {
        let key = c.points()[..group_len].to_vec();
        let entry = groups.entry(key).or_insert((i64::MAX, Vec::new()));
        if e < entry.0 {
            entry.0 = e;
            entry.1.clear();
        }
        if e == entry.0 {
            entry.1.push(c);
        }
    }
    let members: Vec<Conformation> = groups.into_values().flat_map(|(_, v)| v).collect();
    Frontier::new(members, time)
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use super::*;
    use rayon::prelude::*;

    pub fn step_oblivious(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Frontier {
        let labels_all = labels_of_frontier(f, sys, seed_len);
        let out: Vec<Conformation> = f
            .members()
            .par_iter()
            .flat_map_iter(|m| expand_oblivious_member(m, sys, seed_len, &labels_all))
            .collect();
        let time = out.first().map_or(f.time + 1, |c| next_time(c.len(), seed_len));
        Frontier::new(out, time)
    }

    pub fn step_hasty(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Frontier {
        let labels_all = labels_of_frontier(f, sys, seed_len);
        let len = f.members()[0].len();
        let group_len = (len + 1).saturating_sub(sys.delay).max(seed_len);
        let cands: Vec<(Conformation, i64)> = f
            .members()
            .par_iter()
            .flat_map_iter(|m| hasty_candidates(m, group_len, sys, &labels_all))
            .collect();
        group_minima(cands, group_len, f.time + 1)
    }
}

/// Frontier size beyond which the parallel expansion path is used.
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: usize = 24;

/// One oblivious step. Requires a non-empty frontier with untranscribed
/// beads remaining; may return an empty frontier (trapped).
pub fn step_oblivious(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Frontier {
    #[cfg(feature = "parallel")]
    if f.len() >= PARALLEL_THRESHOLD {
        return parallel::step_oblivious(f, sys, seed_len);
    }
    serial::step_oblivious(f, sys, seed_len)
}

/// One hasty step; same contract as [`step_oblivious`].
pub fn step_hasty(f: &Frontier, sys: &OritatamiSystem, seed_len: usize) -> Frontier {
    #[cfg(feature = "parallel")]
    if f.len() >= PARALLEL_THRESHOLD {
        return parallel::step_hasty(f, sys, seed_len);
    }
    serial::step_hasty(f, sys, seed_len)
}

/// Fold a system from a seed until the primary sequence is fully placed,
/// recording frontiers and per-bead determinism.
///
/// After step `i` the position of bead `i` is checked for uniqueness across
/// the frontier (the formal finalization time). Beads still inside the delay
/// window when transcription ends are checked on the final frontier.
pub fn run(
    sys: &OritatamiSystem,
    seed: &Seed,
    dynamics: DynamicsKind,
    config: &RunConfig,
) -> Result<RunOutcome, DynamicsError> {
    assert!(!seed.is_empty(), "a fold needs a non-empty seed conformation");
    let seed_len = seed.len();
    let total = seed_len + sys.primary.len();
    let mut frontier = Frontier::new(vec![seed.0.clone()], 0);
    let mut trace = vec![frontier.clone()];
    let mut final_positions = BTreeMap::new();
    let mut first_nondet: Option<usize> = None;
    let mut trapped: Option<usize> = None;
    let mut step_limited = false;
    let mut step = 0usize;
    // next primary bead awaiting its finalization check (1-indexed)
    let mut next_check = 1usize;

    loop {
        let cur_len = frontier.members()[0].len();
        if cur_len >= total {
            break;
        }
        if step >= config.max_steps {
            step_limited = true;
            break;
        }
        step += 1;
        let next = match dynamics {
            DynamicsKind::Oblivious => step_oblivious(&frontier, sys, seed_len),
            DynamicsKind::Hasty => step_hasty(&frontier, sys, seed_len),
        };
        if next.len() > config.max_frontier {
            return Err(DynamicsError::FrontierLimit {
                time: next.time,
                size: next.len(),
                cap: config.max_frontier,
            });
        }
        if next.is_empty() {
            trapped = Some(frontier.time + 1);
            trace.push(Frontier::new(Vec::new(), frontier.time + 1));
            break;
        }
        // Bead i finalizes at time i-1+delay. The oblivious step reaches
        // time delay+step-1, the hasty step reaches time step, so the bead
        // due for its check here is `step` resp. `step-delay+1`.
        let due = match dynamics {
            DynamicsKind::Oblivious => Some(step),
            DynamicsKind::Hasty => (step + 1).checked_sub(sys.delay),
        };
        if let Some(bead) = due.filter(|&b| b >= 1 && b == next_check) {
            next_check += 1;
            let positions = next.positions_of(seed_len + bead - 1);
            match positions.as_slice() {
                [unique] => {
                    final_positions.insert(bead, *unique);
                }
                _ => {
                    first_nondet.get_or_insert(bead);
                }
            }
        }
        trace.push(next.clone());
        frontier = next;
    }

    // Beads still inside the delay window when transcription ends cannot
    // move again; their uniqueness is read off the final frontier.
    if trapped.is_none() && !step_limited {
        for bead in next_check..=sys.primary.len() {
            let positions = frontier.positions_of(seed_len + bead - 1);
            match positions.as_slice() {
                [unique] => {
                    final_positions.insert(bead, *unique);
                }
                _ => {
                    first_nondet.get_or_insert(bead);
                }
            }
        }
    }

    let status = if let Some(i) = first_nondet {
        RunStatus::NondeterministicAt(i)
    } else if let Some(t) = trapped {
        RunStatus::Trapped(t)
    } else if step_limited {
        RunStatus::StepLimit
    } else {
        RunStatus::Completed
    };
    Ok(RunOutcome {
        status,
        trace,
        final_positions,
    })
}

/// First nondeterministic bead index within `horizon` steps, or `None` if
/// the fold is deterministic through the horizon.
pub fn check_determinism(
    sys: &OritatamiSystem,
    seed: &Seed,
    dynamics: DynamicsKind,
    horizon: usize,
) -> Result<Option<usize>, DynamicsError> {
    let config = RunConfig {
        max_steps: horizon,
        ..RunConfig::default()
    };
    let outcome = run(sys, seed, dynamics, &config)?;
    Ok(match outcome.status {
        RunStatus::NondeterministicAt(i) => Some(i),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AttractionRule;

    fn b(id: u16) -> BeadType {
        BeadType(id)
    }

    fn conf(pts: &[(i32, i32)], labels: &[u16]) -> Conformation {
        Conformation::new(
            pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            labels.iter().map(|&l| BeadType(l)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn delay_one_single_seed_six_minima() {
        let sys = OritatamiSystem::new(vec![b(1)], AttractionRule::new(), 1);
        let seed = Seed(conf(&[(0, 0)], &[0]));
        let f0 = Frontier::new(vec![seed.0.clone()], 0);
        let f1 = step_oblivious(&f0, &sys, 1);
        assert_eq!(f1.len(), 6);
        let outcome = run(&sys, &seed, DynamicsKind::Oblivious, &RunConfig::default()).unwrap();
        assert_eq!(outcome.status, RunStatus::NondeterministicAt(1));
    }

    #[test]
    fn delay_one_bond_selects_two_minima() {
        // seed (0,0)a (1,0)b, next bead c, rule {c,a}: candidates adjacent to
        // (0,0) are (1,1) and (0,-1).
        let rule = AttractionRule::from_pairs([(b(2), b(0))]);
        let sys = OritatamiSystem::new(vec![b(2)], rule, 1);
        let seed = Seed(conf(&[(0, 0), (1, 0)], &[0, 1]));
        let f0 = Frontier::new(vec![seed.0.clone()], 0);
        let f1 = step_oblivious(&f0, &sys, 2);
        let heads: Vec<Point> = f1.members().iter().map(|c| c.head().unwrap()).collect();
        assert_eq!(heads, vec![Point::new(0, -1), Point::new(1, 1)]);
        for m in f1.members() {
            assert_eq!(m.energy(&sys.rule), -1);
        }
    }

    #[test]
    fn empty_primary_completes_at_time_zero() {
        let sys = OritatamiSystem::new(vec![], AttractionRule::new(), 2);
        let seed = Seed(conf(&[(0, 0)], &[0]));
        let outcome = run(&sys, &seed, DynamicsKind::Oblivious, &RunConfig::default()).unwrap();
        assert_eq!(outcome.status, RunStatus::Completed);
        assert_eq!(outcome.trace.len(), 1);
    }

    #[test]
    fn trapped_run_reports_stop_time() {
        // Seed encloses the head; the single primary bead cannot place.
        let seed = Seed(conf(
            &[(-1, 0), (-1, -1), (0, -1), (1, 0), (1, 1), (0, 1), (0, 0)],
            &[0, 1, 2, 3, 4, 5, 6],
        ));
        let sys = OritatamiSystem::new(vec![b(7)], AttractionRule::new(), 1);
        let outcome = run(&sys, &seed, DynamicsKind::Oblivious, &RunConfig::default()).unwrap();
        assert_eq!(outcome.status, RunStatus::Trapped(1));
        assert!(outcome.final_frontier().is_empty());
    }

    #[test]
    fn hasty_outputs_extend_inputs() {
        let rule = AttractionRule::from_pairs([(b(2), b(0)), (b(3), b(1))]);
        let sys = OritatamiSystem::new(vec![b(2), b(3), b(4)], rule, 2);
        let seed = Seed(conf(&[(0, 0), (1, 0)], &[0, 1]));
        let mut f = Frontier::new(vec![seed.0.clone()], 0);
        for _ in 0..3 {
            let next = step_hasty(&f, &sys, 2);
            if next.is_empty() {
                break;
            }
            for c in next.members() {
                let parent = c.truncate(1, 2);
                assert!(
                    f.members().contains(&parent),
                    "hasty resurrected an abandoned prefix"
                );
            }
            f = next;
        }
    }

    #[test]
    fn step_limit_reported() {
        let sys = OritatamiSystem::new(vec![b(1), b(1), b(1)], AttractionRule::new(), 1);
        let seed = Seed(conf(&[(0, 0), (1, 0)], &[0, 0]));
        let config = RunConfig {
            max_steps: 1,
            ..RunConfig::default()
        };
        let outcome = run(&sys, &seed, DynamicsKind::Oblivious, &config).unwrap();
        // the single allowed step is nondeterministic here, which outranks
        // the step budget in the status
        assert_eq!(outcome.status, RunStatus::NondeterministicAt(1));
        assert_eq!(outcome.trace.len(), 2);
    }

    #[test]
    fn frontier_cap_errors() {
        let sys = OritatamiSystem::new(vec![b(1), b(1)], AttractionRule::new(), 1);
        let seed = Seed(conf(&[(0, 0)], &[0]));
        let config = RunConfig {
            max_frontier: 4,
            ..RunConfig::default()
        };
        let err = run(&sys, &seed, DynamicsKind::Oblivious, &config).unwrap_err();
        assert!(matches!(err, DynamicsError::FrontierLimit { size: 6, .. }));
    }

    /// Growing the rule can only lower the minima a step selects.
    #[test]
    fn step_minima_monotone_in_rule() {
        let seed = Seed(conf(&[(0, -1), (0, 0), (1, 0)], &[0, 1, 2]));
        let base_pairs = [(b(3), b(0)), (b(4), b(1)), (b(3), b(4))];
        for take in 0..=base_pairs.len() {
            let smaller = AttractionRule::from_pairs(base_pairs[..take].iter().copied());
            let mut larger = smaller.clone();
            larger.insert(b(4), b(0));
            larger.insert(b(3), b(1));
            for delay in 1..=3usize {
                let sys_s = OritatamiSystem::new(vec![b(3), b(4), b(3)], smaller.clone(), delay);
                let sys_l = OritatamiSystem::new(vec![b(3), b(4), b(3)], larger.clone(), delay);
                let f = Frontier::new(vec![seed.0.clone()], 0);
                let min_of = |f: &Frontier, rule: &AttractionRule| {
                    f.members().iter().map(|c| c.energy(rule)).min().unwrap()
                };
                let out_s = step_oblivious(&f, &sys_s, 3);
                let out_l = step_oblivious(&f, &sys_l, 3);
                assert!(min_of(&out_l, &larger) <= min_of(&out_s, &smaller));
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn serial_and_parallel_steps_agree() {
        let rule = AttractionRule::from_pairs([(b(2), b(0)), (b(4), b(1)), (b(3), b(3))]);
        let sys = OritatamiSystem::new(vec![b(2), b(3), b(4), b(2)], rule, 2);
        let seed = Seed(conf(&[(0, 0), (1, 0)], &[0, 1]));
        let mut f = Frontier::new(vec![seed.0.clone()], 0);
        for _ in 0..2 {
            assert_eq!(
                serial::step_oblivious(&f, &sys, 2),
                parallel::step_oblivious(&f, &sys, 2)
            );
            assert_eq!(
                serial::step_hasty(&f, &sys, 2),
                parallel::step_hasty(&f, &sys, 2)
            );
            f = serial::step_oblivious(&f, &sys, 2);
            if f.is_empty() {
                break;
            }
        }
    }
}
