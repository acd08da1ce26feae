//! Shared test support: an independent from-definition implementation of
//! the greedy dynamics (the oracle the engine is checked against) and a
//! seeded random-system generator.
//!
//! The oracle reimplements adjacency, energy, and elongation enumeration
//! from scratch on plain tuples; it shares no code with the engine paths it
//! cross-checks.

use oritatami::dynamics::Frontier;
use oritatami::model::{AttractionRule, BeadType, Conformation, OritatamiSystem, Seed};
use oritatami::Point;
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::BTreeSet;

pub type RawConf = (Vec<(i32, i32)>, Vec<u16>);

pub mod oracle {
    use super::RawConf;
    use std::collections::BTreeSet;

    const OFFSETS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (1, 1), (-1, -1), (0, -1)];

    fn adjacent(a: (i32, i32), b: (i32, i32)) -> bool {
        OFFSETS.contains(&(b.0 - a.0, b.1 - a.1))
    }

    /// Energy by the definition: count index pairs (i, j), j > i + 1, with
    /// adjacent positions and attracting labels; quadratic scan.
    pub fn energy(conf: &RawConf, rule: &BTreeSet<(u16, u16)>) -> i64 {
        let (points, labels) = conf;
        let mut bonds = 0i64;
        for i in 0..points.len() {
            for j in i + 2..points.len() {
                let key = if labels[i] <= labels[j] {
                    (labels[i], labels[j])
                } else {
                    (labels[j], labels[i])
                };
                if adjacent(points[i], points[j]) && rule.contains(&key) {
                    bonds += 1;
                }
            }
        }
        -bonds
    }

    /// All self-avoiding elongations by the first `k` labels of `next`.
    pub fn elongations(conf: &RawConf, next: &[u16], k: usize) -> Vec<RawConf> {
        if k == 0 {
            return vec![conf.clone()];
        }
        let mut out = Vec::new();
        let head = *conf.0.last().expect("oracle conformations are non-empty");
        for (dx, dy) in OFFSETS {
            let q = (head.0 + dx, head.1 + dy);
            if conf.0.contains(&q) {
                continue;
            }
            let mut extended = conf.clone();
            extended.0.push(q);
            extended.1.push(next[0]);
            out.extend(elongations(&extended, &next[1..], k - 1));
        }
        out
    }

    fn truncate(conf: &RawConf, k: usize, floor: usize) -> RawConf {
        let keep = conf.0.len().saturating_sub(k).max(floor);
        (conf.0[..keep].to_vec(), conf.1[..keep].to_vec())
    }

    fn argmin(cands: Vec<RawConf>, rule: &BTreeSet<(u16, u16)>) -> Vec<RawConf> {
        let best = cands.iter().map(|c| energy(c, rule)).min();
        match best {
            None => Vec::new(),
            Some(b) => cands.into_iter().filter(|c| energy(c, rule) == b).collect(),
        }
    }

    /// One oblivious step by the definition: per member, truncate by
    /// delay - 1 clamped at the seed, elongate by min(delay, remaining),
    /// keep the minima, union.
    pub fn oblivious_step(
        frontier: &BTreeSet<RawConf>,
        labels_all: &[u16],
        seed_len: usize,
        delay: usize,
        rule: &BTreeSet<(u16, u16)>,
    ) -> BTreeSet<RawConf> {
        let mut out = BTreeSet::new();
        for member in frontier {
            let prefix = truncate(member, delay - 1, seed_len);
            let remaining = labels_all.len() - prefix.0.len();
            let dp = delay.min(remaining);
            let next = &labels_all[prefix.0.len()..prefix.0.len() + dp];
            for c in argmin(elongations(&prefix, next, dp), rule) {
                out.insert(c);
            }
        }
        out
    }

    /// One hasty step by the definition: all one-bead elongations, grouped
    /// by the clamped prefix, minima per group, union.
    pub fn hasty_step(
        frontier: &BTreeSet<RawConf>,
        labels_all: &[u16],
        seed_len: usize,
        delay: usize,
        rule: &BTreeSet<(u16, u16)>,
    ) -> BTreeSet<RawConf> {
        let len = frontier.iter().next().expect("non-empty frontier").0.len();
        let group_len = (len + 1).saturating_sub(delay).max(seed_len);
        let mut all: Vec<RawConf> = Vec::new();
        for member in frontier {
            let next = &labels_all[len..len + 1];
            all.extend(elongations(member, next, 1));
        }
        let prefixes: BTreeSet<Vec<(i32, i32)>> =
            all.iter().map(|c| c.0[..group_len].to_vec()).collect();
        let mut out = BTreeSet::new();
        for prefix in prefixes {
            let group: Vec<RawConf> = all
                .iter()
                .filter(|c| c.0[..group_len] == prefix[..])
                .cloned()
                .collect();
            for c in argmin(group, rule) {
                out.insert(c);
            }
        }
        out
    }
}

/// A random system paired with its seed, within the acceptance bounds.
#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub system: OritatamiSystem,
    pub seed: Seed,
}

pub fn raw_of(c: &Conformation) -> RawConf {
    (
        c.points().iter().map(|p| (p.x, p.y)).collect(),
        c.labels().iter().map(|b| b.0).collect(),
    )
}

pub fn raw_rule(rule: &AttractionRule) -> BTreeSet<(u16, u16)> {
    rule.iter().map(|(a, b)| (a.0, b.0)).collect()
}

pub fn raw_frontier(f: &Frontier) -> BTreeSet<RawConf> {
    f.members().iter().map(raw_of).collect()
}

/// Draw a random system: up to 4 bead types, delay in 1..=max_delay,
/// primary length up to 8, a random self-avoiding seed of up to 4 beads,
/// and a rule with the given pair density.
pub fn random_system(rng: &mut StdRng, max_delay: usize, pair_density: f64) -> RandomSystem {
    let num_types = rng.gen_range(1..=4u16);
    let delay = rng.gen_range(1..=max_delay);
    let primary_len = rng.gen_range(1..=8usize);
    let primary: Vec<BeadType> = (0..primary_len)
        .map(|_| BeadType(rng.gen_range(0..num_types)))
        .collect();
    let mut rule = AttractionRule::new();
    for a in 0..num_types {
        for b in a..num_types {
            if rng.gen_bool(pair_density) {
                rule.insert(BeadType(a), BeadType(b));
            }
        }
    }
    let seed_len = rng.gen_range(1..=4usize);
    let seed = loop {
        if let Some(c) = random_walk(rng, seed_len, num_types) {
            break c;
        }
    };
    RandomSystem {
        system: OritatamiSystem::new(primary, rule, delay),
        seed: Seed(seed),
    }
}

fn random_walk(rng: &mut StdRng, len: usize, num_types: u16) -> Option<Conformation> {
    let offsets = oritatami::lattice::NEIGHBOR_OFFSETS;
    let mut points = vec![Point::new(0, 0)];
    for _ in 1..len {
        let head = *points.last().unwrap();
        let (dx, dy) = offsets[rng.gen_range(0..6)];
        let q = Point::new(head.x + dx, head.y + dy);
        if points.contains(&q) {
            return None;
        }
        points.push(q);
    }
    let labels = (0..len).map(|_| BeadType(rng.gen_range(0..num_types))).collect();
    Some(Conformation::new(points, labels).expect("walk construction is valid"))
}

/// Sorted set view of a frontier for exact comparisons.
pub fn frontier_set(f: &Frontier) -> BTreeSet<RawConf> {
    raw_frontier(f)
}
