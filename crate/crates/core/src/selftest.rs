//! Runtime consistency checks behind `tridom selftest`.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::broadcast::{is_efficient_window, Params};
use crate::lattice::{ball, ball_size, graph_distance, neighbors, LatticePoint, Window};
use crate::patterns::{enumerate, mirror_pattern, pattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str, failures: Vec<String>) -> Self {
        CheckOutcome { name: name.into(), passed: failures.is_empty(), failures }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

/// BFS distances from the origin inside the box `|m|, |n| ≤ radius`.
///
/// Shortest paths between points of the box never leave it, so these are
/// the true grid distances.
pub fn bfs_distances(radius: i64) -> BTreeMap<LatticePoint, u64> {
    let mut dist = BTreeMap::from([(LatticePoint::ORIGIN, 0)]);
    let mut queue = VecDeque::from([LatticePoint::ORIGIN]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for q in neighbors(p) {
            if q.m.abs() <= radius && q.n.abs() <= radius && !dist.contains_key(&q) {
                dist.insert(q, d + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

/// Compares `distance(origin, p)` with BFS for every offset in the box.
pub fn check_distance_oracle(distance: impl Fn(LatticePoint, LatticePoint) -> u64, radius: i64) -> CheckOutcome {
    let failures = bfs_distances(radius)
        .into_iter()
        .filter_map(|(p, d)| {
            let got = distance(LatticePoint::ORIGIN, p);
            (got != d).then(|| format!("d(0, {p}) = {got}, BFS gives {d}"))
        })
        .collect();
    CheckOutcome::new("distance oracle", failures)
}

/// `|ball(t)| = 3t² − 3t + 1` against the enumerated ball.
pub fn check_ball_sizes(max_t: u32) -> CheckOutcome {
    let failures = (1..=max_t)
        .filter_map(|t| {
            let counted = ball(LatticePoint::ORIGIN, t).len() as u64;
            (counted != ball_size(t)).then(|| format!("t={t}: ball has {counted} vertices, formula {}", ball_size(t)))
        })
        .collect();
    CheckOutcome::new("ball sizes", failures)
}

/// Both pattern orientations are efficient for every `1 ≤ r ≤ t ≤ max_t`.
pub fn check_patterns(max_t: u32) -> CheckOutcome {
    let mut failures = Vec::new();
    for t in 1..=max_t {
        for r in 1..=t {
            let p = Params::new(t, r).expect("r ≤ t");
            let window = Window::new(4 * t, t);
            for (name, lattice) in [("pattern", pattern(p)), ("mirror", mirror_pattern(p))] {
                if let Err(v) = is_efficient_window(&enumerate(&lattice, &window), p, &window) {
                    failures.push(format!("{name} {p}: {v}"));
                }
            }
        }
    }
    CheckOutcome::new("pattern efficiency", failures)
}

pub fn run() -> SelftestReport {
    let checks = vec![check_distance_oracle(graph_distance, 10), check_ball_sizes(8), check_patterns(5)];
    SelftestReport { passed: checks.iter().all(|c| c.passed), checks }
}
