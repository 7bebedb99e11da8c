//! Library results against independent brute-force oracles.

use std::collections::{HashMap, VecDeque};

use proptest::prelude::*;
use tridom::broadcast::dominates;
use tridom::lattice::{ball, ball_size, edge_count, graph_distance, matchstick, reach_area, triangular};
use tridom::solver::{solve, SolveInstance, Status};
use tridom::{BroadcastSet, LatticePoint, Params};

const STEPS: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];

/// Distances from `src` by BFS, stopping at `limit`.
fn bfs(src: (i64, i64), limit: u64) -> HashMap<(i64, i64), u64> {
    let mut dist = HashMap::from([(src, 0)]);
    let mut queue = VecDeque::from([src]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        if d == limit {
            continue;
        }
        for (dm, dn) in STEPS {
            let q = (p.0 + dm, p.1 + dn);
            dist.entry(q).or_insert_with(|| {
                queue.push_back(q);
                d + 1
            });
        }
    }
    dist
}

#[test]
fn distance_matches_bfs_on_the_box() {
    let dist = bfs((0, 0), 40);
    for m in -10..=10 {
        for n in -10..=10 {
            assert_eq!(graph_distance(LatticePoint::ORIGIN, LatticePoint::new(m, n)), dist[&(m, n)], "({m},{n})");
        }
    }
}

#[test]
fn balls_match_bfs() {
    for t in 1..=8u32 {
        let dist = bfs((3, -2), u64::from(t));
        let mut want: Vec<LatticePoint> =
            dist.iter().filter(|(_, d)| **d < u64::from(t)).map(|(p, _)| LatticePoint::new(p.0, p.1)).collect();
        want.sort();
        let mut got = ball(LatticePoint::new(3, -2), t);
        got.sort();
        assert_eq!(got, want);
        assert_eq!(got.len() as u64, ball_size(t));
    }
}

/// Unit triangles whose three corners lie strictly inside the reach.
#[test]
fn reach_area_counts_unit_triangles() {
    for t in 1..=8u32 {
        let inside = |m: i64, n: i64| graph_distance(LatticePoint::ORIGIN, LatticePoint::new(m, n)) < u64::from(t);
        let r = i64::from(t);
        let mut count = 0;
        for m in -r..=r {
            for n in -r..=r {
                // up triangle (m,n),(m+1,n),(m+1,n+1); down (m,n),(m+1,n+1),(m,n+1)
                if inside(m, n) && inside(m + 1, n) && inside(m + 1, n + 1) {
                    count += 1;
                }
                if inside(m, n) && inside(m + 1, n + 1) && inside(m, n + 1) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, reach_area(t), "t={t}");
    }
}

#[test]
fn matchstick_counts() {
    for n in 0..=15u32 {
        let region = matchstick(n);
        assert_eq!(region.len() as u64, triangular(u64::from(n) + 1));
        let edges: usize = region
            .points()
            .iter()
            .map(|p| STEPS[..].iter().filter(|(a, b)| region.contains(*p + LatticePoint::new(*a, *b))).count())
            .sum();
        assert_eq!(edges as u64 / 2, edge_count(n));
    }
}

/// Smallest dominating set by enumerating subsets in order of size.
fn brute_force_gamma(n: u32, p: Params) -> u64 {
    let pts = matchstick(n).points().to_vec();
    let t = i64::from(p.t());
    let dominated = |set: &[LatticePoint]| {
        pts.iter().all(|u| {
            let rec: i64 = set.iter().map(|s| (t - graph_distance(*u, *s) as i64).max(0)).sum();
            rec >= i64::from(p.r())
        })
    };
    fn subsets(
        pts: &[LatticePoint],
        k: usize,
        start: usize,
        cur: &mut Vec<LatticePoint>,
        f: &dyn Fn(&[LatticePoint]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..pts.len() {
            cur.push(pts[i]);
            if subsets(pts, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    (1..=pts.len()).find(|&k| subsets(&pts, k, 0, &mut Vec::new(), &dominated)).unwrap() as u64
}

#[test]
fn solver_matches_brute_force() {
    for t in 1..=4u32 {
        for r in 1..=t {
            let p = Params::new(t, r).unwrap();
            for n in 0..=5u32 {
                if n >= 5 && t == 1 {
                    continue;
                }
                let res = solve(&SolveInstance::optimize(n, p));
                assert_eq!(res.status, Status::Optimal);
                assert_eq!(res.value, brute_force_gamma(n, p), "n={n} {p}");
                assert!(dominates(matchstick(n).points(), &res.witness, p));
            }
        }
    }
}

proptest! {
    #[test]
    fn distance_matches_bfs_anywhere(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
        let u = LatticePoint::new(a, b);
        let v = LatticePoint::new(c, d);
        let want = bfs((a, b), 120)[&(c, d)];
        prop_assert_eq!(graph_distance(u, v), want);
    }

    #[test]
    fn solver_witness_is_minimal_under_deletion(n in 1u32..7, t in 2u32..4, r in 1u32..3) {
        prop_assume!(r <= t);
        let p = Params::new(t, r).unwrap();
        let res = solve(&SolveInstance::optimize(n, p));
        let region = matchstick(n);
        for s in res.witness.iter() {
            let fewer: BroadcastSet = res.witness.iter().filter(|q| *q != s).copied().collect();
            prop_assert!(!dominates(region.points(), &fewer, p));
        }
    }
}
