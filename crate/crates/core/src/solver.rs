//! Exact minimum `(t, r)` broadcast domination of `T_n`.
//!
//! The problem is a set multicover: every vertex `u` needs total signal
//! `r` from the chosen towers, a tower at `c` supplying `t − d(u, c)`.
//! The search is a depth-first branch and bound run as a feasibility test
//! for a cardinality limit `k`; optimisation sweeps `k` upward from a
//! lower bound so the first feasible `k` is certified optimal.
//!
//! Pruning:
//! * greedy incumbent (largest deficit reduction first, then redundant
//!   towers removed),
//! * a deficit-ratio bound and a packing bound at every node,
//! * per-vertex capacity checks as siblings are excluded,
//! * for `r = 1`, candidates whose coverage is contained in another's are
//!   dropped at the root,
//! * at the root only, candidates equivalent under the symmetries of `T_n`
//!   fixing the branching vertex are explored once.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::broadcast::{dominates, signal, BroadcastSet, Params};
use crate::lattice::{graph_distance, matchstick, MatchstickRegion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "k")]
pub enum Mode {
    /// Find the minimum size and prove it.
    Optimize,
    /// Find any dominating set with at most `k` towers or prove none exists.
    Feasibility(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveInstance {
    pub n: u32,
    pub params: Params,
    pub mode: Mode,
    /// Node limit for the whole run.
    pub budget: Option<u64>,
}

impl SolveInstance {
    pub fn optimize(n: u32, params: Params) -> Self {
        SolveInstance { n, params, mode: Mode::Optimize, budget: None }
    }

    pub fn feasibility(n: u32, params: Params, k: u64) -> Self {
        SolveInstance { n, params, mode: Mode::Feasibility(k), budget: None }
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.budget = Some(nodes);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    BudgetExhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    /// Size of `witness`; for `Infeasible` the limit that was refuted.
    pub value: u64,
    pub witness: BroadcastSet,
    /// Proven lower bound on the optimum at termination.
    pub lower_bound: u64,
    pub stats: SolveStats,
}

/// Precomputed coverage of `T_n`.
struct Model {
    region: MatchstickRegion,
    params: Params,
    /// candidate → (vertex, signal)
    cover: Vec<Vec<(u32, u32)>>,
    /// vertex → (candidate, signal)
    covered_by: Vec<Vec<(u32, u32)>>,
    /// Largest total useful signal a single tower can deliver on an
    /// untouched region.
    max_contribution: u64,
}

impl Model {
    fn new(n: u32, params: Params) -> Self {
        let region = matchstick(n);
        let size = region.len();
        let mut cover = vec![Vec::new(); size];
        let mut covered_by = vec![Vec::new(); size];
        for (c, &cp) in region.points().iter().enumerate() {
            for u in crate::lattice::ball(cp, params.t()) {
                if let Some(ui) = region.index_of(u) {
                    let s = signal(params.t(), graph_distance(u, cp)) as u32;
                    cover[c].push((ui as u32, s));
                    covered_by[ui].push((c as u32, s));
                }
            }
        }
        let r = params.r();
        let max_contribution =
            cover.iter().map(|cv| cv.iter().map(|&(_, s)| u64::from(s.min(r))).sum::<u64>()).max().unwrap_or(0);
        Model { region, params, cover, covered_by, max_contribution }
    }

    fn len(&self) -> usize {
        self.region.len()
    }

    fn towers(&self, indices: &[u32]) -> BroadcastSet {
        indices.iter().map(|&c| self.region.points()[c as usize]).collect()
    }

    fn reception(&self, chosen: &[u32]) -> Vec<u32> {
        let mut rec = vec![0u32; self.len()];
        for &c in chosen {
            for &(u, s) in &self.cover[c as usize] {
                rec[u as usize] += s;
            }
        }
        rec
    }
}

fn residual(r: u32, rec: u32) -> u32 {
    r.saturating_sub(rec)
}

/// Greedy dominating set: repeatedly add the tower removing the most
/// residual deficit, then drop towers that became redundant.
pub fn greedy_incumbent(n: u32, params: Params) -> BroadcastSet {
    let model = Model::new(n, params);
    model.towers(&greedy_indices(&model))
}

fn greedy_indices(model: &Model) -> Vec<u32> {
    let r = model.params.r();
    let mut rec = vec![0u32; model.len()];
    let mut chosen: Vec<u32> = Vec::new();
    let mut in_set = vec![false; model.len()];
    let mut total: u64 = (model.len() as u64) * u64::from(r);
    while total > 0 {
        let mut best: Option<(u64, usize)> = None;
        for (c, _) in in_set.iter().enumerate().filter(|(_, used)| !**used) {
            let gain: u64 = model.cover[c].iter().map(|&(u, s)| u64::from(s.min(residual(r, rec[u as usize])))).sum();
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, c));
            }
        }
        let (gain, c) = best.expect("some tower always reduces a positive deficit");
        debug_assert!(gain > 0);
        in_set[c] = true;
        chosen.push(c as u32);
        for &(u, s) in &model.cover[c] {
            let before = residual(r, rec[u as usize]);
            rec[u as usize] += s;
            total -= u64::from(before - residual(r, rec[u as usize]));
        }
    }
    remove_redundant(model, &mut chosen);
    chosen.sort_unstable();
    chosen
}

/// Drops towers (latest first) whose removal keeps every vertex at `r`.
fn remove_redundant(model: &Model, chosen: &mut Vec<u32>) {
    let r = model.params.r();
    let mut rec = model.reception(chosen);
    let mut i = chosen.len();
    while i > 0 {
        i -= 1;
        let c = chosen[i] as usize;
        if model.cover[c].iter().all(|&(u, s)| rec[u as usize] - s >= r) {
            for &(u, s) in &model.cover[c] {
                rec[u as usize] -= s;
            }
            chosen.remove(i);
        }
    }
}

/// `⌈D / C⌉` where `D` is the total residual deficit left by `partial` on
/// `T_n` and `C` the largest deficit reduction any single tower achieves.
pub fn deficit_lower_bound(partial: &BroadcastSet, n: u32, params: Params) -> u64 {
    let model = Model::new(n, params);
    let chosen: Vec<u32> = partial.iter().filter_map(|p| model.region.index_of(*p)).map(|i| i as u32).collect();
    let rec = model.reception(&chosen);
    let r = params.r();
    let deficit: u64 = rec.iter().map(|&x| u64::from(residual(r, x))).sum();
    if deficit == 0 {
        return 0;
    }
    let best: u64 = model
        .cover
        .iter()
        .map(|cv| cv.iter().map(|&(u, s)| u64::from(s.min(residual(r, rec[u as usize])))).sum::<u64>())
        .max()
        .unwrap_or(0);
    deficit.div_ceil(best)
}

enum Outcome {
    Found,
    Exhausted,
    Aborted,
}

struct Search<'a> {
    model: &'a Model,
    r: u32,
    rec: Vec<u32>,
    deficit: u64,
    chosen: Vec<u32>,
    blocked: Vec<bool>,
    /// Signal still obtainable from unblocked, unchosen candidates.
    available: Vec<u64>,
    available_count: Vec<u32>,
    nodes: u64,
    node_limit: u64,
    solution: Option<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(model: &'a Model, node_limit: u64) -> Self {
        let n = model.len();
        let available = model.covered_by.iter().map(|cb| cb.iter().map(|&(_, s)| u64::from(s)).sum()).collect();
        let available_count = model.covered_by.iter().map(|cb| cb.len() as u32).collect();
        let r = model.params.r();
        Search {
            model,
            r,
            rec: vec![0; n],
            deficit: n as u64 * u64::from(r),
            chosen: Vec::new(),
            blocked: vec![false; n],
            available,
            available_count,
            nodes: 0,
            node_limit,
            solution: None,
        }
    }

    fn gain(&self, c: usize) -> u64 {
        self.model.cover[c].iter().map(|&(u, s)| u64::from(s.min(residual(self.r, self.rec[u as usize])))).sum()
    }

    fn add(&mut self, c: usize) {
        self.chosen.push(c as u32);
        for &(u, s) in &self.model.cover[c] {
            let u = u as usize;
            let before = residual(self.r, self.rec[u]);
            self.rec[u] += s;
            self.deficit -= u64::from(before - residual(self.r, self.rec[u]));
            self.available[u] -= u64::from(s);
            self.available_count[u] -= 1;
        }
    }

    fn undo_add(&mut self, c: usize) {
        self.chosen.pop();
        for &(u, s) in &self.model.cover[c] {
            let u = u as usize;
            let before = residual(self.r, self.rec[u]);
            self.rec[u] -= s;
            self.deficit += u64::from(residual(self.r, self.rec[u]) - before);
            self.available[u] += u64::from(s);
            self.available_count[u] += 1;
        }
    }

    /// Excludes `c`; returns false if some vertex can no longer be served.
    fn block(&mut self, c: usize) -> bool {
        self.blocked[c] = true;
        let mut ok = true;
        for &(u, s) in &self.model.cover[c] {
            let u = u as usize;
            self.available[u] -= u64::from(s);
            self.available_count[u] -= 1;
            if u64::from(residual(self.r, self.rec[u])) > self.available[u] {
                ok = false;
            }
        }
        ok
    }

    fn unblock(&mut self, c: usize) {
        self.blocked[c] = false;
        for &(u, s) in &self.model.cover[c] {
            self.available[u as usize] += u64::from(s);
            self.available_count[u as usize] += 1;
        }
    }

    fn lower_bound(&self) -> u64 {
        if self.deficit == 0 {
            return 0;
        }
        let ratio = self.deficit.div_ceil(self.model.max_contribution);
        ratio.max(self.packing_bound())
    }

    /// Deficient vertices pairwise more than `2(t − 1)` apart share no
    /// candidate, so their individual needs add up.
    fn packing_bound(&self) -> u64 {
        let t = self.model.params.t();
        let reach = 2 * u64::from(t - 1);
        let points = self.model.region.points();
        let mut picked: Vec<usize> = Vec::new();
        let mut bound = 0;
        let mut order: Vec<usize> = (0..self.model.len()).filter(|&u| residual(self.r, self.rec[u]) > 0).collect();
        order.sort_by_key(|&u| (self.available_count[u], u));
        for u in order {
            if picked.iter().all(|&v| graph_distance(points[u], points[v]) > reach) {
                picked.push(u);
                bound += u64::from(residual(self.r, self.rec[u]).div_ceil(t));
            }
        }
        bound
    }

    fn branch_vertex(&self) -> usize {
        (0..self.model.len())
            .filter(|&u| residual(self.r, self.rec[u]) > 0)
            .min_by_key(|&u| (std::cmp::Reverse(residual(self.r, self.rec[u])), self.available_count[u], u))
            .expect("called only with positive deficit")
    }

    fn dfs(&mut self, limit: u64, root_orbits: Option<&dyn Fn(usize, usize) -> bool>) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Outcome::Aborted;
        }
        if self.deficit == 0 {
            self.solution = Some(self.chosen.clone());
            return Outcome::Found;
        }
        let remaining = limit - self.chosen.len() as u64;
        if remaining == 0 || self.lower_bound() > remaining {
            return Outcome::Exhausted;
        }
        let u = self.branch_vertex();
        let mut candidates: Vec<(u64, usize)> = self.model.covered_by[u]
            .iter()
            .map(|&(c, _)| c as usize)
            .filter(|&c| !self.blocked[c] && !self.chosen.contains(&(c as u32)))
            .map(|c| (self.gain(c), c))
            .collect();
        candidates.sort_by_key(|&(g, c)| (std::cmp::Reverse(g), c));

        let mut blocked_here = Vec::with_capacity(candidates.len());
        let mut outcome = Outcome::Exhausted;
        let mut explored: Vec<usize> = Vec::new();
        for &(_, c) in &candidates {
            let skip = root_orbits.is_some_and(|same| explored.iter().any(|&e| same(e, c)));
            if !skip {
                explored.push(c);
                self.add(c);
                let child = self.dfs(limit, None);
                self.undo_add(c);
                match child {
                    Outcome::Exhausted => {}
                    other => {
                        outcome = other;
                        break;
                    }
                }
            }
            blocked_here.push(c);
            if !self.block(c) {
                break;
            }
        }
        for c in blocked_here.into_iter().rev() {
            self.unblock(c);
        }
        outcome
    }
}

/// Root preprocessing for `r = 1`: candidates covering a subset of another
/// candidate's vertices (ties broken by index) are never needed.
fn dominated_candidates(model: &Model) -> Vec<usize> {
    if model.params.r() != 1 {
        return Vec::new();
    }
    let n = model.len();
    let sets: Vec<Vec<u32>> = model
        .cover
        .iter()
        .map(|cv| {
            let mut v: Vec<u32> = cv.iter().map(|&(u, _)| u).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let subset = |a: &[u32], b: &[u32]| {
        let mut j = 0;
        for x in a {
            while j < b.len() && b[j] < *x {
                j += 1;
            }
            if j == b.len() || b[j] != *x {
                return false;
            }
        }
        true
    };
    (0..n)
        .filter(|&c| (0..n).any(|d| d != c && subset(&sets[c], &sets[d]) && (sets[c].len() < sets[d].len() || d < c)))
        .collect()
}

struct Runner<'a> {
    model: &'a Model,
    nodes: u64,
    budget: u64,
    dominated: Vec<usize>,
}

impl<'a> Runner<'a> {
    /// Feasibility test for at most `limit` towers.
    fn feasible(&mut self, limit: u64) -> (Outcome, Option<Vec<u32>>) {
        let mut search = Search::new(self.model, self.budget.saturating_sub(self.nodes));
        for &c in &self.dominated {
            // every vertex of c stays covered by the candidate dominating it
            search.block(c);
        }
        let outcome = if search.deficit == 0 {
            Outcome::Found
        } else {
            let region = &self.model.region;
            let model = self.model;
            let root = search.branch_vertex();
            let root_point = region.points()[root];
            let stabilizer: Vec<usize> =
                (1..6).filter(|&g| region.apply_symmetry(g, root_point) == root_point).collect();
            let same = move |a: usize, b: usize| {
                let pa = model.region.points()[a];
                let pb = model.region.points()[b];
                stabilizer.iter().any(|&g| model.region.apply_symmetry(g, pa) == pb)
            };
            search.dfs(limit, Some(&same))
        };
        self.nodes += search.nodes;
        let solution = match outcome {
            Outcome::Found => Some(search.solution.take().unwrap_or_default()),
            _ => None,
        };
        (outcome, solution)
    }
}

/// Solves an instance on `T_n`.
pub fn solve(instance: &SolveInstance) -> SolveResult {
    let start = Instant::now();
    let model = Model::new(instance.n, instance.params);
    let mut runner = Runner {
        model: &model,
        nodes: 0,
        budget: instance.budget.unwrap_or(u64::MAX),
        dominated: dominated_candidates(&model),
    };

    let incumbent = greedy_indices(&model);
    let root_bound = Search::new(&model, 0).lower_bound().max(1);

    let finish = |status, value, chosen: &[u32], lower_bound, nodes| {
        let witness = model.towers(chosen);
        debug_assert!(chosen.is_empty() || dominates(model.region.points(), &witness, model.params));
        SolveResult { status, value, witness, lower_bound, stats: SolveStats { nodes, elapsed: start.elapsed() } }
    };

    match instance.mode {
        Mode::Feasibility(k) => {
            if incumbent.len() as u64 <= k {
                return finish(Status::Feasible, incumbent.len() as u64, &incumbent, root_bound, 0);
            }
            if root_bound > k {
                return finish(Status::Infeasible, k, &[], root_bound, 0);
            }
            match runner.feasible(k) {
                (Outcome::Found, Some(mut sol)) => {
                    sol.sort_unstable();
                    finish(Status::Feasible, sol.len() as u64, &sol, root_bound, runner.nodes)
                }
                (Outcome::Exhausted, _) => finish(Status::Infeasible, k, &[], k + 1, runner.nodes),
                _ => finish(Status::BudgetExhausted, incumbent.len() as u64, &incumbent, root_bound, runner.nodes),
            }
        }
        Mode::Optimize => {
            let mut best = incumbent;
            let mut k = root_bound;
            while k < best.len() as u64 {
                match runner.feasible(k) {
                    (Outcome::Found, Some(mut sol)) => {
                        sol.sort_unstable();
                        best = sol;
                        break;
                    }
                    (Outcome::Exhausted, _) => k += 1,
                    _ => {
                        return finish(Status::BudgetExhausted, best.len() as u64, &best, k, runner.nodes);
                    }
                }
            }
            let value = best.len() as u64;
            finish(Status::Optimal, value, &best, value, runner.nodes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;
    use std::collections::HashMap;

    fn params(t: u32, r: u32) -> Params {
        Params::new(t, r).unwrap()
    }

    fn optimum(n: u32, t: u32, r: u32) -> u64 {
        let res = solve(&SolveInstance::optimize(n, params(t, r)));
        assert_eq!(res.status, Status::Optimal);
        assert!(dominates(matchstick(n).points(), &res.witness, params(t, r)));
        assert_eq!(res.witness.len() as u64, res.value);
        res.value
    }

    /// Exhaustive minimum over all subsets, for tiny regions.
    fn brute_force(n: u32, t: u32, r: u32) -> u64 {
        let region = matchstick(n);
        let pts = region.points();
        let pr = params(t, r);
        (1..=pts.len() as u64)
            .find(|&k| {
                let mut idx: Vec<usize> = (0..k as usize).collect();
                loop {
                    let s: BroadcastSet = idx.iter().map(|&i| pts[i]).collect();
                    if dominates(pts, &s, pr) {
                        return true;
                    }
                    // next combination
                    let mut i = idx.len();
                    loop {
                        if i == 0 {
                            return false;
                        }
                        i -= 1;
                        if idx[i] < pts.len() - (idx.len() - i) {
                            break;
                        }
                    }
                    idx[i] += 1;
                    for j in i + 1..idx.len() {
                        idx[j] = idx[j - 1] + 1;
                    }
                }
            })
            .unwrap()
    }

    #[test]
    fn known_small_values() {
        assert_eq!(optimum(3, 3, 1), 1);
        assert_eq!(optimum(5, 3, 1), 3);
        assert_eq!(optimum(2, 2, 1), 2);
    }

    #[test]
    fn matches_brute_force_on_tiny_regions() {
        for n in 0..=4 {
            for t in 1..=3 {
                for r in 1..=t {
                    assert_eq!(optimum(n, t, r), brute_force(n, t, r), "n={n} t={t} r={r}");
                }
            }
        }
    }

    #[test]
    fn single_vertex_region() {
        for (t, r) in [(1, 1), (3, 2), (5, 5)] {
            let res = solve(&SolveInstance::optimize(0, params(t, r)));
            assert_eq!(res.value, 1);
            assert_eq!(res.witness.to_vec(), vec![LatticePoint::ORIGIN]);
            assert_eq!(greedy_incumbent(0, params(t, r)).len(), 1);
        }
    }

    #[test]
    fn t9_needs_at_most_five() {
        let res = solve(&SolveInstance::feasibility(9, params(3, 1), 5));
        assert_eq!(res.status, Status::Feasible);
        assert!(res.value <= 5);
        assert!(dominates(matchstick(9).points(), &res.witness, params(3, 1)));
    }

    #[test]
    fn infeasible_limit_is_refuted() {
        let res = solve(&SolveInstance::feasibility(4, params(3, 1), 1));
        assert_eq!(res.status, Status::Infeasible);
        assert!(res.witness.is_empty());
        assert_eq!(res.lower_bound, 2);
    }

    #[test]
    fn greedy_is_valid_and_sandwiched() {
        let g = greedy_incumbent(3, params(3, 1));
        assert!((1..=10).contains(&g.len()));
        let g9 = greedy_incumbent(9, params(3, 1));
        assert!(g9.len() >= 3);
        for (n, t, r) in [(6, 2, 1), (7, 3, 2), (8, 4, 4)] {
            let g = greedy_incumbent(n, params(t, r));
            assert!(dominates(matchstick(n).points(), &g, params(t, r)));
            assert!(g.len() as u64 >= optimum(n, t, r));
        }
    }

    #[test]
    fn deficit_bound_examples() {
        let pr = params(3, 1);
        assert!(deficit_lower_bound(&BroadcastSet::new(), 9, pr) >= 3);
        let full = greedy_incumbent(9, pr);
        assert_eq!(deficit_lower_bound(&full, 9, pr), 0);
        let mut short = full.clone();
        let first = *short.iter().next().unwrap();
        short.remove(&first);
        assert!(deficit_lower_bound(&short, 9, pr) >= 1);
    }

    #[test]
    fn deficit_bound_is_admissible() {
        // from any subset of an optimal witness, the bound never exceeds the
        // towers still missing
        for (n, t, r) in [(5, 2, 1), (6, 3, 2), (5, 3, 3)] {
            let pr = params(t, r);
            let res = solve(&SolveInstance::optimize(n, pr));
            let towers = res.witness.to_vec();
            for keep in 0..=towers.len() {
                let partial: BroadcastSet = towers[..keep].iter().copied().collect();
                assert!(deficit_lower_bound(&partial, n, pr) <= (towers.len() - keep) as u64);
            }
        }
    }

    #[test]
    fn budget_exhaustion_keeps_incumbent() {
        let res = solve(&SolveInstance::optimize(9, params(3, 1)).with_budget(1));
        assert_eq!(res.status, Status::BudgetExhausted);
        assert!(dominates(matchstick(9).points(), &res.witness, params(3, 1)));
        assert!(res.lower_bound <= res.value);
    }

    #[test]
    fn deterministic() {
        let inst = SolveInstance::optimize(7, params(3, 1));
        let a = solve(&inst);
        let b = solve(&inst);
        assert_eq!((a.value, a.witness, a.stats.nodes), (b.value, b.witness, b.stats.nodes));
    }

    #[test]
    fn dominated_candidates_are_really_dominated() {
        let model = Model::new(5, params(2, 1));
        let dropped = dominated_candidates(&model);
        assert!(!dropped.is_empty());
        let cover: HashMap<usize, Vec<u32>> =
            (0..model.len()).map(|c| (c, model.cover[c].iter().map(|x| x.0).collect())).collect();
        for c in dropped {
            assert!((0..model.len()).any(|d| d != c && cover[&c].iter().all(|u| cover[&d].contains(u))));
        }
        assert!(dominated_candidates(&Model::new(5, params(3, 2))).is_empty());
    }
}
