//! Bounds on `γ_{t,r}(T_n)`, the fewest towers dominating `T_n`.
//!
//! Closed forms come in three flavours: a counting lower bound for `r = 1`,
//! exact values for small `n` when `r = 1`, and upper bounds from tiling
//! `T_n` by copies of a small triangle of side `ℓ`, the axis period of the
//! efficient pattern. Every upper bound reported with a witness is backed
//! by an explicit tower set that has been checked to dominate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::broadcast::{dominates, first_undominated, signal, BroadcastSet, Params};
use crate::error::{Error, Result};
use crate::lattice::{ball, ball_size, graph_distance, matchstick, triangular, LatticePoint, MatchstickRegion};
use crate::patterns::{axis_period, mirror_pattern, pattern, vertices_per_tower, PatternLattice};
use crate::solver::{deficit_lower_bound, greedy_incumbent, solve, SolveInstance, Status};

/// Node limit for the exact-search fallback inside [`witness`].
const WITNESS_SEARCH_BUDGET: u64 = 5_000_000;
/// Largest target size for the rotation-symmetric search inside [`witness`].
const SYMMETRIC_SEARCH_MAX_SIZE: u64 = 12;
/// Largest side length handed to the exact-search fallback.
const WITNESS_SEARCH_MAX_N: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub value: u64,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BroadcastSet>,
}

/// `⌈Δ_{n+1} / (3t² − 3t + 1)⌉`: no tower reaches more than a ball's worth
/// of vertices.
pub fn lower_bound_t1(n: u32, t: u32) -> u64 {
    triangular(u64::from(n) + 1).div_ceil(ball_size(t))
}

/// `γ_{t,1}(T_n)` where it is known in closed form: `1` while `T_n` fits in
/// one ball, `2` up to `n = 2(t−1)`, `3` up to `n = 3t − 2`.
pub fn exact_small_t1(n: u32, t: u32) -> Option<u64> {
    let (n, t) = (u64::from(n), u64::from(t));
    if t == 0 {
        return None;
    }
    let one = 3 * (t - 1) / 2;
    if n <= one {
        Some(1)
    } else if n <= 2 * (t - 1) {
        Some(2)
    } else if n + 2 <= 3 * t {
        Some(3)
    } else {
        None
    }
}

/// For odd `t ≥ 3` and `ℓ > 1`: `γ_{t,1}(T_n) ≤ Δ_ℓ` at
/// `n = ℓ(2(t−1) − ⌊t/2⌋)`. Returns `(n, Δ_ℓ)`.
pub fn upper_odd_t(ell: u64, t: u32) -> Result<(u64, u64)> {
    if t < 3 || t.is_multiple_of(2) {
        return Err(Error::EvenTransmission(t));
    }
    if ell <= 1 {
        return Err(Error::TileCountTooSmall(ell));
    }
    let t = u64::from(t);
    Ok((ell * (2 * (t - 1) - t / 2), triangular(ell)))
}

/// `γ_{3,1}(T_n) ≤ Δ_{⌊n/4⌋+1}`.
pub fn upper_31(n: u32) -> u64 {
    triangular(u64::from(n / 4) + 1)
}

/// Whether [`table_upper`] has a closed form for `p`.
pub fn is_supported(p: Params) -> bool {
    p.t() == p.r() || matches!((p.t(), p.r()), (2, 1) | (3, 1) | (3, 2) | (4, 1) | (4, 2) | (4, 3))
}

/// Tiling upper bound for `n = ℓk + β`, `0 ≤ β < ℓ`.
///
/// The `β ≠ 0` form is the `β = 0` form at `k + 1`.
pub fn table_upper(p: Params, n: u32) -> Result<u64> {
    if !is_supported(p) {
        return Err(Error::UnsupportedParams { t: p.t(), r: p.r() });
    }
    let ell = axis_period(p);
    let n = u64::from(n);
    let k = n.div_ceil(ell);
    let value = match (p.t(), p.r()) {
        (2, 1) | (4, 2) => 3 * k * (k + 2),
        (3, 1) => 9 * k * (k + 1),
        (3, 2) => 3 * k * (2 * k + 3),
        (4, 1) => 6 * k * (3 * k + 2),
        (4, 3) => 2 * k * (5 * k + 6),
        _ => 3 * k,
    };
    Ok(value)
}

/// Towers per tile assumed by [`table_upper`].
fn tile_count(p: Params) -> u64 {
    match (p.t(), p.r()) {
        (2, 1) | (4, 2) => 9,
        (3, 1) => 18,
        (3, 2) => 15,
        (4, 1) => 30,
        (4, 3) => 22,
        _ => 3,
    }
}

/// A dominating set of `T_ℓ`, `ℓ = axis_period(p)`, with the tile count
/// the tiling bound assumes, found by exact search.
pub fn tile_template(p: Params) -> Result<BroadcastSet> {
    if !is_supported(p) {
        return Err(Error::UnsupportedParams { t: p.t(), r: p.r() });
    }
    let ell = axis_period(p) as u32;
    let size = tile_count(p);
    let result = solve(&SolveInstance::feasibility(ell, p, size));
    match result.status {
        Status::Feasible | Status::Optimal => Ok(result.witness),
        status => Err(Error::TemplateNotFound {
            t: p.t(),
            r: p.r(),
            n: ell,
            size,
            reason: format!("search ended with status {status:?}"),
        }),
    }
}

/// A dominating set of `T_n` for supported `p`, checked before it is
/// returned.
///
/// Candidates are the template tiling of `T_n` and restrictions of the
/// efficient pattern (every coset of both orientations), each clamped into
/// `T_n` and stripped of redundant towers; greedy is the fallback if none
/// of them dominates. If the best is still above
/// [`table_upper`] and the target is small, sets invariant under the
/// rotation of `T_n` are searched, and for small `n` a bounded exact search
/// at the target size gets the last word. The smallest candidate wins.
pub fn witness(p: Params, n: u32) -> Result<BroadcastSet> {
    let target = table_upper(p, n)?;
    let region = matchstick(n);
    let template = tile_template(p)?;

    let mut candidates = vec![tiled(&region, &template, axis_period(p) as u32)];
    for lattice in [pattern(p), mirror_pattern(p)] {
        for shift in coset_representatives(&lattice) {
            candidates.push(lattice_towers(&region, &lattice, shift, p));
        }
    }
    // merging clamped towers can lose signal when r > 1, so check each one
    let mut best = candidates
        .into_iter()
        .map(|c| prune(&region, c, p))
        .filter(|c| dominates(region.points(), c, p))
        .min_by_key(BroadcastSet::len)
        .unwrap_or_else(|| greedy_incumbent(n, p));
    if best.len() as u64 > target && target <= SYMMETRIC_SEARCH_MAX_SIZE {
        if let Some(found) = rotation_symmetric(&region, p, target) {
            best = found;
        }
    }
    if best.len() as u64 > target && n <= WITNESS_SEARCH_MAX_N {
        let inst = SolveInstance::feasibility(n, p, target).with_budget(WITNESS_SEARCH_BUDGET);
        let result = solve(&inst);
        if result.status == Status::Feasible && result.witness.len() < best.len() {
            best = result.witness;
        }
    }

    match first_undominated(region.points(), &best, p) {
        None => Ok(best),
        Some(vertex) => Err(Error::WitnessFailed { t: p.t(), r: p.r(), n, vertex }),
    }
}

/// Template copies on the upward and inverted tiles of side `ell` covering
/// `T_{Kℓ} ⊇ T_n`, clamped into `T_n`.
fn tiled(region: &MatchstickRegion, template: &BroadcastSet, ell: u32) -> Vec<LatticePoint> {
    let ell = i64::from(ell);
    let tiles = (i64::from(region.n()) + ell - 1).div_euclid(ell).max(1);
    let mut raw = Vec::new();
    for a in 0..tiles {
        for b in a..tiles {
            let up = LatticePoint::new(a * ell, b * ell);
            raw.extend(template.iter().map(|q| *q + up));
            if a < b {
                let down = LatticePoint::new((a + 1) * ell, (b + 1) * ell);
                raw.extend(template.iter().map(|q| down - *q));
            }
        }
    }
    clamp_useful(region, raw, None)
}

/// Pattern towers (shifted by `shift`) within reach of `T_n`, clamped.
fn lattice_towers(
    region: &MatchstickRegion,
    lattice: &PatternLattice,
    shift: LatticePoint,
    p: Params,
) -> Vec<LatticePoint> {
    let pad = i64::from(p.t());
    let side = i64::from(region.n());
    let raw = (-pad..=side + pad)
        .flat_map(|n| (-pad..=side + pad).map(move |m| LatticePoint::new(m, n)))
        .filter(|q| lattice.contains(*q - shift));
    clamp_useful(region, raw.collect(), Some(p.t()))
}

/// Clamps points into the region, dropping those at distance `≥ reach`
/// first when given. Sorted and de-duplicated.
fn clamp_useful(region: &MatchstickRegion, raw: Vec<LatticePoint>, reach: Option<u32>) -> Vec<LatticePoint> {
    let mut towers: Vec<LatticePoint> = raw
        .into_iter()
        .filter(|q| reach.is_none_or(|t| region.distance_to(*q) < u64::from(t)))
        .map(|q| region.clamp(q))
        .collect();
    towers.sort();
    towers.dedup();
    towers
}

/// One point per coset of `lattice` in the grid.
///
/// With `ℓ` the axis period and `h` the smallest positive second coordinate
/// of a lattice point, the box `[0, ℓ) × [0, h)` is a fundamental domain.
fn coset_representatives(lattice: &PatternLattice) -> Vec<LatticePoint> {
    let p = lattice.params;
    let ell = axis_period(p) as i64;
    let height = (vertices_per_tower(p) as i64) / ell;
    (0..height).flat_map(|n| (0..ell).map(move |m| LatticePoint::new(m, n))).collect()
}

/// A dominating set of at most `limit` towers made of whole orbits of the
/// order-3 rotation of `T_n`, if one exists.
fn rotation_symmetric(region: &MatchstickRegion, p: Params, limit: u64) -> Option<BroadcastSet> {
    let mut orbits: Vec<Vec<LatticePoint>> = Vec::new();
    for &q in region.points() {
        let mut orbit: Vec<LatticePoint> = (0..3).map(|g| region.apply_symmetry(g, q)).collect();
        orbit.sort();
        orbit.dedup();
        if orbit[0] == q {
            orbits.push(orbit);
        }
    }
    let mut chosen = Vec::new();
    fn extend(
        region: &MatchstickRegion,
        p: Params,
        orbits: &[Vec<LatticePoint>],
        from: usize,
        room: u64,
        chosen: &mut Vec<LatticePoint>,
    ) -> bool {
        let set: BroadcastSet = chosen.iter().copied().collect();
        if !chosen.is_empty() && dominates(region.points(), &set, p) {
            return true;
        }
        for i in from..orbits.len() {
            let size = orbits[i].len() as u64;
            if size <= room {
                chosen.extend(&orbits[i]);
                if extend(region, p, orbits, i + 1, room - size, chosen) {
                    return true;
                }
                chosen.truncate(chosen.len() - size as usize);
            }
        }
        false
    }
    extend(region, p, &orbits, 0, limit, &mut chosen).then(|| chosen.into_iter().collect())
}

/// Drops towers, last first, whose removal leaves `T_n` dominated.
fn prune(region: &MatchstickRegion, towers: Vec<LatticePoint>, p: Params) -> BroadcastSet {
    let t = p.t();
    let r = u64::from(p.r());
    let cover: Vec<Vec<(usize, u64)>> = towers
        .iter()
        .map(|s| {
            ball(*s, t)
                .into_iter()
                .filter_map(|u| region.index_of(u).map(|i| (i, signal(t, graph_distance(u, *s)))))
                .collect()
        })
        .collect();
    let mut rec = vec![0u64; region.len()];
    for (i, s) in cover.iter().flatten() {
        rec[*i] += s;
    }
    let mut keep = vec![true; towers.len()];
    for j in (0..towers.len()).rev() {
        if cover[j].iter().all(|&(i, s)| rec[i] - s >= r) {
            for &(i, s) in &cover[j] {
                rec[i] -= s;
            }
            keep[j] = false;
        }
    }
    towers.into_iter().zip(keep).filter_map(|(s, k)| k.then_some(s)).collect()
}

/// A failed inequality between two solved values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    /// `(t, r, n)` whose value should be the smaller one.
    pub smaller: (u32, u32, u32),
    pub larger: (u32, u32, u32),
    pub values: (u64, u64),
}

/// Checks `γ_{t,r}(T_n) ≤ γ_{t−1,r}(T_n)`, `γ_{t,r}(T_n) ≤ γ_{t,r+1}(T_n)`
/// and `γ_{t,r}(T_n) ≤ γ_{t,r}(T_{n+1})` wherever both sides are present.
pub fn monotonicity_check(values: &BTreeMap<(u32, u32, u32), u64>) -> Vec<MonotonicityViolation> {
    let mut violations = Vec::new();
    for (&(t, r, n), &v) in values {
        let mut neighbours = vec![(t, r, n + 1)];
        if t > r {
            neighbours.push((t - 1, r, n));
            neighbours.push((t, r + 1, n));
        }
        for key in neighbours {
            if let Some(&w) = values.get(&key) {
                if v > w {
                    violations.push(MonotonicityViolation { smaller: (t, r, n), larger: key, values: (v, w) });
                }
            }
        }
    }
    violations
}

/// Every bound that applies to `γ_{t,r}(T_n)`.
pub fn applicable_bounds(p: Params, n: u32) -> Result<Vec<BoundResult>> {
    let (t, r) = (p.t(), p.r());
    let mut out = Vec::new();
    let bound = |kind, value, source: &str| BoundResult { kind, value, source: source.into(), witness: None };
    if r == 1 && t >= 2 {
        out.push(bound(BoundKind::Lower, lower_bound_t1(n, t), "reach counting"));
        if let Some(v) = exact_small_t1(n, t) {
            out.push(bound(BoundKind::Exact, v, "single-tile range"));
        }
    } else {
        let lower = deficit_lower_bound(&BroadcastSet::new(), n, p);
        out.push(bound(BoundKind::Lower, lower.max(1), "deficit ratio"));
    }
    if r == 1 && t >= 3 && t % 2 == 1 {
        let step = upper_odd_t(2, t)?.0 / 2;
        let ell = u64::from(n) / step;
        if ell > 1 && u64::from(n) % step == 0 {
            out.push(bound(BoundKind::Upper, upper_odd_t(ell, t)?.1, "odd-t triangle tiling"));
        }
    }
    if (t, r) == (3, 1) {
        out.push(bound(BoundKind::Upper, upper_31(n), "quarter-side tiling"));
    }
    if is_supported(p) {
        out.push(bound(BoundKind::Upper, table_upper(p, n)?, "periodic tile table"));
        let w = witness(p, n)?;
        out.push(BoundResult {
            kind: BoundKind::Upper,
            value: w.len() as u64,
            source: "tiling witness".into(),
            witness: Some(w),
        });
    } else {
        let w = greedy_incumbent(n, p);
        out.push(BoundResult {
            kind: BoundKind::Upper,
            value: w.len() as u64,
            source: "greedy witness".into(),
            witness: Some(w),
        });
    }
    Ok(out)
}

/// Summary of [`applicable_bounds`]: the best of each kind plus a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
    pub witness: BroadcastSet,
    pub sources: Vec<String>,
}

pub fn report(p: Params, n: u32) -> Result<BoundsReport> {
    let all = applicable_bounds(p, n)?;
    let best = |kind: BoundKind, pick: fn(u64, u64) -> u64| {
        all.iter().filter(|b| b.kind == kind).map(|b| b.value).reduce(pick)
    };
    let exact = best(BoundKind::Exact, u64::min);
    let lower = best(BoundKind::Lower, u64::max).unwrap_or(1).max(exact.unwrap_or(0));
    let upper = best(BoundKind::Upper, u64::min).unwrap_or(u64::MAX).min(exact.unwrap_or(u64::MAX));
    let witness = all.iter().rev().find_map(|b| b.witness.clone()).unwrap_or_default();
    debug_assert!(dominates(matchstick(n).points(), &witness, p));
    Ok(BoundsReport {
        lower,
        upper,
        exact,
        witness,
        sources: all.iter().map(|b| format!("{:?}: {} = {}", b.kind, b.source, b.value).to_lowercase()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: u32, r: u32) -> Params {
        Params::new(t, r).unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound_t1(9, 3), 3);
        assert_eq!(lower_bound_t1(1, 2), 1);
        assert_eq!(lower_bound_t1(19, 3), 12);
    }

    #[test]
    fn exact_small_ranges() {
        assert_eq!(exact_small_t1(3, 3), Some(1));
        assert_eq!(exact_small_t1(4, 3), Some(2));
        assert_eq!(exact_small_t1(7, 3), Some(3));
        assert_eq!(exact_small_t1(8, 3), None);
        assert_eq!(exact_small_t1(1, 2), Some(1));
        assert_eq!(exact_small_t1(2, 2), Some(2));
        assert_eq!(exact_small_t1(4, 2), Some(3));
        for t in 2..=6 {
            for n in 1..=3 * t - 2 {
                assert!(lower_bound_t1(n, t) <= exact_small_t1(n, t).unwrap());
            }
        }
    }

    #[test]
    fn odd_t_bound() {
        assert_eq!(upper_odd_t(3, 3), Ok((9, 6)));
        assert_eq!(upper_odd_t(2, 3), Ok((6, 3)));
        assert_eq!(upper_odd_t(2, 5), Ok((12, 3)));
        assert_eq!(upper_odd_t(2, 4), Err(Error::EvenTransmission(4)));
        assert_eq!(upper_odd_t(1, 3), Err(Error::TileCountTooSmall(1)));
        assert_eq!(exact_small_t1(6, 3), Some(3));
    }

    #[test]
    fn quarter_bound() {
        assert_eq!(upper_31(5), 3);
        assert_eq!(upper_31(7), 3);
        assert_eq!(upper_31(9), 6);
    }

    #[test]
    fn table_examples() {
        assert_eq!(table_upper(params(2, 1), 7), Ok(9));
        assert_eq!(table_upper(params(2, 1), 8), Ok(24));
        assert_eq!(table_upper(params(2, 1), 14), Ok(24));
        assert_eq!(table_upper(params(3, 1), 19), Ok(18));
        assert_eq!(table_upper(params(5, 5), 11), Ok(9));
        assert_eq!(table_upper(params(5, 2), 11), Err(Error::UnsupportedParams { t: 5, r: 2 }));
        assert!(table_upper(params(3, 1), 152).unwrap() < upper_31(152));
    }

    #[test]
    fn table_forms_agree_at_tile_boundaries() {
        // second form at k equals first form at k + 1
        let cases = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (3, 3)];
        for (t, r) in cases {
            let p = params(t, r);
            let ell = axis_period(p) as u32;
            for k in 0..4 {
                assert_eq!(table_upper(p, k * ell + 1), table_upper(p, (k + 1) * ell));
            }
            assert_eq!(table_upper(p, ell), Ok(tile_count(p)));
        }
    }

    #[test]
    fn templates_hit_tile_counts() {
        for (t, r) in [(2, 1), (3, 2), (4, 2), (3, 3), (5, 5)] {
            let p = params(t, r);
            let tpl = tile_template(p).unwrap();
            let ell = axis_period(p) as u32;
            assert!(tpl.len() as u64 <= tile_count(p));
            assert!(dominates(matchstick(ell).points(), &tpl, p));
        }
    }

    #[test]
    fn tiles_cover_the_triangle() {
        let ell = 3;
        let all: BroadcastSet = matchstick(ell).points().iter().copied().collect();
        for n in [3u32, 7, 9, 12] {
            let big = matchstick(n.div_ceil(ell) * ell);
            let mut covered = tiled(&big, &all, ell);
            covered.sort();
            assert_eq!(covered, big.points().iter().copied().collect::<BroadcastSet>().to_vec());
        }
    }

    #[test]
    fn cosets_partition_the_grid() {
        for (t, r) in [(2, 1), (4, 2), (4, 4), (3, 2)] {
            let lattice = pattern(params(t, r));
            let reps = coset_representatives(&lattice);
            assert_eq!(reps.len() as u64, vertices_per_tower(params(t, r)));
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[..i] {
                    assert!(!lattice.contains(*a - *b));
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let w = witness(params(2, 1), 14).unwrap();
        assert!(w.len() <= 24);
        let w = witness(params(2, 1), 8).unwrap();
        assert!(w.len() <= 24);
        let w = witness(params(3, 1), 19).unwrap();
        assert!(w.len() <= 18);
        assert!(dominates(matchstick(19).points(), &w, params(3, 1)));
    }

    #[test]
    fn monotonicity_examples() {
        let mut grid = BTreeMap::new();
        for t in 2..=3 {
            for n in 1..=6 {
                let v = solve(&SolveInstance::optimize(n, params(t, 1))).value;
                grid.insert((t, 1, n), v);
            }
        }
        assert!(monotonicity_check(&grid).is_empty());
        let single = BTreeMap::from([((3, 1, 4), 2)]);
        assert!(monotonicity_check(&single).is_empty());
        grid.insert((3, 1, 6), 100);
        let v = monotonicity_check(&grid);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!((v[0].smaller, v[0].larger), ((3, 1, 6), (2, 1, 6)));
    }

    #[test]
    fn report_is_consistent() {
        let rep = report(params(3, 1), 9).unwrap();
        assert_eq!(rep.lower, 3);
        assert!(rep.upper <= 6);
        assert_eq!(rep.exact, None);
        assert!(dominates(matchstick(9).points(), &rep.witness, params(3, 1)));
        let small = report(params(3, 1), 4).unwrap();
        assert_eq!((small.lower, small.upper, small.exact), (2, 2, Some(2)));
        let other = report(params(5, 2), 6).unwrap();
        assert!(other.lower <= other.upper);
    }
}
