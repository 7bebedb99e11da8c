//! Coordinates, metric and finite regions of the infinite triangular grid.
//!
//! A vertex is written `m·α1 + n·α2` with `α1 = (1, 0)` and
//! `α2 = (-1/2, √3/2)`. Everything here is exact integer arithmetic; the
//! Cartesian embedding is only used by the renderer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

/// A vertex of the triangular grid in the `(α1, α2)` basis.
///
/// Points order row-major: first by `n`, then by `m`. Every sorted
/// collection in the crate therefore lists points bottom row first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { m: 0, n: 0 };

    pub const fn new(m: i64, n: i64) -> Self {
        LatticePoint { m, n }
    }

    /// Cartesian position of the vertex for a unit edge length.
    pub fn cartesian(self) -> (f64, f64) {
        let (m, n) = (self.m as f64, self.n as f64);
        (m - 0.5 * n, n * 3f64.sqrt() / 2.0)
    }

    /// Reflection across the line through the origin and `α1 + α2`.
    pub fn swapped(self) -> Self {
        LatticePoint::new(self.n, self.m)
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.m).cmp(&(other.n, other.m))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> Self {
        LatticePoint::new(-self.m, -self.n)
    }
}

impl Mul<LatticePoint> for i64 {
    type Output = LatticePoint;
    fn mul(self, rhs: LatticePoint) -> LatticePoint {
        LatticePoint::new(self * rhs.m, self * rhs.n)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((m, n): (i64, i64)) -> Self {
        LatticePoint::new(m, n)
    }
}

// JSON form is the two-element array `[m, n]`.
impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&self.m)?;
        tup.serialize_element(&self.n)?;
        tup.end()
    }
}

impl<'de> Deserialize<'de> for LatticePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = LatticePoint;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a two-element integer array [m, n]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<LatticePoint, A::Error> {
                let m = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let n = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(LatticePoint::new(m, n))
            }
        }

        deserializer.deserialize_tuple(2, PairVisitor)
    }
}

/// The six unit steps, counter-clockwise starting at `α1`.
pub const DIRECTIONS: [LatticePoint; 6] = [
    LatticePoint::new(1, 0),
    LatticePoint::new(1, 1),
    LatticePoint::new(0, 1),
    LatticePoint::new(-1, 0),
    LatticePoint::new(-1, -1),
    LatticePoint::new(0, -1),
];

/// The six vertices at unit Euclidean distance from `p`.
pub fn neighbors(p: LatticePoint) -> [LatticePoint; 6] {
    DIRECTIONS.map(|d| p + d)
}

/// Shortest-path length between two vertices of the infinite grid.
///
/// For an offset `(m, n)` with `m·n ≥ 0` one diagonal step covers a unit of
/// both coordinates, giving `max(|m|, |n|)`; with opposite signs no step
/// helps both and the length is `|m| + |n|`.
pub fn graph_distance(u: LatticePoint, v: LatticePoint) -> u64 {
    offset_norm(v - u)
}

fn offset_norm(d: LatticePoint) -> u64 {
    let (m, n) = (d.m.unsigned_abs(), d.n.unsigned_abs());
    if (d.m >= 0) == (d.n >= 0) || d.m == 0 || d.n == 0 {
        m.max(n)
    } else {
        m + n
    }
}

/// Broadcast neighbourhood `{u : d(u, v) < t}`, sorted row-major.
///
/// Empty for `t = 0`.
pub fn ball(v: LatticePoint, t: u32) -> Vec<LatticePoint> {
    let mut out = Vec::with_capacity(ball_size(t) as usize);
    if t == 0 {
        return out;
    }
    let radius = i64::from(t) - 1;
    for dn in -radius..=radius {
        // |dm| ≤ R, |dn| ≤ R, |dm - dn| ≤ R
        let lo = (-radius).max(dn - radius);
        let hi = radius.min(dn + radius);
        for dm in lo..=hi {
            out.push(v + LatticePoint::new(dm, dn));
        }
    }
    out
}

/// `3t² − 3t + 1`, the vertex count of a ball of strength `t ≥ 1`.
pub fn ball_size(t: u32) -> u64 {
    if t == 0 {
        return 0;
    }
    let t = u64::from(t);
    3 * t * t - 3 * t + 1
}

/// Area of the hexagonal reach in unit triangles: `6(t − 1)²`.
pub fn reach_area(t: u32) -> u64 {
    let s = u64::from(t.saturating_sub(1));
    6 * s * s
}

/// The `k`-th triangular number `k(k + 1)/2`.
pub fn triangular(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Interior (non-boundary) edges of `T_n`: `3·Δ_{n−1}` for `n ≥ 1`.
pub fn interior_edge_count(n: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    3 * triangular(u64::from(n) - 1)
}

/// Total edge count of `T_n`: `3·Δ_n`.
pub fn edge_count(n: u32) -> u64 {
    3 * triangular(u64::from(n))
}

/// The triangular matchstick graph `T_n` as a lattice point set.
///
/// Vertices are `{(m, k) : 0 ≤ m ≤ k ≤ n}`. The three corners are
/// `(0, 0)`, `(0, n)` and `(n, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchstickRegion {
    n: u32,
    points: Vec<LatticePoint>,
}

/// Side-length-`n` triangular matchstick region.
pub fn matchstick(n: u32) -> MatchstickRegion {
    MatchstickRegion::new(n)
}

impl MatchstickRegion {
    pub fn new(n: u32) -> Self {
        let side = i64::from(n);
        let points = (0..=side).flat_map(|k| (0..=k).map(move |m| LatticePoint::new(m, k))).collect();
        MatchstickRegion { n, points }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Vertices in row-major order; `points()[i]` has [`index_of`] `i`.
    ///
    /// [`index_of`]: MatchstickRegion::index_of
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        0 <= p.m && p.m <= p.n && p.n <= i64::from(self.n)
    }

    /// Position of `p` in [`points`](MatchstickRegion::points).
    pub fn index_of(&self, p: LatticePoint) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        Some(triangular(p.n as u64) as usize + p.m as usize)
    }

    pub fn corners(&self) -> [LatticePoint; 3] {
        let s = i64::from(self.n);
        [LatticePoint::new(0, 0), LatticePoint::new(0, s), LatticePoint::new(s, s)]
    }

    /// Barycentric-style coordinates `(m, k − m, n − k)`; all nonnegative
    /// exactly on the region and summing to `n`.
    fn to_triple(&self, p: LatticePoint) -> [i64; 3] {
        [p.m, p.n - p.m, i64::from(self.n) - p.n]
    }

    fn point_of_triple(&self, [a, b, _]: [i64; 3]) -> LatticePoint {
        LatticePoint::new(a, a + b)
    }

    /// Applies symmetry `g` (`0..6`) of the dihedral group of the region.
    ///
    /// The six symmetries permute the triple `(m, k − m, n − k)`; `0` is
    /// the identity.
    pub fn apply_symmetry(&self, g: usize, p: LatticePoint) -> LatticePoint {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
        let t = self.to_triple(p);
        let perm = PERMS[g % 6];
        self.point_of_triple([t[perm[0]], t[perm[1]], t[perm[2]]])
    }

    /// Nearest region vertex to `p` by graph distance.
    ///
    /// Ties go to the row-major smallest vertex, so the result is
    /// deterministic. Points already in the region map to themselves.
    pub fn clamp(&self, p: LatticePoint) -> LatticePoint {
        if self.contains(p) {
            return p;
        }
        *self.points.iter().min_by_key(|q| (graph_distance(p, **q), **q)).expect("a matchstick region is never empty")
    }

    /// Graph distance from `p` to the nearest region vertex.
    pub fn distance_to(&self, p: LatticePoint) -> u64 {
        // Distance is half the L1 norm of the triple difference; the nearest
        // point of the simplex removes every negative component.
        let t = self.to_triple(p);
        let deficit: i64 = t.iter().filter(|&&x| x < 0).map(|x| -x).sum();
        deficit as u64
    }
}

/// Finite stand-in for the infinite grid.
///
/// The core is the parallelogram `|m| ≤ L, |n| ≤ L`; the expanded window
/// adds every vertex within graph distance `margin` of the core.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub half_width: u32,
    pub margin: u32,
    pub center: LatticePoint,
}

impl Window {
    pub fn new(half_width: u32, margin: u32) -> Self {
        Window { half_width, margin, center: LatticePoint::ORIGIN }
    }

    pub fn centered_at(mut self, center: LatticePoint) -> Self {
        self.center = center;
        self
    }

    pub fn core_contains(&self, p: LatticePoint) -> bool {
        let d = p - self.center;
        let l = i64::from(self.half_width);
        d.m.abs() <= l && d.n.abs() <= l
    }

    /// Graph distance from `p` to the core.
    pub fn distance_to_core(&self, p: LatticePoint) -> u64 {
        let d = p - self.center;
        let l = i64::from(self.half_width);
        let excess = |x: i64| x - x.clamp(-l, l);
        // The coordinate-wise excess offset is realised by a core point and
        // no core point does better.
        offset_norm(LatticePoint::new(excess(d.m), excess(d.n)))
    }

    pub fn expanded_contains(&self, p: LatticePoint) -> bool {
        self.distance_to_core(p) <= u64::from(self.margin)
    }

    /// Core vertices, row-major.
    pub fn core_points(&self) -> Vec<LatticePoint> {
        let l = i64::from(self.half_width);
        (-l..=l).flat_map(|n| (-l..=l).map(move |m| LatticePoint::new(m, n))).map(|d| self.center + d).collect()
    }

    /// Core plus margin shell, row-major.
    pub fn expanded_points(&self) -> Vec<LatticePoint> {
        let r = i64::from(self.half_width) + i64::from(self.margin);
        (-r..=r)
            .flat_map(|n| (-r..=r).map(move |m| LatticePoint::new(m, n)))
            .map(|d| self.center + d)
            .filter(|p| self.expanded_contains(*p))
            .collect()
    }

    pub fn core_len(&self) -> usize {
        let side = 2 * self.half_width as usize + 1;
        side * side
    }
}
