//! Efficient periodic broadcast patterns on the infinite grid.
//!
//! For `t ≥ r ≥ 1` the towers
//! `[(2t−r)x + (t−r)y]·α1 + [tx + (2t−r)y]·α2`, `x, y ∈ ℤ`, form an
//! efficient `(t, r)` broadcast. Its reflection across the `α1 + α2` line
//! is a second one. Both are index-`(3t² − 3tr + r²)` sublattices and are
//! stored by basis, so membership and enumeration work on any window.

use serde::{Deserialize, Serialize};

use crate::broadcast::{BroadcastSet, Params};
use crate::lattice::{LatticePoint, Window};

/// A sublattice of the grid spanned by two integer vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternLattice {
    pub basis: [LatticePoint; 2],
    pub params: Params,
}

impl PatternLattice {
    pub fn determinant(&self) -> i64 {
        let [a, b] = self.basis;
        a.m * b.n - a.n * b.m
    }

    /// Lattice coordinates `(x, y)` with `x·v1 + y·v2 = p`, if integral.
    pub fn coordinates(&self, p: LatticePoint) -> Option<(i64, i64)> {
        let [a, b] = self.basis;
        let det = self.determinant();
        let x = p.m * b.n - p.n * b.m;
        let y = a.m * p.n - a.n * p.m;
        (x % det == 0 && y % det == 0).then(|| (x / det, y / det))
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.coordinates(p).is_some()
    }

    pub fn point(&self, x: i64, y: i64) -> LatticePoint {
        x * self.basis[0] + y * self.basis[1]
    }

    /// Reflection across the line through the origin and `α1 + α2`.
    pub fn swapped(&self) -> Self {
        PatternLattice { basis: self.basis.map(LatticePoint::swapped), params: self.params }
    }
}

/// The primary pattern: basis `(2t−r, t)` and `(t−r, 2t−r)`.
pub fn pattern(params: Params) -> PatternLattice {
    let (t, r) = (i64::from(params.t()), i64::from(params.r()));
    PatternLattice { basis: [LatticePoint::new(2 * t - r, t), LatticePoint::new(t - r, 2 * t - r)], params }
}

/// The mirrored pattern: basis `(t, 2t−r)` and `(2t−r, t−r)`.
pub fn mirror_pattern(params: Params) -> PatternLattice {
    pattern(params).swapped()
}

/// Every lattice point in the window core expanded by its margin.
pub fn enumerate(lattice: &PatternLattice, window: &Window) -> BroadcastSet {
    window.expanded_points().into_iter().filter(|p| lattice.contains(*p)).collect()
}

/// Grid vertices per tower: `3t² − 3tr + r²`, the lattice index.
pub fn vertices_per_tower(params: Params) -> u64 {
    let (t, r) = (u64::from(params.t()), u64::from(params.r()));
    3 * t * t - 3 * t * r + r * r
}

/// Smallest `m > 0` with `m·α1` a tower of the primary pattern.
pub fn axis_period(params: Params) -> u64 {
    let lattice = pattern(params);
    let index = vertices_per_tower(params);
    (1..=index)
        .find(|m| lattice.contains(LatticePoint::new(*m as i64, 0)))
        .expect("the lattice index is always an axis period")
}
