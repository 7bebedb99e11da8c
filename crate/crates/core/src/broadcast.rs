//! Reception, domination and efficiency of broadcast tower sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ball, graph_distance, LatticePoint, Window};

/// Transmission strength `t` and required reception `r`, with `t ≥ r ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    t: u32,
    r: u32,
}

#[derive(Deserialize)]
struct RawParams {
    t: u32,
    r: u32,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.t, raw.r)
    }
}

impl Params {
    pub fn new(t: u32, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroReception);
        }
        if t < r {
            return Err(Error::TransmissionBelowReception { t, r });
        }
        Ok(Params { t, r })
    }

    pub fn t(self) -> u32 {
        self.t
    }

    pub fn r(self) -> u32 {
        self.r
    }

    /// Distance below which a vertex is "near" a tower: `t − r`.
    pub fn near_radius(self) -> u64 {
        u64::from(self.t - self.r)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.r)
    }
}

/// A finite set of towers; iteration is row-major.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BroadcastSet {
    towers: BTreeSet<LatticePoint>,
}

impl BroadcastSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: LatticePoint) -> bool {
        self.towers.insert(p)
    }

    pub fn remove(&mut self, p: &LatticePoint) -> bool {
        self.towers.remove(p)
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.towers.contains(p)
    }

    pub fn len(&self) -> usize {
        self.towers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.towers.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticePoint> + '_ {
        self.towers.iter()
    }

    pub fn to_vec(&self) -> Vec<LatticePoint> {
        self.towers.iter().copied().collect()
    }

    pub fn translated(&self, shift: LatticePoint) -> Self {
        self.towers.iter().map(|p| *p + shift).collect()
    }

    pub fn union(&self, other: &BroadcastSet) -> Self {
        self.towers.union(&other.towers).copied().collect()
    }
}

impl FromIterator<LatticePoint> for BroadcastSet {
    fn from_iter<I: IntoIterator<Item = LatticePoint>>(iter: I) -> Self {
        BroadcastSet { towers: iter.into_iter().collect() }
    }
}

impl Extend<LatticePoint> for BroadcastSet {
    fn extend<I: IntoIterator<Item = LatticePoint>>(&mut self, iter: I) {
        self.towers.extend(iter)
    }
}

impl<'a> IntoIterator for &'a BroadcastSet {
    type Item = &'a LatticePoint;
    type IntoIter = std::collections::btree_set::Iter<'a, LatticePoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.towers.iter()
    }
}

/// Signal a single tower delivers at distance `d`.
#[inline]
pub fn signal(t: u32, d: u64) -> u64 {
    u64::from(t).saturating_sub(d)
}

/// `r(u) = Σ_{v ∈ S} max(0, t − d(u, v))`.
pub fn reception(u: LatticePoint, towers: &BroadcastSet, t: u32) -> u64 {
    towers.iter().map(|v| signal(t, graph_distance(u, *v))).sum()
}

/// Reception values over a finite region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceptionField {
    pub params: Params,
    pub values: BTreeMap<LatticePoint, u64>,
}

impl ReceptionField {
    pub fn get(&self, p: &LatticePoint) -> Option<u64> {
        self.values.get(p).copied()
    }

    pub fn min(&self) -> Option<u64> {
        self.values.values().copied().min()
    }
}

#[derive(Serialize, Deserialize)]
struct ReceptionFieldRepr {
    t: u32,
    r: u32,
    values: Vec<(i64, i64, u64)>,
}

impl Serialize for ReceptionField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ReceptionFieldRepr {
            t: self.params.t,
            r: self.params.r,
            values: self.values.iter().map(|(p, v)| (p.m, p.n, *v)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ReceptionField {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ReceptionFieldRepr::deserialize(deserializer)?;
        let params = Params::new(repr.t, repr.r).map_err(serde::de::Error::custom)?;
        let values = repr.values.into_iter().map(|(m, n, v)| (LatticePoint::new(m, n), v)).collect();
        Ok(ReceptionField { params, values })
    }
}

/// Reception at every point of `region`.
///
/// Work is proportional to `|S|·|ball|`, not `|region|·|S|`.
pub fn reception_field(region: &[LatticePoint], towers: &BroadcastSet, params: Params) -> ReceptionField {
    let mut values: BTreeMap<LatticePoint, u64> = region.iter().map(|p| (*p, 0)).collect();
    for v in towers {
        for u in ball(*v, params.t) {
            if let Some(slot) = values.get_mut(&u) {
                *slot += signal(params.t, graph_distance(u, *v));
            }
        }
    }
    ReceptionField { params, values }
}

/// First point of `region` (in the given order) receiving less than `r`.
pub fn first_undominated(region: &[LatticePoint], towers: &BroadcastSet, params: Params) -> Option<LatticePoint> {
    let field = reception_field(region, towers, params);
    let r = u64::from(params.r);
    region.iter().copied().find(|p| field.values[p] < r)
}

/// Whether every point of `region` receives at least `r`.
pub fn dominates(region: &[LatticePoint], towers: &BroadcastSet, params: Params) -> bool {
    first_undominated(region, towers, params).is_none()
}

/// Which part of the efficiency condition a vertex breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// Far from every tower but reception differs from `r`.
    FarReception,
    /// Near exactly one tower but reception differs from `t − d`.
    NearReception,
    /// Near two or more towers.
    NearNotUnique,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EfficiencyViolation {
    MarginTooSmall { margin: u32, t: u32 },
    Vertex { point: LatticePoint, clause: Clause, reception: u64, expected: u64, near_towers: u32 },
}

impl fmt::Display for EfficiencyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EfficiencyViolation::MarginTooSmall { margin, t } => {
                write!(f, "window margin {margin} is smaller than t={t}")
            }
            EfficiencyViolation::Vertex { point, clause, reception, expected, near_towers } => {
                write!(
                    f,
                    "vertex {point}: {clause:?} (reception {reception}, expected {expected}, near towers {near_towers})"
                )
            }
        }
    }
}

#[derive(Clone, Copy, Default)]
struct CoreTally {
    reception: u64,
    near: u32,
    near_distance: u64,
}

/// Checks the efficiency condition on every core vertex of `window`.
///
/// `towers` must contain every pattern tower within distance `t` of the
/// core. Returns the first (row-major) violation.
pub fn is_efficient_window(
    towers: &BroadcastSet,
    params: Params,
    window: &Window,
) -> std::result::Result<(), EfficiencyViolation> {
    if window.margin < params.t {
        return Err(EfficiencyViolation::MarginTooSmall { margin: window.margin, t: params.t });
    }
    let near_radius = params.near_radius();
    let mut tally: HashMap<LatticePoint, CoreTally> = HashMap::with_capacity(window.core_len());
    for v in towers {
        if window.distance_to_core(*v) >= u64::from(params.t) {
            continue;
        }
        for u in ball(*v, params.t) {
            if !window.core_contains(u) {
                continue;
            }
            let d = graph_distance(u, *v);
            let entry = tally.entry(u).or_default();
            entry.reception += signal(params.t, d);
            if d < near_radius {
                entry.near += 1;
                entry.near_distance = d;
            }
        }
    }
    for u in window.core_points() {
        let CoreTally { reception, near, near_distance } = tally.get(&u).copied().unwrap_or_default();
        let (clause, expected) = match near {
            0 => (Clause::FarReception, u64::from(params.r)),
            1 => (Clause::NearReception, signal(params.t, near_distance)),
            _ => (Clause::NearNotUnique, signal(params.t, near_distance)),
        };
        if near > 1 || reception != expected {
            return Err(EfficiencyViolation::Vertex { point: u, clause, reception, expected, near_towers: near });
        }
    }
    Ok(())
}

/// Excess reception at one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Waste {
    /// `max(0, reception − r)`.
    pub amount: u64,
    /// The vertex lies within `t − r` of a tower, so its excess is
    /// unavoidable.
    pub innate: bool,
}

/// Per-vertex excess over `r`, split into innate and avoidable waste.
pub fn waste_profile(region: &[LatticePoint], towers: &BroadcastSet, params: Params) -> BTreeMap<LatticePoint, Waste> {
    let field = reception_field(region, towers, params);
    let near_radius = params.near_radius();
    field
        .values
        .iter()
        .map(|(u, rec)| {
            let innate = near_radius > 0 && towers.iter().any(|v| graph_distance(*u, *v) < near_radius);
            (*u, Waste { amount: rec.saturating_sub(u64::from(params.r)), innate })
        })
        .collect()
}
