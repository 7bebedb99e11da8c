//! `(t, r)` broadcast domination on the triangular grid.
//!
//! A tower of strength `t` sends signal `t − d` to every vertex at graph
//! distance `d < t`; a tower set dominates a region when every vertex
//! receives at least `r`. The crate provides
//!
//! * [`lattice`]: coordinates, metric, balls and the matchstick regions `T_n`,
//! * [`broadcast`]: reception, domination and efficiency checks,
//! * [`patterns`]: efficient periodic patterns of the infinite grid,
//! * [`solver`]: exact minimum domination of `T_n`,
//! * [`bounds`]: closed-form bounds on `γ_{t,r}(T_n)` with certified witnesses,
//! * [`render`]: ASCII and SVG drawings,
//! * [`selftest`]: runtime consistency checks.

pub mod bounds;
pub mod broadcast;
mod error;
pub mod lattice;
pub mod patterns;
pub mod render;
pub mod selftest;
pub mod solver;

pub use broadcast::{BroadcastSet, Params, ReceptionField};
pub use error::{Error, Result};
pub use lattice::{LatticePoint, MatchstickRegion, Window};
pub use patterns::PatternLattice;
