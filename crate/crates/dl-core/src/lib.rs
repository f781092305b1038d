//! Exact computation in Diestel-Leader graphs `DL_d(q)` and lamplighter groups.
//!
//! The crate is pure integer arithmetic over ordered collections: no IO, no
//! floating point, `no_std` + `alloc`. Everything is deterministic, so graph
//! enumerations and rewrites reproduce byte-for-byte across runs.
//!
//! Module map:
//! - [`tree`]: the oriented (q+1)-regular tree in horocyclic coordinates.
//! - [`dlgraph`]: DL vertices, adjacency, balls, exact BFS distances, and the
//!   compensating-path distance upper bound.
//! - [`paths`]: typed moves, projections, turn counts, the edge-word rewriting
//!   calculus, geodesic testing and enumeration.
//! - [`lamplighter`]: lamp stands for `L_q`, word evaluation, and the bijection
//!   with `DL_2(q)` vertices.
//! - [`periodic`]: eventually periodic lamp configurations over the integers.
//! - [`rays`]: finite descriptors for eventually periodic geodesic rays and
//!   asymptoticity certificates.
//! - [`boundary2`]: points of the visual boundary of `DL_2(q)` in the lamp
//!   stand model, classification, basis neighborhoods, the group action, and
//!   north-south dynamics.
//! - [`boundaryd`]: ray surgery for `d > 2` (tracking, projection swaps) and
//!   the indistinguishability witness pairs.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod boundary2;
pub mod boundaryd;
pub mod dlgraph;
pub mod lamplighter;
pub mod paths;
pub mod periodic;
pub mod rays;
pub mod tree;

pub use dlgraph::{DLVertex, GraphParams};
pub use lamplighter::LampStand;
pub use paths::{Move, Path};
pub use tree::TreeVertex;
