//! Triangle counting under edge local differential privacy.
//!
//! The crate simulates the two-round shuffle-free protocols in which every
//! user perturbs the lower-triangular part of their neighbor list with the
//! asymmetric randomized response (ARR), the server assembles the noisy
//! edges, and each user downloads a variant-specific slice of them to count
//! noisy triangles locally.
//!
//! Module map:
//!
//! * [`graph`]: graph storage, edge-list I/O, Barabási–Albert generation and
//!   exact subgraph counters used as ground truth.
//! * [`mech`]: local randomizers and clipping primitives.
//! * [`two_round`]: the Full / OneNS / TwoNS protocols with optional double
//!   clipping.
//! * [`one_round`]: one-round randomized-response baselines.
//! * [`metrics`]: error metrics, communication costs and the clustering
//!   coefficient pipeline.
//! * [`experiment`]: seeded experiment harness emitting CSV rows.

// Negated float comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod graph;
pub mod mech;
pub mod metrics;
pub mod one_round;
pub mod rng;
pub mod two_round;

pub use error::{Error, Result};
pub use graph::Graph;
pub use mech::{ArrParams, ClipParams, Variant};
pub use two_round::{Clipping, EstimateResult, NoisyEdgeSet, ProtocolConfig, UserReport};
