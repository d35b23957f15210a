//! Finite-scale tools for bounded-degree uniform hypergraphs.
//!
//! The crate is `no_std` (with `alloc`) so the algorithms can be embedded
//! anywhere; file formats, parallel replicas and the command line live in
//! the `hyperlab` companion crate.
//!
//! Modules:
//! - [`hypergraph`]: the carrier type plus degree, codegree, Berge girth,
//!   goodness, edge markings and independent sets.
//! - [`randgen`]: seeded configuration-model generation of regular
//!   hypergraphs.
//! - [`localstats`]: rooted balls, canonical classes, empirical local
//!   statistics and the distances between them.
//! - [`matching`]: the nibble step, iterated nibble and the greedy
//!   large-girth process.
//! - [`ode`]: closed forms and Euler integration for the greedy process.
//! - [`csp`]: templates, instances, arc-consistency, obstruction numbers,
//!   solution density and the gluing construction.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod canon;
pub mod csp;
pub mod error;
pub mod hypergraph;
pub mod localstats;
pub mod matching;
pub mod ode;
pub mod randgen;
pub mod rng;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
