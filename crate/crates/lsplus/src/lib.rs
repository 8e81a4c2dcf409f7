//! Exact tools for LS+ lift-and-project certificates on stable set polytopes.

// Dense matrix and tableau code reads more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod certify;
pub mod cli;
pub mod graphs;
pub mod numerics;
pub mod polytope;
pub mod rankbounds;
pub mod search;
pub mod synthesize;
