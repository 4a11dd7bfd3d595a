//! Exact synthesis and gap analysis for small Boolean functions.
//!
//! This crate computes, for every Boolean function on up to 5 inputs (up to
//! 4 exhaustively), the exact minimum and-inverter graph size both with and
//! without gate sharing, and analyzes the functions where sharing wins: the
//! formula-circuit gap. It provides exhaustive synthesis, NPN
//! classification, a reproducible results database, structural theorem
//! checks, a grammar-based random circuit sampler, and a greedy rewrite
//! harness.
//!
//! Run the examples to explore each capability:
//!
//! - `print_table` renders a published reference table from a database.
//! - `synthesize_one` finds all optimal circuits for one function.
//! - `classify_function` reports opt, tree cost, gap, type, and mechanism.
//! - `gap_census` tallies decompositions of optimal circuits.
//! - `sample_grammar` draws random circuits and checks their optimality.
//! - `mutation_walk` measures robustness of sampled circuits to mutation.
//! - `rewrite_descent` runs greedy rewriting from a redundant start.
//! - `orbit_tour` expands one NPN orbit with per-member witnesses.
//! - `forward_census` enumerates everything computable with k gates.

pub mod aig;
pub mod aiger;
pub mod analysis;
pub mod db;
pub mod grammar;
pub mod npn;
pub mod report;
pub mod rewrite;
pub mod synth;
pub mod tt;
