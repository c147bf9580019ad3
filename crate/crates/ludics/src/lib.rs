//! Symbolic interaction engine for computational ludics.
//!
//! The engine works with *designs*: untyped, polarized proof terms built
//! from a named-action signature. Positive designs are daimon, divergence,
//! or applications `N0|a<N1,..,Nk>`; negative designs are variables or
//! branch sums `{a(xs) => P, ...}`. On top of the term calculus the crate
//! provides:
//!
//! * cut reduction and normalization with explicit fuel ([`reduce`]),
//! * orthogonality between designs and anti-designs, behaviours modeled
//!   as finite workbenches, and incarnation ([`ortho`]),
//! * located actions, justified sequences, views, paths, shuffles, and
//!   path completion ([`path`]),
//! * multi-designs, cuts between them, and interaction sequences with
//!   visitable-path computation ([`multi`], [`interact`]),
//! * additive/multiplicative-style connectives with harmony and dual
//!   decomposability checkers ([`conn`]),
//! * a session-file frontend, renderer, JSON traces, and a CLI
//!   ([`frontend`], [`cli`]).
//!
//! Everything is finite and deterministic: collections are ordered,
//! fresh names come from a counter, and every potentially divergent
//! computation takes a fuel bound and reports exhaustion as a distinct
//! outcome rather than guessing.

pub mod cli;
pub mod conn;
pub mod fixtures;
pub mod frontend;
pub mod interact;
pub mod multi;
pub mod ortho;
pub mod path;
pub mod reduce;
pub mod term;

pub use term::{Design, Name, Polarity, Signature, Var};
