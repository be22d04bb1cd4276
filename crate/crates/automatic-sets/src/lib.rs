//! Automata over digit alphabets and the sets of natural numbers they
//! denote in base k.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`automaton`], [`ops`], [`scc`]: a finite-automaton algebra over
//!   multi-track digit alphabets (determinization, minimization, boolean
//!   products, quotients, path languages, counting, sparseness);
//! - [`basek`], [`kernel`]: reading automata as subsets of the naturals via
//!   most-significant-digit-first expansions, plus the base-power
//!   normalization and kernel family of such a set;
//! - [`logic`]: a small decision engine for first-order formulas over
//!   `(N, +, <, constants, named automatic sets, powers of k)`, compiled to
//!   synchronized multi-track automata, with an exact eventual-periodicity
//!   decision;
//! - [`approx`]: the suffix-run approximation machinery on cycle-language
//!   sets, with full evidence traces and the desk-scale sum construction
//!   that recovers the dividing-power function;
//! - [`dichotomy`]: the headline classifier placing a set into exactly one
//!   of `PRESBURGER`, `KN_INTERDEFINABLE` or `DEFINES_VK`, with
//!   machine-checkable evidence;
//! - [`format`], [`corpus`], [`sampling`]: the text format, named example
//!   automata, and deterministic random generation for the test suites.

pub mod alphabet;
pub mod automaton;
pub mod error;
pub mod ops;
pub mod scc;
pub mod format;
pub mod basek;
pub mod kernel;
pub mod logic;
pub mod approx;
pub mod dichotomy;
pub mod sampling;
pub mod corpus;

pub use alphabet::{Alphabet, Symbol, Word};
pub use automaton::{Automaton, StateId};
pub use basek::BaseKSet;
pub use ops::BoolOp;
pub use scc::SccDecomposition;
