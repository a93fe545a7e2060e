//! Synchronizing random automata through `w`-trees.
//!
//! An automaton is a `w`-tree when applying the word `w` once, as a map on
//! states, has a unique cyclic point. Repeating such a `w` as many times as
//! the height of that map synchronizes the automaton. This crate provides
//! threads, one-letter views, cycle and branch records with their collision
//! predicates, the `w`-variant of Joyal's bijection, the exploration process
//! with its typicality checks, and several synchronizing-word algorithms
//! (tree-based, greedy, exact).

pub mod automaton;
pub mod error;
pub mod exploration;
pub mod functional;
pub mod io;
pub mod joyal;
pub mod records;
pub mod rng;
pub mod sync;
pub mod thread;
pub mod word;

pub use automaton::{all_permutations, AllAutomata, Automaton, State};
pub use error::{Error, Result};
pub use functional::{is_w_tree, shift, FunctionalGraph};
pub use records::{DoublyLabeled, DoublyMarked, Labeled, Labeling, MarkedLabeled, RecordSet};
pub use thread::Thread;
pub use word::{are_conjugate, enumerate_nc_words, Letter, Word};
