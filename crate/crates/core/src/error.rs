use thiserror::Error;

use crate::records::CollisionWitness;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("transition delta[{letter}][{state}] = {target} is out of range for {n} states")]
    TargetOutOfRange {
        letter: usize,
        state: usize,
        target: usize,
        n: usize,
    },

    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },

    #[error("state {state} is out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },

    #[error("automaton is not a {word}-tree")]
    NotATree { word: String },

    #[error("marked state {mark} is {shift}-shifted, expected 0-shifted")]
    NotZeroShifted { mark: usize, shift: usize },

    #[error("words {0} and {1} are conjugate")]
    ConjugateWords(String, String),

    #[error("word {0} is self-conjugate")]
    SelfConjugate(String),

    #[error("precondition failed: {reason}")]
    Precondition {
        reason: String,
        witness: Option<Box<CollisionWitness>>,
    },

    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("schema error at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{n} states exceed the exhaustive limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
